#include "blogext/pipeline.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "blogext/error.hpp"

namespace blogext {

namespace {

struct Source {
    DomTree tree;
    Geometry geometry;
};

Source parse_with_geometry(const PageInput& page)
{
    validate(page.viewport);
    if (!page.sidecar) {
        DomTree tree = parse_html(page.html, page.url);
        Geometry geometry = estimate_layout(tree, page.viewport);
        return {std::move(tree), std::move(geometry)};
    }
    auto doc = parse_sidecar(*page.sidecar);
    // A sidecar that carries the rendered DOM describes that DOM, not the
    // served HTML.
    DomTree tree = parse_html(doc.rendered_html ? *doc.rendered_html : page.html, page.url);
    Geometry geometry = geometry_from_sidecar(doc, tree);
    return {std::move(tree), std::move(geometry)};
}

void check_models(const SvmModel& title_model, const SvmModel& body_model)
{
    if (title_model.schema != SchemaId::title_v1 || body_model.schema != SchemaId::body_v1) {
        throw Error(ErrorCode::InvalidArgument, "expected a title_v1 and a body_v1 model, got " +
                                                    std::string(to_string(title_model.schema)) + " and " +
                                                    std::string(to_string(body_model.schema)));
    }
}

ExtractedBlock block_of(const PreparedPage& page, NodeId id)
{
    return {path_of(page.tree, id), page.text.text(id)};
}

}  // namespace

PreparedPage prepare_page(const PageInput& input)
{
    auto [tree, geometry] = parse_with_geometry(input);
    TextIndex text(tree);
    const Viewport viewport = geometry.viewport();
    PreparedPage page{std::move(tree), std::move(geometry), std::move(text), viewport, {}, {}, {}, {}, 0, 0};

    const auto titles = title_candidates(page.tree, page.text);
    page.title_candidate_count = titles.nodes.size();
    for (NodeId id : titles.nodes) {
        if (page.geometry.has_rect(id)) {
            page.title_nodes.push_back(id);
            page.title_rows.push_back(title_features(id, page.tree, page.text, page.geometry, viewport));
        }
    }
    const auto bodies = body_candidates(page.tree);
    page.body_candidate_count = bodies.nodes.size();
    for (NodeId id : bodies.nodes) {
        if (page.geometry.has_rect(id)) {
            page.body_nodes.push_back(id);
            page.body_rows.push_back(body_features(id, page.tree, page.text, page.geometry, viewport, {}));
        }
    }
    return page;
}

std::vector<TitleBlock> title_blocks(const PreparedPage& page, const std::vector<NodeId>& titles)
{
    std::vector<TitleBlock> blocks;
    for (NodeId id : titles) {
        if (page.geometry.has_rect(id) && page.geometry.rect(id).area() > 0) {
            blocks.push_back({id, page.geometry.rect(id)});
        }
    }
    return blocks;
}

std::vector<BodyFeatures> body_rows_for(const PreparedPage& page, const std::vector<TitleBlock>& titles)
{
    std::vector<BodyFeatures> rows = page.body_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        apply_title_relations(rows[i], page.geometry.rect(page.body_nodes[i]), page.viewport, titles);
    }
    return rows;
}

std::vector<NodeId> resolve_title_overlaps(const DomTree& tree, std::vector<NodeId> positives)
{
    std::sort(positives.begin(), positives.end());
    positives.erase(std::unique(positives.begin(), positives.end()), positives.end());
    std::vector<NodeId> kept;
    for (NodeId a : positives) {
        const bool has_positive_descendant =
            std::any_of(positives.begin(), positives.end(), [&](NodeId b) { return tree.is_ancestor(a, b); });
        if (!has_positive_descendant) {
            kept.push_back(a);
        }
    }
    std::sort(kept.begin(), kept.end(), [&](NodeId a, NodeId b) {
        return path_of(tree, a) < path_of(tree, b);
    });
    return kept;
}

std::vector<NodeId> resolve_body_overlaps(const DomTree& tree, std::vector<NodeId> positives)
{
    std::sort(positives.begin(), positives.end());
    positives.erase(std::unique(positives.begin(), positives.end()), positives.end());
    std::vector<NodeId> kept;
    for (NodeId a : positives) {
        const bool inside_positive =
            std::any_of(positives.begin(), positives.end(), [&](NodeId b) { return tree.is_ancestor(b, a); });
        if (!inside_positive) {
            kept.push_back(a);
        }
    }
    std::sort(kept.begin(), kept.end(), [&](NodeId a, NodeId b) {
        return path_of(tree, a) < path_of(tree, b);
    });
    return kept;
}

ExtractionResult extract_prepared(const PreparedPage& page, const SvmModel& title_model, const SvmModel& body_model,
                                  const std::optional<std::string>& url)
{
    check_models(title_model, body_model);
    ExtractionResult result;
    result.url = url;
    auto& diag = result.diagnostics;
    diag.title_candidates = page.title_candidate_count;
    diag.body_candidates = page.body_candidate_count;
    diag.viewport_mismatch = title_model.viewport != page.viewport || body_model.viewport != page.viewport;
    diag.ignored_style_units = page.geometry.ignored_units;

    std::vector<NodeId> title_pos;
    for (std::size_t i = 0; i < page.title_nodes.size(); ++i) {
        if (classify(title_model, page.title_rows[i].values())) {
            title_pos.push_back(page.title_nodes[i]);
        }
    }
    diag.title_positives = title_pos.size();
    const auto titles = resolve_title_overlaps(page.tree, std::move(title_pos));

    const auto blocks = title_blocks(page, titles);
    const auto rows = body_rows_for(page, blocks);
    std::vector<NodeId> body_pos;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (classify(body_model, rows[i].values())) {
            body_pos.push_back(page.body_nodes[i]);
        }
    }
    diag.body_positives = body_pos.size();
    const auto bodies = resolve_body_overlaps(page.tree, std::move(body_pos));

    for (NodeId id : titles) {
        result.titles.push_back(block_of(page, id));
    }
    for (NodeId id : bodies) {
        result.bodies.push_back(block_of(page, id));
    }
    return result;
}

ExtractionResult extract(const PageInput& page, const SvmModel& title_model, const SvmModel& body_model)
{
    check_models(title_model, body_model);
    return extract_prepared(prepare_page(page), title_model, body_model, page.url);
}

std::string to_json(const ExtractionResult& result)
{
    using json = nlohmann::ordered_json;
    auto blocks = [](const std::vector<ExtractedBlock>& list) {
        json arr = json::array();
        for (const auto& b : list) {
            arr.push_back(json{{"path", b.path.indices}, {"text", b.text}});
        }
        return arr;
    };
    const auto& d = result.diagnostics;
    json doc;
    doc["url"] = result.url ? json(*result.url) : json(nullptr);
    doc["titles"] = blocks(result.titles);
    doc["bodies"] = blocks(result.bodies);
    doc["diagnostics"] = json{
        {"title_candidates", d.title_candidates},
        {"body_candidates", d.body_candidates},
        {"title_positives", d.title_positives},
        {"titles_kept", result.titles.size()},
        {"body_positives", d.body_positives},
        {"bodies_kept", result.bodies.size()},
        {"viewport_mismatch", d.viewport_mismatch},
        {"ignored_style_units", d.ignored_style_units},
    };
    return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace blogext
