#include <cmath>

#include <nlohmann/json.hpp>

#include "blogext/error.hpp"
#include "blogext/layout.hpp"

namespace blogext {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& what)
{
    throw Error(ErrorCode::SchemaError, "geometry sidecar: " + what);
}

double number_at(const json& j, const char* what)
{
    if (!j.is_number()) {
        schema_error(std::string(what) + " must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        schema_error(std::string(what) + " must be finite");
    }
    return v;
}

}  // namespace

SidecarDocument parse_sidecar(std::string_view document)
{
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        schema_error(std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        schema_error("top level must be an object");
    }
    if (!root.contains("v") || !root["v"].is_number_integer() || root["v"].get<int>() != 1) {
        schema_error("version field \"v\":1 is required");
    }
    if (!root.contains("viewport") || !root["viewport"].is_object()) {
        schema_error("missing viewport object");
    }
    SidecarDocument doc;
    const auto& vp = root["viewport"];
    if (!vp.contains("width") || !vp.contains("height") || !vp["width"].is_number_integer() ||
        !vp["height"].is_number_integer()) {
        schema_error("viewport needs integer width and height");
    }
    doc.viewport = {vp["width"].get<int>(), vp["height"].get<int>()};
    if (doc.viewport.width <= 0 || doc.viewport.height <= 0) {
        schema_error("viewport dimensions must be positive");
    }
    if (!root.contains("nodes") || !root["nodes"].is_array()) {
        schema_error("missing nodes array");
    }
    for (const auto& entry : root["nodes"]) {
        if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_array() || !entry.contains("rect") ||
            !entry["rect"].is_array() || entry["rect"].size() != 4) {
            schema_error("each node needs a path array and a 4-element rect");
        }
        SidecarNode node;
        for (const auto& idx : entry["path"]) {
            if (!idx.is_number_integer() || idx.get<long long>() < 0) {
                schema_error("path entries must be non-negative integers");
            }
            node.path.indices.push_back(idx.get<std::size_t>());
        }
        const auto& r = entry["rect"];
        node.rect = {number_at(r[0], "rect.x"), number_at(r[1], "rect.y"), number_at(r[2], "rect.width"),
                     number_at(r[3], "rect.height")};
        if (node.rect.width < 0 || node.rect.height < 0) {
            schema_error("rect width and height must be non-negative");
        }
        if (entry.contains("fontSize")) {
            node.font_size = number_at(entry["fontSize"], "fontSize");
            if (node.font_size < 0) {
                schema_error("fontSize must be non-negative");
            }
        }
        doc.nodes.push_back(std::move(node));
    }
    if (root.contains("renderedHtml")) {
        if (!root["renderedHtml"].is_string()) {
            schema_error("renderedHtml must be a string");
        }
        doc.rendered_html = root["renderedHtml"].get<std::string>();
    }
    return doc;
}

std::string serialize_sidecar(const SidecarDocument& doc)
{
    nlohmann::ordered_json root;
    root["v"] = 1;
    root["viewport"] = {{"width", doc.viewport.width}, {"height", doc.viewport.height}};
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : doc.nodes) {
        nlohmann::ordered_json e;
        e["path"] = n.path.indices;
        e["rect"] = {n.rect.x, n.rect.y, n.rect.width, n.rect.height};
        e["fontSize"] = n.font_size;
        nodes.push_back(std::move(e));
    }
    root["nodes"] = std::move(nodes);
    if (doc.rendered_html) {
        root["renderedHtml"] = *doc.rendered_html;
    }
    return root.dump();
}

Geometry geometry_from_sidecar(const SidecarDocument& doc, const DomTree& tree)
{
    Geometry geo(tree.size(), doc.viewport, GeometrySource::sidecar);
    for (const auto& entry : doc.nodes) {
        NodeId id = 0;
        try {
            id = node_at_path(tree, entry.path);
        } catch (const Error& e) {
            throw Error(ErrorCode::PathMismatch,
                        "sidecar path " + entry.path.to_string() + " does not resolve in the parsed DOM", e.depth());
        }
        const auto& node = tree.node(id);
        geo.set_rect(id, node.rendered ? entry.rect : Rect{});
        if (entry.font_size > 0 && node.rendered) {
            geo.set_font_size(id, entry.font_size);
        }
    }
    return geo;
}

Geometry load_sidecar(std::string_view document, const DomTree& tree)
{
    return geometry_from_sidecar(parse_sidecar(document), tree);
}

}  // namespace blogext
