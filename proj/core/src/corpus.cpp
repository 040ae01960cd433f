#include "blogext/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blogext/error.hpp"

namespace blogext {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

NodePath path_from_json(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::SchemaError, where + ": a label path must be an array of indices");
    }
    NodePath path;
    for (const auto& v : j) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw Error(ErrorCode::SchemaError, where + ": path indices must be non-negative integers");
        }
        path.indices.push_back(v.get<std::size_t>());
    }
    return path;
}

std::vector<NodePath> paths_from_json(const json& page, const char* key, const std::string& where)
{
    std::vector<NodePath> out;
    if (!page.contains(key)) {
        return out;
    }
    const auto& list = page.at(key);
    if (!list.is_array()) {
        throw Error(ErrorCode::SchemaError, where + ": '" + key + "' must be an array");
    }
    for (const auto& p : list) {
        out.push_back(path_from_json(p, where));
    }
    return out;
}

std::string string_field(const json& page, const char* key, const std::string& where)
{
    if (!page.contains(key) || !page.at(key).is_string()) {
        throw Error(ErrorCode::SchemaError, where + ": missing string field '" + key + "'");
    }
    return page.at(key).get<std::string>();
}

DomTree parse_labeled(const LabeledPage& page)
{
    if (page.sidecar) {
        auto doc = parse_sidecar(*page.sidecar);
        if (doc.rendered_html) {
            return parse_html(*doc.rendered_html, page.url);
        }
    }
    return parse_html(page.html, page.url);
}

NodeId resolve_path(const DomTree& tree, const NodePath& path, const LabeledPage& page)
{
    try {
        return node_at_path(tree, path);
    } catch (const Error& e) {
        throw Error(ErrorCode::UnresolvedLabel, page.html_path + ": label " + path.to_string() + " does not resolve",
                    e.depth());
    }
}

std::vector<NodeId> canonical_titles(const DomTree& tree, const TextIndex& text, const std::vector<NodePath>& paths,
                                     const LabeledPage& page)
{
    std::vector<NodeId> out;
    for (const auto& p : paths) {
        const auto c = canonical_title_node(tree, text, resolve_path(tree, p, page));
        if (!c) {
            throw Error(ErrorCode::UnresolvedLabel, page.html_path + ": title label " + p.to_string() +
                                                         " is not a title candidate");
        }
        out.push_back(*c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NodeId> canonical_bodies(const DomTree& tree, const TextIndex& text, const std::vector<NodePath>& paths,
                                     const LabeledPage& page)
{
    std::vector<NodeId> out;
    for (const auto& p : paths) {
        const NodeId id = resolve_path(tree, p, page);
        const auto& n = tree.node(id);
        if (!n.is_element() || !n.rendered || !is_body_tag(n.tag)) {
            throw Error(ErrorCode::UnresolvedLabel,
                        page.html_path + ": body label " + p.to_string() + " is not a body candidate");
        }
        out.push_back(canonical_body_node(tree, text, id));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

void index_sites(Corpus& corpus)
{
    std::set<std::string> sites;
    for (const auto& p : corpus.pages) {
        sites.insert(p.site_id);
    }
    corpus.sites.assign(sites.begin(), sites.end());
}

void resolve_labels(Corpus& corpus, std::size_t index)
{
    auto& page = corpus.pages.at(index);
    const DomTree tree = parse_labeled(page);
    const TextIndex text(tree);
    for (auto& p : page.title_paths) {
        const auto c = canonical_title_node(tree, text, resolve_path(tree, p, page));
        if (!c) {
            throw Error(ErrorCode::UnresolvedLabel,
                        page.html_path + ": title label " + p.to_string() + " is not a title candidate");
        }
        auto canonical = path_of(tree, *c);
        if (canonical != p) {
            corpus.remaps.push_back({index, p, canonical});
            p = std::move(canonical);
        }
    }
    canonical_bodies(tree, text, page.body_paths, page);
}

Corpus load_corpus(const std::filesystem::path& manifest)
{
    const std::string text = read_file(manifest);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, manifest.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != 1) {
        throw Error(ErrorCode::SchemaError, manifest.string() + ": expected \"version\": 1");
    }
    const auto root = manifest.parent_path();
    Corpus corpus;
    if (doc.contains("pages")) {
        if (!doc["pages"].is_array()) {
            throw Error(ErrorCode::SchemaError, manifest.string() + ": 'pages' must be an array");
        }
        for (const auto& entry : doc["pages"]) {
            const std::string where = manifest.string() + " page " + std::to_string(corpus.pages.size());
            if (!entry.is_object()) {
                throw Error(ErrorCode::SchemaError, where + ": not an object");
            }
            LabeledPage page;
            page.html_path = string_field(entry, "html", where);
            page.url = entry.contains("url") && entry["url"].is_string() ? entry["url"].get<std::string>() : "";
            page.site_id = string_field(entry, "site", where);
            page.title_paths = paths_from_json(entry, "titles", where);
            page.body_paths = paths_from_json(entry, "bodies", where);
            page.html = read_file(root / page.html_path);
            if (entry.contains("sidecar") && entry["sidecar"].is_string()) {
                page.sidecar_path = entry["sidecar"].get<std::string>();
                page.sidecar = read_file(root / *page.sidecar_path);
            }
            corpus.pages.push_back(std::move(page));
        }
    }
    index_sites(corpus);
    for (std::size_t i = 0; i < corpus.pages.size(); ++i) {
        resolve_labels(corpus, i);
    }
    return corpus;
}

std::string manifest_json(const Corpus& corpus)
{
    json pages = json::array();
    for (const auto& p : corpus.pages) {
        json entry;
        entry["html"] = p.html_path;
        if (p.sidecar_path) {
            entry["sidecar"] = *p.sidecar_path;
        }
        entry["url"] = p.url;
        entry["site"] = p.site_id;
        json titles = json::array();
        for (const auto& t : p.title_paths) titles.push_back(t.indices);
        json bodies = json::array();
        for (const auto& b : p.body_paths) bodies.push_back(b.indices);
        entry["titles"] = std::move(titles);
        entry["bodies"] = std::move(bodies);
        pages.push_back(std::move(entry));
    }
    // One page record per line keeps large manifests diffable.
    std::string out = "{\"version\": 1, \"pages\": [\n";
    for (std::size_t i = 0; i < pages.size(); ++i) {
        out += "  " + pages[i].dump() + (i + 1 < pages.size() ? ",\n" : "\n");
    }
    out += "]}\n";
    return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir)
{
    auto write = [](const std::filesystem::path& path, const std::string& bytes) {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
        }
    };
    for (const auto& p : corpus.pages) {
        write(dir / p.html_path, p.html);
        if (p.sidecar_path && p.sidecar) {
            write(dir / *p.sidecar_path, *p.sidecar);
        }
    }
    write(dir / "manifest.json", manifest_json(corpus));
}

PageInput page_input(const LabeledPage& page, const Viewport& viewport)
{
    PageInput in;
    in.html = page.html;
    if (!page.url.empty()) {
        in.url = page.url;
    }
    in.sidecar = page.sidecar;
    in.viewport = viewport;
    return in;
}

bool page_correct(const ExtractionResult& result, const LabeledPage& page, LabelKind kind)
{
    const DomTree tree = parse_labeled(page);
    const TextIndex text(tree);
    std::vector<NodeId> predicted;
    const auto& blocks = kind == LabelKind::title ? result.titles : result.bodies;
    for (const auto& b : blocks) {
        NodeId id = 0;
        try {
            id = node_at_path(tree, b.path);
        } catch (const Error&) {
            return false;
        }
        if (kind == LabelKind::title) {
            const auto c = canonical_title_node(tree, text, id);
            predicted.push_back(c.value_or(id));
        } else {
            predicted.push_back(canonical_body_node(tree, text, id));
        }
    }
    std::sort(predicted.begin(), predicted.end());
    predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());
    const auto labeled = kind == LabelKind::title ? canonical_titles(tree, text, page.title_paths, page)
                                                  : canonical_bodies(tree, text, page.body_paths, page);
    return predicted == labeled;
}

std::vector<PreparedLabeledPage> prepare_corpus(const Corpus& corpus, const Viewport& viewport)
{
    std::vector<PreparedLabeledPage> out;
    out.reserve(corpus.pages.size());
    for (std::size_t i = 0; i < corpus.pages.size(); ++i) {
        const auto& page = corpus.pages[i];
        PreparedLabeledPage p{prepare_page(page_input(page, viewport)), i, 0, {}, {}};
        const auto site = std::lower_bound(corpus.sites.begin(), corpus.sites.end(), page.site_id);
        if (site == corpus.sites.end() || *site != page.site_id) {
            throw Error(ErrorCode::InvalidArgument, "page site '" + page.site_id + "' is not in the corpus site list");
        }
        p.site = static_cast<std::size_t>(site - corpus.sites.begin());
        p.titles = canonical_titles(p.page.tree, p.page.text, page.title_paths, page);
        p.bodies = canonical_bodies(p.page.tree, p.page.text, page.body_paths, page);
        for (NodeId id : p.titles) {
            if (std::find(p.page.title_nodes.begin(), p.page.title_nodes.end(), id) == p.page.title_nodes.end()) {
                throw Error(ErrorCode::UnresolvedLabel, page.html_path + ": title label has no geometry");
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

PageScore score_page(const PreparedLabeledPage& page, const ExtractionResult& result)
{
    const auto& tree = page.page.tree;
    const auto& text = page.page.text;
    auto collect = [&](const std::vector<ExtractedBlock>& blocks, bool title) {
        std::vector<NodeId> ids;
        for (const auto& b : blocks) {
            const NodeId id = node_at_path(tree, b.path);
            ids.push_back(title ? canonical_title_node(tree, text, id).value_or(id)
                                : canonical_body_node(tree, text, id));
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    };
    return {collect(result.titles, true) == page.titles, collect(result.bodies, false) == page.bodies};
}

}  // namespace blogext
