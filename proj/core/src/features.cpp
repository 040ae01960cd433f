#include "blogext/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace blogext {

std::string_view to_string(LinkKind kind) noexcept
{
    switch (kind) {
    case LinkKind::no_link: return "no_link";
    case LinkKind::internal: return "internal";
    case LinkKind::external: return "external";
    }
    return "no_link";
}

namespace {

std::optional<std::string_view> href_of(const DomNode& n)
{
    if (n.is_element() && n.tag == "a") {
        return n.attribute("href");
    }
    return std::nullopt;
}

std::optional<std::string_view> first_href(const DomTree& tree, NodeId id)
{
    const auto& n = tree.node(id);
    if (!n.rendered) {
        return std::nullopt;
    }
    if (auto href = href_of(n)) {
        return href;
    }
    for (NodeId c : n.children) {
        if (auto href = first_href(tree, c)) {
            return href;
        }
    }
    return std::nullopt;
}

LinkKind link_kind(std::string_view href, const std::optional<std::string>& page_url)
{
    const bool absolute = href.starts_with("//") || href.find(':') < href.find_first_of("/?#");
    if (!absolute) {
        return LinkKind::internal;
    }
    if (!page_url) {
        return LinkKind::external;
    }
    const auto host = url_host(href);
    const auto page_host = url_host(*page_url);
    if (host.empty() || page_host.empty()) {
        return LinkKind::external;
    }
    return registrable_domain(host) == registrable_domain(page_host) ? LinkKind::internal : LinkKind::external;
}

}  // namespace

LinkKind classify_link(const DomTree& tree, NodeId node)
{
    auto href = first_href(tree, node);
    for (auto p = tree.node(node).parent; !href && p; p = tree.node(*p).parent) {
        href = href_of(tree.node(*p));
    }
    if (!href) {
        return LinkKind::no_link;
    }
    return link_kind(*href, tree.source_url());
}

std::array<double, TitleFeatures::width> TitleFeatures::values() const
{
    return {cx, cy, font_size, title_len, link_none, link_internal, link_external, end_with_mark};
}

std::array<double, BodyFeatures::width> BodyFeatures::values() const
{
    return {widthper, rel_v_above, rel_v_below, rel_h, cx, cy, body_len, marks_num, ends_ellipsis};
}

double effective_font_size(const DomTree& tree, const Geometry& geometry, NodeId node)
{
    double best = 0;
    for (NodeId id : tree.subtree(node)) {
        const auto& n = tree.node(id);
        if (!n.is_text() || !n.rendered ||
            std::all_of(n.text.begin(), n.text.end(), [](char c) { return is_ascii_space(c); })) {
            continue;
        }
        // Sidecars only carry element fonts; fall back to the nearest sized ancestor.
        std::optional<double> font = geometry.font_size(id);
        for (auto p = n.parent; !font && p; p = tree.node(*p).parent) {
            font = geometry.font_size(*p);
        }
        best = std::max(best, font.value_or(0.0));
    }
    if (best > 0) {
        return best;
    }
    return geometry.font_size(node).value_or(16.0);
}

TitleFeatures title_features(NodeId node, const DomTree& tree, const TextIndex& text, const Geometry& geometry,
                             const Viewport& viewport)
{
    const Rect& rect = geometry.rect(node);
    const auto center = normalized_center(rect, viewport);
    const auto& content = text.text(node);

    TitleFeatures f;
    f.cx = center.cx;
    f.cy = center.cy;
    f.font_size = effective_font_size(tree, geometry, node);
    f.title_len = static_cast<double>(count_words(content));
    switch (classify_link(tree, node)) {
    case LinkKind::no_link: f.link_none = 1; break;
    case LinkKind::internal: f.link_internal = 1; break;
    case LinkKind::external: f.link_external = 1; break;
    }
    f.end_with_mark = ends_with_title_mark(content) ? 1 : 0;
    return f;
}

TitleFeatures title_features(NodeId node, const DomTree& tree, const Geometry& geometry, const Viewport& viewport)
{
    return title_features(node, tree, TextIndex(tree), geometry, viewport);
}

void apply_title_relations(BodyFeatures& f, const Rect& rect, const Viewport& viewport,
                           std::span<const TitleBlock> titles)
{
    const double vw = viewport.width;
    const double vh = viewport.height;
    f.rel_v_above = BodyFeatures::no_title;
    f.rel_v_below = BodyFeatures::no_title;
    f.rel_h = BodyFeatures::no_title;

    const TitleBlock* above = nullptr;
    const TitleBlock* below = nullptr;
    auto overshoot = [&](const TitleBlock& t) {
        const double tc = t.rect.center_x();
        return std::max({0.0, rect.x - tc, tc - rect.right()});
    };
    // Nearest by vertical gap; on equal gaps (side-by-side columns) the title
    // whose center overshoots the body least.
    const TitleBlock* nearest = nullptr;
    double nearest_gap = std::numeric_limits<double>::infinity();
    double nearest_overshoot = std::numeric_limits<double>::infinity();
    for (const auto& t : titles) {
        if (t.rect.bottom() <= rect.y && (!above || t.rect.bottom() > above->rect.bottom())) {
            above = &t;
        }
        if (t.rect.y >= rect.bottom() && (!below || t.rect.y < below->rect.y)) {
            below = &t;
        }
        const double gap = std::max({0.0, t.rect.y - rect.bottom(), rect.y - t.rect.bottom()});
        const double over = overshoot(t);
        if (gap < nearest_gap || (gap == nearest_gap && over < nearest_overshoot)) {
            nearest_gap = gap;
            nearest_overshoot = over;
            nearest = &t;
        }
    }
    if (above) {
        f.rel_v_above = (rect.y - above->rect.bottom()) / vh;
    }
    if (below) {
        f.rel_v_below = (below->rect.y - rect.bottom()) / vh;
    }
    if (nearest) {
        f.rel_h = nearest_overshoot / vw;
    }
}

BodyFeatures body_features(NodeId node, const DomTree& tree, const TextIndex& text, const Geometry& geometry,
                           const Viewport& viewport, std::span<const TitleBlock> titles)
{
    (void)tree;
    validate(viewport);
    const Rect& rect = geometry.rect(node);

    BodyFeatures f;
    f.widthper = rect.width / viewport.width;
    apply_title_relations(f, rect, viewport, titles);
    const auto center = normalized_center(rect, viewport);
    f.cx = center.cx;
    f.cy = center.cy;
    const auto& content = text.text(node);
    f.body_len = static_cast<double>(count_words(content));
    f.marks_num = static_cast<double>(count_marks(content));
    f.ends_ellipsis = ends_with_ellipsis(content) ? 1 : 0;
    return f;
}

BodyFeatures body_features(NodeId node, const DomTree& tree, const Geometry& geometry, const Viewport& viewport,
                           std::span<const TitleBlock> titles)
{
    return body_features(node, tree, TextIndex(tree), geometry, viewport, titles);
}

}  // namespace blogext
