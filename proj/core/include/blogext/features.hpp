#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blogext/candidates.hpp"
#include "blogext/dom.hpp"
#include "blogext/layout.hpp"

namespace blogext {

// Whitespace-delimited tokens over non-CJK runs plus one word per CJK
// ideograph, kana or hangul syllable.
std::size_t count_words(std::string_view text);

// Characters from {. , ; : ! ? " ' ( )} and their full-width / CJK
// counterparts {。，、；：！？“”‘’（）…}.
std::size_t count_marks(std::string_view text);

bool ends_with_title_mark(std::string_view text);
bool ends_with_ellipsis(std::string_view text);

enum class LinkKind { no_link, internal, external };

std::string_view to_string(LinkKind kind) noexcept;

// Host of an absolute http(s) URL, lowercased, without port; empty otherwise.
std::string url_host(std::string_view url);
// Host reduced to its registrable domain ("blog.example.co.uk" ->
// "example.co.uk") using a small built-in public-suffix table.
std::string registrable_domain(std::string_view host);

// Link state of the first anchor with an href in the subtree (or the nearest
// enclosing anchor when the subtree has none), relative to the page URL.
LinkKind classify_link(const DomTree& tree, NodeId node);

struct TitleFeatures {
    static constexpr std::size_t width = 8;

    double cx = 0;
    double cy = 0;
    double font_size = 0;
    double title_len = 0;
    double link_none = 0;
    double link_internal = 0;
    double link_external = 0;
    double end_with_mark = 0;

    std::array<double, width> values() const;
};

struct BodyFeatures {
    static constexpr std::size_t width = 9;
    // Stand-in for "no title on that side": larger than any on-screen
    // normalized distance.
    static constexpr double no_title = 2.0;

    double widthper = 0;
    double rel_v_above = no_title;
    double rel_v_below = no_title;
    double rel_h = no_title;
    double cx = 0;
    double cy = 0;
    double body_len = 0;
    double marks_num = 0;
    double ends_ellipsis = 0;

    std::array<double, width> values() const;
};

struct TitleBlock {
    NodeId node = 0;
    Rect rect;
};

// Largest font among the rendered text under `node`.
double effective_font_size(const DomTree& tree, const Geometry& geometry, NodeId node);

// Throws MissingGeometry when the node has no rect.
TitleFeatures title_features(NodeId node, const DomTree& tree, const TextIndex& text, const Geometry& geometry,
                             const Viewport& viewport);
TitleFeatures title_features(NodeId node, const DomTree& tree, const Geometry& geometry, const Viewport& viewport);

// Recomputes rel_v_above, rel_v_below and rel_h of `f` for a body rect.
// above/below: vertical gap to the closest title entirely above/below, over
// viewport height. rel_h: horizontal distance from the body's x-extent to the
// center of the vertically nearest title, over viewport width.
void apply_title_relations(BodyFeatures& f, const Rect& rect, const Viewport& viewport,
                           std::span<const TitleBlock> titles);

BodyFeatures body_features(NodeId node, const DomTree& tree, const TextIndex& text, const Geometry& geometry,
                           const Viewport& viewport, std::span<const TitleBlock> titles);
BodyFeatures body_features(NodeId node, const DomTree& tree, const Geometry& geometry, const Viewport& viewport,
                           std::span<const TitleBlock> titles);

}  // namespace blogext
