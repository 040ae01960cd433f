#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blogext/dom.hpp"

namespace blogext {

struct Viewport {
    int width = 1280;
    int height = 1024;

    bool operator==(const Viewport&) const = default;
    std::string to_string() const;
};

// Parses "WxH" (e.g. "1280x1024"). Throws InvalidArgument.
Viewport parse_viewport(std::string_view text);
void validate(const Viewport& viewport);

struct Rect {
    double x = 0;
    double y = 0;
    double width = 0;
    double height = 0;

    double right() const noexcept { return x + width; }
    double bottom() const noexcept { return y + height; }
    double area() const noexcept { return width * height; }
    double center_x() const noexcept { return x + width / 2; }
    double center_y() const noexcept { return y + height / 2; }
    bool contains(const Rect& other) const noexcept;
    bool operator==(const Rect&) const = default;
};

Rect union_of(const Rect& a, const Rect& b) noexcept;

enum class GeometrySource { heuristic, sidecar };

// Per-node rendering results for one page. Nodes without an entry have no
// geometry (excluded from candidacy); non-rendered nodes carry the zero rect.
class Geometry {
public:
    Geometry(std::size_t node_count, Viewport viewport, GeometrySource source);

    void set_rect(NodeId id, const Rect& rect);
    void set_font_size(NodeId id, double px);

    bool has_rect(NodeId id) const noexcept { return id < rects_.size() && rects_[id].has_value(); }
    // Throws MissingGeometry.
    const Rect& rect(NodeId id) const;
    std::optional<double> font_size(NodeId id) const noexcept;

    const Viewport& viewport() const noexcept { return viewport_; }
    GeometrySource source() const noexcept { return source_; }
    std::size_t node_count() const noexcept { return rects_.size(); }

    // Inline style lengths in units other than px that were skipped.
    std::size_t ignored_units = 0;

private:
    std::vector<std::optional<Rect>> rects_;
    std::vector<double> font_sizes_;  // 0 = unknown
    Viewport viewport_;
    GeometrySource source_;
};

// Deterministic block/inline box layout. Block elements stack vertically at
// their parent's content width; inline text wraps at 0.5 * font-size per
// glyph with 1.2 * font-size lines; table rows lay cells side by side.
Geometry estimate_layout(const DomTree& tree, const Viewport& viewport);

// Line height and glyph advance for a font size, rounded to 1/10 px.
double line_height_for(double font_px) noexcept;
double glyph_advance_for(double font_px) noexcept;

struct SidecarNode {
    NodePath path;
    Rect rect;
    double font_size = 0;
};

struct SidecarDocument {
    Viewport viewport;
    std::vector<SidecarNode> nodes;
    std::optional<std::string> rendered_html;
};

// Reads a version-1 geometry sidecar. Throws SchemaError.
SidecarDocument parse_sidecar(std::string_view document);
std::string serialize_sidecar(const SidecarDocument& doc);

// Throws PathMismatch when a sidecar path does not resolve in `tree`.
Geometry geometry_from_sidecar(const SidecarDocument& doc, const DomTree& tree);
Geometry load_sidecar(std::string_view document, const DomTree& tree);

struct NormalizedCenter {
    double cx = 0;
    double cy = 0;
};

// (rect center - viewport center) / |viewport center|.
NormalizedCenter normalized_center(const Rect& rect, const Viewport& viewport);

}  // namespace blogext
