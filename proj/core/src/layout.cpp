#include "blogext/layout.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "blogext/error.hpp"
#include "encoding.hpp"
#include "text_util.hpp"

namespace blogext {

std::string Viewport::to_string() const
{
    return std::to_string(width) + "x" + std::to_string(height);
}

void validate(const Viewport& viewport)
{
    if (viewport.width <= 0 || viewport.height <= 0) {
        throw Error(ErrorCode::InvalidArgument, "viewport dimensions must be positive, got " + viewport.to_string());
    }
}

Viewport parse_viewport(std::string_view text)
{
    const auto x = text.find_first_of("xX");
    Viewport v{0, 0};
    if (x == std::string_view::npos ||
        std::from_chars(text.data(), text.data() + x, v.width).ptr != text.data() + x ||
        std::from_chars(text.data() + x + 1, text.data() + text.size(), v.height).ptr != text.data() + text.size()) {
        throw Error(ErrorCode::InvalidArgument, "viewport must look like WIDTHxHEIGHT, got '" + std::string(text) + "'");
    }
    validate(v);
    return v;
}

bool Rect::contains(const Rect& o) const noexcept
{
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
}

Rect union_of(const Rect& a, const Rect& b) noexcept
{
    const double x0 = std::min(a.x, b.x);
    const double y0 = std::min(a.y, b.y);
    const double x1 = std::max(a.right(), b.right());
    const double y1 = std::max(a.bottom(), b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

Geometry::Geometry(std::size_t node_count, Viewport viewport, GeometrySource source)
    : rects_(node_count), font_sizes_(node_count, 0.0), viewport_(viewport), source_(source)
{
    validate(viewport_);
}

void Geometry::set_rect(NodeId id, const Rect& rect)
{
    rects_.at(id) = rect;
}

void Geometry::set_font_size(NodeId id, double px)
{
    if (!(px > 0)) {
        throw Error(ErrorCode::InvalidArgument, "font size must be positive");
    }
    font_sizes_.at(id) = px;
}

const Rect& Geometry::rect(NodeId id) const
{
    if (!has_rect(id)) {
        throw Error(ErrorCode::MissingGeometry, "node " + std::to_string(id) + " has no geometry");
    }
    return *rects_[id];
}

std::optional<double> Geometry::font_size(NodeId id) const noexcept
{
    if (id >= font_sizes_.size() || font_sizes_[id] <= 0) {
        return std::nullopt;
    }
    return font_sizes_[id];
}

namespace {

double round_tenth(double v) noexcept
{
    return std::round(v * 10.0) / 10.0;
}

}  // namespace

double line_height_for(double font_px) noexcept
{
    return round_tenth(1.2 * font_px);
}

double glyph_advance_for(double font_px) noexcept
{
    return round_tenth(0.5 * font_px);
}

NormalizedCenter normalized_center(const Rect& rect, const Viewport& viewport)
{
    validate(viewport);
    const double bx = viewport.width / 2.0;
    const double by = viewport.height / 2.0;
    const double norm = std::hypot(bx, by);
    return {(rect.center_x() - bx) / norm, (rect.center_y() - by) / norm};
}

namespace {

using namespace std::string_view_literals;

constexpr std::array kBlockTags = {
    "html"sv,   "body"sv,  "address"sv, "article"sv, "aside"sv,  "blockquote"sv, "center"sv, "dd"sv,
    "details"sv, "dialog"sv, "dir"sv,   "div"sv,     "dl"sv,     "dt"sv,         "fieldset"sv, "figcaption"sv,
    "figure"sv, "footer"sv, "form"sv,   "h1"sv,      "h2"sv,     "h3"sv,         "h4"sv,     "h5"sv,
    "h6"sv,     "header"sv, "hgroup"sv, "hr"sv,      "li"sv,     "main"sv,       "menu"sv,   "nav"sv,
    "ol"sv,     "p"sv,      "pre"sv,    "section"sv, "summary"sv, "table"sv,     "tbody"sv,  "thead"sv,
    "tfoot"sv,  "tr"sv,     "td"sv,     "th"sv,      "ul"sv,     "caption"sv,    "legend"sv};

std::optional<double> default_font(std::string_view tag)
{
    if (tag == "h1") return 32;
    if (tag == "h2") return 24;
    if (tag == "h3") return 19;
    if (tag == "h4") return 16;
    if (tag == "h5") return 13;
    if (tag == "h6") return 11;
    return std::nullopt;
}

struct Length {
    double value = 0;
    bool percent = false;
};

// "12", "12px", "12.5px" -> px; "40%" -> percent. Anything else is nullopt.
std::optional<Length> parse_length(std::string_view s, bool allow_percent, bool allow_unitless)
{
    while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
    while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || !std::isfinite(v)) {
        return std::nullopt;
    }
    const auto unit = ascii_lower(s.substr(static_cast<std::size_t>(ptr - s.data())));
    if (unit == "px" || (unit.empty() && allow_unitless)) {
        return Length{v, false};
    }
    if (unit == "%" && allow_percent) {
        return Length{v, true};
    }
    return std::nullopt;
}

class LayoutEngine {
public:
    LayoutEngine(const DomTree& tree, Geometry& geo) : tree_(tree), geo_(geo), block_(tree.size(), 0)
    {
        classify_blocks();
    }

    void run()
    {
        const auto width = static_cast<double>(geo_.viewport().width);
        layout_block(tree_.root(), 0.0, 0.0, width, 16.0);
    }

private:
    // Element is laid out as a block if its tag is block-level (or styled
    // display:block) or if it contains a rendered block descendant.
    void classify_blocks()
    {
        const auto order = tree_.document_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto& n = tree_.node(*it);
            if (!n.is_element() || !n.rendered) {
                continue;
            }
            bool block = std::find(kBlockTags.begin(), kBlockTags.end(), n.tag) != kBlockTags.end();
            if (auto display = style_property(n, "display")) {
                const auto d = ascii_lower(*display);
                if (d == "block" || d == "list-item" || d == "table") block = true;
                if (d == "inline" || d == "inline-block") block = false;
            }
            for (NodeId c : n.children) {
                if (block_[c]) {
                    block = true;
                }
            }
            block_[*it] = block ? 1 : 0;
        }
    }

    double compute_font(const DomNode& n, double inherited)
    {
        double font = default_font(n.tag).value_or(inherited);
        if (auto fs = style_property(n, "font-size")) {
            if (auto len = parse_length(*fs, false, false); len && len->value > 0) {
                font = len->value;
            } else {
                ++geo_.ignored_units;
            }
        }
        return font;
    }

    std::optional<double> style_px(const DomNode& n, std::string_view prop)
    {
        auto v = style_property(n, prop);
        if (!v) {
            return std::nullopt;
        }
        if (auto len = parse_length(*v, false, true)) {
            return len->value;
        }
        if (ascii_lower(*v) != "auto") {
            ++geo_.ignored_units;
        }
        return std::nullopt;
    }

    std::optional<double> explicit_size(const DomNode& n, std::string_view prop, double avail)
    {
        if (auto px = style_px(n, prop)) {
            return std::max(0.0, *px);
        }
        if (auto attr = n.attribute(prop)) {
            if (auto len = parse_length(*attr, true, true)) {
                return std::max(0.0, len->percent ? avail * len->value / 100.0 : len->value);
            }
        }
        return std::nullopt;
    }

    void zero_subtree(NodeId id)
    {
        geo_.set_rect(id, Rect{});
        for (NodeId c : tree_.node(id).children) {
            zero_subtree(c);
        }
    }

    // Lays out a block box whose top-left margin edge is (x, y); returns the
    // y just below its margin box.
    double layout_block(NodeId id, double x, double y, double avail, double inherited_font)
    {
        const auto& n = tree_.node(id);
        const double font = compute_font(n, inherited_font);
        geo_.set_font_size(id, font);

        const double bx = x + style_px(n, "margin-left").value_or(0.0);
        const double by = y + style_px(n, "margin-top").value_or(0.0);
        // Table cells arrive with their width already resolved by layout_row.
        const bool cell = n.parent && tree_.node(*n.parent).tag == "tr";
        const double width =
            cell ? avail : explicit_size(n, "width", avail).value_or(std::max(0.0, avail - (bx - x)));

        double cursor = by;
        Rect box{bx, by, width, 0};
        if (n.tag == "tr") {
            cursor = layout_row(id, bx, by, width, font);
        } else {
            std::vector<NodeId> run;
            auto flush = [&] {
                if (!run.empty()) {
                    cursor = layout_inline(run, bx, cursor, width, font);
                    run.clear();
                }
            };
            for (NodeId c : n.children) {
                const auto& child = tree_.node(c);
                if (!child.rendered) {
                    zero_subtree(c);
                    continue;
                }
                if (child.is_element() && block_[c]) {
                    flush();
                    cursor = layout_block(c, bx, cursor, width, font);
                } else {
                    run.push_back(c);
                }
            }
            flush();
        }
        box.height = explicit_size(n, "height", 0.0).value_or(cursor - by);
        for (NodeId c : n.children) {
            if (tree_.node(c).rendered && geo_.has_rect(c)) {
                const auto& r = geo_.rect(c);
                if (r.width > 0 || r.height > 0) {
                    box = union_of(box, r);
                }
            }
        }
        geo_.set_rect(id, box);
        return std::max(by + box.height, box.bottom()) + style_px(n, "margin-bottom").value_or(0.0);
    }

    double layout_row(NodeId row, double x, double y, double width, double font)
    {
        std::vector<NodeId> cells;
        for (NodeId c : tree_.node(row).children) {
            const auto& child = tree_.node(c);
            if (child.rendered && child.is_element()) {
                cells.push_back(c);
            } else {
                zero_subtree(c);
            }
        }
        std::vector<std::optional<double>> widths;
        double fixed = 0;
        std::size_t flexible = 0;
        for (NodeId c : cells) {
            widths.push_back(explicit_size(tree_.node(c), "width", width));
            if (widths.back()) {
                fixed += *widths.back();
            } else {
                ++flexible;
            }
        }
        const double share = flexible > 0 ? std::max(0.0, width - fixed) / static_cast<double>(flexible) : 0.0;
        double cx = x;
        double bottom = y;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double w = widths[i].value_or(share);
            bottom = std::max(bottom, layout_block(cells[i], cx, y, w, font));
            cx += w;
        }
        for (NodeId c : cells) {
            Rect r = geo_.rect(c);
            r.height = std::max(r.height, bottom - r.y);
            geo_.set_rect(c, r);
        }
        return bottom;
    }

    struct Atom {
        double width = 0;
        double height = 0;
        double space = 0;  // width of the collapsible space before the atom, 0 if none
        bool line_break = false;
        bool anchor = false;  // zero-size position marker for an owner without content
        std::vector<NodeId> owners;
    };

    void collect_atoms(NodeId id, std::vector<NodeId>& chain, double font, bool& pending_space,
                       std::vector<Atom>& atoms)
    {
        const auto& n = tree_.node(id);
        if (!n.rendered) {
            zero_subtree(id);
            return;
        }
        chain.push_back(id);
        atoms.push_back(Atom{0, 0, 0, false, true, {id}});
        if (n.is_text()) {
            geo_.set_font_size(id, font);
            const double advance = glyph_advance_for(font);
            const double line = line_height_for(font);
            std::size_t pos = 0;
            std::size_t glyphs = 0;
            double space_before = 0;
            auto emit_word = [&] {
                if (glyphs > 0) {
                    atoms.push_back(Atom{static_cast<double>(glyphs) * advance, line, space_before, false, false, chain});
                    glyphs = 0;
                    space_before = 0;
                }
            };
            while (pos < n.text.size()) {
                const char32_t cp = detail::next_code_point(n.text, pos);
                if (detail::is_space_cp(cp)) {
                    emit_word();
                    pending_space = true;
                    continue;
                }
                if (glyphs == 0) {
                    space_before = pending_space ? advance : 0.0;
                    pending_space = false;
                }
                if (detail::is_cjk_breakable(cp)) {
                    emit_word();
                    atoms.push_back(Atom{advance, line, space_before, false, false, chain});
                    space_before = 0;
                    continue;
                }
                ++glyphs;
            }
            emit_word();
        } else if (n.is_element()) {
            const double own_font = compute_font(n, font);
            geo_.set_font_size(id, own_font);
            if (n.tag == "br") {
                atoms.push_back(Atom{0, line_height_for(own_font), 0, true, false, chain});
                pending_space = false;
            } else if (n.tag == "img") {
                const double w = explicit_size(n, "width", 0.0).value_or(0.0);
                const double h = explicit_size(n, "height", 0.0).value_or(0.0);
                atoms.push_back(Atom{w, h, pending_space ? glyph_advance_for(own_font) : 0.0, false, false, chain});
                pending_space = false;
            } else {
                for (NodeId c : n.children) {
                    collect_atoms(c, chain, own_font, pending_space, atoms);
                }
            }
        }
        chain.pop_back();
    }

    double layout_inline(const std::vector<NodeId>& run, double x, double y, double width, double font)
    {
        std::vector<Atom> atoms;
        std::vector<NodeId> chain;
        bool pending_space = false;
        for (NodeId id : run) {
            collect_atoms(id, chain, font, pending_space, atoms);
        }

        std::unordered_map<NodeId, Rect> boxes;
        std::unordered_map<NodeId, Rect> anchors;
        struct Placed {
            const Atom* atom;
            double x;
        };
        std::vector<Placed> line;
        double line_y = y;
        double pen = x;
        bool has_content = false;

        auto finish_line = [&](double min_height) {
            double h = min_height;
            for (const auto& p : line) {
                h = std::max(h, p.atom->height);
            }
            for (const auto& p : line) {
                if (p.atom->anchor) {
                    anchors.try_emplace(p.atom->owners.front(), Rect{p.x, line_y, 0, 0});
                    continue;
                }
                const Rect r{p.x, line_y, p.atom->width, h};
                for (NodeId owner : p.atom->owners) {
                    auto [it, inserted] = boxes.try_emplace(owner, r);
                    if (!inserted) {
                        it->second = union_of(it->second, r);
                    }
                }
            }
            line_y += h;
            line.clear();
            pen = x;
            has_content = false;
        };

        for (const auto& atom : atoms) {
            if (atom.anchor) {
                line.push_back({&atom, pen});
                continue;
            }
            if (atom.line_break) {
                line.push_back({&atom, pen});
                finish_line(atom.height);
                continue;
            }
            double gap = has_content ? atom.space : 0.0;
            if (has_content && pen + gap + atom.width > x + width) {
                finish_line(0.0);
                gap = 0.0;
            }
            line.push_back({&atom, pen + gap});
            pen += gap + atom.width;
            has_content = true;
        }
        if (!line.empty()) {
            finish_line(0.0);
        }

        for (NodeId id : run) {
            assign_inline_rects(id, boxes, anchors);
        }
        return line_y;
    }

    void assign_inline_rects(NodeId id, const std::unordered_map<NodeId, Rect>& boxes,
                             const std::unordered_map<NodeId, Rect>& anchors)
    {
        const auto& n = tree_.node(id);
        if (!n.rendered) {
            return;
        }
        if (auto it = boxes.find(id); it != boxes.end()) {
            geo_.set_rect(id, it->second);
        } else if (auto a = anchors.find(id); a != anchors.end()) {
            geo_.set_rect(id, a->second);
        } else {
            geo_.set_rect(id, Rect{});
        }
        for (NodeId c : n.children) {
            assign_inline_rects(c, boxes, anchors);
        }
    }

    const DomTree& tree_;
    Geometry& geo_;
    std::vector<char> block_;
};

}  // namespace

Geometry estimate_layout(const DomTree& tree, const Viewport& viewport)
{
    Geometry geo(tree.size(), viewport, GeometrySource::heuristic);
    LayoutEngine engine(tree, geo);
    engine.run();
    for (NodeId id = 0; id < tree.size(); ++id) {
        if (!geo.has_rect(id)) {
            geo.set_rect(id, Rect{});
        }
    }
    return geo;
}

}  // namespace blogext
