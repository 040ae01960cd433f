#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blogext/dom.hpp"
#include "blogext/error.hpp"
#include "blogext/layout.hpp"

using namespace blogext;

namespace {

std::vector<NodeId> all_tags(const DomTree& tree, std::string_view tag)
{
    std::vector<NodeId> out;
    for (NodeId id : tree.document_order()) {
        if (tree.node(id).tag == tag) out.push_back(id);
    }
    return out;
}

Rect centered_at(double x, double y, double w = 10, double h = 6)
{
    return {x - w / 2, y - h / 2, w, h};
}

}  // namespace

TEST(NormalizedCenter, ViewportCenterIsOrigin)
{
    const auto c = normalized_center(centered_at(640, 512), Viewport{1280, 1024});
    EXPECT_EQ(c.cx, 0.0);
    EXPECT_EQ(c.cy, 0.0);
}

TEST(NormalizedCenter, Corners)
{
    const double norm = std::sqrt(640.0 * 640.0 + 512.0 * 512.0);
    const auto tl = normalized_center(Rect{0, 0, 0, 0}, Viewport{});
    EXPECT_NEAR(tl.cx, -640 / norm, 1e-12);
    EXPECT_NEAR(tl.cy, -512 / norm, 1e-12);
    EXPECT_NEAR(tl.cx, -0.78087, 1e-5);
    EXPECT_NEAR(tl.cy, -0.62470, 1e-5);
    const auto br = normalized_center(Rect{1280, 1024, 0, 0}, Viewport{});
    EXPECT_NEAR(br.cx, 640 / norm, 1e-12);
    EXPECT_NEAR(br.cy, 512 / norm, 1e-12);
}

TEST(NormalizedCenter, AntisymmetryProperty)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-3000, 3000);
    std::uniform_real_distribution<double> size(0, 900);
    std::uniform_int_distribution<int> dim(1, 4000);
    for (int i = 0; i < 1000; ++i) {
        const Viewport vp{dim(rng), dim(rng)};
        const Rect r{pos(rng), pos(rng), size(rng), size(rng)};
        // Same size, center mirrored through the viewport center.
        const Rect m{vp.width - r.x - r.width, vp.height - r.y - r.height, r.width, r.height};
        const auto a = normalized_center(r, vp);
        const auto b = normalized_center(m, vp);
        EXPECT_NEAR(a.cx, -b.cx, 1e-12);
        EXPECT_NEAR(a.cy, -b.cy, 1e-12);
    }
}

TEST(Viewport, ParseAndValidate)
{
    EXPECT_EQ(parse_viewport("1280x1024"), (Viewport{1280, 1024}));
    EXPECT_EQ(parse_viewport("800X600"), (Viewport{800, 600}));
    for (const char* bad : {"", "1280", "0x10", "x10", "10x-1", "axb"}) {
        EXPECT_THROW(parse_viewport(bad), Error) << bad;
    }
    EXPECT_EQ(Viewport{}.to_string(), "1280x1024");
}

TEST(HeuristicLayout, SingleParagraph)
{
    const auto tree = parse_html("<html><body style=\"width:800px\"><p>abcdefghij</p></body></html>");
    const auto g = estimate_layout(tree, Viewport{});
    const Rect& p = g.rect(all_tags(tree, "p").at(0));
    EXPECT_GE(p.width, 80.0);
    EXPECT_DOUBLE_EQ(p.height, 19.2);
    EXPECT_EQ(g.source(), GeometrySource::heuristic);
}

TEST(HeuristicLayout, LineMetricsAreRounded)
{
    EXPECT_DOUBLE_EQ(line_height_for(16), 19.2);
    EXPECT_DOUBLE_EQ(line_height_for(13), 15.6);
    EXPECT_DOUBLE_EQ(glyph_advance_for(13), 6.5);
    EXPECT_DOUBLE_EQ(glyph_advance_for(11), 5.5);
}

TEST(HeuristicLayout, StackedBlocks)
{
    const auto tree = parse_html("<div><p>first</p><p>second line</p><div></div></div>");
    const auto g = estimate_layout(tree, Viewport{});
    const auto ps = all_tags(tree, "p");
    const Rect& a = g.rect(ps[0]);
    const Rect& b = g.rect(ps[1]);
    EXPECT_DOUBLE_EQ(b.y, a.y + a.height);
    const Rect& empty = g.rect(all_tags(tree, "div").at(1));
    EXPECT_EQ(empty.height, 0.0);
    EXPECT_DOUBLE_EQ(empty.y, b.bottom());
}

TEST(HeuristicLayout, FontSizesFromTableAndInlineStyle)
{
    const auto tree = parse_html("<h1>a</h1><h2>b</h2><h5>c</h5><div style=\"font-size:30px\">d</div>");
    const auto g = estimate_layout(tree, Viewport{});
    EXPECT_EQ(g.font_size(all_tags(tree, "h1")[0]), 32.0);
    EXPECT_EQ(g.font_size(all_tags(tree, "h2")[0]), 24.0);
    EXPECT_EQ(g.font_size(all_tags(tree, "h5")[0]), 13.0);
    EXPECT_EQ(g.font_size(all_tags(tree, "div")[0]), 30.0);
}

TEST(HeuristicLayout, WrapsAtParentWidth)
{
    // Twenty 3-glyph words at 8px per glyph in a 100px column: at most three
    // words (88px with spaces) fit on a line: seven lines.
    std::string words;
    for (int i = 0; i < 20; ++i) words += "abc ";
    const auto tree = parse_html("<div style=\"width:100px\"><p>" + words + "</p></div>");
    const auto g = estimate_layout(tree, Viewport{});
    const Rect& p = g.rect(all_tags(tree, "p")[0]);
    EXPECT_LE(p.width, 100.0);
    EXPECT_NEAR(p.height, 7 * 19.2, 1e-9);
}

TEST(HeuristicLayout, TableCellsSideBySide)
{
    const auto tree = parse_html("<table width=\"100%\"><tr><td width=\"70%\">a</td><td>b</td></tr></table>");
    const auto g = estimate_layout(tree, Viewport{});
    const auto tds = all_tags(tree, "td");
    const Rect& a = g.rect(tds[0]);
    const Rect& b = g.rect(tds[1]);
    EXPECT_EQ(a.y, b.y);
    EXPECT_GE(b.x, a.right() - 1e-9);
    EXPECT_NEAR(a.width, 0.7 * 1280, 1.0);
}

TEST(HeuristicLayout, HiddenNodesHaveZeroRect)
{
    const auto tree = parse_html("<p>a</p><div style=\"display:none\"><p>b</p></div>");
    const auto g = estimate_layout(tree, Viewport{});
    EXPECT_EQ(g.rect(all_tags(tree, "p")[1]), Rect{});
}

TEST(HeuristicLayout, IgnoredUnitsAreCounted)
{
    const auto tree = parse_html("<div style=\"width:20em;font-size:2rem\">a</div>");
    const auto g = estimate_layout(tree, Viewport{});
    EXPECT_EQ(g.ignored_units, 2u);
}

TEST(HeuristicLayout, ParentContainsChildrenAndBlockSiblingsDoNotOverlap)
{
    const std::string html =
        "<div id=a><h2><a href=/x>Title text</a></h2><div class=d>date</div><div class=e><p>one two three</p>"
        "<p>four five six seven eight nine ten eleven twelve</p></div><ul><li>x</li><li>y</li></ul></div>"
        "<table width=100%><tr><td width=60%><p>left</p></td><td><p>right</p><p>more</p></td></tr></table>";
    const auto tree = parse_html(html);
    const auto g = estimate_layout(tree, Viewport{});
    for (NodeId id : tree.document_order()) {
        const auto& n = tree.node(id);
        if (!n.rendered || !g.has_rect(id)) continue;
        for (NodeId c : n.children) {
            if (!tree.node(c).rendered || !g.has_rect(c)) continue;
            EXPECT_TRUE(g.rect(id).contains(g.rect(c))) << path_of(tree, c).to_string();
        }
    }
    const auto ps = all_tags(tree, "p");
    EXPECT_GE(g.rect(ps[1]).y, g.rect(ps[0]).bottom());
    const auto lis = all_tags(tree, "li");
    EXPECT_GE(g.rect(lis[1]).y, g.rect(lis[0]).bottom());
}

TEST(HeuristicLayout, Deterministic)
{
    const auto tree = parse_html("<div><h1>x</h1><p>y z</p><span>w</span></div>");
    const auto a = estimate_layout(tree, Viewport{});
    const auto b = estimate_layout(tree, Viewport{});
    for (NodeId id : tree.document_order()) {
        ASSERT_EQ(a.has_rect(id), b.has_rect(id));
        if (a.has_rect(id)) EXPECT_EQ(a.rect(id), b.rect(id));
        EXPECT_EQ(a.font_size(id), b.font_size(id));
    }
}
