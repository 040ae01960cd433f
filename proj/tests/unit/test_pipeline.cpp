#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "blogext/corpus.hpp"
#include "blogext/error.hpp"
#include "blogext/pipeline.hpp"

using namespace blogext;

namespace {

std::string read_fixture(const std::string& name)
{
    std::ifstream in(std::string(BLOGEXT_FIXTURE_DIR) + "/" + name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Identity standardizer over `d` columns.
Standardizer identity(std::size_t d)
{
    return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0), std::vector<std::uint8_t>(d, 0)};
}

SvmModel reject_all(SchemaId schema)
{
    SvmModel m;
    m.schema = schema;
    m.standardizer = identity(schema_width(schema));
    m.bias = -1;
    return m;
}

// Positive iff rel_v_above is near the no-title sentinel; the other columns
// are scaled to nothing.
SvmModel accept_sentinel_bodies()
{
    SvmModel m;
    m.schema = SchemaId::body_v1;
    m.standardizer = identity(BodyFeatures::width);
    for (std::size_t j = 0; j < BodyFeatures::width; ++j) m.standardizer.stds[j] = j == 1 ? 1.0 : 1e12;
    m.support_vectors = Matrix(1, BodyFeatures::width);
    m.support_vectors(0, 1) = BodyFeatures::no_title;
    m.dual_coefs = {1.0};
    m.gamma = 1.0;
    m.bias = -0.5;
    return m;
}

void expect_not_nested(const std::vector<ExtractedBlock>& blocks)
{
    for (const auto& a : blocks) {
        for (const auto& b : blocks) {
            if (&a == &b) continue;
            const auto& pa = a.path.indices;
            const auto& pb = b.path.indices;
            EXPECT_FALSE(pa.size() < pb.size() && std::equal(pa.begin(), pa.end(), pb.begin()))
                << a.path.to_string() << " contains " << b.path.to_string();
        }
    }
}

struct Models {
    SvmModel title;
    SvmModel body;
};

// Trained once on the hand-labeled fixture pages. Models trained on the
// synthetic corpus find the fixture titles but not its bodies, which are far
// shorter than any synthetic post.
const Models& fixture_models()
{
    static const Models models = [] {
        static const auto corpus = load_corpus(std::string(BLOGEXT_FIXTURE_DIR) + "/manifest.json");
        static const auto pages = prepare_corpus(corpus);
        std::vector<const PreparedLabeledPage*> ptrs;
        for (const auto& p : pages) ptrs.push_back(&p);
        const auto t = train_extractor(ptrs, ExperimentOptions{}, 1);
        return Models{t.title_model, t.body_model};
    }();
    return models;
}

PageInput f1_input(bool sidecar)
{
    PageInput in;
    in.html = read_fixture("f1.html");
    in.url = "http://allotment.example.com/";
    if (sidecar) in.sidecar = read_fixture("f1.geom");
    return in;
}

}  // namespace

TEST(Pipeline, FixtureWithFivePosts)
{
    const auto corpus = load_corpus(std::string(BLOGEXT_FIXTURE_DIR) + "/manifest.json");
    const auto& labels = corpus.pages.at(0);
    for (bool sidecar : {false, true}) {
        const auto result = extract(f1_input(sidecar), fixture_models().title, fixture_models().body);
        ASSERT_EQ(result.titles.size(), 5u) << to_json(result);
        ASSERT_EQ(result.bodies.size(), 5u) << to_json(result);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_EQ(result.titles[i].path, labels.title_paths[i]);
            EXPECT_EQ(result.bodies[i].path, labels.body_paths[i]);
        }
        EXPECT_EQ(result.titles[0].text, "First frost on the beans");
        EXPECT_TRUE(page_correct(result, labels, LabelKind::title));
        EXPECT_TRUE(page_correct(result, labels, LabelKind::body));
    }
}

TEST(Pipeline, TextsMatchTheirNodes)
{
    const auto page = f1_input(false);
    const auto result = extract(page, fixture_models().title, fixture_models().body);
    const auto tree = parse_html(page.html);
    for (const auto* list : {&result.titles, &result.bodies}) {
        for (const auto& b : *list) EXPECT_EQ(b.text, text_content(tree, node_at_path(tree, b.path)));
    }
}

TEST(Pipeline, ZeroTitlesLeaveBodiesAtTheSentinel)
{
    const auto prepared = prepare_page(f1_input(false));
    for (const auto& row : body_rows_for(prepared, {})) {
        EXPECT_EQ(row.rel_v_above, BodyFeatures::no_title);
        EXPECT_EQ(row.rel_v_below, BodyFeatures::no_title);
        EXPECT_EQ(row.rel_h, BodyFeatures::no_title);
    }
    const auto result = extract_prepared(prepared, reject_all(SchemaId::title_v1), accept_sentinel_bodies());
    EXPECT_TRUE(result.titles.empty());
    EXPECT_EQ(result.diagnostics.body_positives, prepared.body_nodes.size());
    // Every candidate is positive; only the outermost ones survive.
    ASSERT_FALSE(result.bodies.empty());
    expect_not_nested(result.bodies);
    EXPECT_LT(result.bodies.size(), prepared.body_nodes.size());
}

TEST(Pipeline, EmptyPositivesGiveEmptyLists)
{
    const auto result =
        extract(f1_input(false), reject_all(SchemaId::title_v1), reject_all(SchemaId::body_v1));
    EXPECT_TRUE(result.titles.empty());
    EXPECT_TRUE(result.bodies.empty());
    EXPECT_GT(result.diagnostics.title_candidates, 0u);
}

TEST(Pipeline, SchemaMismatchIsRejected)
{
    try {
        extract(f1_input(false), reject_all(SchemaId::body_v1), reject_all(SchemaId::title_v1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(Pipeline, ViewportMismatchIsFlagged)
{
    auto page = f1_input(false);
    page.viewport = {1024, 768};
    const auto result = extract(page, fixture_models().title, fixture_models().body);
    EXPECT_TRUE(result.diagnostics.viewport_mismatch);
}

TEST(Pipeline, Deterministic)
{
    const auto a = extract(f1_input(true), fixture_models().title, fixture_models().body);
    const auto b = extract(f1_input(true), fixture_models().title, fixture_models().body);
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_json(a), to_json(b));
}

TEST(Pipeline, JsonFieldOrder)
{
    const auto doc = to_json(extract(f1_input(false), fixture_models().title, fixture_models().body));
    const auto url = doc.find("\"url\"");
    const auto titles = doc.find("\"titles\"");
    const auto bodies = doc.find("\"bodies\"");
    const auto diag = doc.find("\"diagnostics\"");
    EXPECT_LT(url, titles);
    EXPECT_LT(titles, bodies);
    EXPECT_LT(bodies, diag);
    EXPECT_NE(diag, std::string::npos);
}

TEST(OverlapResolution, TitlesKeepTheDescendant)
{
    const auto tree = parse_html("<div><h2><a href=\"/x\">t</a></h2><h2>u</h2></div>");
    NodeId h2 = 0, a = 0, h2b = 0;
    for (NodeId id : tree.document_order()) {
        if (tree.node(id).tag == "a") a = id;
        if (tree.node(id).tag == "h2") (h2 ? h2b : h2) = id;
    }
    EXPECT_EQ(resolve_title_overlaps(tree, {h2, a, h2b}), (std::vector<NodeId>{a, h2b}));
    EXPECT_EQ(resolve_body_overlaps(tree, {h2, a, h2b}), (std::vector<NodeId>{h2, h2b}));
}

TEST(OverlapResolution, IdempotentAndNonNested)
{
    const auto tree = parse_html(read_fixture("f1.html"));
    std::mt19937_64 rng(17);
    std::bernoulli_distribution pick(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<NodeId> positives;
        for (NodeId id : tree.document_order()) {
            if (tree.node(id).is_element() && pick(rng)) positives.push_back(id);
        }
        for (auto resolve : {&resolve_title_overlaps, &resolve_body_overlaps}) {
            const auto once = resolve(tree, positives);
            EXPECT_EQ(resolve(tree, once), once);
            for (NodeId x : once) {
                for (NodeId y : once) EXPECT_FALSE(tree.is_ancestor(x, y));
            }
        }
    }
}
