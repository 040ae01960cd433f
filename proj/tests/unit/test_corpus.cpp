#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "blogext/candidates.hpp"
#include "blogext/corpus.hpp"
#include "blogext/error.hpp"

using namespace blogext;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = BLOGEXT_FIXTURE_DIR;

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("blogext_corpus_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    void write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path_ / name, std::ios::binary) << text;
    }

private:
    fs::path path_;
};

ErrorCode load_error(const fs::path& manifest)
{
    try {
        load_corpus(manifest);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "load succeeded";
    return ErrorCode::InvalidArgument;
}

ExtractionResult result_with(const DomTree& tree, const std::vector<NodeId>& titles, const std::vector<NodeId>& bodies)
{
    ExtractionResult r;
    for (NodeId id : titles) r.titles.push_back({path_of(tree, id), text_content(tree, id)});
    for (NodeId id : bodies) r.bodies.push_back({path_of(tree, id), text_content(tree, id)});
    return r;
}

}  // namespace

TEST(LoadCorpus, EmptyManifest)
{
    TempDir dir;
    dir.write("manifest.json", R"({"version":1,"pages":[]})");
    const auto corpus = load_corpus(dir.path() / "manifest.json");
    EXPECT_TRUE(corpus.pages.empty());
    EXPECT_TRUE(corpus.sites.empty());
}

TEST(LoadCorpus, MissingFiles)
{
    TempDir dir;
    EXPECT_EQ(load_error(dir.path() / "manifest.json"), ErrorCode::MissingFile);
    dir.write("manifest.json",
              R"({"version":1,"pages":[{"html":"absent.html","url":"http://a.example.com/","site":"a","titles":[],"bodies":[]}]})");
    EXPECT_EQ(load_error(dir.path() / "manifest.json"), ErrorCode::MissingFile);
}

TEST(LoadCorpus, SchemaAndLabelErrors)
{
    TempDir dir;
    dir.write("p.html", "<html><body><h2>t</h2><div>b</div></body></html>");
    dir.write("bad.json", R"({"version":1,"pages":[{"html":"p.html","url":"u","site":"a","titles":[["x"]]}]})");
    EXPECT_EQ(load_error(dir.path() / "bad.json"), ErrorCode::SchemaError);
    dir.write("version.json", R"({"version":3,"pages":[]})");
    EXPECT_EQ(load_error(dir.path() / "version.json"), ErrorCode::SchemaError);
    dir.write("unresolved.json",
              R"({"version":1,"pages":[{"html":"p.html","url":"u","site":"a","titles":[[1,9]],"bodies":[]}]})");
    EXPECT_EQ(load_error(dir.path() / "unresolved.json"), ErrorCode::UnresolvedLabel);
    // The body label names an h2, which is never a body candidate.
    dir.write("notbody.json",
              R"({"version":1,"pages":[{"html":"p.html","url":"u","site":"a","titles":[],"bodies":[[1,0]]}]})");
    EXPECT_EQ(load_error(dir.path() / "notbody.json"), ErrorCode::UnresolvedLabel);
}

TEST(LoadCorpus, FixtureManifestWithRemap)
{
    const auto corpus = load_corpus(kFixtures + "/manifest.json");
    ASSERT_EQ(corpus.pages.size(), 3u);
    EXPECT_EQ(corpus.sites, (std::vector<std::string>{"allotment", "whistle", "xiaolin"}));
    // Every title label names a heading wrapping its link; all nine move down.
    EXPECT_EQ(corpus.remaps.size(), 9u);
    for (const auto& r : corpus.remaps) {
        EXPECT_EQ(r.to.indices.size(), r.from.indices.size() + 1);
        EXPECT_TRUE(std::equal(r.from.indices.begin(), r.from.indices.end(), r.to.indices.begin()));
    }
    EXPECT_TRUE(corpus.pages[0].sidecar.has_value());
    EXPECT_FALSE(corpus.pages[1].sidecar.has_value());
    for (const auto& page : corpus.pages) {
        const auto tree = parse_html(page.html);
        const auto titles = title_candidates(tree).nodes;
        for (const auto& p : page.title_paths) {
            EXPECT_NE(std::find(titles.begin(), titles.end(), node_at_path(tree, p)), titles.end());
        }
    }
}

TEST(WriteCorpus, RoundTrip)
{
    TempDir dir;
    const auto corpus = generate_synthetic_corpus(4, 3, 2);
    write_corpus(corpus, dir.path());
    auto back = load_corpus(dir.path() / "manifest.json");
    EXPECT_EQ(back.pages, corpus.pages);
    EXPECT_EQ(back.sites, corpus.sites);
    EXPECT_EQ(manifest_json(back), manifest_json(corpus));
}

TEST(Synthetic, ShapeAndDeterminism)
{
    const auto a = generate_synthetic_corpus(7, 9, 3);
    const auto b = generate_synthetic_corpus(7, 9, 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.pages.size(), 27u);
    EXPECT_EQ(a.sites.size(), 9u);
    const auto c = generate_synthetic_corpus(8, 9, 3);
    EXPECT_NE(a.pages[0].html, c.pages[0].html);
}

TEST(Synthetic, LabelSoundness)
{
    const auto corpus = generate_synthetic_corpus(12, 9, 5, {1, 8});
    for (const auto& page : corpus.pages) {
        EXPECT_GE(page.title_paths.size(), 1u);
        EXPECT_GE(page.body_paths.size(), 1u);
        EXPECT_NE(std::find(corpus.sites.begin(), corpus.sites.end(), page.site_id), corpus.sites.end());
        const auto tree = parse_html(page.html);
        const auto titles = title_candidates(tree).nodes;
        const auto bodies = body_candidates(tree).nodes;
        for (const auto& p : page.title_paths) {
            EXPECT_NE(std::find(titles.begin(), titles.end(), node_at_path(tree, p)), titles.end());
        }
        for (const auto& p : page.body_paths) {
            EXPECT_NE(std::find(bodies.begin(), bodies.end(), node_at_path(tree, p)), bodies.end());
        }
        EXPECT_EQ(page.html.find("data-bx"), std::string::npos);
    }
}

TEST(PageCorrect, ExactSetMatch)
{
    TempDir dir;
    dir.write("p.html",
              "<html><body><h2><a href=\"/1\">One</a></h2><div class=e><p>first body</p></div>"
              "<h2><a href=\"/2\">Two</a></h2><div class=e><p>second body</p></div></body></html>");
    // Titles labeled at the h2, bodies at the wrapper div.
    dir.write("manifest.json", R"({"version":1,"pages":[{"html":"p.html","url":"http://x.example.com/","site":"x",
        "titles":[[1,0],[1,2]],"bodies":[[1,1],[1,3]]}]})");
    const auto corpus = load_corpus(dir.path() / "manifest.json");
    const auto& page = corpus.pages[0];
    const auto tree = parse_html(page.html);
    auto at = [&](std::vector<std::size_t> p) { return node_at_path(tree, NodePath{std::move(p)}); };

    const auto exact = result_with(tree, {at({1, 0, 0}), at({1, 2, 0})}, {at({1, 1}), at({1, 3})});
    EXPECT_TRUE(page_correct(exact, page, LabelKind::title));
    EXPECT_TRUE(page_correct(exact, page, LabelKind::body));

    // Predicting the labeled h2 itself maps onto its minimal descendant.
    const auto ancestors = result_with(tree, {at({1, 0}), at({1, 2})}, {at({1, 1, 0}), at({1, 3, 0})});
    EXPECT_TRUE(page_correct(ancestors, page, LabelKind::title));
    // A body predicted at the single-paragraph child extracts the same text.
    EXPECT_TRUE(page_correct(ancestors, page, LabelKind::body));

    const auto extra = result_with(tree, {at({1, 0, 0}), at({1, 2, 0}), at({1, 1, 0})}, {at({1, 1})});
    EXPECT_FALSE(page_correct(extra, page, LabelKind::title));
    EXPECT_FALSE(page_correct(extra, page, LabelKind::body));
}
