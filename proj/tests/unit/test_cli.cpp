#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "blogext/cli.hpp"
#include "blogext/svm.hpp"

namespace fs = std::filesystem;
using blogext::cli::run;

namespace {

const std::string kFixtures = BLOGEXT_FIXTURE_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "blogext");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        static int counter = 0;
        dir_ = fs::temp_directory_path() / ("blogext_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string at(const std::string& name) const { return (dir_ / name).string(); }

    // Trains on the fixture manifest into dir_/<prefix>{title,body}.model.
    void train_fixture(const std::string& prefix = "")
    {
        const auto r = cli({"train", kFixtures + "/manifest.json", "--title-model", at(prefix + "title.model"),
                            "--body-model", at(prefix + "body.model"), "--seed", "3"});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoArgumentsIsUsageError)
{
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
}

TEST_F(CliTest, TrainWritesLoadableModels)
{
    train_fixture();
    const auto title = blogext::load_model(slurp(at("title.model")));
    const auto body = blogext::load_model(slurp(at("body.model")));
    EXPECT_EQ(title.schema, blogext::SchemaId::title_v1);
    EXPECT_EQ(body.schema, blogext::SchemaId::body_v1);
    EXPECT_FALSE(title.dual_coefs.empty());
}

TEST_F(CliTest, TrainIsByteDeterministic)
{
    train_fixture("a_");
    train_fixture("b_");
    EXPECT_EQ(slurp(at("a_title.model")), slurp(at("b_title.model")));
    EXPECT_EQ(slurp(at("a_body.model")), slurp(at("b_body.model")));
}

TEST_F(CliTest, MissingManifestIsUsageError)
{
    const auto r = cli({"train", at("absent.json"), "--out", dir_.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SwappedModelsAreUsageError)
{
    train_fixture();
    const auto r = cli({"extract", kFixtures + "/f1.html", "--title-model", at("body.model"), "--body-model",
                        at("title.model")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("schema"), std::string::npos);
}

TEST_F(CliTest, ExtractFixtureWithSidecar)
{
    train_fixture();
    const auto r = cli({"extract", kFixtures + "/f1.html", "--title-model", at("title.model"), "--body-model",
                        at("body.model"), "--geometry", "sidecar", "--url", "http://allotment.example.com/"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("First frost on the beans"), std::string::npos);
    EXPECT_NE(r.out.find("\"bodies\""), std::string::npos);
}

TEST_F(CliTest, ExtractEmptyDirectorySucceeds)
{
    train_fixture();
    fs::create_directories(dir_ / "empty");
    const auto r = cli({"extract", at("empty"), "--title-model", at("title.model"), "--body-model", at("body.model")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, ExtractReportsPartialFailure)
{
    train_fixture();
    fs::create_directories(dir_ / "pages");
    fs::copy_file(kFixtures + "/f1.html", dir_ / "pages" / "a.html");
    fs::copy_file(kFixtures + "/f2.html", dir_ / "pages" / "b.html");
    // Only a.html has a sidecar.
    fs::copy_file(kFixtures + "/f1.geom", dir_ / "pages" / "a.geom");
    fs::create_directories(dir_ / "json");
    const auto r = cli({"extract", at("pages"), "--title-model", at("title.model"), "--body-model", at("body.model"),
                        "--geometry", "sidecar", "--out", at("json"), "--jobs", "2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("b.html"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "json" / "a.json"));
    EXPECT_FALSE(fs::exists(dir_ / "json" / "b.json"));
}

TEST_F(CliTest, BadGeometryIsUsageError)
{
    train_fixture();
    const auto r = cli({"extract", kFixtures + "/f1.html", "--title-model", at("title.model"), "--body-model",
                        at("body.model"), "--geometry", "browser"});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, GenCorpusIsDeterministic)
{
    for (const char* name : {"c1", "c2"}) {
        const auto r = cli({"gen-corpus", "--out", at(name), "--seed", "11", "--sites", "2", "--pages", "3"});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    EXPECT_EQ(slurp(dir_ / "c1" / "manifest.json"), slurp(dir_ / "c2" / "manifest.json"));
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir_ / "c1")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto rel = fs::relative(e.path(), dir_ / "c1");
        EXPECT_EQ(slurp(e.path()), slurp(dir_ / "c2" / rel)) << rel;
    }
    EXPECT_EQ(files, 7u);
}

TEST_F(CliTest, GenCorpusRejectsBadPosts)
{
    EXPECT_EQ(cli({"gen-corpus", "--out", at("c"), "--posts", "x"}).code, 2);
}

TEST_F(CliTest, EvaluateAndCurveOnGeneratedCorpus)
{
    ASSERT_EQ(cli({"gen-corpus", "--out", at("c"), "--seed", "2", "--sites", "2", "--pages", "8"}).code, 0);
    const auto manifest = at("c/manifest.json");
    const auto ev = cli({"evaluate", manifest, "--experiment", "single", "--sizes", "3", "--runs", "1", "--c", "1",
                         "--gamma", "auto", "--out", at("eval.json")});
    ASSERT_EQ(ev.code, 0) << ev.err;
    EXPECT_NE(ev.out.find("average"), std::string::npos);
    EXPECT_TRUE(fs::exists(at("eval.json")));
    const auto curve = cli({"curve", manifest, "--sizes", "2,3", "--runs", "1", "--c", "1", "--gamma", "auto"});
    EXPECT_EQ(curve.code, 0) << curve.err;
    EXPECT_EQ(cli({"evaluate", manifest, "--sizes", "9..2"}).code, 2);
}
