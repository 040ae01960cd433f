#include <gtest/gtest.h>

#include <cmath>

#include "blogext/corpus.hpp"
#include "blogext/error.hpp"

using namespace blogext;

namespace {

// Small corpus shared by the tests: three templates, fourteen pages each.
const Corpus& small_corpus()
{
    static const Corpus corpus = generate_synthetic_corpus(5, 3, 14, {2, 4});
    return corpus;
}

const std::vector<PreparedLabeledPage>& small_pages()
{
    static const auto pages = prepare_corpus(small_corpus());
    return pages;
}

ExperimentOptions quick()
{
    ExperimentOptions o;
    o.runs = 2;
    o.c = 1.0;
    o.fixed_auto_gamma = true;
    return o;
}

void expect_average_is_mean(const ExperimentReport& r)
{
    double t = 0, b = 0, j = 0;
    for (const auto& [site, acc] : r.per_site) {
        t += acc.title;
        b += acc.body;
        j += acc.joint;
        for (double v : {acc.title, acc.body, acc.joint}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
    const double n = static_cast<double>(r.per_site.size());
    EXPECT_NEAR(r.average.title, t / n, 1e-9);
    EXPECT_NEAR(r.average.body, b / n, 1e-9);
    EXPECT_NEAR(r.average.joint, j / n, 1e-9);
}

ErrorCode error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(ParseSizes, RangesAndLists)
{
    const auto curve = parse_sizes("2..20:2");
    EXPECT_EQ(curve.size(), 10u);
    EXPECT_EQ(curve.front(), 2u);
    EXPECT_EQ(curve.back(), 20u);
    EXPECT_EQ(parse_sizes("10,20,40"), (std::vector<std::size_t>{10, 20, 40}));
    EXPECT_EQ(parse_sizes("3..7"), (std::vector<std::size_t>{3, 4, 5, 6, 7}));
    EXPECT_TRUE(parse_sizes("").empty());
    for (const char* bad : {"a", "5..2", "2..10:0", "1,,2", "-3"}) {
        EXPECT_EQ(error_of([&] { parse_sizes(bad); }), ErrorCode::InvalidArgument) << bad;
    }
}

TEST(HyperGrid, DefaultFirstAndFixedValues)
{
    ExperimentOptions o;
    const auto grid = hyper_grid(o);
    EXPECT_EQ(grid.size(), 9u);
    EXPECT_EQ(grid.front(), (HyperParams{1.0, std::nullopt}));
    o.c = 10;
    const auto fixed_c = hyper_grid(o);
    EXPECT_EQ(fixed_c.size(), 3u);
    for (const auto& h : fixed_c) EXPECT_EQ(h.c, 10.0);
    o.gamma = 0.5;
    EXPECT_EQ(hyper_grid(o), (std::vector<HyperParams>{{10.0, 0.5}}));
}

TEST(Experiments, InsufficientPages)
{
    const auto& pages = small_pages();
    const auto& sites = small_corpus().sites;
    EXPECT_EQ(error_of([&] { run_single_site_experiment(pages, sites, {14}, quick()); }),
              ErrorCode::InsufficientPages);
    EXPECT_EQ(error_of([&] { run_multi_site_experiment(pages, sites, 20, quick()); }), ErrorCode::InsufficientPages);
    EXPECT_EQ(error_of([&] { run_generalization_experiment(pages, sites, 42, quick()); }),
              ErrorCode::InsufficientPages);
    const std::vector<const PreparedLabeledPage*> one = {&pages[0]};
    EXPECT_EQ(error_of([&] { train_extractor(one, quick(), 1); }), ErrorCode::InsufficientPages);
}

TEST(Experiments, SingleSiteReportArithmetic)
{
    const auto reports = run_single_site_experiment(small_pages(), small_corpus().sites, {4, 8}, quick());
    ASSERT_EQ(reports.size(), 2u);
    EXPECT_EQ(reports[0].train_size, 4u);
    for (const auto& r : reports) {
        EXPECT_EQ(r.per_site.size(), 3u);
        EXPECT_EQ(r.runs, 2);
        EXPECT_EQ(r.choices.size(), 2u * 3u);
        for (const auto& [site, acc] : r.per_site) {
            EXPECT_EQ(acc.test_pages, 14u - r.train_size);
            EXPECT_LE(acc.joint, std::min(acc.title, acc.body) + 1e-12);
        }
        expect_average_is_mean(r);
    }
}

TEST(Experiments, OneSiteMultiEqualsSingle)
{
    const auto corpus = generate_synthetic_corpus(5, 1, 12, {2, 4});
    const auto pages = prepare_corpus(corpus);
    const auto single = run_single_site_experiment(pages, corpus.sites, {6}, quick());
    const auto multi = run_multi_site_experiment(pages, corpus.sites, 6, quick());
    EXPECT_EQ(multi.per_site, single.at(0).per_site);
    EXPECT_EQ(multi.average, single.at(0).average);
}

TEST(Experiments, GeneralizationIsDeterministic)
{
    const auto a = run_generalization_experiment(small_pages(), small_corpus().sites, 12, quick());
    const auto b = run_generalization_experiment(small_pages(), small_corpus().sites, 12, quick());
    EXPECT_EQ(a, b);
    expect_average_is_mean(a);
    std::size_t tested = 0;
    for (const auto& [site, acc] : a.per_site) tested += acc.test_pages;
    EXPECT_EQ(tested, 42u - 12u);
}

TEST(Experiments, EmptyCurve)
{
    EXPECT_TRUE(run_learning_curve(small_corpus(), {}, quick()).empty());
    EXPECT_TRUE(run_learning_curve(small_pages(), small_corpus().sites, {}, quick()).empty());
}

TEST(Experiments, CurvePointsArePooledRuns)
{
    const auto curve = run_learning_curve(small_pages(), small_corpus().sites, {2, 4}, quick());
    ASSERT_EQ(curve.size(), 2u);
    const auto multi = run_multi_site_experiment(small_pages(), small_corpus().sites, 4, quick());
    EXPECT_EQ(curve[1].per_site, multi.per_site);
    EXPECT_EQ(curve[1].experiment, "learning-curve");
    EXPECT_FALSE(format_curve(curve).empty());
}

TEST(Experiments, ValidationSelectionIsRecorded)
{
    ExperimentOptions o;
    o.runs = 1;
    const auto reports = run_single_site_experiment(small_pages(), small_corpus().sites, {10}, o);
    const auto grid = hyper_grid(o);
    for (const auto& choice : reports.at(0).choices) {
        EXPECT_NE(std::find(grid.begin(), grid.end(), choice.title), grid.end());
        EXPECT_NE(std::find(grid.begin(), grid.end(), choice.body), grid.end());
    }
}

TEST(Experiments, ReportsSerialize)
{
    const auto reports = run_single_site_experiment(small_pages(), small_corpus().sites, {4}, quick());
    const auto json = reports_json(reports);
    EXPECT_NE(json.find("\"single-site\""), std::string::npos);
    EXPECT_NE(format_table(reports).find("average"), std::string::npos);
}

TEST(Experiments, InvalidRuns)
{
    auto o = quick();
    o.runs = 0;
    EXPECT_EQ(error_of([&] { run_multi_site_experiment(small_pages(), small_corpus().sites, 2, o); }),
              ErrorCode::InvalidArgument);
}
