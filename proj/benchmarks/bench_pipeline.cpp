#include <benchmark/benchmark.h>

#include "blogext/corpus.hpp"
#include "blogext/pipeline.hpp"

using namespace blogext;

namespace {

const Corpus& corpus()
{
    static const Corpus c = generate_synthetic_corpus(7, 9, 20);
    return c;
}

// Pooled models over the first ten pages of every site, fixed hyperparameters.
const TrainedExtractor& models()
{
    static const TrainedExtractor t = [] {
        static const auto pages = prepare_corpus(corpus());
        std::vector<const PreparedLabeledPage*> train;
        for (const auto& p : pages) {
            if (p.source_index % 20 < 10) train.push_back(&p);
        }
        ExperimentOptions o;
        o.c = 1;
        o.fixed_auto_gamma = true;
        return train_extractor(train, o, 1);
    }();
    return t;
}

void BM_ParseHtml(benchmark::State& state)
{
    const auto& html = corpus().pages[state.range(0)].html;
    for (auto _ : state) benchmark::DoNotOptimize(parse_html(html));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * html.size()));
}
BENCHMARK(BM_ParseHtml)->Arg(0)->Arg(25)->Arg(170);

void BM_EstimateLayout(benchmark::State& state)
{
    const auto tree = parse_html(corpus().pages[state.range(0)].html);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_layout(tree, Viewport{}));
}
BENCHMARK(BM_EstimateLayout)->Arg(0)->Arg(25)->Arg(170);

void BM_PreparePage(benchmark::State& state)
{
    PageInput in;
    in.html = corpus().pages[state.range(0)].html;
    in.url = corpus().pages[state.range(0)].url;
    for (auto _ : state) benchmark::DoNotOptimize(prepare_page(in));
}
BENCHMARK(BM_PreparePage)->Arg(0)->Arg(25)->Arg(170);

void BM_Extract(benchmark::State& state)
{
    const auto& m = models();
    PageInput in;
    in.html = corpus().pages[state.range(0)].html;
    in.url = corpus().pages[state.range(0)].url;
    for (auto _ : state) benchmark::DoNotOptimize(extract(in, m.title_model, m.body_model));
}
BENCHMARK(BM_Extract)->Arg(0)->Arg(25)->Arg(170);

void BM_ExtractPrepared(benchmark::State& state)
{
    const auto& m = models();
    PageInput in;
    in.html = corpus().pages[state.range(0)].html;
    const auto page = prepare_page(in);
    for (auto _ : state) benchmark::DoNotOptimize(extract_prepared(page, m.title_model, m.body_model));
}
BENCHMARK(BM_ExtractPrepared)->Arg(0)->Arg(25)->Arg(170);

}  // namespace
