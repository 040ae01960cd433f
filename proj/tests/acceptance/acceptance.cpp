// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blogext/candidates.hpp"
#include "blogext/corpus.hpp"
#include "blogext/pipeline.hpp"
#include "blogext/svm.hpp"
#include "qp_oracle.hpp"

using namespace blogext;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body)
{
    Outcome o;
    const auto start = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.str().empty() ? "" : ": ", o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string pct(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100 * v);
    return buf;
}

oracle::Mat rows_of(const Matrix& m)
{
    oracle::Mat out;
    for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
    return out;
}

double kkt_violation(const TrainResult& r, std::span<const int> y, const Matrix& x)
{
    double worst = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = y[i] * decision_value(r.model, x.row(i));
        double v = 0;
        if (r.alphas[i] <= 0) {
            v = std::max(0.0, 1 - m);
        } else if (r.alphas[i] >= r.box[i]) {
            v = std::max(0.0, m - 1);
        } else {
            v = std::abs(m - 1);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

void svm_oracle(Outcome& o)
{
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal(0, 1);
    const double cs[] = {0.1, 1.0, 10.0};
    double worst_obj = 0, worst_kkt = 0;
    int sign_mismatches = 0;
    const auto start = Clock::now();
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng() % 27;
        const std::size_t dims = 2 + rng() % 7;
        Matrix x;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            const int label = i % 2 == 0 ? 1 : -1;
            std::vector<double> row(dims);
            for (auto& v : row) v = normal(rng);
            row[0] += 0.7 * label;
            x.append_row(row);
            y.push_back(label);
        }
        TrainConfig cfg;
        cfg.c = cs[trial % 3];
        if (trial % 2 == 1) cfg.gamma = 0.5;
        const auto r = train_detailed(x, y, cfg, SchemaId::title_v1, Viewport{});
        const auto z = rows_of(r.standardized);
        const auto ref = oracle::solve(oracle::gram(z, r.model.gamma), y, r.box);
        worst_obj = std::max(worst_obj, std::abs(r.objective - ref.objective));
        worst_kkt = std::max(worst_kkt, kkt_violation(r, y, x));
        for (int p = 0; p < 100; ++p) {
            std::vector<double> probe(dims);
            for (auto& v : probe) v = 1.5 * normal(rng);
            const double mine = decision_value(r.model, probe);
            const double theirs =
                oracle::decision(z, y, ref, r.model.standardizer.transform(probe), r.model.gamma);
            // A probe lying on the boundary has no well-defined sign.
            if (std::abs(theirs) > 1e-6 && (mine > 0) != (theirs > 0)) ++sign_mismatches;
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    o.detail << "max |dW| " << worst_obj << ", max KKT " << worst_kkt << ", sign mismatches " << sign_mismatches;
    o.require(worst_obj <= 1e-4, "objective gap above 1e-4");
    o.require(worst_kkt <= 1e-3, "KKT violation above 1e-3");
    o.require(sign_mismatches == 0, "decision signs differ");
    o.require(secs < 30, "slower than 30 s");
}

void check_standardized(const Matrix& rows, Outcome& o, double& worst_mean, double& worst_var)
{
    const auto s = fit_standardizer(rows);
    const Matrix t = s.transform(rows);
    for (std::size_t j = 0; j < rows.cols(); ++j) {
        if (s.constant[j]) continue;
        double mean = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) mean += t(i, j);
        mean /= static_cast<double>(t.rows());
        double var = 0;
        for (std::size_t i = 0; i < t.rows(); ++i) var += (t(i, j) - mean) * (t(i, j) - mean);
        var /= static_cast<double>(t.rows());
        worst_mean = std::max(worst_mean, std::abs(mean));
        worst_var = std::max(worst_var, std::abs(var - 1));
    }
    (void)o;
}

void standardization(const std::vector<PreparedLabeledPage>& pages, Outcome& o)
{
    double worst_mean = 0, worst_var = 0;
    Matrix title_rows, body_rows;
    for (std::size_t p = 0; p < pages.size(); p += 25) {
        for (const auto& f : pages[p].page.title_rows) title_rows.append_row(f.values());
        for (const auto& f : pages[p].page.body_rows) body_rows.append_row(f.values());
    }
    check_standardized(title_rows, o, worst_mean, worst_var);
    check_standardized(body_rows, o, worst_mean, worst_var);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 200;
        const std::size_t d = 1 + rng() % 9;
        const double shift = normal(rng) * 100, scale = std::exp(normal(rng) * 3);
        Matrix m;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(d);
            for (auto& v : row) v = shift + scale * normal(rng);
            m.append_row(row);
        }
        check_standardized(m, o, worst_mean, worst_var);
    }
    o.detail << "max |mean| " << worst_mean << ", max |var-1| " << worst_var;
    o.require(worst_mean < 1e-9, "mean not removed");
    o.require(worst_var < 1e-9, "variance not unit");
}

void normalization(Outcome& o)
{
    const Viewport vp{1280, 1024};
    const auto center = normalized_center(Rect{590, 487, 100, 50}, vp);
    o.require(center.cx == 0.0 && center.cy == 0.0, "viewport center is not the origin");
    const double norm = std::sqrt(640.0 * 640.0 + 512.0 * 512.0);
    const struct {
        Rect r;
        double cx, cy;
    } corners[] = {
        {{0, 0, 0, 0}, -640 / norm, -512 / norm},
        {{1280, 0, 0, 0}, 640 / norm, -512 / norm},
        {{0, 1024, 0, 0}, -640 / norm, 512 / norm},
        {{1280, 1024, 0, 0}, 640 / norm, 512 / norm},
        {{0, 0, 1280, 1024}, 0, 0},
        {{0, 512, 0, 0}, -640 / norm, 0},
    };
    double worst = 0;
    for (const auto& c : corners) {
        const auto n = normalized_center(c.r, vp);
        worst = std::max({worst, std::abs(n.cx - c.cx), std::abs(n.cy - c.cy)});
    }
    o.require(worst <= 1e-12, "corner values off");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-3000, 3000);
    std::uniform_real_distribution<double> size(0, 900);
    std::uniform_int_distribution<int> dim(1, 4000);
    double anti = 0;
    for (int i = 0; i < 1000; ++i) {
        const Viewport v{dim(rng), dim(rng)};
        const Rect r{pos(rng), pos(rng), size(rng), size(rng)};
        const Rect m{v.width - r.x - r.width, v.height - r.y - r.height, r.width, r.height};
        const auto a = normalized_center(r, v);
        const auto b = normalized_center(m, v);
        anti = std::max({anti, std::abs(a.cx + b.cx), std::abs(a.cy + b.cy)});
    }
    o.require(anti <= 1e-12, "antisymmetry broken");
    o.detail << "corner error " << worst << ", antisymmetry error " << anti;
}

void single_site(const std::vector<PreparedLabeledPage>& pages, const Corpus& corpus, Outcome& o)
{
    const auto start = Clock::now();
    const auto reports = run_single_site_experiment(pages, corpus.sites, {10, 40}, ExperimentOptions{});
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const double k10 = reports.at(0).average.joint;
    const double k40 = reports.at(1).average.joint;
    o.detail << "k=10 joint " << pct(k10) << ", k=40 joint " << pct(k40);
    o.require(k10 >= 0.98, "k=10 below 98%");
    o.require(k40 >= 0.99, "k=40 below 99%");
    o.require(secs < 300, "slower than 5 min");
}

void multi_site(const std::vector<PreparedLabeledPage>& pages, const Corpus& corpus, Outcome& o)
{
    const auto r = run_multi_site_experiment(pages, corpus.sites, 40, ExperimentOptions{});
    o.detail << "title " << pct(r.average.title) << ", body " << pct(r.average.body);
    o.require(r.average.title >= 0.97, "title below 97%");
    o.require(r.average.body >= 0.95, "body below 95%");
    o.require(r.average.body <= r.average.title, "body above title");
}

void learning_curve(const std::vector<PreparedLabeledPage>& pages, const Corpus& corpus, Outcome& o)
{
    const auto curve = run_learning_curve(pages, corpus.sites, parse_sizes("2..20:2"), ExperimentOptions{});
    for (const auto& r : curve) {
        o.detail << "k=" << r.train_size << " " << pct(r.average.title) << "/" << pct(r.average.body) << " ";
    }
    const auto& first = curve.front().average;
    const auto& last = curve.back().average;
    o.require(curve.back().train_size == 20 && curve.front().train_size == 2, "unexpected sizes");
    o.require(last.title >= first.title, "title at k=20 below k=2");
    o.require(last.body >= first.body, "body at k=20 below k=2");
    for (const auto& r : curve) {
        if (r.train_size < 10) continue;
        o.require(r.average.title >= 0.95, "title below 95% at k=" + std::to_string(r.train_size));
        o.require(r.average.body >= 0.93, "body below 93% at k=" + std::to_string(r.train_size));
    }
}

bool contains(const std::vector<NodeId>& v, NodeId id)
{
    return std::find(v.begin(), v.end(), id) != v.end();
}

void candidate_recall(const Corpus& synthetic, const Corpus& fixtures, Outcome& o)
{
    std::size_t labels = 0, missed = 0;
    for (const Corpus* corpus : {&synthetic, &fixtures}) {
        for (const auto& page : corpus->pages) {
            const auto tree = parse_html(page.html);
            const auto titles = title_candidates(tree).nodes;
            const auto bodies = body_candidates(tree).nodes;
            for (const auto& p : page.title_paths) {
                ++labels;
                if (!contains(titles, node_at_path(tree, p))) ++missed;
            }
            for (const auto& p : page.body_paths) {
                ++labels;
                if (!contains(bodies, node_at_path(tree, p))) ++missed;
            }
        }
    }
    o.detail << labels - missed << "/" << labels << " labels are candidates";
    o.require(missed == 0, "labels outside the candidate sets");
}

bool nested(const std::vector<ExtractedBlock>& blocks)
{
    for (const auto& a : blocks) {
        for (const auto& b : blocks) {
            const auto& pa = a.path.indices;
            const auto& pb = b.path.indices;
            if (pa.size() < pb.size() && std::equal(pa.begin(), pa.end(), pb.begin())) return true;
        }
    }
    return false;
}

void pipeline_invariants(const std::vector<PreparedLabeledPage>& pages, const Corpus& corpus, const Corpus& fixtures,
                         Outcome& o)
{
    // Pooled model over 40 pages per site, as in the multi-site setting.
    std::vector<std::vector<const PreparedLabeledPage*>> by_site(corpus.sites.size());
    for (const auto& p : pages) by_site[p.site].push_back(&p);
    std::vector<const PreparedLabeledPage*> train;
    for (const auto& site : by_site) train.insert(train.end(), site.begin(), site.begin() + 40);
    ExperimentOptions options;
    const auto a = train_extractor(train, options, 99);
    const auto b = train_extractor(train, options, 99);
    o.require(save_model(a.title_model) == save_model(b.title_model), "title model bytes differ");
    o.require(save_model(a.body_model) == save_model(b.body_model), "body model bytes differ");

    std::size_t checked = 0, with_nesting = 0, nondeterministic = 0;
    for (const auto& p : pages) {
        const auto& url = corpus.pages[p.source_index].url;
        const auto r = extract_prepared(p.page, a.title_model, a.body_model, url);
        ++checked;
        if (nested(r.titles) || nested(r.bodies)) ++with_nesting;
        if (p.source_index % 50 == 0) {
            PageInput in;
            in.html = corpus.pages[p.source_index].html;
            in.url = url;
            const auto again = to_json(extract(in, b.title_model, b.body_model));
            if (again != to_json(r) || again != to_json(extract(in, a.title_model, a.body_model))) {
                ++nondeterministic;
            }
        }
    }
    for (const auto& page : fixtures.pages) {
        PageInput in;
        in.html = page.html;
        in.url = page.url;
        in.sidecar = page.sidecar;
        const auto r = extract(in, a.title_model, a.body_model);
        ++checked;
        if (nested(r.titles) || nested(r.bodies)) ++with_nesting;
        if (to_json(r) != to_json(extract(in, a.title_model, a.body_model))) ++nondeterministic;
    }
    o.detail << checked << " pages, " << with_nesting << " with nested output, " << nondeterministic
             << " nondeterministic";
    o.require(with_nesting == 0, "nested output");
    o.require(nondeterministic == 0, "output differs between runs");
}

}  // namespace

int main()
{
    std::printf("generating synthetic corpus (9 templates x 250 pages, seed 7)\n");
    std::fflush(stdout);
    const Corpus corpus = generate_synthetic_corpus(7, 9, 250);
    const auto pages = prepare_corpus(corpus);
    const Corpus fixtures = load_corpus(std::string(BLOGEXT_FIXTURE_DIR) + "/manifest.json");

    criterion("svm-oracle-equivalence", svm_oracle);
    criterion("standardization", [&](Outcome& o) { standardization(pages, o); });
    criterion("center-normalization", normalization);
    criterion("candidate-recall", [&](Outcome& o) { candidate_recall(corpus, fixtures, o); });
    criterion("pipeline-invariants", [&](Outcome& o) { pipeline_invariants(pages, corpus, fixtures, o); });
    criterion("single-site-accuracy", [&](Outcome& o) { single_site(pages, corpus, o); });
    criterion("multi-site-accuracy", [&](Outcome& o) { multi_site(pages, corpus, o); });
    criterion("learning-curve", [&](Outcome& o) { learning_curve(pages, corpus, o); });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
