#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "blogext/corpus.hpp"
#include "blogext/error.hpp"
#include "rng.hpp"

namespace blogext {

namespace {

using detail::Rng;
using detail::mix_seed;
using PagePtrs = std::vector<const PreparedLabeledPage*>;

struct Rows {
    Matrix x;
    std::vector<int> y;
};

bool contains(const std::vector<NodeId>& sorted, NodeId id)
{
    return std::binary_search(sorted.begin(), sorted.end(), id);
}

Rows title_training_rows(const PagePtrs& pages)
{
    Rows rows;
    for (const auto* p : pages) {
        const auto& page = p->page;
        for (std::size_t i = 0; i < page.title_nodes.size(); ++i) {
            rows.x.append_row(page.title_rows[i].values());
            rows.y.push_back(contains(p->titles, page.title_nodes[i]) ? 1 : -1);
        }
    }
    return rows;
}

Rows body_training_rows(const PagePtrs& pages)
{
    Rows rows;
    for (const auto* p : pages) {
        const auto& page = p->page;
        const auto features = body_rows_for(page, title_blocks(page, p->titles));
        for (std::size_t i = 0; i < page.body_nodes.size(); ++i) {
            const NodeId id = page.body_nodes[i];
            const NodeId canonical = canonical_body_node(page.tree, page.text, id);
            const bool positive = contains(p->bodies, canonical);
            // Pieces of a labeled body are neither body nor noise; extraction
            // folds them into the enclosing body, so they are left out.
            if (!positive && std::any_of(p->bodies.begin(), p->bodies.end(),
                                         [&](NodeId b) { return page.tree.is_ancestor(b, id); })) {
                continue;
            }
            rows.x.append_row(features[i].values());
            rows.y.push_back(positive ? 1 : -1);
        }
    }
    return rows;
}

std::vector<NodeId> predict_titles(const PreparedPage& page, const SvmModel& model)
{
    std::vector<NodeId> positives;
    for (std::size_t i = 0; i < page.title_nodes.size(); ++i) {
        if (classify(model, page.title_rows[i].values())) {
            positives.push_back(page.title_nodes[i]);
        }
    }
    auto kept = resolve_title_overlaps(page.tree, std::move(positives));
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<NodeId> predict_bodies(const PreparedPage& page, const SvmModel& model, const std::vector<NodeId>& titles)
{
    const auto features = body_rows_for(page, title_blocks(page, titles));
    std::vector<NodeId> positives;
    for (std::size_t i = 0; i < page.body_nodes.size(); ++i) {
        if (classify(model, features[i].values())) {
            positives.push_back(page.body_nodes[i]);
        }
    }
    std::vector<NodeId> out;
    for (NodeId id : resolve_body_overlaps(page.tree, std::move(positives))) {
        out.push_back(canonical_body_node(page.tree, page.text, id));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TrainConfig config_for(const HyperParams& params, const ExperimentOptions& options, std::uint64_t seed)
{
    TrainConfig cfg;
    cfg.c = params.c;
    cfg.gamma = params.gamma;
    cfg.max_passes = options.max_passes;
    cfg.rng_seed = seed;
    return cfg;
}

// Class-balanced mean hinge loss of `model` on `rows`.
double balanced_hinge(const SvmModel& model, const Rows& rows)
{
    double loss[2] = {0, 0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < rows.y.size(); ++i) {
        const int k = rows.y[i] > 0 ? 1 : 0;
        loss[k] += std::max(0.0, 1.0 - rows.y[i] * decision_value(model, rows.x.row(i)));
        ++count[k];
    }
    double total = 0;
    for (int k = 0; k < 2; ++k) {
        if (count[k] > 0) total += loss[k] / static_cast<double>(count[k]);
    }
    return total;
}

// One train/validation partition of the training pages.
struct Fold {
    PagePtrs fit;
    PagePtrs val;
    Rows fit_rows;
    Rows val_rows;
};

// Picks the grid entry with the most correct validation pages summed over the
// folds; ties go to the lower balanced hinge loss on the validation
// candidates, then to the earlier entry. `correct(model, val)` counts the
// correctly extracted pages of `val`.
template <typename Correct>
std::pair<HyperParams, double> select(const std::vector<HyperParams>& grid, const std::vector<Fold>& folds,
                                      SchemaId schema, const ExperimentOptions& options, std::uint64_t seed,
                                      Correct correct)
{
    std::size_t val_pages = 0;
    for (const auto& f : folds) val_pages += f.val.size();
    HyperParams best = grid.front();
    double best_acc = -1;
    double best_loss = 0;
    for (const auto& params : grid) {
        std::size_t ok = 0;
        double loss = 0;
        bool trained = true;
        for (const auto& f : folds) {
            SvmModel model;
            try {
                model = train(f.fit_rows.x, f.fit_rows.y, config_for(params, options, seed), schema, Viewport{});
            } catch (const Error& e) {
                if (e.code() == ErrorCode::SingleClassInput || e.code() == ErrorCode::DegenerateData) {
                    trained = false;
                    break;
                }
                throw;
            }
            ok += correct(model, f.val);
            loss += balanced_hinge(model, f.val_rows);
        }
        if (!trained) {
            continue;
        }
        const double acc = static_cast<double>(ok) / static_cast<double>(val_pages);
        if (acc > best_acc || (acc == best_acc && loss < best_loss)) {
            best_acc = acc;
            best_loss = loss;
            best = params;
        }
    }
    return {best, std::max(best_acc, 0.0)};
}

void check_runs(const ExperimentOptions& options)
{
    if (options.runs < 1) {
        throw Error(ErrorCode::InvalidArgument, "runs must be at least 1");
    }
    if (!(options.validation_fraction >= 0 && options.validation_fraction < 1)) {
        throw Error(ErrorCode::InvalidArgument, "validation fraction must be in [0, 1)");
    }
}

std::vector<std::vector<const PreparedLabeledPage*>> by_site(const std::vector<PreparedLabeledPage>& pages,
                                                             std::size_t n_sites)
{
    std::vector<std::vector<const PreparedLabeledPage*>> out(n_sites);
    for (const auto& p : pages) {
        if (p.site >= n_sites) {
            throw Error(ErrorCode::InvalidArgument, "page site index out of range");
        }
        out[p.site].push_back(&p);
    }
    return out;
}

void assert_disjoint(const PagePtrs& train, const PagePtrs& test)
{
    std::set<const PreparedLabeledPage*> seen(train.begin(), train.end());
    for (const auto* p : test) {
        if (seen.count(p)) {
            throw std::logic_error("train and test sets overlap");
        }
    }
}

struct Tally {
    std::size_t title = 0;
    std::size_t body = 0;
    std::size_t joint = 0;
    std::size_t pages = 0;

    void add(PageScore s)
    {
        title += s.title;
        body += s.body;
        joint += s.joint();
        ++pages;
    }
};

Tally test_pages(const PagePtrs& test, const TrainedExtractor& model)
{
    Tally t;
    for (const auto* p : test) {
        const auto result = extract_prepared(p->page, model.title_model, model.body_model);
        t.add(score_page(*p, result));
    }
    return t;
}

// Accumulates per-site accuracies over runs.
class ReportBuilder {
public:
    ReportBuilder(std::string experiment, std::size_t train_size, const std::vector<std::string>& sites,
                  const ExperimentOptions& options)
        : sums_(sites.size()), sites_(sites)
    {
        report_.experiment = std::move(experiment);
        report_.train_size = train_size;
        report_.seed = options.seed;
        report_.runs = options.runs;
    }

    void add(std::size_t site, const Tally& t)
    {
        if (t.pages == 0) {
            return;
        }
        auto& s = sums_[site];
        const auto n = static_cast<double>(t.pages);
        s.title += static_cast<double>(t.title) / n;
        s.body += static_cast<double>(t.body) / n;
        s.joint += static_cast<double>(t.joint) / n;
        s.test_pages = t.pages;
        ++counts_[site];
    }

    void choose(ModelChoice choice) { report_.choices.push_back(std::move(choice)); }

    ExperimentReport finish()
    {
        double n = 0;
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            if (counts_[i] == 0) {
                continue;
            }
            const double runs = counts_[i];
            SiteAccuracy a{sums_[i].title / runs, sums_[i].body / runs, sums_[i].joint / runs, sums_[i].test_pages};
            report_.per_site[sites_[i]] = a;
            report_.average.title += a.title;
            report_.average.body += a.body;
            report_.average.joint += a.joint;
            report_.average.test_pages += a.test_pages;
            n += 1;
        }
        if (n > 0) {
            report_.average.title /= n;
            report_.average.body /= n;
            report_.average.joint /= n;
        }
        return std::move(report_);
    }

private:
    ExperimentReport report_;
    std::vector<SiteAccuracy> sums_;
    std::map<std::size_t, int> counts_;
    const std::vector<std::string>& sites_;
};

ModelChoice choice_of(int run, std::string scope, const TrainedExtractor& m)
{
    return {run, std::move(scope), m.title_params, m.body_params};
}

}  // namespace

std::vector<HyperParams> hyper_grid(const ExperimentOptions& options)
{
    const std::vector<double> cs = options.c ? std::vector<double>{*options.c} : std::vector<double>{1.0, 0.1, 10.0};
    std::vector<std::optional<double>> gammas{std::nullopt, 0.1, 1.0};
    if (options.gamma) {
        gammas = {*options.gamma};
    } else if (options.fixed_auto_gamma) {
        gammas = {std::nullopt};
    }
    std::vector<HyperParams> grid;
    for (double c : cs) {
        for (const auto& g : gammas) {
            grid.push_back({c, g});
        }
    }
    return grid;
}

TrainedExtractor train_extractor(const PagePtrs& pages, const ExperimentOptions& options, std::uint64_t seed)
{
    if (pages.size() < 2) {
        throw Error(ErrorCode::InsufficientPages, "training needs at least two pages");
    }
    const auto grid = hyper_grid(options);
    TrainedExtractor out;
    out.title_params = grid.front();
    out.body_params = grid.front();

    const auto n_val = static_cast<std::size_t>(std::lround(options.validation_fraction * pages.size()));
    if (grid.size() > 1 && n_val >= 1 && pages.size() - n_val >= 2) {
        PagePtrs shuffled = pages;
        Rng rng(mix_seed(seed, 0x5e1));
        rng.shuffle(shuffled);
        // Disjoint validation blocks of n_val pages; extra blocks only until
        // validation_min_pages pages are scored in total.
        const std::size_t wanted = (options.validation_min_pages + n_val - 1) / n_val;
        const std::size_t cap = std::min(static_cast<std::size_t>(std::max(options.validation_folds, 1)),
                                         shuffled.size() / n_val);
        const auto n_folds = std::clamp<std::size_t>(wanted, 1, std::max<std::size_t>(cap, 1));
        std::vector<Fold> title_folds(n_folds);
        std::vector<Fold> body_folds(n_folds);
        for (std::size_t f = 0; f < n_folds; ++f) {
            Fold fold;
            for (std::size_t i = 0; i < shuffled.size(); ++i) {
                (i / n_val == f ? fold.val : fold.fit).push_back(shuffled[i]);
            }
            assert_disjoint(fold.fit, fold.val);
            body_folds[f] = fold;
            fold.fit_rows = title_training_rows(fold.fit);
            fold.val_rows = title_training_rows(fold.val);
            title_folds[f] = std::move(fold);
            body_folds[f].fit_rows = body_training_rows(body_folds[f].fit);
            body_folds[f].val_rows = body_training_rows(body_folds[f].val);
        }
        out.validation_pages = n_val;

        std::tie(out.title_params, out.validation_title_acc) =
            select(grid, title_folds, SchemaId::title_v1, options, seed, [](const SvmModel& m, const PagePtrs& val) {
                std::size_t ok = 0;
                for (const auto* p : val) ok += predict_titles(p->page, m) == p->titles;
                return ok;
            });
        std::tie(out.body_params, out.validation_body_acc) =
            select(grid, body_folds, SchemaId::body_v1, options, seed, [](const SvmModel& m, const PagePtrs& val) {
                std::size_t ok = 0;
                for (const auto* p : val) ok += predict_bodies(p->page, m, p->titles) == p->bodies;
                return ok;
            });
    }

    const Viewport viewport = pages.front()->page.viewport;
    const Rows titles = title_training_rows(pages);
    out.title_model = train(titles.x, titles.y, config_for(out.title_params, options, seed), SchemaId::title_v1,
                            viewport);
    const Rows bodies = body_training_rows(pages);
    out.body_model = train(bodies.x, bodies.y, config_for(out.body_params, options, seed), SchemaId::body_v1,
                           viewport);
    return out;
}

std::vector<ExperimentReport> run_single_site_experiment(const std::vector<PreparedLabeledPage>& pages,
                                                         const std::vector<std::string>& sites,
                                                         const std::vector<std::size_t>& sizes,
                                                         const ExperimentOptions& options)
{
    check_runs(options);
    const auto grouped = by_site(pages, sites.size());
    if (!sizes.empty()) {
        const auto k_max = *std::max_element(sizes.begin(), sizes.end());
        for (std::size_t s = 0; s < sites.size(); ++s) {
            if (grouped[s].size() <= k_max) {
                throw Error(ErrorCode::InsufficientPages, "site " + sites[s] + " has " +
                                                              std::to_string(grouped[s].size()) +
                                                              " pages, training needs more than " +
                                                              std::to_string(k_max));
            }
        }
    }
    std::vector<ExperimentReport> reports;
    for (std::size_t k : sizes) {
        ReportBuilder builder("single-site", k, sites, options);
        for (int run = 0; run < options.runs; ++run) {
            for (std::size_t s = 0; s < sites.size(); ++s) {
                PagePtrs order = grouped[s];
                Rng rng(mix_seed(options.seed, k, static_cast<std::uint64_t>(run), s));
                rng.shuffle(order);
                const PagePtrs train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
                const PagePtrs test(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
                assert_disjoint(train, test);
                const auto model =
                    train_extractor(train, options,
                                    mix_seed(options.seed, 1000 + k, static_cast<std::uint64_t>(run), s));
                builder.choose(choice_of(run, sites[s], model));
                builder.add(s, test_pages(test, model));
            }
        }
        reports.push_back(builder.finish());
    }
    return reports;
}

ExperimentReport run_multi_site_experiment(const std::vector<PreparedLabeledPage>& pages,
                                           const std::vector<std::string>& sites, std::size_t per_site_train,
                                           const ExperimentOptions& options)
{
    check_runs(options);
    const auto grouped = by_site(pages, sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) {
        if (grouped[s].size() <= per_site_train) {
            throw Error(ErrorCode::InsufficientPages, "site " + sites[s] + " has " + std::to_string(grouped[s].size()) +
                                                          " pages, training needs more than " +
                                                          std::to_string(per_site_train));
        }
    }
    const std::size_t k = per_site_train;
    ReportBuilder builder("multi-site", k, sites, options);
    for (int run = 0; run < options.runs; ++run) {
        PagePtrs train;
        std::vector<PagePtrs> tests(sites.size());
        for (std::size_t s = 0; s < sites.size(); ++s) {
            PagePtrs order = grouped[s];
            Rng rng(mix_seed(options.seed, k, static_cast<std::uint64_t>(run), s));
            rng.shuffle(order);
            train.insert(train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
            tests[s].assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
        }
        for (const auto& t : tests) {
            assert_disjoint(train, t);
        }
        const auto model =
            train_extractor(train, options, mix_seed(options.seed, 1000 + k, static_cast<std::uint64_t>(run), 0));
        builder.choose(choice_of(run, "pooled", model));
        for (std::size_t s = 0; s < sites.size(); ++s) {
            builder.add(s, test_pages(tests[s], model));
        }
    }
    return builder.finish();
}

std::vector<ExperimentReport> run_learning_curve(const std::vector<PreparedLabeledPage>& pages,
                                                 const std::vector<std::string>& sites,
                                                 const std::vector<std::size_t>& sizes,
                                                 const ExperimentOptions& options)
{
    std::vector<ExperimentReport> out;
    for (std::size_t k : sizes) {
        auto report = run_multi_site_experiment(pages, sites, k, options);
        report.experiment = "learning-curve";
        out.push_back(std::move(report));
    }
    return out;
}

ExperimentReport run_generalization_experiment(const std::vector<PreparedLabeledPage>& pages,
                                               const std::vector<std::string>& sites, std::size_t n_train,
                                               const ExperimentOptions& options)
{
    check_runs(options);
    if (pages.size() <= n_train) {
        throw Error(ErrorCode::InsufficientPages, "corpus has " + std::to_string(pages.size()) +
                                                      " pages, training needs more than " + std::to_string(n_train));
    }
    ReportBuilder builder("generalization", n_train, sites, options);
    PagePtrs all;
    for (const auto& p : pages) all.push_back(&p);
    for (int run = 0; run < options.runs; ++run) {
        PagePtrs order = all;
        Rng rng(mix_seed(options.seed, 0x6e, static_cast<std::uint64_t>(run)));
        rng.shuffle(order);
        const PagePtrs train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        const PagePtrs test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
        assert_disjoint(train, test);
        const auto model =
            train_extractor(train, options, mix_seed(options.seed, 0x6f, static_cast<std::uint64_t>(run)));
        builder.choose(choice_of(run, "pooled", model));
        std::vector<PagePtrs> per_site(sites.size());
        for (const auto* p : test) per_site[p->site].push_back(p);
        for (std::size_t s = 0; s < sites.size(); ++s) {
            builder.add(s, test_pages(per_site[s], model));
        }
    }
    return builder.finish();
}

std::vector<ExperimentReport> run_single_site_experiment(const Corpus& corpus, const std::vector<std::size_t>& sizes,
                                                         const ExperimentOptions& options)
{
    return run_single_site_experiment(prepare_corpus(corpus), corpus.sites, sizes, options);
}

ExperimentReport run_multi_site_experiment(const Corpus& corpus, std::size_t per_site_train,
                                           const ExperimentOptions& options)
{
    return run_multi_site_experiment(prepare_corpus(corpus), corpus.sites, per_site_train, options);
}

std::vector<ExperimentReport> run_learning_curve(const Corpus& corpus, const std::vector<std::size_t>& sizes,
                                                 const ExperimentOptions& options)
{
    if (sizes.empty()) {
        return {};
    }
    return run_learning_curve(prepare_corpus(corpus), corpus.sites, sizes, options);
}

ExperimentReport run_generalization_experiment(const Corpus& corpus, std::size_t n_train,
                                               const ExperimentOptions& options)
{
    return run_generalization_experiment(prepare_corpus(corpus), corpus.sites, n_train, options);
}

std::vector<std::size_t> parse_sizes(std::string_view text)
{
    auto number = [&](std::string_view s) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw Error(ErrorCode::InvalidArgument, "bad size list '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<std::size_t> out;
    if (text.empty()) {
        return out;
    }
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const auto colon = text.find(':', dots);
        const auto lo = number(text.substr(0, dots));
        const auto hi = number(text.substr(dots + 2, colon == std::string_view::npos ? colon : colon - dots - 2));
        const auto step = colon == std::string_view::npos ? 1 : number(text.substr(colon + 1));
        if (step == 0 || hi < lo) {
            throw Error(ErrorCode::InvalidArgument, "bad size range '" + std::string(text) + "'");
        }
        for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        out.push_back(number(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_table(const std::vector<ExperimentReport>& reports)
{
    std::string out;
    char line[160];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%s  k=%zu  seed=%llu  runs=%d\n", r.experiment.c_str(), r.train_size,
                      static_cast<unsigned long long>(r.seed), r.runs);
        out += line;
        std::snprintf(line, sizeof line, "  %-16s %8s %8s %8s %6s\n", "site", "title", "body", "joint", "tested");
        out += line;
        for (const auto& [site, a] : r.per_site) {
            std::snprintf(line, sizeof line, "  %-16s %7.2f%% %7.2f%% %7.2f%% %6zu\n", site.c_str(), 100 * a.title,
                          100 * a.body, 100 * a.joint, a.test_pages);
            out += line;
        }
        std::snprintf(line, sizeof line, "  %-16s %7.2f%% %7.2f%% %7.2f%% %6zu\n\n", "average",
                      100 * r.average.title, 100 * r.average.body, 100 * r.average.joint, r.average.test_pages);
        out += line;
    }
    return out;
}

std::string format_curve(const std::vector<ExperimentReport>& reports)
{
    std::string out = "   k    title     body\n";
    char line[200];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%4zu  %6.2f%%  %6.2f%%  ", r.train_size, 100 * r.average.title,
                      100 * r.average.body);
        out += line;
        // 80% .. 100% mapped onto 40 columns.
        auto bar = [](double acc) {
            return static_cast<int>(std::clamp((acc - 0.8) / 0.2 * 40.0, 0.0, 40.0));
        };
        std::string row(41, ' ');
        row[static_cast<std::size_t>(bar(r.average.body))] = 'b';
        row[static_cast<std::size_t>(bar(r.average.title))] = r.average.title == r.average.body ? '*' : 't';
        out += "|" + row + "\n";
    }
    out += "      (t = title, b = body; axis 80%..100%)\n";
    return out;
}

std::string reports_json(const std::vector<ExperimentReport>& reports)
{
    using json = nlohmann::ordered_json;
    auto acc = [](const SiteAccuracy& a) {
        return json{{"title_acc", a.title}, {"body_acc", a.body}, {"joint_acc", a.joint}, {"test_pages", a.test_pages}};
    };
    auto params = [](const HyperParams& h) {
        return json{{"c", h.c}, {"gamma", h.gamma ? json(*h.gamma) : json("auto")}};
    };
    json arr = json::array();
    for (const auto& r : reports) {
        json per_site = json::object();
        for (const auto& [site, a] : r.per_site) per_site[site] = acc(a);
        json choices = json::array();
        for (const auto& c : r.choices) {
            choices.push_back(json{{"run", c.run}, {"scope", c.scope}, {"title", params(c.title)},
                                   {"body", params(c.body)}});
        }
        arr.push_back(json{{"experiment", r.experiment},
                           {"train_size", r.train_size},
                           {"per_site", per_site},
                           {"averages", acc(r.average)},
                           {"config", json{{"seed", r.seed}, {"runs", r.runs}, {"choices", choices}}}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace blogext
