#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blogext/dom.hpp"
#include "blogext/pipeline.hpp"
#include "blogext/svm.hpp"

namespace blogext {

struct LabeledPage {
    std::string html_path;  // relative to the corpus root
    std::optional<std::string> sidecar_path;
    std::string url;
    std::string site_id;
    std::vector<NodePath> title_paths;
    std::vector<NodePath> body_paths;
    std::string html;  // page bytes
    std::optional<std::string> sidecar;  // sidecar bytes

    bool operator==(const LabeledPage&) const = default;
};

enum class LabelKind { title, body };

// A title label that named a pruned node and was moved to the candidate
// standing for it.
struct LabelRemap {
    std::size_t page = 0;
    NodePath from;
    NodePath to;

    bool operator==(const LabelRemap&) const = default;
};

struct Corpus {
    std::vector<LabeledPage> pages;
    std::vector<std::string> sites;  // sorted, unique
    std::vector<LabelRemap> remaps;

    bool operator==(const Corpus&) const = default;
};

// Rebuilds `sites` from the pages.
void index_sites(Corpus& corpus);

// Reads a JSON manifest {"version":1,"pages":[{html, sidecar?, url, site,
// titles:[path...], bodies:[path...]}]}; file paths are relative to the
// manifest. Title labels are remapped onto their candidates. Throws
// MissingFile, UnresolvedLabel, SchemaError.
Corpus load_corpus(const std::filesystem::path& manifest);
std::string manifest_json(const Corpus& corpus);
// Writes every page and `manifest.json` under `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Validates the labels of page `index` against its own tree, remapping
// title labels in place. Throws UnresolvedLabel.
void resolve_labels(Corpus& corpus, std::size_t index);

PageInput page_input(const LabeledPage& page, const Viewport& viewport = {});

// Deterministic synthetic blog corpus: each site follows its own template
// and every page interleaves posts with navigation, sidebar and ad noise.
// Labels are candidate nodes of the generated pages.
Corpus generate_synthetic_corpus(std::uint64_t seed, std::size_t n_sites, std::size_t pages_per_site,
                                 std::pair<int, int> posts_per_page = {3, 7});

// Exact set match after mapping labels and predictions to canonical nodes.
bool page_correct(const ExtractionResult& result, const LabeledPage& page, LabelKind kind);

// A corpus page parsed and featurized once, with labels as canonical nodes.
struct PreparedLabeledPage {
    PreparedPage page;
    std::size_t source_index = 0;
    std::size_t site = 0;  // index into Corpus::sites
    std::vector<NodeId> titles;  // sorted
    std::vector<NodeId> bodies;  // sorted, canonical body nodes
};

std::vector<PreparedLabeledPage> prepare_corpus(const Corpus& corpus, const Viewport& viewport = {});

struct PageScore {
    bool title = false;
    bool body = false;
    bool joint() const noexcept { return title && body; }
};

PageScore score_page(const PreparedLabeledPage& page, const ExtractionResult& result);

struct ExperimentOptions {
    std::uint64_t seed = 7;
    int runs = 5;
    // Fixed hyperparameters; unset ones are chosen on a validation split.
    std::optional<double> c;
    std::optional<double> gamma;
    bool fixed_auto_gamma = false;  // search only the automatic gamma
    double validation_fraction = 0.2;
    // Hyperparameters are scored on up to validation_folds disjoint blocks of
    // validation_fraction each, stopping once validation_min_pages are covered.
    int validation_folds = 5;
    std::size_t validation_min_pages = 40;
    int max_passes = 200;
};

struct HyperParams {
    double c = 1.0;
    std::optional<double> gamma;  // nullopt = automatic

    bool operator==(const HyperParams&) const = default;
};

// Grid searched when no value is fixed: c in {0.1, 1, 10}, gamma in
// {auto, 0.1, 1}; the default (1, auto) comes first and wins ties.
std::vector<HyperParams> hyper_grid(const ExperimentOptions& options);

struct TrainedExtractor {
    SvmModel title_model;
    SvmModel body_model;
    HyperParams title_params;
    HyperParams body_params;
    double validation_title_acc = 0;
    double validation_body_acc = 0;
    std::size_t validation_pages = 0;
};

// Trains both stages. The body stage sees title relations computed from the
// labeled titles. Throws InsufficientPages, SingleClassInput.
TrainedExtractor train_extractor(const std::vector<const PreparedLabeledPage*>& pages,
                                 const ExperimentOptions& options, std::uint64_t seed);

struct SiteAccuracy {
    double title = 0;
    double body = 0;
    double joint = 0;
    std::size_t test_pages = 0;  // per run

    bool operator==(const SiteAccuracy&) const = default;
};

struct ModelChoice {
    int run = 0;
    std::string scope;  // site id or "pooled"
    HyperParams title;
    HyperParams body;

    bool operator==(const ModelChoice&) const = default;
};

struct ExperimentReport {
    std::string experiment;
    std::size_t train_size = 0;  // pages per site, or in total for generalization
    std::map<std::string, SiteAccuracy> per_site;
    SiteAccuracy average;  // unweighted mean over sites
    std::uint64_t seed = 0;
    int runs = 0;
    std::vector<ModelChoice> choices;

    bool operator==(const ExperimentReport&) const = default;
};

// Per-site training with k pages, tested on the rest of that site.
std::vector<ExperimentReport> run_single_site_experiment(const Corpus& corpus, const std::vector<std::size_t>& sizes,
                                                         const ExperimentOptions& options);
std::vector<ExperimentReport> run_single_site_experiment(const std::vector<PreparedLabeledPage>& pages,
                                                         const std::vector<std::string>& sites,
                                                         const std::vector<std::size_t>& sizes,
                                                         const ExperimentOptions& options);

// Pooled training on `per_site_train` pages of every site, tested per site.
ExperimentReport run_multi_site_experiment(const Corpus& corpus, std::size_t per_site_train,
                                           const ExperimentOptions& options);
ExperimentReport run_multi_site_experiment(const std::vector<PreparedLabeledPage>& pages,
                                           const std::vector<std::string>& sites, std::size_t per_site_train,
                                           const ExperimentOptions& options);

std::vector<ExperimentReport> run_learning_curve(const Corpus& corpus, const std::vector<std::size_t>& sizes,
                                                 const ExperimentOptions& options);
std::vector<ExperimentReport> run_learning_curve(const std::vector<PreparedLabeledPage>& pages,
                                                 const std::vector<std::string>& sites,
                                                 const std::vector<std::size_t>& sizes,
                                                 const ExperimentOptions& options);

// `n_train` pages drawn from the whole corpus, tested on the rest.
ExperimentReport run_generalization_experiment(const Corpus& corpus, std::size_t n_train,
                                               const ExperimentOptions& options);
ExperimentReport run_generalization_experiment(const std::vector<PreparedLabeledPage>& pages,
                                               const std::vector<std::string>& sites, std::size_t n_train,
                                               const ExperimentOptions& options);

// "a..b:s" or a comma list ("10,20,40").
std::vector<std::size_t> parse_sizes(std::string_view text);

std::string format_table(const std::vector<ExperimentReport>& reports);
std::string format_curve(const std::vector<ExperimentReport>& reports);
std::string reports_json(const std::vector<ExperimentReport>& reports);

}  // namespace blogext
