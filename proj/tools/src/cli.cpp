#include "blogext/cli.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "blogext/corpus.hpp"
#include "blogext/error.hpp"
#include "blogext/pipeline.hpp"
#include "blogext/svm.hpp"

namespace blogext::cli {

namespace fs = std::filesystem;

namespace {

// Raised for bad flags or unusable configuration; maps to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const fs::path& path, const std::string& bytes)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
    }
}

struct Common {
    std::string viewport = "1280x1024";
    std::uint64_t seed = 7;
    std::optional<double> c;
    std::string gamma = "grid";
    int runs = 5;
    std::string out;

    Viewport parsed_viewport() const
    {
        try {
            return parse_viewport(viewport);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }

    ExperimentOptions options() const
    {
        ExperimentOptions o;
        o.seed = seed;
        o.runs = runs;
        if (runs < 1) {
            throw UsageError("--runs must be at least 1");
        }
        if (c) {
            if (!(*c > 0)) throw UsageError("--c must be positive");
            o.c = c;
        }
        o.fixed_auto_gamma = gamma == "auto";
        if (gamma != "auto" && gamma != "grid") {
            double g = 0;
            try {
                g = std::stod(gamma);
            } catch (const std::exception&) {
                throw UsageError("--gamma must be 'auto', 'grid' or a positive number");
            }
            if (!(g > 0)) throw UsageError("--gamma must be positive");
            o.gamma = g;
        }
        return o;
    }
};

void add_viewport(CLI::App& cmd, Common& c)
{
    cmd.add_option("--viewport", c.viewport, "Viewport as WxH")->capture_default_str();
}

void add_training_flags(CLI::App& cmd, Common& c)
{
    add_viewport(cmd, c);
    cmd.add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd.add_option("--c", c.c, "Fix the SVM box constraint instead of searching the grid");
    cmd.add_option("--gamma", c.gamma, "RBF gamma: a number, 'auto' (1 / (dims * variance)) or 'grid' to search")
        ->capture_default_str();
}

std::string format_pct(double v)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << 100 * v << "%";
    return s.str();
}

std::vector<const PreparedLabeledPage*> all_pages(const std::vector<PreparedLabeledPage>& pages)
{
    std::vector<const PreparedLabeledPage*> out;
    for (const auto& p : pages) out.push_back(&p);
    return out;
}

int cmd_train(const std::string& manifest, const Common& common, std::string title_out, std::string body_out,
              std::ostream& out)
{
    const auto viewport = common.parsed_viewport();
    auto options = common.options();
    if (title_out.empty()) title_out = (fs::path(common.out.empty() ? "." : common.out) / "title.model").string();
    if (body_out.empty()) body_out = (fs::path(common.out.empty() ? "." : common.out) / "body.model").string();

    const Corpus corpus = load_corpus(manifest);
    for (const auto& r : corpus.remaps) {
        out << "label remap: " << corpus.pages[r.page].html_path << " " << r.from.to_string() << " -> "
            << r.to.to_string() << "\n";
    }
    const auto pages = prepare_corpus(corpus, viewport);
    const auto trained = train_extractor(all_pages(pages), options, options.seed);
    write_file(title_out, save_model(trained.title_model));
    write_file(body_out, save_model(trained.body_model));
    out << "trained on " << pages.size() << " pages\n";
    if (trained.validation_pages > 0) {
        out << "validation (" << trained.validation_pages << " pages): title " << format_pct(trained.validation_title_acc)
            << ", body " << format_pct(trained.validation_body_acc) << "\n";
    }
    out << "title model: " << title_out << " (" << trained.title_model.dual_coefs.size() << " support vectors)\n";
    out << "body model: " << body_out << " (" << trained.body_model.dual_coefs.size() << " support vectors)\n";
    return ok;
}

std::vector<fs::path> collect_inputs(const std::vector<std::string>& inputs)
{
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p)) {
                const auto ext = e.path().extension();
                if (e.is_regular_file() && (ext == ".html" || ext == ".htm")) {
                    found.push_back(e.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

SvmModel load_model_file(const std::string& path)
{
    try {
        return load_model(read_file(path));
    } catch (const Error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

int cmd_extract(const std::vector<std::string>& inputs, const std::string& title_path, const std::string& body_path,
                const std::string& geometry, const std::optional<std::string>& url, unsigned jobs,
                const Common& common, std::ostream& out, std::ostream& err)
{
    const auto viewport = common.parsed_viewport();
    if (geometry != "heuristic" && geometry != "sidecar") {
        throw UsageError("--geometry must be 'heuristic' or 'sidecar'");
    }
    const SvmModel title_model = load_model_file(title_path);
    const SvmModel body_model = load_model_file(body_path);
    if (title_model.schema != SchemaId::title_v1 || body_model.schema != SchemaId::body_v1) {
        throw UsageError("model schemas do not match: expected title_v1 and body_v1, got " +
                         std::string(to_string(title_model.schema)) + " and " +
                         std::string(to_string(body_model.schema)));
    }
    if (title_model.viewport != viewport || body_model.viewport != viewport) {
        err << "warning: models were trained at " << title_model.viewport.to_string() << ", extracting at "
            << viewport.to_string() << "\n";
    }

    const auto files = collect_inputs(inputs);
    struct Outcome {
        std::string document;
        std::string error;
    };
    std::vector<Outcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            try {
                PageInput page;
                page.html = read_file(files[i]);
                page.url = url;
                page.viewport = viewport;
                if (geometry == "sidecar") {
                    auto side = files[i];
                    side.replace_extension(".geom");
                    page.sidecar = read_file(side);
                }
                outcomes[i].document = to_json(extract(page, title_model, body_model));
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(jobs == 0 ? std::thread::hardware_concurrency() : jobs,
                                        static_cast<unsigned>(files.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Results are emitted in input order regardless of completion order.
    int status = ok;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (!outcomes[i].error.empty()) {
            err << files[i].string() << ": " << outcomes[i].error << "\n";
            status = partial_failure;
            continue;
        }
        if (common.out.empty()) {
            out << outcomes[i].document;
        } else {
            write_file(fs::path(common.out) / (files[i].stem().string() + ".json"), outcomes[i].document);
        }
    }
    return status;
}

std::vector<std::size_t> sizes_flag(const std::string& text)
{
    try {
        return parse_sizes(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

int cmd_evaluate(const std::string& manifest, const std::string& experiment, const std::string& sizes_text,
                 std::size_t per_site, std::size_t n_train, const Common& common, std::ostream& out)
{
    const auto viewport = common.parsed_viewport();
    const auto options = common.options();
    const auto sizes = sizes_flag(sizes_text);
    const bool all = experiment == "all";
    if (!all && experiment != "single" && experiment != "multi" && experiment != "generalization") {
        throw UsageError("--experiment must be single, multi, generalization or all");
    }
    const Corpus corpus = load_corpus(manifest);
    const auto pages = prepare_corpus(corpus, viewport);
    std::vector<ExperimentReport> reports;
    if (all || experiment == "single") {
        auto r = run_single_site_experiment(pages, corpus.sites, sizes, options);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (all || experiment == "multi") {
        reports.push_back(run_multi_site_experiment(pages, corpus.sites, per_site, options));
    }
    if (all || experiment == "generalization") {
        reports.push_back(run_generalization_experiment(pages, corpus.sites, n_train, options));
    }
    out << format_table(reports);
    if (!common.out.empty()) {
        write_file(common.out, reports_json(reports));
    }
    return ok;
}

int cmd_curve(const std::string& manifest, const std::string& sizes_text, const Common& common, std::ostream& out)
{
    const auto viewport = common.parsed_viewport();
    const auto options = common.options();
    const auto sizes = sizes_flag(sizes_text);
    const Corpus corpus = load_corpus(manifest);
    const auto reports = sizes.empty() ? std::vector<ExperimentReport>{}
                                       : run_learning_curve(prepare_corpus(corpus, viewport), corpus.sites, sizes,
                                                            options);
    out << format_curve(reports);
    if (!common.out.empty()) {
        write_file(common.out, reports_json(reports));
    }
    return ok;
}

int cmd_gen_corpus(std::uint64_t seed, std::size_t sites, std::size_t pages, const std::string& posts,
                   const std::string& dir, std::ostream& out)
{
    const auto range = sizes_flag(posts);
    if (range.empty() || range.front() < 1) {
        throw UsageError("--posts must be a range such as 3..7");
    }
    if (sites < 1) {
        throw UsageError("--sites must be at least 1");
    }
    const auto corpus = generate_synthetic_corpus(
        seed, sites, pages, {static_cast<int>(range.front()), static_cast<int>(range.back())});
    write_corpus(corpus, dir);
    out << "wrote " << corpus.pages.size() << " pages from " << corpus.sites.size() << " sites to " << dir << "\n";
    return ok;
}

bool is_config_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::InvalidArgument:
    case ErrorCode::SchemaError:
    case ErrorCode::CorruptModel:
    case ErrorCode::UnknownVersion:
        return true;
    default:
        return false;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Template-independent blog title and body extraction"};
    app.name(args.empty() ? "blogext" : fs::path(args.front()).filename().string());
    app.require_subcommand(1);

    Common common;

    auto* train = app.add_subcommand("train", "Train title and body models from a labeled corpus manifest");
    std::string train_manifest;
    std::string title_model_out;
    std::string body_model_out;
    train->add_option("manifest", train_manifest, "Corpus manifest (JSON)")->required();
    train->add_option("--out", common.out, "Directory for title.model and body.model");
    train->add_option("--title-model", title_model_out, "Title model output path (overrides --out)");
    train->add_option("--body-model", body_model_out, "Body model output path (overrides --out)");
    add_training_flags(*train, common);

    auto* extract = app.add_subcommand("extract", "Extract titles and bodies from HTML files or directories");
    std::vector<std::string> inputs;
    std::string title_model_in;
    std::string body_model_in;
    std::string geometry = "heuristic";
    std::optional<std::string> url;
    unsigned jobs = 0;
    extract->add_option("inputs", inputs, "HTML files or directories")->required();
    extract->add_option("--title-model", title_model_in, "Title model")->required();
    extract->add_option("--body-model", body_model_in, "Body model")->required();
    extract->add_option("--geometry", geometry, "heuristic, or sidecar (<page>.geom next to each page)")
        ->capture_default_str();
    extract->add_option("--url", url, "Page URL used to tell internal from external links");
    extract->add_option("--out", common.out, "Output directory (one <page>.json per input); stdout if omitted");
    extract->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    add_viewport(*extract, common);

    auto* evaluate = app.add_subcommand("evaluate", "Run the accuracy experiments on a labeled corpus");
    std::string eval_manifest;
    std::string experiment = "all";
    std::string sizes = "10,20,30,40";
    std::size_t per_site = 40;
    std::size_t n_train = 100;
    evaluate->add_option("manifest", eval_manifest, "Corpus manifest (JSON)")->required();
    evaluate->add_option("--experiment", experiment, "single, multi, generalization or all")->capture_default_str();
    evaluate->add_option("--sizes", sizes, "Single-site training sizes")->capture_default_str();
    evaluate->add_option("--per-site", per_site, "Multi-site training pages per site")->capture_default_str();
    evaluate->add_option("--n-train", n_train, "Generalization training pages")->capture_default_str();
    evaluate->add_option("--runs", common.runs, "Repetitions averaged per report")->capture_default_str();
    evaluate->add_option("--out", common.out, "Write the reports as JSON to this path");
    add_training_flags(*evaluate, common);

    auto* curve = app.add_subcommand("curve", "Learning curve over pooled per-site training sizes");
    std::string curve_manifest;
    std::string curve_sizes = "2..20:2";
    curve->add_option("manifest", curve_manifest, "Corpus manifest (JSON)")->required();
    curve->add_option("--sizes", curve_sizes, "Sizes as a..b:step or a comma list")->capture_default_str();
    curve->add_option("--runs", common.runs, "Repetitions averaged per point")->capture_default_str();
    curve->add_option("--out", common.out, "Write the reports as JSON to this path");
    add_training_flags(*curve, common);

    auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic labeled blog corpus");
    std::size_t n_sites = 9;
    std::size_t n_pages = 250;
    std::string posts = "3..7";
    gen->add_option("--out", common.out, "Output directory")->required();
    gen->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    gen->add_option("--sites", n_sites, "Number of sites (templates)")->capture_default_str();
    gen->add_option("--pages", n_pages, "Pages per site")->capture_default_str();
    gen->add_option("--posts", posts, "Posts per page as min..max")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (train->parsed()) return cmd_train(train_manifest, common, title_model_out, body_model_out, out);
        if (extract->parsed())
            return cmd_extract(inputs, title_model_in, body_model_in, geometry, url, jobs, common, out, err);
        if (evaluate->parsed()) return cmd_evaluate(eval_manifest, experiment, sizes, per_site, n_train, common, out);
        if (curve->parsed()) return cmd_curve(curve_manifest, curve_sizes, common, out);
        if (gen->parsed()) return cmd_gen_corpus(common.seed, n_sites, n_pages, posts, common.out, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return is_config_error(e.code()) ? usage_error : partial_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return partial_failure;
    }
    return usage_error;
}

}  // namespace blogext::cli
