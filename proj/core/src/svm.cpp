#include "blogext/svm.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numeric>
#include <random>
#include <cstdlib>
#include <unordered_map>

#include "blogext/error.hpp"

namespace blogext {

void Matrix::append_row(std::span<const double> values)
{
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "row has " + std::to_string(values.size()) + " values, matrix has " + std::to_string(cols_));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

std::string_view to_string(SchemaId id) noexcept
{
    switch (id) {
    case SchemaId::title_v1: return "title_v1";
    case SchemaId::body_v1: return "body_v1";
    }
    return "unknown";
}

std::size_t schema_width(SchemaId id) noexcept
{
    return id == SchemaId::title_v1 ? 8 : 9;
}

Standardizer fit_standardizer(const Matrix& rows)
{
    if (rows.rows() < 2) {
        throw Error(ErrorCode::TooFewRows, "standardization needs at least two rows, got " + std::to_string(rows.rows()));
    }
    const auto n = static_cast<double>(rows.rows());
    Standardizer s;
    s.means.assign(rows.cols(), 0.0);
    s.stds.assign(rows.cols(), 0.0);
    s.constant.assign(rows.cols(), 0);
    for (std::size_t c = 0; c < rows.cols(); ++c) {
        double sum = 0;
        for (std::size_t r = 0; r < rows.rows(); ++r) {
            sum += rows(r, c);
        }
        const double mean = sum / n;
        double ss = 0;
        for (std::size_t r = 0; r < rows.rows(); ++r) {
            const double d = rows(r, c) - mean;
            ss += d * d;
        }
        s.means[c] = mean;
        s.stds[c] = std::sqrt(ss / n);
        if (s.stds[c] < 1e-12) {
            s.constant[c] = 1;
        }
    }
    return s;
}

void Standardizer::transform_into(std::span<const double> row, std::span<double> out) const
{
    if (row.size() != dims() || out.size() != dims()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(dims()) + " features, got " + std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
        out[c] = constant[c] ? row[c] : (row[c] - means[c]) / stds[c];
    }
}

std::vector<double> Standardizer::transform(std::span<const double> row) const
{
    std::vector<double> out(row.size());
    transform_into(row, out);
    return out;
}

Matrix Standardizer::transform(const Matrix& rows) const
{
    Matrix out(rows.rows(), rows.cols());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        transform_into(rows.row(r), out.row(r));
    }
    return out;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "kernel arguments have " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " dims");
    }
    double d2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t dims)
{
    double d2 = 0;
    for (std::size_t i = 0; i < dims; ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

// LRU cache of kernel matrix rows.
class KernelCache {
public:
    KernelCache(const Matrix& x, double gamma, std::size_t budget_bytes)
        : x_(x), gamma_(gamma), n_(x.rows())
    {
        capacity_ = std::max<std::size_t>(2, budget_bytes / (sizeof(double) * std::max<std::size_t>(1, n_)));
    }

    const std::vector<double>& row(std::size_t i)
    {
        if (auto it = index_.find(i); it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
        std::vector<double> values;
        if (lru_.size() >= capacity_) {
            values = std::move(lru_.back().second);
            index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        values.resize(n_);
        const auto dims = x_.cols();
        const double* xi = x_.row(i).data();
        const double* base = x_.data().data();
        for (std::size_t k = 0; k < n_; ++k) {
            values[k] = std::exp(-gamma_ * sq_dist(xi, base + k * dims, dims));
        }
        lru_.emplace_front(i, std::move(values));
        index_[i] = lru_.begin();
        return lru_.front().second;
    }

    double at(std::size_t i, std::size_t j)
    {
        if (auto it = index_.find(i); it != index_.end()) {
            return it->second->second[j];
        }
        if (auto it = index_.find(j); it != index_.end()) {
            return it->second->second[i];
        }
        const auto dims = x_.cols();
        return std::exp(-gamma_ * sq_dist(x_.row(i).data(), x_.row(j).data(), dims));
    }

private:
    using Entry = std::pair<std::size_t, std::vector<double>>;
    const Matrix& x_;
    double gamma_;
    std::size_t n_;
    std::size_t capacity_;
    std::list<Entry> lru_;
    std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

class SmoSolver {
public:
    SmoSolver(const Matrix& x, std::span<const int> y, std::vector<double> box, double gamma, const TrainConfig& cfg)
        : x_(x), y_(y), box_(std::move(box)), cfg_(cfg), n_(x.rows()), alpha_(n_, 0.0), error_(n_),
          cache_(x, gamma, std::size_t{256} << 20), rng_(cfg.rng_seed)
    {
        // alpha = 0, b = 0  =>  f = 0, E_i = -y_i
        for (std::size_t i = 0; i < n_; ++i) {
            error_[i] = -y_[i];
        }
    }

    void solve()
    {
        bool examine_all = true;
        std::size_t changed = 0;
        std::size_t bound_sweeps = 0;
        const std::size_t bound_sweep_cap = static_cast<std::size_t>(cfg_.max_passes) * 50;
        while ((changed > 0 || examine_all) && full_passes_ < cfg_.max_passes) {
            changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) {
                    changed += examine(i);
                }
                ++full_passes_;
            } else {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (is_free(i)) {
                        changed += examine(i);
                    }
                }
                if (++bound_sweeps > bound_sweep_cap) {
                    examine_all = true;
                    continue;
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
        finalize_bias();
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double bias() const { return b_; }
    int full_passes() const { return full_passes_; }
    std::size_t steps() const { return steps_; }

private:
    bool is_free(std::size_t i) const { return alpha_[i] > 0 && alpha_[i] < box_[i]; }

    std::size_t examine(std::size_t i2)
    {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double r2 = error_[i2] * y2;
        // Half the tolerance: the final bias averages over free points and may
        // move by up to that much.
        const double tol = 0.5 * cfg_.kkt_tolerance;
        if (!((r2 < -tol && a2 < box_[i2]) || (r2 > tol && a2 > 0))) {
            return 0;
        }
        // Second choice: the free point maximizing |E1 - E2|.
        std::optional<std::size_t> best;
        double best_gap = -1;
        std::size_t free_count = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            if (!is_free(k)) continue;
            ++free_count;
            const double gap = std::abs(error_[k] - error_[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        if (free_count > 1 && best && take_step(*best, i2)) {
            return 1;
        }
        const std::size_t start = static_cast<std::size_t>(rng_() % n_);
        for (std::size_t off = 0; off < n_; ++off) {
            const std::size_t k = (start + off) % n_;
            if (is_free(k) && take_step(k, i2)) {
                return 1;
            }
        }
        const std::size_t start2 = static_cast<std::size_t>(rng_() % n_);
        for (std::size_t off = 0; off < n_; ++off) {
            const std::size_t k = (start2 + off) % n_;
            if (take_step(k, i2)) {
                return 1;
            }
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2)
    {
        if (i1 == i2) {
            return false;
        }
        const double y1 = y_[i1];
        const double y2 = y_[i2];
        const double a1 = alpha_[i1];
        const double a2 = alpha_[i2];
        const double c1 = box_[i1];
        const double c2 = box_[i2];
        const double e1 = error_[i1];
        const double e2 = error_[i2];
        const double s = y1 * y2;

        double lo = 0;
        double hi = 0;
        if (s < 0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c2, c1 + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c1);
            hi = std::min(c2, a1 + a2);
        }
        if (hi - lo < 1e-15) {
            return false;
        }
        const double k11 = 1.0;
        const double k22 = 1.0;
        const double k12 = cache_.at(i1, i2);
        const double eta = k11 + k22 - 2 * k12;

        double a2_new = 0;
        if (eta > 1e-12) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Objective along the constraint line at both ends.
            const double f1 = y1 * (e1 + y1) - b_ - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (e2 + y2) - b_ - s * a1 * k12 - a2 * k22;
            auto objective_at = [&](double a2c) {
                const double a1c = a1 + s * (a2 - a2c);
                return a1c * f1 + a2c * f2 + 0.5 * a1c * a1c * k11 + 0.5 * a2c * a2c * k22 + s * a1c * a2c * k12;
            };
            const double lobj = objective_at(lo);
            const double hobj = objective_at(hi);
            if (lobj < hobj - 1e-12) {
                a2_new = lo;
            } else if (lobj > hobj + 1e-12) {
                a2_new = hi;
            } else {
                a2_new = a2;
            }
        }
        if (std::abs(a2_new - a2) < 1e-10 * (a2_new + a2 + 1e-10)) {
            return false;
        }
        double a1_new = a1 + s * (a2 - a2_new);
        // Snap values within rounding of the box to its edges.
        auto snap = [](double a, double c) {
            if (a < 1e-12 * c) return 0.0;
            if (a > c * (1 - 1e-12)) return c;
            return a;
        };
        a1_new = snap(a1_new, c1);
        a2_new = snap(a2_new, c2);

        const double d1 = y1 * (a1_new - a1);
        const double d2 = y2 * (a2_new - a2);
        const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
        double b_new = 0;
        if (a1_new > 0 && a1_new < c1) {
            b_new = b1;
        } else if (a2_new > 0 && a2_new < c2) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }
        const double db = b_new - b_;

        const auto& row1 = cache_.row(i1);
        const auto& row2 = cache_.row(i2);
        for (std::size_t k = 0; k < n_; ++k) {
            error_[k] += d1 * row1[k] + d2 * row2[k] + db;
        }
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        b_ = b_new;
        ++steps_;
        return true;
    }

    // Re-derives b from the KKT conditions: mean over free vectors, else the
    // midpoint of the feasible interval.
    void finalize_bias()
    {
        double free_sum = 0;
        std::size_t free_count = 0;
        double lower = -INFINITY;
        double upper = INFINITY;
        for (std::size_t i = 0; i < n_; ++i) {
            const double y = y_[i];
            const double g = error_[i] + y - b_;  // decision value without bias
            const double target = y - g;
            if (is_free(i)) {
                free_sum += target;
                ++free_count;
            } else if ((alpha_[i] <= 0) == (y > 0)) {
                lower = std::max(lower, target);
            } else {
                upper = std::min(upper, target);
            }
        }
        double b = b_;
        if (free_count > 0) {
            b = free_sum / static_cast<double>(free_count);
        } else if (std::isfinite(lower) && std::isfinite(upper)) {
            b = 0.5 * (lower + upper);
        } else if (std::isfinite(lower)) {
            b = lower;
        } else if (std::isfinite(upper)) {
            b = upper;
        }
        for (auto& e : error_) {
            e += b - b_;
        }
        b_ = b;
    }

    const Matrix& x_;
    std::span<const int> y_;
    std::vector<double> box_;
    const TrainConfig& cfg_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    double b_ = 0;
    KernelCache cache_;
    std::mt19937_64 rng_;
    int full_passes_ = 0;
    std::size_t steps_ = 0;
};

void validate_training_input(const Matrix& x, std::span<const int> y, const TrainConfig& config)
{
    if (x.rows() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) + " labels");
    }
    if (!(config.c > 0) || !(config.kkt_tolerance > 0) || config.max_passes <= 0 ||
        (config.gamma && !(*config.gamma > 0))) {
        throw Error(ErrorCode::InvalidArgument, "c, gamma, kkt_tolerance and max_passes must be positive");
    }
    for (double v : x.data()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "training matrix contains NaN or Inf");
        }
    }
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (int label : y) {
        if (label == 1) {
            ++pos;
        } else if (label == -1) {
            ++neg;
        } else {
            throw Error(ErrorCode::InvalidArgument, "labels must be -1 or +1");
        }
    }
    if (pos == 0 || neg == 0) {
        throw Error(ErrorCode::SingleClassInput, "training needs at least one example of each class");
    }
    bool all_same = true;
    for (std::size_t r = 1; r < x.rows() && all_same; ++r) {
        all_same = std::equal(x.row(r).begin(), x.row(r).end(), x.row(0).begin());
    }
    if (all_same) {
        throw Error(ErrorCode::DegenerateData, "all training rows are identical");
    }
}

}  // namespace

double dual_objective(const Matrix& standardized, std::span<const int> y, std::span<const double> alphas, double gamma)
{
    double linear = 0;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        linear += alphas[i];
        if (alphas[i] != 0) {
            active.push_back(i);
        }
    }
    double quad = 0;
    for (std::size_t i : active) {
        for (std::size_t j : active) {
            quad += alphas[i] * alphas[j] * y[i] * y[j] *
                    rbf_kernel(standardized.row(i), standardized.row(j), gamma);
        }
    }
    return linear - 0.5 * quad;
}

TrainResult train_detailed(const Matrix& x, std::span<const int> y, const TrainConfig& config, SchemaId schema,
                           const Viewport& viewport)
{
    validate_training_input(x, y, config);

    TrainResult result;
    auto& model = result.model;
    model.standardizer = fit_standardizer(x);
    model.schema = schema;
    model.viewport = viewport;
    model.c = config.c;
    result.standardized = model.standardizer.transform(x);

    if (config.gamma) {
        model.gamma = *config.gamma;
    } else {
        // Mean column variance in standardized space: 1 for scaled columns, the
        // raw variance (zero) for constant pass-through ones.
        const double dims = static_cast<double>(x.cols());
        double nonconstant = 0;
        for (auto flag : model.standardizer.constant) {
            nonconstant += flag ? 0.0 : 1.0;
        }
        const double mean_var = nonconstant / dims;
        model.gamma = mean_var > 0 ? 1.0 / (dims * mean_var) : 1.0 / dims;
    }

    const auto pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
    const auto neg = static_cast<double>(y.size()) - pos;
    model.c_positive = config.c;
    model.c_negative = config.c;
    if (config.class_weighting == ClassWeighting::balanced) {
        // Inverse class frequency, normalized so the rarer class gets c.
        const double rare = std::min(pos, neg);
        model.c_positive = config.c * rare / pos;
        model.c_negative = config.c * rare / neg;
    }
    result.box.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        result.box[i] = y[i] > 0 ? model.c_positive : model.c_negative;
    }

    // Identical rows with the same label act as one point whose box is the
    // sum of theirs; solve the merged problem and split alpha evenly.
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& z = result.standardized;
    auto row_less = [&](std::size_t a, std::size_t b) {
        if (y[a] != y[b]) return y[a] < y[b];
        const auto ra = z.row(a);
        const auto rb = z.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::stable_sort(order.begin(), order.end(), row_less);
    std::vector<std::size_t> group_of(y.size());
    std::vector<std::size_t> group_size;
    Matrix merged;
    std::vector<int> merged_y;
    std::vector<double> merged_box;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        if (k == 0 || row_less(order[k - 1], i)) {
            merged.append_row(z.row(i));
            merged_y.push_back(y[i]);
            merged_box.push_back(0.0);
            group_size.push_back(0);
        }
        group_of[i] = group_size.size() - 1;
        merged_box.back() += result.box[i];
        ++group_size.back();
    }

    SmoSolver solver(merged, merged_y, merged_box, model.gamma, config);
    solver.solve();
    result.alphas.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto g = group_of[i];
        result.alphas[i] = solver.alphas()[g] / static_cast<double>(group_size[g]);
    }
    result.full_passes = solver.full_passes();
    result.steps = solver.steps();
    model.bias = solver.bias();
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        model.created_unix = std::strtoll(epoch, nullptr, 10);
    }

    for (std::size_t i = 0; i < y.size(); ++i) {
        if (result.alphas[i] > 0) {
            model.support_vectors.append_row(result.standardized.row(i));
            model.dual_coefs.push_back(result.alphas[i] * y[i]);
        }
    }
    if (model.support_vectors.empty()) {
        model.support_vectors = Matrix(0, x.cols());
    }
    result.objective = dual_objective(result.standardized, y, result.alphas, model.gamma);
    return result;
}

SvmModel train(const Matrix& x, std::span<const int> y, const TrainConfig& config, SchemaId schema,
               const Viewport& viewport)
{
    return std::move(train_detailed(x, y, config, schema, viewport).model);
}

double decision_value(const SvmModel& model, std::span<const double> x_raw)
{
    const auto dims = model.dims();
    if (x_raw.size() != dims) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model expects " + std::to_string(dims) + " features, got " + std::to_string(x_raw.size()));
    }
    double z[32];
    std::vector<double> heap;
    double* zp = z;
    if (dims > 32) {
        heap.resize(dims);
        zp = heap.data();
    }
    model.standardizer.transform_into(x_raw, std::span<double>(zp, dims));
    double sum = model.bias;
    for (std::size_t i = 0; i < model.dual_coefs.size(); ++i) {
        sum += model.dual_coefs[i] * std::exp(-model.gamma * sq_dist(model.support_vectors.row(i).data(), zp, dims));
    }
    return sum;
}

bool classify(const SvmModel& model, std::span<const double> x_raw)
{
    return decision_value(model, x_raw) > 0;
}

}  // namespace blogext
