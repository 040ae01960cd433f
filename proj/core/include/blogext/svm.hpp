#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blogext/layout.hpp"

namespace blogext {

// Dense row-major matrix of feature rows.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    // The first appended row fixes the column count of an empty matrix.
    void append_row(std::span<const double> values);

    const std::vector<double>& data() const noexcept { return data_; }
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Zero-mean, unit-variance scaling per column (population std). Columns whose
// std is below 1e-12 are flagged constant and passed through unchanged.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<std::uint8_t> constant;

    std::size_t dims() const noexcept { return means.size(); }
    std::vector<double> transform(std::span<const double> row) const;
    void transform_into(std::span<const double> row, std::span<double> out) const;
    Matrix transform(const Matrix& rows) const;
    bool operator==(const Standardizer&) const = default;
};

// Throws TooFewRows for fewer than two rows.
Standardizer fit_standardizer(const Matrix& rows);

// exp(-gamma * |a - b|^2). Throws DimensionMismatch.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

enum class SchemaId : std::uint8_t { title_v1 = 1, body_v1 = 2 };

std::string_view to_string(SchemaId id) noexcept;
std::size_t schema_width(SchemaId id) noexcept;

enum class ClassWeighting { none, balanced };

struct TrainConfig {
    double c = 1.0;
    std::optional<double> gamma;  // nullopt selects gamma automatically
    double kkt_tolerance = 1e-3;
    int max_passes = 200;
    ClassWeighting class_weighting = ClassWeighting::balanced;
    std::uint64_t rng_seed = 0;
};

struct SvmModel {
    Matrix support_vectors;  // standardized space
    std::vector<double> dual_coefs;  // alpha_i * y_i
    double bias = 0;
    double gamma = 1;
    double c = 1;
    // Box constraint per class after class weighting; never above c.
    double c_positive = 1;
    double c_negative = 1;
    Standardizer standardizer;
    SchemaId schema = SchemaId::title_v1;
    Viewport viewport;
    std::int64_t created_unix = 0;

    std::size_t dims() const noexcept { return standardizer.dims(); }
    bool operator==(const SvmModel&) const = default;
};

struct TrainResult {
    SvmModel model;
    std::vector<double> alphas;  // one per training row
    std::vector<double> box;  // per-row upper bound used by the solver
    Matrix standardized;  // training rows after standardization
    double objective = 0;  // dual objective at the returned alphas
    int full_passes = 0;
    std::size_t steps = 0;
};

// Soft-margin SVM trained by sequential minimal optimization. Labels must be
// -1 or +1. Throws SingleClassInput, DegenerateData, DimensionMismatch,
// InvalidArgument.
TrainResult train_detailed(const Matrix& x, std::span<const int> y, const TrainConfig& config, SchemaId schema,
                           const Viewport& viewport);
SvmModel train(const Matrix& x, std::span<const int> y, const TrainConfig& config, SchemaId schema,
               const Viewport& viewport);

// sum_i coef_i * K(sv_i, standardize(x)) + bias. Throws DimensionMismatch.
double decision_value(const SvmModel& model, std::span<const double> x_raw);
// Positive iff the decision value is strictly above zero.
bool classify(const SvmModel& model, std::span<const double> x_raw);

// W(alpha) = sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const Matrix& standardized, std::span<const int> y, std::span<const double> alphas,
                      double gamma);

// Versioned little-endian binary container with a trailing checksum.
std::string save_model(const SvmModel& model);
// Throws CorruptModel, UnknownVersion.
SvmModel load_model(std::string_view bytes);

}  // namespace blogext
