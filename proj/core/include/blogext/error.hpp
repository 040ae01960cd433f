#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blogext {

enum class ErrorCode {
    EmptyDocument,
    InvalidPath,
    SchemaError,
    PathMismatch,
    MissingGeometry,
    TooFewRows,
    DimensionMismatch,
    SingleClassInput,
    DegenerateData,
    CorruptModel,
    UnknownVersion,
    MissingFile,
    UnresolvedLabel,
    InsufficientPages,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. `depth` is set for path errors and
// names the first path component that failed to resolve.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> depth = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> depth() const noexcept { return depth_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> depth_;
};

}  // namespace blogext
