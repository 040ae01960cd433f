#include "blogext/error.hpp"

namespace blogext {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::PathMismatch: return "PathMismatch";
    case ErrorCode::MissingGeometry: return "MissingGeometry";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::CorruptModel: return "CorruptModel";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::UnresolvedLabel: return "UnresolvedLabel";
    case ErrorCode::InsufficientPages: return "InsufficientPages";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> depth)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), depth_(depth)
{
}

}  // namespace blogext
