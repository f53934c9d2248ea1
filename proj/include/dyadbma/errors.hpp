#pragma once

#include <stdexcept>
#include <string>

namespace dyadbma {

// Exit-code contract of the toolkit: 0 success, 2 input/validation error,
// 3 numerical failure.
enum class ErrorCode { input = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return static_cast<int>(code_); }

private:
    ErrorCode code_;
};

/// Malformed file syntax (wrong arity, unparseable number). Carries line context.
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Value inconsistent with a declared column kind (e.g. "2" in a binary column).
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Structural violations: duplicate node ids, self-nominations, unknown node references.
struct IntegrityError : Error {
    explicit IntegrityError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Variable-spec problems: unknown source column, duplicate names, transform/kind mismatch.
struct SpecError : Error {
    explicit SpecError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// A pipeline stage produced zero rows; downstream fits are undefined.
struct EmptyResultError : Error {
    explicit EmptyResultError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Too few observations for the requested posterior quantities.
struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Invalid engine or CLI configuration (bad prior parameters, K over the exhaustive cap, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorCode::input, m) {}
};

/// Numerical breakdown that is not attributable to the input's declared shape.
struct NumericalError : Error {
    explicit NumericalError(const std::string& m) : Error(ErrorCode::numeric, m) {}
};

} // namespace dyadbma
