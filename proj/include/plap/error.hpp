#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plap {

/// Error categories raised by the library. Each maps to a stable kebab-case
/// name that the CLI prints verbatim.
enum class ErrorCode {
    invalid_domain,
    invalid_parameter,
    non_finite_input,
    grid_mismatch,
    zero_function,
    not_positive,
    lambda_too_large,
    upper_bound_undefined,
    exponent_degeneracy,
    nonpositive_t,
    nonpositive_lambda,
    invalid_c,
    bracket_inverted,
    solver_failure,
    invalid_config,
    io_error,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_domain: return "invalid-domain";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::non_finite_input: return "non-finite-input";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::zero_function: return "zero-function";
    case ErrorCode::not_positive: return "not-positive";
    case ErrorCode::lambda_too_large: return "lambda-too-large";
    case ErrorCode::upper_bound_undefined: return "upper-bound-undefined";
    case ErrorCode::exponent_degeneracy: return "exponent-degeneracy";
    case ErrorCode::nonpositive_t: return "nonpositive-t";
    case ErrorCode::nonpositive_lambda: return "nonpositive-Lambda";
    case ErrorCode::invalid_c: return "invalid-c";
    case ErrorCode::bracket_inverted: return "bracket-inverted";
    case ErrorCode::solver_failure: return "solver-failure";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace plap
