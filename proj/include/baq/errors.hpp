#pragma once

#include <stdexcept>
#include <string>

namespace baq {

// Base for failures of the numeric machinery (series truncation,
// quadrature, unfolding). Config/argument problems use std::domain_error
// or std::invalid_argument directly.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationError : NumericalError {
    explicit TruncationError(const std::string& what) : NumericalError(what) {}
};

struct QuadratureError : NumericalError {
    explicit QuadratureError(const std::string& what) : NumericalError(what) {}
};

struct UnfoldError : NumericalError {
    explicit UnfoldError(const std::string& what) : NumericalError(what) {}
};

}  // namespace baq
