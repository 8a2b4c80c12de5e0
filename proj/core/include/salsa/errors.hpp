#pragma once

#include <stdexcept>
#include <string>

namespace salsa {

// Two error families, chosen so callers (and the CLI exit-code contract) can
// tell "your inputs are wrong" apart from "the computation broke down".
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- validation ---
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct NonFinite : ValidationError {
    using ValidationError::ValidationError;
};
struct NotSymmetric : ValidationError {
    using ValidationError::ValidationError;
};
struct BadSubset : ValidationError {
    using ValidationError::ValidationError;
};
struct OrderExceedsDimension : ValidationError {
    using ValidationError::ValidationError;
};
struct TooLarge : ValidationError {
    using ValidationError::ValidationError;
};
struct TooFewRows : ValidationError {
    using ValidationError::ValidationError;
};
struct DegenerateColumn : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyGrid : ValidationError {
    using ValidationError::ValidationError;
};
struct EmptyInput : ValidationError {
    using ValidationError::ValidationError;
};
struct MissingTarget : ValidationError {
    using ValidationError::ValidationError;
};
struct ParseError : ValidationError {
    ParseError(const std::string& msg, long row, long col)
        : ValidationError(msg), row(row), col(col) {}
    long row;  // 1-based data row (header excluded)
    long col;  // 1-based column
};
struct EmptyFile : ValidationError {
    using ValidationError::ValidationError;
};
struct LambdaNonPositive : ValidationError {
    using ValidationError::ValidationError;
};

// --- numeric ---
struct NotFactorizable : NumericError {
    using NumericError::NumericError;
};
struct NoConvergence : NumericError {
    using NumericError::NumericError;
};
struct MaxIterations : NumericError {
    using NumericError::NumericError;
};

}  // namespace salsa
