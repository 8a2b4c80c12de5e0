#pragma once

#include "salsa/linalg.hpp"

namespace salsa {

// Column-wise standardization bookkeeping. Standard deviations use the
// population (1/n) convention everywhere so the bandwidth formula sees a
// single convention. Feature sds are strictly positive (constant columns are
// rejected upstream); the target sd is floored at 1e-12 so constant targets
// degenerate to the zero problem instead of dividing by zero.
struct NormalizationStats {
    Vector means;
    Vector sds;
    double y_mean = 0.0;
    double y_sd = 1.0;

    Matrix apply_x(const Matrix& x) const {
        if (x.cols() != means.size()) {
            throw DimensionMismatch("NormalizationStats: column count mismatch");
        }
        return (x.rowwise() - means.transpose()).array().rowwise() /
               sds.transpose().array();
    }

    Matrix invert_x(const Matrix& xn) const {
        if (xn.cols() != means.size()) {
            throw DimensionMismatch("NormalizationStats: column count mismatch");
        }
        return (xn.array().rowwise() * sds.transpose().array()).rowwise() +
               means.transpose().array();
    }

    Vector apply_y(const Vector& y) const { return (y.array() - y_mean) / y_sd; }
    Vector invert_y(const Vector& yn) const { return yn.array() * y_sd + y_mean; }
};

}  // namespace salsa
