#include "salsa/linalg.hpp"

#include <cmath>

namespace salsa {

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < a.rows(); ++i) {
            if (std::abs(a(i, j) - a(j, i)) > tol * scale) return false;
        }
    }
    return true;
}

CholeskyFactor cholesky_factor(const Matrix& a, const JitterPolicy& policy) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("cholesky_factor: matrix is not square");
    }
    if (!a.allFinite()) {
        throw NonFinite("cholesky_factor: matrix has non-finite entries");
    }
    if (!is_symmetric(a)) {
        throw NotSymmetric("cholesky_factor: matrix is not symmetric");
    }

    const double diag_mean = a.diagonal().mean();
    for (double factor : policy.factors) {
        const double jitter = factor * diag_mean;
        if (jitter < 0.0) continue;
        Matrix shifted = a;
        shifted.diagonal().array() += jitter;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() == Eigen::Success) {
            return CholeskyFactor(std::move(llt), jitter);
        }
    }
    throw NotFactorizable("cholesky_factor: jitter schedule exhausted");
}

Matrix solve_spd(const CholeskyFactor& factor, const Matrix& b) {
    if (b.rows() != factor.dim()) {
        throw DimensionMismatch("solve_spd: right-hand side row count mismatch");
    }
    return factor.llt().solve(b);
}

Vector solve_spd(const CholeskyFactor& factor, const Vector& b) {
    if (b.size() != factor.dim()) {
        throw DimensionMismatch("solve_spd: right-hand side length mismatch");
    }
    return factor.llt().solve(b);
}

SymmetricEigen eigen_sym(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("eigen_sym: matrix is not square");
    }
    if (!is_symmetric(a)) {
        throw NotSymmetric("eigen_sym: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigen_sym: eigensolver did not converge");
    }
    // Eigen reports ascending order; the contract is descending.
    SymmetricEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

}  // namespace salsa
