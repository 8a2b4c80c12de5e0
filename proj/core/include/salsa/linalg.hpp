#pragma once

#include <Eigen/Dense>
#include <vector>

#include "salsa/errors.hpp"

namespace salsa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Jitter escalation for Cholesky of near-singular SPD matrices. The factors
// are multiplied by mean(diag(A)) so the schedule is scale free. Kernel
// matrices with near-duplicate rows are routinely rank deficient at machine
// precision, hence the default ladder.
struct JitterPolicy {
    std::vector<double> factors{0.0, 1e-10, 1e-8, 1e-6, 1e-4};
};

class CholeskyFactor {
  public:
    CholeskyFactor(Eigen::LLT<Matrix> llt, double jitter)
        : llt_(std::move(llt)), jitter_(jitter) {}

    // Jitter actually added to the diagonal (0 unless the raw factorization
    // failed).
    double jitter() const { return jitter_; }
    Eigen::Index dim() const { return llt_.matrixLLT().rows(); }
    Matrix matrix_l() const { return llt_.matrixL(); }

    const Eigen::LLT<Matrix>& llt() const { return llt_; }

  private:
    Eigen::LLT<Matrix> llt_;
    double jitter_;
};

// Factor A + jitter*I with the smallest jitter in the schedule that succeeds.
// A must be square and symmetric within 1e-10 relative tolerance.
CholeskyFactor cholesky_factor(const Matrix& a, const JitterPolicy& policy = {});

// Solve (A + jitter*I) X = B using a previously computed factor.
Matrix solve_spd(const CholeskyFactor& factor, const Matrix& b);
Vector solve_spd(const CholeskyFactor& factor, const Vector& b);

struct SymmetricEigen {
    Vector values;   // sorted descending
    Matrix vectors;  // column k pairs with values[k]; orthonormal
};

// Full symmetric eigendecomposition (tridiagonalization + implicit shifts).
SymmetricEigen eigen_sym(const Matrix& a);

// max |A - A^T| <= tol * max(1, max |A|)
bool is_symmetric(const Matrix& a, double tol = 1e-10);

}  // namespace salsa
