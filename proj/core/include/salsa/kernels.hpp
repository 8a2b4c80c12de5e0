#pragma once

#include <span>
#include <vector>

#include "salsa/linalg.hpp"

namespace salsa {

enum class KernelVariant {
    ExactOrder,    // d-th elementary symmetric polynomial of the base values
    AllOrdersUpTo  // sum of orders 1..d
};

// Additive kernel built from one-dimensional Gaussian base kernels: the
// elementary symmetric polynomial of order `order` of the D per-dimension
// similarities, scaled once by `scale`. The scale is deliberately applied to
// the summed polynomial, not per base factor, so the output magnitude does
// not depend on the order.
class EspKernelSpec {
  public:
    EspKernelSpec(int order, Vector bandwidths, double scale = 1.0,
                  KernelVariant variant = KernelVariant::ExactOrder);

    int order() const { return order_; }
    int dims() const { return static_cast<int>(bandwidths_.size()); }
    const Vector& bandwidths() const { return bandwidths_; }
    double scale() const { return scale_; }
    KernelVariant variant() const { return variant_; }
    const Vector& inv_two_h_sq() const { return inv_two_h_sq_; }

  private:
    int order_;
    Vector bandwidths_;
    double scale_;
    KernelVariant variant_;
    Vector inv_two_h_sq_;  // 1 / (2 h_i^2), precomputed
};

// Scratch space for the Girard-Newton recurrence; e[0] == 1 always.
struct EspWorkspace {
    std::vector<double> p;  // power sums p_1..p_d stored at p[0..d-1]
    std::vector<double> e;  // elementary symmetric values e_0..e_d

    void resize(int order) {
        p.assign(static_cast<size_t>(order), 0.0);
        e.assign(static_cast<size_t>(order) + 1, 0.0);
        e[0] = 1.0;
    }
};

// Per-dimension Gaussian similarities s_i = exp(-(x_i - x2_i)^2 / (2 h_i^2)).
Vector base_kernel_values(const Vector& x, const Vector& x2, const EspKernelSpec& spec);

// e_0..e_d of the values in s via the Girard-Newton recurrence
//   e_m = (1/m) * sum_{i=1..m} (-1)^{i-1} e_{m-i} p_i ,
// O(D d) for the power sums plus O(d^2) for the triangle.
std::vector<double> girard_newton_esp(std::span<const double> s, int order);
void girard_newton_esp(std::span<const double> s, int order, EspWorkspace& ws);

// Direct enumeration over all C(D, d) subsets. Exponential; guarded at
// C(D, d) <= 10^7. Test oracle for the recurrence.
double brute_force_esp(std::span<const double> s, int order);

double esp_kernel(const Vector& x, const Vector& x2, const EspKernelSpec& spec);

// n x n kernel matrix; exactly symmetric by construction, constant diagonal
// scale * C(D, d) for the exact-order variant. Rows of X are points.
Matrix kernel_matrix(const Matrix& x, const EspKernelSpec& spec, int threads = 1);

// m x n cross-kernel between new points (rows of x_new) and training points.
Matrix kernel_cross_matrix(const Matrix& x_new, const Matrix& x_train,
                           const EspKernelSpec& spec, int threads = 1);

// Product of base kernel values over one coordinate subset (no scale factor).
double subset_kernel_eval(const Vector& x, const Vector& x2,
                          std::span<const int> subset, const EspKernelSpec& spec);

}  // namespace salsa
