#pragma once

#include <span>

#include "salsa/kernels.hpp"
#include "salsa/normalization.hpp"

namespace salsa {

struct SalsaConfig {
    int order = 1;                       // additive order d
    double lambda = 1e-3;                // coefficient of the squared RKHS norm
    double bandwidth_multiplier = 20.0;  // c in h_i = c * sigma_i * n^{-1/5}
    KernelVariant variant = KernelVariant::ExactOrder;
    JitterPolicy jitter;
    int threads = 1;
};

// Everything prediction needs, frozen at fit time. Immutable; safe to share
// across threads.
class FittedSalsa {
  public:
    FittedSalsa(Vector alpha, Matrix x_train_normalized, EspKernelSpec spec,
                double lambda, double bandwidth_multiplier,
                NormalizationStats normalization, double jitter, double training_mse)
        : alpha_(std::move(alpha)),
          x_train_(std::move(x_train_normalized)),
          spec_(std::move(spec)),
          lambda_(lambda),
          bandwidth_multiplier_(bandwidth_multiplier),
          normalization_(std::move(normalization)),
          jitter_(jitter),
          training_mse_(training_mse) {}

    const Vector& alpha() const { return alpha_; }
    const Matrix& x_train() const { return x_train_; }          // normalized rows
    const EspKernelSpec& spec() const { return spec_; }
    double lambda() const { return lambda_; }
    double bandwidth_multiplier() const { return bandwidth_multiplier_; }
    const NormalizationStats& normalization() const { return normalization_; }
    double jitter() const { return jitter_; }
    double training_mse() const { return training_mse_; }
    long train_count() const { return x_train_.rows(); }
    int dims() const { return spec_.dims(); }

  private:
    Vector alpha_;
    Matrix x_train_;
    EspKernelSpec spec_;
    double lambda_;
    double bandwidth_multiplier_;
    NormalizationStats normalization_;
    double jitter_;
    double training_mse_;
};

// h_i = c * sigma_i * n^{-1/5}; sigma_i is the population standard deviation
// of column i. Constant columns are an error.
Vector compute_bandwidths(const Matrix& x, double c);

// Normalized data plus the kernel matrix for one (d, bandwidths) choice.
// Exposed so cross-validation can reuse the expensive parts across a lambda
// grid: only the diagonal shift changes with lambda.
struct FitPlan {
    Matrix x_normalized;
    Vector y_normalized;
    NormalizationStats normalization;
    EspKernelSpec spec;
    Matrix kernel;
    double bandwidth_multiplier = 0.0;
};

FitPlan prepare_fit(const Matrix& x, const Vector& y, const SalsaConfig& config);

struct DualSolution {
    Vector alpha;
    double jitter;
};

// Solve (K + lambda n I) alpha = y_normalized, escalating jitter if needed.
// One step of iterative refinement keeps the residual near solver precision.
DualSolution solve_dual(const Matrix& kernel, const Vector& y_normalized,
                        double lambda, const JitterPolicy& policy);

FittedSalsa fit_with_plan(const FitPlan& plan, double lambda, const JitterPolicy& policy);

// Normalize, build the ESP kernel matrix, solve the ridge system, package.
FittedSalsa fit(const Matrix& x, const Vector& y, const SalsaConfig& config);

// Denormalized predictions at the rows of x_new.
Vector predict(const FittedSalsa& model, const Matrix& x_new, int threads = 1);

// One additive component f_j, evaluated in *normalized target units*:
// sum_i alpha_i * scale * prod_{k in subset} base_k(x_k, X_ik).
Vector evaluate_component(const FittedSalsa& model, std::span<const int> subset,
                          const Matrix& x_new);

double mse(const Vector& prediction, const Vector& truth);

// || (K + lambda n I) alpha - y_normalized ||_2 with K rebuilt from the
// stored inputs; diagnostic for the fit contract.
double fit_residual(const FittedSalsa& model, const Vector& y_raw);

}  // namespace salsa
