#pragma once

#include <optional>
#include <span>
#include <variant>

#include "salsa/linalg.hpp"

namespace salsa {

// mu_ell = scale * ell^(-2 smoothness / order). Requires 2s/d > 1 or the
// effective dimension series diverges.
struct PolynomialDecay {
    double smoothness = 1.0;  // s
    int order = 1;            // d
    double scale = 1.0;       // C

    void validate() const;
    double exponent() const { return 2.0 * smoothness / order; }
};

// mu_ell = pi_tilde^order * exp(-alpha_coef * ell^2)
struct GaussianTypeDecay {
    double pi_tilde = 1.0;
    double alpha_coef = 1.0;
    int order = 1;

    void validate() const;
    double mass() const;  // pi_tilde^order
};

using EigendecayModel = std::variant<PolynomialDecay, GaussianTypeDecay>;

struct EffectiveDimReport {
    double lambda = 0.0;
    double gamma_single = 0.0;  // partial sum to the truncation level
    double gamma_sum = 0.0;     // M_d * gamma_single when an ambient dimension is given
    long truncation = 0;
    double tail_bound = 0.0;    // upper bound on the neglected series tail
};

// gamma(lambda) = sum_ell 1 / (1 + lambda / mu_ell), truncated where the
// tail bound drops below 1e-8 of the partial sum (cap 10^7 terms).
// Polynomial tails use integral comparison, Gaussian-type tails a geometric
// majorant. With `ambient_dims` = D, gamma_sum = C(D, d) * gamma_single.
EffectiveDimReport gamma_single(const EigendecayModel& model, double lambda,
                                std::optional<int> ambient_dims = {});

// Finite-spectrum version: sum mu / (mu + lambda). Shared by tests and the
// empirical statistic.
double gamma_from_eigenvalues(std::span<const double> mu, double lambda);

// Rate-optimal regularization: n^{-2s/(2s+d)} for polynomial decay, 1/n for
// Gaussian-type decay.
double rate_lambda(const EigendecayModel& model, long n);

// Per-n ratio gamma(rate_lambda(n)) / n^{d/(2s+d)} (polynomial) or
// gamma(1/n) / pi_tilde^d (Gaussian-type). A bounded band over an n-grid is
// the desk-scale form of the risk-rate claim.
std::vector<double> rate_band_check(const EigendecayModel& model,
                                    std::span<const long> n_grid);

// M_d * (20 lambda |f|^2 + 12 sigma^2 gamma / n): the two dominant terms of
// the excess-risk bound; the low-order remainder is out of numeric reach.
double theorem1_dominant_bound(double lambda, double m_d, double fnorm_sq,
                               double sigma_sq, double gamma_sum, long n);

// Plug-in analogue from a kernel matrix: eigenvalues of K/n clipped at 0.
double empirical_effective_dim(const Matrix& k, double lambda, long n);

}  // namespace salsa
