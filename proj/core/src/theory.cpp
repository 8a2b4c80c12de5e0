#include "salsa/theory.hpp"

#include <cmath>

#include "salsa/combinatorics.hpp"

namespace salsa {

namespace {

constexpr long kTruncationCap = 10'000'000;
constexpr double kRelativeTailTarget = 1e-8;

struct SeriesResult {
    double partial = 0.0;
    long terms = 0;
    double tail_bound = 0.0;
};

// Kahan-compensated summation with a checkpointed stopping rule: every time
// the term count doubles, evaluate the analytic tail bound and stop once it
// is negligible relative to the partial sum.
template <typename TermFn, typename TailFn>
SeriesResult sum_with_tail(TermFn&& term, TailFn&& tail_bound_at) {
    SeriesResult result;
    double compensation = 0.0;
    long checkpoint = 1024;
    for (long ell = 1; ell <= kTruncationCap; ++ell) {
        const double value = term(ell);
        const double adjusted = value - compensation;
        const double next = result.partial + adjusted;
        compensation = (next - result.partial) - adjusted;
        result.partial = next;
        result.terms = ell;
        if (ell == checkpoint) {
            result.tail_bound = tail_bound_at(ell);
            if (result.tail_bound <= kRelativeTailTarget * result.partial) return result;
            checkpoint *= 2;
        }
    }
    result.tail_bound = tail_bound_at(result.terms);
    return result;
}

SeriesResult gamma_series(const PolynomialDecay& model, double lambda) {
    const double p = model.exponent();
    const double a = lambda / model.scale;
    return sum_with_tail(
        [&](long ell) {
            return 1.0 / (1.0 + a * std::pow(static_cast<double>(ell), p));
        },
        [&](long t) {
            // sum_{ell>T} 1/(1+a ell^p) <= integral_T^inf du/(a u^p)
            //                           = T^(1-p) / (a (p-1))
            return std::pow(static_cast<double>(t), 1.0 - p) / (a * (p - 1.0));
        });
}

SeriesResult gamma_series(const GaussianTypeDecay& model, double lambda) {
    const double mass = model.mass();
    const double alpha = model.alpha_coef;
    return sum_with_tail(
        [&](long ell) {
            const double l = static_cast<double>(ell);
            // mu / (mu + lambda), written to stay finite when exp overflows
            const double mu = mass * std::exp(-alpha * l * l);
            return mu / (mu + lambda);
        },
        [&](long t) {
            // ell^2 >= T^2 + (2T+1)(ell-T) for ell > T, so the tail is
            // dominated by a geometric series with ratio exp(-alpha(2T+1)).
            const double td = static_cast<double>(t);
            const double ratio = std::exp(-alpha * (2.0 * td + 1.0));
            const double head = (mass / lambda) * std::exp(-alpha * td * td);
            return head * ratio / (1.0 - ratio);
        });
}

}  // namespace

void PolynomialDecay::validate() const {
    if (!(smoothness > 0.0)) throw ValidationError("PolynomialDecay: smoothness must be > 0");
    if (order < 1) throw ValidationError("PolynomialDecay: order must be >= 1");
    if (!(scale > 0.0)) throw ValidationError("PolynomialDecay: scale must be > 0");
    if (!(exponent() > 1.0)) {
        // 2s/d <= 1 would make the effective dimension series diverge.
        throw ValidationError("PolynomialDecay: requires 2*smoothness/order > 1");
    }
}

void GaussianTypeDecay::validate() const {
    if (!(pi_tilde > 0.0)) throw ValidationError("GaussianTypeDecay: pi_tilde must be > 0");
    if (!(alpha_coef > 0.0)) throw ValidationError("GaussianTypeDecay: alpha_coef must be > 0");
    if (order < 1) throw ValidationError("GaussianTypeDecay: order must be >= 1");
}

double GaussianTypeDecay::mass() const {
    return std::pow(pi_tilde, static_cast<double>(order));
}

EffectiveDimReport gamma_single(const EigendecayModel& model, double lambda,
                                std::optional<int> ambient_dims) {
    if (!(lambda > 0.0)) throw LambdaNonPositive("gamma_single: lambda must be positive");

    SeriesResult series;
    int order = 0;
    std::visit(
        [&](const auto& m) {
            m.validate();
            order = m.order;
            series = gamma_series(m, lambda);
        },
        model);

    EffectiveDimReport report;
    report.lambda = lambda;
    report.gamma_single = series.partial;
    report.truncation = series.terms;
    report.tail_bound = series.tail_bound;
    if (ambient_dims) {
        if (*ambient_dims < order) {
            throw OrderExceedsDimension("gamma_single: ambient dimension below the order");
        }
        report.gamma_sum =
            static_cast<double>(binomial_exact(*ambient_dims, order)) * series.partial;
    } else {
        report.gamma_sum = series.partial;
    }
    return report;
}

double gamma_from_eigenvalues(std::span<const double> mu, double lambda) {
    if (!(lambda > 0.0)) throw LambdaNonPositive("gamma_from_eigenvalues: lambda must be positive");
    double total = 0.0;
    for (double m : mu) {
        if (m <= 0.0) continue;  // clipped
        total += m / (m + lambda);
    }
    return total;
}

double rate_lambda(const EigendecayModel& model, long n) {
    if (n < 2) throw TooFewRows("rate_lambda: need n >= 2");
    return std::visit(
        [&](const auto& m) -> double {
            m.validate();
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PolynomialDecay>) {
                const double expo =
                    -2.0 * m.smoothness / (2.0 * m.smoothness + m.order);
                return std::pow(static_cast<double>(n), expo);
            } else {
                return 1.0 / static_cast<double>(n);
            }
        },
        model);
}

std::vector<double> rate_band_check(const EigendecayModel& model,
                                    std::span<const long> n_grid) {
    if (n_grid.empty()) throw EmptyInput("rate_band_check: empty n grid");
    for (size_t i = 1; i < n_grid.size(); ++i) {
        if (n_grid[i] <= n_grid[i - 1]) {
            throw ValidationError("rate_band_check: n grid must be increasing");
        }
    }
    std::vector<double> ratios;
    ratios.reserve(n_grid.size());
    for (long n : n_grid) {
        const double lambda = rate_lambda(model, n);
        const double gamma = gamma_single(model, lambda).gamma_single;
        const double denom = std::visit(
            [&](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, PolynomialDecay>) {
                    const double expo =
                        static_cast<double>(m.order) / (2.0 * m.smoothness + m.order);
                    return std::pow(static_cast<double>(n), expo);
                } else {
                    return m.mass();
                }
            },
            model);
        ratios.push_back(gamma / denom);
    }
    return ratios;
}

double theorem1_dominant_bound(double lambda, double m_d, double fnorm_sq,
                               double sigma_sq, double gamma_sum, long n) {
    if (lambda < 0.0 || m_d < 0.0 || fnorm_sq < 0.0 || sigma_sq < 0.0 || gamma_sum < 0.0) {
        throw ValidationError("theorem1_dominant_bound: inputs must be nonnegative");
    }
    if (n < 1) throw TooFewRows("theorem1_dominant_bound: need n >= 1");
    return m_d * (20.0 * lambda * fnorm_sq +
                  12.0 * sigma_sq * gamma_sum / static_cast<double>(n));
}

double empirical_effective_dim(const Matrix& k, double lambda, long n) {
    if (!(lambda > 0.0)) throw LambdaNonPositive("empirical_effective_dim: lambda must be positive");
    if (n < 1) throw TooFewRows("empirical_effective_dim: need n >= 1");
    const SymmetricEigen eigen = eigen_sym(k);
    std::vector<double> mu(static_cast<size_t>(eigen.values.size()));
    for (long i = 0; i < eigen.values.size(); ++i) {
        mu[static_cast<size_t>(i)] = eigen.values[i] / static_cast<double>(n);
    }
    return gamma_from_eigenvalues(mu, lambda);
}

}  // namespace salsa
