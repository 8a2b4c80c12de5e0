#include "salsa/salsa.hpp"

#include <cmath>

#include "salsa/data.hpp"

namespace salsa {

Vector compute_bandwidths(const Matrix& x, double c) {
    const long n = x.rows();
    if (n < 2) throw TooFewRows("compute_bandwidths: need at least 2 rows");
    if (!(c > 0.0)) throw ValidationError("compute_bandwidths: c must be positive");

    const double rate = std::pow(static_cast<double>(n), -0.2);
    Vector h(x.cols());
    std::string degenerate;
    for (long col = 0; col < x.cols(); ++col) {
        const double mean = x.col(col).mean();
        const double sd = std::sqrt((x.col(col).array() - mean).square().mean());
        if (x.col(col).minCoeff() == x.col(col).maxCoeff() || sd == 0.0) {
            degenerate += (degenerate.empty() ? "" : ", ") + std::to_string(col);
            continue;
        }
        h[col] = c * sd * rate;
    }
    if (!degenerate.empty()) {
        throw DegenerateColumn("compute_bandwidths: constant column(s): " + degenerate);
    }
    return h;
}

FitPlan prepare_fit(const Matrix& x, const Vector& y, const SalsaConfig& config) {
    if (x.rows() != y.size()) throw DimensionMismatch("fit: X/Y row mismatch");
    if (x.rows() < 2) throw TooFewRows("fit: need at least 2 rows");
    if (!(config.lambda > 0.0)) throw ValidationError("fit: lambda must be positive");

    NormalizationStats stats = normalization_stats(x, y);
    Matrix xn = stats.apply_x(x);
    Vector yn = stats.apply_y(y);
    Vector h = compute_bandwidths(xn, config.bandwidth_multiplier);
    // The target is standardized, so the kernel's output scale is 1; raw
    // units come back through denormalization.
    EspKernelSpec spec(config.order, std::move(h), 1.0, config.variant);
    Matrix kernel = kernel_matrix(xn, spec, config.threads);
    return FitPlan{std::move(xn), std::move(yn), std::move(stats), std::move(spec),
                   std::move(kernel), config.bandwidth_multiplier};
}

DualSolution solve_dual(const Matrix& kernel, const Vector& y_normalized,
                        double lambda, const JitterPolicy& policy) {
    const long n = kernel.rows();
    Matrix system = kernel;
    system.diagonal().array() += lambda * static_cast<double>(n);
    CholeskyFactor factor = cholesky_factor(system, policy);
    Vector alpha = solve_spd(factor, y_normalized);
    // One refinement pass against the jittered system.
    Matrix jittered = system;
    jittered.diagonal().array() += factor.jitter();
    Vector residual = y_normalized - jittered * alpha;
    alpha += solve_spd(factor, residual);
    return {std::move(alpha), factor.jitter()};
}

FittedSalsa fit_with_plan(const FitPlan& plan, double lambda, const JitterPolicy& policy) {
    DualSolution sol = solve_dual(plan.kernel, plan.y_normalized, lambda, policy);
    const Vector fitted_norm = plan.kernel * sol.alpha;
    const double y_sd = plan.normalization.y_sd;
    const double training_mse =
        (fitted_norm - plan.y_normalized).squaredNorm() * y_sd * y_sd /
        static_cast<double>(plan.y_normalized.size());
    return FittedSalsa(std::move(sol.alpha), plan.x_normalized, plan.spec, lambda,
                       plan.bandwidth_multiplier, plan.normalization, sol.jitter,
                       training_mse);
}

FittedSalsa fit(const Matrix& x, const Vector& y, const SalsaConfig& config) {
    FitPlan plan = prepare_fit(x, y, config);
    return fit_with_plan(plan, config.lambda, config.jitter);
}

Vector predict(const FittedSalsa& model, const Matrix& x_new, int threads) {
    if (x_new.cols() != model.x_train().cols()) {
        throw DimensionMismatch("predict: column count does not match the model");
    }
    if (x_new.rows() == 0) return Vector(0);
    const Matrix xn = model.normalization().apply_x(x_new);
    const Matrix cross = kernel_cross_matrix(xn, model.x_train(), model.spec(), threads);
    return model.normalization().invert_y(cross * model.alpha());
}

Vector evaluate_component(const FittedSalsa& model, std::span<const int> subset,
                          const Matrix& x_new) {
    if (x_new.cols() != model.x_train().cols()) {
        throw DimensionMismatch("evaluate_component: column count does not match the model");
    }
    const Matrix xn = model.normalization().apply_x(x_new);
    Vector out(xn.rows());
    for (long i = 0; i < xn.rows(); ++i) {
        const Vector point = xn.row(i);
        double acc = 0.0;
        for (long t = 0; t < model.train_count(); ++t) {
            const Vector train_point = model.x_train().row(t);
            acc += model.alpha()[t] *
                   subset_kernel_eval(point, train_point, subset, model.spec());
        }
        out[i] = model.spec().scale() * acc;
    }
    return out;
}

double mse(const Vector& prediction, const Vector& truth) {
    if (prediction.size() != truth.size()) {
        throw DimensionMismatch("mse: length mismatch");
    }
    if (prediction.size() == 0) throw EmptyInput("mse: empty vectors");
    return (prediction - truth).squaredNorm() / static_cast<double>(prediction.size());
}

double fit_residual(const FittedSalsa& model, const Vector& y_raw) {
    if (y_raw.size() != model.train_count()) {
        throw DimensionMismatch("fit_residual: target length mismatch");
    }
    const Vector yn = model.normalization().apply_y(y_raw);
    Matrix system = kernel_matrix(model.x_train(), model.spec());
    system.diagonal().array() +=
        model.lambda() * static_cast<double>(model.train_count());
    return (system * model.alpha() - yn).norm();
}

}  // namespace salsa
