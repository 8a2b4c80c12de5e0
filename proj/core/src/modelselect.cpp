#include "salsa/modelselect.hpp"

#include <cmath>

#include "salsa/rng.hpp"

namespace salsa {

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw EmptyGrid("LambdaGrid: no values");
    for (size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
            throw ValidationError("LambdaGrid: values must be positive and finite");
        }
        if (i > 0 && !(values_[i] > values_[i - 1])) {
            throw ValidationError("LambdaGrid: values must be strictly increasing");
        }
    }
}

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, int count) {
    if (count < 1) throw EmptyGrid("LambdaGrid: count must be >= 1");
    if (!(lo > 0.0) || !(hi > lo)) {
        throw ValidationError("LambdaGrid: need 0 < lo < hi");
    }
    std::vector<double> values(static_cast<size_t>(count));
    if (count == 1) {
        values[0] = lo;
    } else {
        const double log_lo = std::log10(lo);
        const double step = (std::log10(hi) - log_lo) / (count - 1);
        for (int i = 0; i < count; ++i) {
            values[static_cast<size_t>(i)] = std::pow(10.0, log_lo + step * i);
        }
    }
    return LambdaGrid(std::move(values));
}

LambdaGrid LambdaGrid::log_default() { return log_spaced(1e-6, 1e1, 13); }

std::vector<std::vector<long>> fold_assignment(long n, int folds, std::uint64_t seed) {
    if (folds < 2) throw ValidationError("fold_assignment: need at least 2 folds");
    if (n < folds) throw TooFewRows("fold_assignment: fewer rows than folds");
    const std::vector<long> order = shuffled_indices(n, seed);
    std::vector<std::vector<long>> assignment(static_cast<size_t>(folds));
    const long base = n / folds;
    const long extra = n % folds;
    long cursor = 0;
    for (int f = 0; f < folds; ++f) {
        const long size = base + (f < extra ? 1 : 0);
        auto& block = assignment[static_cast<size_t>(f)];
        block.assign(order.begin() + cursor, order.begin() + cursor + size);
        cursor += size;
    }
    return assignment;
}

KfoldResult kfold_cv(const Matrix& x, const Vector& y, int order, const LambdaGrid& grid,
                     int folds, std::uint64_t seed, const SalsaConfig& base) {
    const long n = x.rows();
    if (y.size() != n) throw DimensionMismatch("kfold_cv: X/Y row mismatch");
    const auto assignment = fold_assignment(n, folds, seed);
    const size_t grid_size = grid.size();

    // fold x lambda validation errors
    std::vector<std::vector<double>> errors(static_cast<size_t>(folds),
                                            std::vector<double>(grid_size, 0.0));

    for (int f = 0; f < folds; ++f) {
        const auto& val_idx = assignment[static_cast<size_t>(f)];
        const long n_val = static_cast<long>(val_idx.size());
        const long n_train = n - n_val;
        if (n_train < 2) throw TooFewRows("kfold_cv: training fold too small");

        std::vector<char> in_val(static_cast<size_t>(n), 0);
        for (long idx : val_idx) in_val[static_cast<size_t>(idx)] = 1;

        Matrix x_train(n_train, x.cols());
        Vector y_train(n_train);
        Matrix x_val(n_val, x.cols());
        Vector y_val(n_val);
        long t = 0;
        for (long i = 0; i < n; ++i) {
            if (!in_val[static_cast<size_t>(i)]) {
                x_train.row(t) = x.row(i);
                y_train[t] = y[i];
                ++t;
            }
        }
        for (long v = 0; v < n_val; ++v) {
            x_val.row(v) = x.row(val_idx[static_cast<size_t>(v)]);
            y_val[v] = y[val_idx[static_cast<size_t>(v)]];
        }

        SalsaConfig config = base;
        config.order = order;
        FitPlan plan = prepare_fit(x_train, y_train, config);
        const Matrix x_val_norm = plan.normalization.apply_x(x_val);
        const Matrix cross =
            kernel_cross_matrix(x_val_norm, plan.x_normalized, plan.spec, config.threads);

        for (size_t g = 0; g < grid_size; ++g) {
            const DualSolution sol =
                solve_dual(plan.kernel, plan.y_normalized, grid.values()[g], config.jitter);
            const Vector pred = plan.normalization.invert_y(cross * sol.alpha);
            errors[static_cast<size_t>(f)][g] = mse(pred, y_val);
        }
    }

    KfoldResult result;
    result.mean_mse.resize(grid_size);
    result.std_error.resize(grid_size);
    for (size_t g = 0; g < grid_size; ++g) {
        double mean = 0.0;
        for (int f = 0; f < folds; ++f) mean += errors[static_cast<size_t>(f)][g];
        mean /= folds;
        double var = 0.0;
        for (int f = 0; f < folds; ++f) {
            const double diff = errors[static_cast<size_t>(f)][g] - mean;
            var += diff * diff;
        }
        var /= folds;
        result.mean_mse[g] = mean;
        result.std_error[g] = std::sqrt(var / folds);
    }

    size_t best = 0;
    for (size_t g = 1; g < grid_size; ++g) {
        if (result.mean_mse[g] < result.mean_mse[best]) best = g;  // tie keeps smaller lambda
    }
    result.best_lambda = grid.values()[best];
    result.best_mse = result.mean_mse[best];
    return result;
}

OrderSearchOutcome search_order_trace(const std::function<double(int)>& best_cv_error,
                                      int max_order, int patience) {
    if (max_order < 1) throw ValidationError("search_order: max_order must be >= 1");
    if (patience < 1) throw ValidationError("search_order: patience must be >= 1");

    OrderSearchOutcome outcome;
    int consecutive_increases = 0;
    for (int order = 1; order <= max_order; ++order) {
        const double err = best_cv_error(order);
        outcome.best_errors.push_back(err);
        outcome.evaluated = order;
        if (order > 1) {
            if (err > outcome.best_errors[static_cast<size_t>(order) - 2]) {
                if (++consecutive_increases >= patience) break;
            } else {
                consecutive_increases = 0;
            }
        }
    }
    int argmin = 0;
    for (int i = 1; i < outcome.evaluated; ++i) {
        if (outcome.best_errors[static_cast<size_t>(i)] <
            outcome.best_errors[static_cast<size_t>(argmin)]) {
            argmin = i;
        }
    }
    outcome.chosen_order = argmin + 1;
    return outcome;
}

DSearchResult search_order(const Matrix& x, const Vector& y, const LambdaGrid& grid,
                           int folds, int max_order, std::uint64_t seed,
                           const SalsaConfig& base, int patience) {
    if (max_order > x.cols()) {
        throw OrderExceedsDimension("search_order: max_order exceeds the dimension");
    }

    DSearchResult result;
    search_order_trace(
        [&](int order) {
            result.per_order.push_back(kfold_cv(x, y, order, grid, folds, seed, base));
            return result.per_order.back().best_mse;
        },
        max_order, patience);

    CvReport& report = result.report;
    report.folds = folds;
    report.seed = seed;
    for (size_t k = 0; k < result.per_order.size(); ++k) {
        const auto& kf = result.per_order[k];
        for (size_t g = 0; g < grid.size(); ++g) {
            report.cells.push_back(CvCell{static_cast<int>(k) + 1, grid.values()[g],
                                          kf.mean_mse[g], kf.std_error[g]});
        }
    }
    // Chosen pair attains the minimal mean MSE; ties prefer smaller lambda,
    // then smaller order. Cells are ordered by (order, lambda), so strict
    // improvement plus the scan order implements exactly that.
    const CvCell* best = &report.cells.front();
    for (const auto& cell : report.cells) {
        if (cell.mean_mse < best->mean_mse ||
            (cell.mean_mse == best->mean_mse &&
             (cell.lambda < best->lambda ||
              (cell.lambda == best->lambda && cell.order < best->order)))) {
            best = &cell;
        }
    }
    report.chosen_order = best->order;
    report.chosen_lambda = best->lambda;
    result.chosen_order = report.chosen_order;
    result.chosen_lambda = report.chosen_lambda;
    return result;
}

}  // namespace salsa
