#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "salsa/salsa.hpp"

namespace salsa {

class LambdaGrid {
  public:
    explicit LambdaGrid(std::vector<double> values);

    // 13 log-spaced values spanning 1e-6..1e1; covers under- and
    // over-regularized regimes on standardized data.
    static LambdaGrid log_default();
    static LambdaGrid log_spaced(double lo, double hi, int count);

    const std::vector<double>& values() const { return values_; }
    size_t size() const { return values_.size(); }

  private:
    std::vector<double> values_;  // strictly increasing, positive
};

struct CvCell {
    int order;
    double lambda;
    double mean_mse;
    double std_error;
};

struct CvReport {
    std::vector<CvCell> cells;
    int chosen_order = 0;
    double chosen_lambda = 0.0;
    int folds = 0;
    std::uint64_t seed = 0;
};

struct KfoldResult {
    std::vector<double> mean_mse;   // one per grid value
    std::vector<double> std_error;  // standard error of the fold mean
    double best_lambda = 0.0;
    double best_mse = 0.0;
};

// K-fold CV for a fixed order over a lambda grid. Fold assignment is a
// seeded shuffle cut into contiguous blocks; the kernel matrix is built once
// per fold and reused across the grid (only the ridge shift changes).
// Validation MSE is measured in raw target units. Ties pick the smaller
// lambda.
KfoldResult kfold_cv(const Matrix& x, const Vector& y, int order,
                     const LambdaGrid& grid, int folds, std::uint64_t seed,
                     const SalsaConfig& base = {});

struct OrderSearchOutcome {
    int chosen_order = 0;
    std::vector<double> best_errors;  // best CV error per evaluated order (1-based order)
    int evaluated = 0;
};

// The search core, injectable for testing: evaluate orders 1, 2, ... and stop
// after `patience` consecutive increases of the per-order best error (or at
// max_order). Returns the argmin over evaluated orders.
OrderSearchOutcome search_order_trace(const std::function<double(int)>& best_cv_error,
                                      int max_order, int patience = 1);

struct DSearchResult {
    int chosen_order = 0;
    double chosen_lambda = 0.0;
    std::vector<KfoldResult> per_order;  // index k holds order k+1
    CvReport report;
};

// Incremental search over the additive order d, with CV over the lambda grid
// at each step.
DSearchResult search_order(const Matrix& x, const Vector& y, const LambdaGrid& grid,
                           int folds, int max_order, std::uint64_t seed,
                           const SalsaConfig& base = {}, int patience = 1);

// Exact partition of {0..n-1} into `folds` validation blocks.
std::vector<std::vector<long>> fold_assignment(long n, int folds, std::uint64_t seed);

}  // namespace salsa
