#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "salsa/linalg.hpp"

namespace salsa {

// One regression problem over M candidate components: per-group kernel
// matrices K_1..K_M on shared inputs, plus the targets. Matrices are
// symmetrized on construction; group descriptors record which coordinates
// each kernel acts on.
class GroupKernelDesign {
  public:
    GroupKernelDesign(std::vector<Matrix> kernels, Vector y,
                      std::vector<std::vector<int>> groups);

    long n() const { return y_.size(); }
    int group_count() const { return static_cast<int>(kernels_.size()); }
    const std::vector<Matrix>& kernels() const { return kernels_; }
    const Matrix& kernel(int j) const { return kernels_[static_cast<size_t>(j)]; }
    const Vector& y() const { return y_; }
    const std::vector<std::vector<int>>& groups() const { return groups_; }

  private:
    std::vector<Matrix> kernels_;
    Vector y_;
    std::vector<std::vector<int>> groups_;
};

enum class ShrinkSolver { Subgradient, ProxGrad, AccelProxGrad, Bcgd, ExactBcd };

struct ShrinkConfig {
    double lambda1 = 0.0;  // squared-RKHS-norm weight
    double lambda2 = 0.0;  // group-lasso weight
    ShrinkSolver solver = ShrinkSolver::AccelProxGrad;
    int max_iterations = 2000;
    double objective_tol = 1e-10;
    double backtrack_shrink = 0.5;  // beta in (0,1)
    double initial_step = 1.0;

    void validate() const;
};

struct SolverTrace {
    std::vector<double> objectives;       // F per iteration, entry 0 = start
    std::vector<double> best_objectives;  // running minimum of the above
    std::vector<double> elapsed_seconds;  // matching timestamps
    std::vector<Vector> alpha;            // final M blocks of length n
    std::string termination;              // "converged" or "max-iterations"
    double final_objective = 0.0;
    int iterations = 0;
    double final_step = 0.0;              // last accepted step (prox-type solvers)
};

// F(alpha) = 1/2 ||y - sum_j K_j a_j||^2
//          + (lambda1/2) sum_j a_j^T K_j a_j
//          + lambda2 sum_j ||a_j||_2
double shrink_objective(std::span<const Vector> alpha, const GroupKernelDesign& design,
                        double lambda1, double lambda2);

// Gradient of the smooth part: grad_j = K_j (lambda1 a_j - r), r the residual.
std::vector<Vector> smooth_gradient(std::span<const Vector> alpha,
                                    const GroupKernelDesign& design, double lambda1);

// Group soft-threshold, the proximal operator of threshold * ||.||_2:
// 0 when ||v|| <= threshold, else v scaled to norm ||v|| - threshold.
Vector group_prox(const Vector& block, double threshold);

// Proximal gradient with backtracking; momentum extrapolation with
// function-value restart when config.solver == AccelProxGrad. The restart
// makes the recorded objective sequence non-increasing.
SolverTrace prox_grad(const GroupKernelDesign& design, const ShrinkConfig& config,
                      std::optional<std::vector<Vector>> init = {});

// Cyclic block coordinate gradient descent with the scalar diagonal Hessian
// bound h_j = max diag(K_j^T K_j + lambda1 K_j) and an Armijo line search on
// the full objective.
SolverTrace bcgd(const GroupKernelDesign& design, const ShrinkConfig& config,
                 std::optional<std::vector<Vector>> init = {});

// Cyclic exact block minimization: each block subproblem
//   min 1/2 a^T A_j a + b_j^T a + lambda2 ||a||,  A_j = K_j^T K_j + lambda1 K_j
// is zero when ||b_j|| <= lambda2 and otherwise solved through the secular
// equation ||(t A_j + lambda2 I)^{-1} b_j|| = 1 in the (precomputed)
// eigenbasis of A_j.
SolverTrace exact_bcd(const GroupKernelDesign& design, const ShrinkConfig& config,
                      std::optional<std::vector<Vector>> init = {});

// Subgradient method with steps t_0 / sqrt(k); returns the best iterate seen.
SolverTrace subgradient_solve(const GroupKernelDesign& design, const ShrinkConfig& config,
                              std::optional<std::vector<Vector>> init = {});

// Dispatch on config.solver.
SolverTrace shrink_solve(const GroupKernelDesign& design, const ShrinkConfig& config,
                         std::optional<std::vector<Vector>> init = {});

// { j : ||alpha_j|| > tau }
std::vector<int> selected_groups(std::span<const Vector> alpha, double tau);

// Smallest lambda2 that zeroes every group from a cold start:
// max_j ||K_j^T y||.
double zero_threshold(const GroupKernelDesign& design);

struct LambdaPathResult {
    std::vector<double> lambda2_values;   // as supplied, decreasing
    Matrix group_norms;                   // grid x M block norms
    std::vector<double> final_objectives;
    std::vector<int> iterations;
    std::vector<std::string> termination;
    std::vector<Vector> final_alpha;      // blocks at the last grid point
};

// Solve along a decreasing lambda2 grid with warm starts.
LambdaPathResult lambda_path(const GroupKernelDesign& design, const ShrinkConfig& config,
                             std::span<const double> lambda2_grid);

struct SelectionConfusion {
    int true_positives = 0;
    int false_positives = 0;
    int false_negatives = 0;
    double tpr = 0.0;
    double fpr = 0.0;
};

SelectionConfusion selection_confusion(std::span<const int> selected,
                                       std::span<const int> truth, int total_groups);

// --- design builders -------------------------------------------------------

// All singletons followed by all pairs (i < j), lexicographic.
std::vector<std::vector<int>> singleton_and_pair_groups(int dims);

// Singletons, all pairs within the first `head_dims` coordinates, plus
// `decoy_pairs` seeded random pairs from the remainder. Keeps the
// function-selection benchmark inside a desk-scale memory/time budget.
std::vector<std::vector<int>> restricted_pair_groups(int dims, int head_dims,
                                                     int decoy_pairs, std::uint64_t seed);

// Gaussian product kernels on each group's coordinates. Features are
// standardized and the target centered; bandwidths follow
// h_i = c * sigma_i * n^{-1/5} on the standardized columns.
GroupKernelDesign build_gaussian_group_design(const Matrix& x, const Vector& y,
                                              std::vector<std::vector<int>> groups,
                                              double bandwidth_multiplier = 20.0);

}  // namespace salsa
