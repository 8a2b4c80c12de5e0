#include "salsa/shrink.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include "salsa/rng.hpp"
#include "salsa/salsa.hpp"

namespace salsa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Blockwise state with cached K_j a_j products and the shared residual.
struct ProblemState {
    explicit ProblemState(const GroupKernelDesign& design, double lambda1, double lambda2,
                          std::optional<std::vector<Vector>> init)
        : design(&design), l1(lambda1), l2(lambda2) {
        const long n = design.n();
        const int m = design.group_count();
        if (init) {
            if (static_cast<int>(init->size()) != m) {
                throw DimensionMismatch("shrink: warm start block count mismatch");
            }
            for (const auto& block : *init) {
                if (block.size() != n) {
                    throw DimensionMismatch("shrink: warm start block length mismatch");
                }
            }
            alpha = std::move(*init);
        } else {
            alpha.assign(static_cast<size_t>(m), Vector::Zero(n));
        }
        k_alpha.assign(static_cast<size_t>(m), Vector::Zero(n));
        refresh();
    }

    void refresh() {
        residual = design->y();
        for (int j = 0; j < design->group_count(); ++j) {
            auto& cache = k_alpha[static_cast<size_t>(j)];
            if (alpha[static_cast<size_t>(j)].isZero(0.0)) {
                cache.setZero();
            } else {
                cache.noalias() = design->kernel(j) * alpha[static_cast<size_t>(j)];
            }
            residual -= cache;
        }
    }

    double smooth() const {
        double quad = 0.0;
        for (int j = 0; j < design->group_count(); ++j) {
            quad += alpha[static_cast<size_t>(j)].dot(k_alpha[static_cast<size_t>(j)]);
        }
        return 0.5 * residual.squaredNorm() + 0.5 * l1 * quad;
    }

    double penalty() const {
        double total = 0.0;
        for (const auto& block : alpha) total += block.norm();
        return l2 * total;
    }

    double objective() const { return smooth() + penalty(); }

    // grad_j = lambda1 K_j a_j - K_j r
    Vector block_gradient(int j) const {
        Vector grad = -(design->kernel(j) * residual);
        if (l1 != 0.0) grad += l1 * k_alpha[static_cast<size_t>(j)];
        return grad;
    }

    void set_block(int j, const Vector& value) {
        const Vector delta_k = design->kernel(j) * (value - alpha[static_cast<size_t>(j)]);
        residual -= delta_k;
        k_alpha[static_cast<size_t>(j)] += delta_k;
        alpha[static_cast<size_t>(j)] = value;
    }

    const GroupKernelDesign* design;
    double l1;
    double l2;
    std::vector<Vector> alpha;
    std::vector<Vector> k_alpha;
    Vector residual;
};

double objective_of(std::span<const Vector> alpha, const GroupKernelDesign& design,
                    double l1, double l2) {
    Vector residual = design.y();
    double quad = 0.0;
    double norms = 0.0;
    for (int j = 0; j < design.group_count(); ++j) {
        const Vector& block = alpha[static_cast<size_t>(j)];
        if (!block.isZero(0.0)) {
            const Vector k_block = design.kernel(j) * block;
            residual -= k_block;
            quad += block.dot(k_block);
        }
        norms += block.norm();
    }
    return 0.5 * residual.squaredNorm() + 0.5 * l1 * quad + l2 * norms;
}

struct TraceRecorder {
    explicit TraceRecorder(Clock::time_point start) : start(start) {}

    void record(double objective) {
        trace.objectives.push_back(objective);
        const double best = trace.best_objectives.empty()
                                ? objective
                                : std::min(trace.best_objectives.back(), objective);
        trace.best_objectives.push_back(best);
        trace.elapsed_seconds.push_back(seconds_since(start));
    }

    bool converged(double tol) const {
        const size_t k = trace.objectives.size();
        if (k < 2) return false;
        const double prev = trace.objectives[k - 2];
        const double curr = trace.objectives[k - 1];
        return std::abs(prev - curr) <= tol * (1.0 + std::abs(curr));
    }

    SolverTrace finish(std::vector<Vector> alpha, bool hit_cap) {
        trace.alpha = std::move(alpha);
        trace.termination = hit_cap ? "max-iterations" : "converged";
        trace.final_objective = trace.objectives.back();
        trace.iterations = static_cast<int>(trace.objectives.size()) - 1;
        return std::move(trace);
    }

    SolverTrace trace;
    Clock::time_point start;
};

}  // namespace

GroupKernelDesign::GroupKernelDesign(std::vector<Matrix> kernels, Vector y,
                                     std::vector<std::vector<int>> groups)
    : kernels_(std::move(kernels)), y_(std::move(y)), groups_(std::move(groups)) {
    if (kernels_.empty()) throw EmptyInput("GroupKernelDesign: no kernel matrices");
    if (!groups_.empty() && groups_.size() != kernels_.size()) {
        throw DimensionMismatch("GroupKernelDesign: group descriptor count mismatch");
    }
    const long n = y_.size();
    for (auto& k : kernels_) {
        if (k.rows() != n || k.cols() != n) {
            throw DimensionMismatch("GroupKernelDesign: kernel size must match targets");
        }
        if (!k.allFinite()) throw NonFinite("GroupKernelDesign: non-finite kernel entries");
        if (!is_symmetric(k)) {
            throw NotSymmetric("GroupKernelDesign: kernel not symmetric within 1e-10");
        }
        // Make the symmetry exact; machine-precision asymmetry would leak
        // into gradients.
        k = ((k + k.transpose()) * 0.5).eval();
    }
    if (!y_.allFinite()) throw NonFinite("GroupKernelDesign: non-finite targets");
}

void ShrinkConfig::validate() const {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
        throw ValidationError("ShrinkConfig: lambda1 and lambda2 must be nonnegative");
    }
    if (max_iterations < 1) throw ValidationError("ShrinkConfig: max_iterations must be >= 1");
    if (!(objective_tol >= 0.0)) throw ValidationError("ShrinkConfig: tolerance must be >= 0");
    if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0)) {
        throw ValidationError("ShrinkConfig: backtrack_shrink must be in (0,1)");
    }
    if (!(initial_step > 0.0)) throw ValidationError("ShrinkConfig: initial_step must be > 0");
}

double shrink_objective(std::span<const Vector> alpha, const GroupKernelDesign& design,
                        double lambda1, double lambda2) {
    if (static_cast<int>(alpha.size()) != design.group_count()) {
        throw DimensionMismatch("shrink_objective: block count mismatch");
    }
    for (const auto& block : alpha) {
        if (block.size() != design.n()) {
            throw DimensionMismatch("shrink_objective: block length mismatch");
        }
    }
    return objective_of(alpha, design, lambda1, lambda2);
}

std::vector<Vector> smooth_gradient(std::span<const Vector> alpha,
                                    const GroupKernelDesign& design, double lambda1) {
    if (static_cast<int>(alpha.size()) != design.group_count()) {
        throw DimensionMismatch("smooth_gradient: block count mismatch");
    }
    Vector residual = design.y();
    for (int j = 0; j < design.group_count(); ++j) {
        if (!alpha[static_cast<size_t>(j)].isZero(0.0)) {
            residual -= design.kernel(j) * alpha[static_cast<size_t>(j)];
        }
    }
    std::vector<Vector> grad(alpha.size());
    for (int j = 0; j < design.group_count(); ++j) {
        grad[static_cast<size_t>(j)] =
            design.kernel(j) * (lambda1 * alpha[static_cast<size_t>(j)] - residual);
    }
    return grad;
}

Vector group_prox(const Vector& block, double threshold) {
    if (threshold < 0.0) throw ValidationError("group_prox: threshold must be >= 0");
    if (threshold == 0.0) return block;
    const double norm = block.norm();
    if (norm <= threshold) return Vector::Zero(block.size());
    return block * (1.0 - threshold / norm);
}

namespace {

// One proximal step from z with backtracking on the usual quadratic upper
// bound of G. Returns the accepted candidate and updates the step size.
struct ProxStepResult {
    std::vector<Vector> alpha;
    double step;
};

ProxStepResult prox_step(const GroupKernelDesign& design, double l1, double l2,
                         const std::vector<Vector>& z, double step, double shrink) {
    const int m = design.group_count();

    Vector residual = design.y();
    double quad = 0.0;
    std::vector<Vector> k_z(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        if (z[static_cast<size_t>(j)].isZero(0.0)) {
            k_z[static_cast<size_t>(j)] = Vector::Zero(residual.size());
            continue;
        }
        k_z[static_cast<size_t>(j)].noalias() = design.kernel(j) * z[static_cast<size_t>(j)];
        residual -= k_z[static_cast<size_t>(j)];
        quad += z[static_cast<size_t>(j)].dot(k_z[static_cast<size_t>(j)]);
    }
    const double g_z = 0.5 * residual.squaredNorm() + 0.5 * l1 * quad;

    std::vector<Vector> grad(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        grad[static_cast<size_t>(j)] = -(design.kernel(j) * residual);
        if (l1 != 0.0) grad[static_cast<size_t>(j)] += l1 * k_z[static_cast<size_t>(j)];
    }

    std::vector<Vector> candidate(static_cast<size_t>(m));
    for (int tries = 0; tries < 80; ++tries) {
        double linear = 0.0;
        double sq_dist = 0.0;
        for (int j = 0; j < m; ++j) {
            candidate[static_cast<size_t>(j)] = group_prox(
                z[static_cast<size_t>(j)] - step * grad[static_cast<size_t>(j)], step * l2);
            const Vector diff = candidate[static_cast<size_t>(j)] - z[static_cast<size_t>(j)];
            linear += grad[static_cast<size_t>(j)].dot(diff);
            sq_dist += diff.squaredNorm();
        }

        Vector cand_residual = design.y();
        double cand_quad = 0.0;
        for (int j = 0; j < m; ++j) {
            if (candidate[static_cast<size_t>(j)].isZero(0.0)) continue;
            const Vector k_c = design.kernel(j) * candidate[static_cast<size_t>(j)];
            cand_residual -= k_c;
            cand_quad += candidate[static_cast<size_t>(j)].dot(k_c);
        }
        const double g_candidate = 0.5 * cand_residual.squaredNorm() + 0.5 * l1 * cand_quad;

        if (g_candidate <= g_z + linear + sq_dist / (2.0 * step) + 1e-12 * (1.0 + std::abs(g_z))) {
            return {std::move(candidate), step};
        }
        step *= shrink;
    }
    // Step collapsed; candidate at the final tiny step is still safe.
    return {std::move(candidate), step};
}

}  // namespace

SolverTrace prox_grad(const GroupKernelDesign& design, const ShrinkConfig& config,
                      std::optional<std::vector<Vector>> init) {
    config.validate();
    if (config.solver != ShrinkSolver::ProxGrad && config.solver != ShrinkSolver::AccelProxGrad) {
        throw ValidationError("prox_grad: config.solver must be ProxGrad or AccelProxGrad");
    }
    const bool accelerated = config.solver == ShrinkSolver::AccelProxGrad;
    const auto start = Clock::now();

    ProblemState state(design, config.lambda1, config.lambda2, std::move(init));
    TraceRecorder recorder(start);
    recorder.record(state.objective());

    std::vector<Vector> previous = state.alpha;
    double theta = 1.0;
    double step = config.initial_step;
    bool hit_cap = true;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        std::vector<Vector> z = state.alpha;
        if (accelerated && theta > 1.0) {
            const double momentum = (theta - 1.0) /
                                    (0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)));
            for (size_t j = 0; j < z.size(); ++j) {
                z[j] += momentum * (state.alpha[j] - previous[j]);
            }
        }

        ProxStepResult result =
            prox_step(design, config.lambda1, config.lambda2, z, step, config.backtrack_shrink);
        step = result.step;

        double candidate_objective =
            objective_of(result.alpha, design, config.lambda1, config.lambda2);
        const double current = recorder.trace.objectives.back();
        if (accelerated && candidate_objective > current) {
            // Function-value restart: drop the momentum and redo the step
            // from the current iterate, which cannot increase F.
            theta = 1.0;
            result = prox_step(design, config.lambda1, config.lambda2, state.alpha, step,
                               config.backtrack_shrink);
            step = result.step;
            candidate_objective =
                objective_of(result.alpha, design, config.lambda1, config.lambda2);
        }

        previous = std::move(state.alpha);
        state.alpha = std::move(result.alpha);
        state.refresh();
        if (accelerated) theta = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));

        recorder.record(candidate_objective);
        if (recorder.converged(config.objective_tol)) {
            hit_cap = false;
            break;
        }
    }
    SolverTrace trace = recorder.finish(std::move(state.alpha), hit_cap);
    trace.final_step = step;
    return trace;
}

SolverTrace bcgd(const GroupKernelDesign& design, const ShrinkConfig& config,
                 std::optional<std::vector<Vector>> init) {
    config.validate();
    if (config.solver != ShrinkSolver::Bcgd) {
        throw ValidationError("bcgd: config.solver must be Bcgd");
    }
    const auto start = Clock::now();
    const int m = design.group_count();

    // h_j = max diag(K_j^T K_j + lambda1 K_j); scalar model Hessian per block
    std::vector<double> h(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const Matrix& k = design.kernel(j);
        double peak = 0.0;
        for (long i = 0; i < k.cols(); ++i) {
            peak = std::max(peak, k.col(i).squaredNorm() + config.lambda1 * k(i, i));
        }
        h[static_cast<size_t>(j)] = std::max(peak, 1e-12);
    }

    ProblemState state(design, config.lambda1, config.lambda2, std::move(init));
    TraceRecorder recorder(start);
    recorder.record(state.objective());
    bool hit_cap = true;

    for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
        for (int j = 0; j < m; ++j) {
            const Vector& block = state.alpha[static_cast<size_t>(j)];
            const double hj = h[static_cast<size_t>(j)];
            const Vector grad = state.block_gradient(j);
            const Vector target = group_prox(block - grad / hj, config.lambda2 / hj);
            const Vector direction = target - block;
            const double dir_norm = direction.norm();
            if (dir_norm <= 1e-15 * (1.0 + block.norm())) continue;

            const double model_decrease =
                grad.dot(direction) +
                config.lambda2 * (target.norm() - block.norm());
            if (model_decrease >= 0.0) continue;

            // Armijo on the true objective; only block j changes, so the
            // objective delta is computable from cached products.
            const Vector k_dir = design.kernel(j) * direction;
            const double quad_cross = direction.dot(state.k_alpha[static_cast<size_t>(j)]);
            const double quad_self = direction.dot(k_dir);  // d^T K d
            const double k_dir_sq = k_dir.squaredNorm();    // d^T K^2 d
            const double res_cross = state.residual.dot(k_dir);

            double t = 1.0;
            bool accepted = false;
            for (int tries = 0; tries < 60; ++tries) {
                const double delta_g = -t * res_cross + 0.5 * t * t * k_dir_sq +
                                       0.5 * config.lambda1 *
                                           (2.0 * t * quad_cross + t * t * quad_self);
                const double delta_psi =
                    config.lambda2 * ((block + t * direction).norm() - block.norm());
                if (delta_g + delta_psi <= 0.1 * t * model_decrease) {
                    accepted = true;
                    break;
                }
                t *= config.backtrack_shrink;
            }
            if (!accepted) continue;
            state.set_block(j, block + t * direction);
        }
        if (sweep % 64 == 63) state.refresh();  // limit incremental-update drift
        recorder.record(state.objective());
        if (recorder.converged(config.objective_tol)) {
            hit_cap = false;
            break;
        }
    }
    return recorder.finish(std::move(state.alpha), hit_cap);
}

namespace {

// Root of ||(t A + lambda2 I)^{-1} b|| = 1 for t > 0, written in the
// eigenbasis of A: phi(t) = sum_k c_k^2 / (t mu_k + lambda2)^2 - 1. phi is
// convex and decreasing, so Newton from the left converges monotonically;
// a bisection bracket guards the first steps.
double solve_secular(const Vector& c, const Vector& mu, double lambda2) {
    auto phi = [&](double t) {
        double sum = 0.0;
        for (long k = 0; k < c.size(); ++k) {
            const double denom = t * mu[k] + lambda2;
            sum += (c[k] * c[k]) / (denom * denom);
        }
        return sum - 1.0;
    };
    auto dphi = [&](double t) {
        double sum = 0.0;
        for (long k = 0; k < c.size(); ++k) {
            const double denom = t * mu[k] + lambda2;
            sum += -2.0 * mu[k] * (c[k] * c[k]) / (denom * denom * denom);
        }
        return sum;
    };

    double hi = 1.0;
    int expansions = 0;
    while (phi(hi) > 0.0) {
        hi *= 2.0;
        if (++expansions > 300) {
            throw NoConvergence("exact_bcd: secular equation has no finite root");
        }
    }
    double lo = 0.0;
    double t = hi * 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double value = phi(t);
        if (std::abs(value) <= 1e-13) return t;
        if (value > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        const double slope = dphi(t);
        double next = (slope < 0.0) ? t - value / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * (1.0 + t)) return next;
        t = next;
    }
    return t;
}

}  // namespace

SolverTrace exact_bcd(const GroupKernelDesign& design, const ShrinkConfig& config,
                      std::optional<std::vector<Vector>> init) {
    config.validate();
    if (config.solver != ShrinkSolver::ExactBcd) {
        throw ValidationError("exact_bcd: config.solver must be ExactBcd");
    }
    const auto start = Clock::now();
    const int m = design.group_count();
    const long n = design.n();

    // A_j = K_j^T K_j + lambda1 K_j is symmetric PSD; its eigendecomposition
    // is constant across sweeps, so compute it once. Tiny negative
    // eigenvalues from roundoff are clipped.
    std::vector<Matrix> basis(static_cast<size_t>(m));
    std::vector<Vector> eigvals(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const Matrix& k = design.kernel(j);
        Matrix a = k.transpose() * k;
        if (config.lambda1 != 0.0) a += config.lambda1 * k;
        a = ((a + a.transpose()) * 0.5).eval();
        SymmetricEigen eig = eigen_sym(a);
        for (long i = 0; i < eig.values.size(); ++i) {
            if (eig.values[i] < 0.0) eig.values[i] = 0.0;
        }
        basis[static_cast<size_t>(j)] = std::move(eig.vectors);
        eigvals[static_cast<size_t>(j)] = std::move(eig.values);
    }

    ProblemState state(design, config.lambda1, config.lambda2, std::move(init));
    TraceRecorder recorder(start);
    recorder.record(state.objective());
    bool hit_cap = true;

    for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
        for (int j = 0; j < m; ++j) {
            const Vector residual_minus_j =
                state.residual + state.k_alpha[static_cast<size_t>(j)];
            const Vector b = -(design.kernel(j) * residual_minus_j);
            const double b_norm = b.norm();

            Vector block;
            if (b_norm <= config.lambda2) {
                block = Vector::Zero(n);
            } else if (config.lambda2 == 0.0) {
                // Pure quadratic block: pseudo-inverse solve in the eigenbasis.
                const Vector c = basis[static_cast<size_t>(j)].transpose() * b;
                Vector scaled(n);
                const double floor =
                    1e-12 * std::max(1.0, eigvals[static_cast<size_t>(j)].maxCoeff());
                for (long i = 0; i < n; ++i) {
                    const double mu = eigvals[static_cast<size_t>(j)][i];
                    scaled[i] = (mu > floor) ? -c[i] / mu : 0.0;
                }
                block = basis[static_cast<size_t>(j)] * scaled;
            } else {
                const Vector c = basis[static_cast<size_t>(j)].transpose() * b;
                const double t =
                    solve_secular(c, eigvals[static_cast<size_t>(j)], config.lambda2);
                Vector scaled(n);
                for (long i = 0; i < n; ++i) {
                    scaled[i] = -t * c[i] / (t * eigvals[static_cast<size_t>(j)][i] + config.lambda2);
                }
                block = basis[static_cast<size_t>(j)] * scaled;
            }
            state.set_block(j, block);
        }
        if (sweep % 64 == 63) state.refresh();
        recorder.record(state.objective());
        if (recorder.converged(config.objective_tol)) {
            hit_cap = false;
            break;
        }
    }
    return recorder.finish(std::move(state.alpha), hit_cap);
}

SolverTrace subgradient_solve(const GroupKernelDesign& design, const ShrinkConfig& config,
                              std::optional<std::vector<Vector>> init) {
    config.validate();
    if (config.solver != ShrinkSolver::Subgradient) {
        throw ValidationError("subgradient_solve: config.solver must be Subgradient");
    }
    const auto start = Clock::now();
    const int m = design.group_count();

    ProblemState state(design, config.lambda1, config.lambda2, std::move(init));
    TraceRecorder recorder(start);
    recorder.record(state.objective());

    std::vector<Vector> best_alpha = state.alpha;
    double best_objective = recorder.trace.objectives.back();
    bool hit_cap = true;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const double step = config.initial_step / std::sqrt(static_cast<double>(iter));
        for (int j = 0; j < m; ++j) {
            Vector g = state.block_gradient(j);
            const double norm = state.alpha[static_cast<size_t>(j)].norm();
            // Subgradient of the norm at zero blocks is taken as 0.
            if (norm > 0.0) {
                g += (config.lambda2 / norm) * state.alpha[static_cast<size_t>(j)];
            }
            state.alpha[static_cast<size_t>(j)] -= step * g;
        }
        state.refresh();
        const double objective = state.objective();
        if (objective < best_objective) {
            best_objective = objective;
            best_alpha = state.alpha;
        }
        recorder.record(objective);
        if (recorder.converged(config.objective_tol)) {
            hit_cap = false;
            break;
        }
    }
    return recorder.finish(std::move(best_alpha), hit_cap);
}

SolverTrace shrink_solve(const GroupKernelDesign& design, const ShrinkConfig& config,
                         std::optional<std::vector<Vector>> init) {
    switch (config.solver) {
        case ShrinkSolver::Subgradient:
            return subgradient_solve(design, config, std::move(init));
        case ShrinkSolver::ProxGrad:
        case ShrinkSolver::AccelProxGrad:
            return prox_grad(design, config, std::move(init));
        case ShrinkSolver::Bcgd:
            return bcgd(design, config, std::move(init));
        case ShrinkSolver::ExactBcd:
            return exact_bcd(design, config, std::move(init));
    }
    throw ValidationError("shrink_solve: unknown solver");
}

std::vector<int> selected_groups(std::span<const Vector> alpha, double tau) {
    if (tau < 0.0) throw ValidationError("selected_groups: tau must be >= 0");
    std::vector<int> selected;
    for (size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j].norm() > tau) selected.push_back(static_cast<int>(j));
    }
    return selected;
}

double zero_threshold(const GroupKernelDesign& design) {
    double peak = 0.0;
    for (int j = 0; j < design.group_count(); ++j) {
        peak = std::max(peak, (design.kernel(j).transpose() * design.y()).norm());
    }
    return peak;
}

LambdaPathResult lambda_path(const GroupKernelDesign& design, const ShrinkConfig& config,
                             std::span<const double> lambda2_grid) {
    if (lambda2_grid.empty()) throw EmptyGrid("lambda_path: empty grid");
    for (size_t i = 1; i < lambda2_grid.size(); ++i) {
        if (!(lambda2_grid[i] < lambda2_grid[i - 1])) {
            throw ValidationError("lambda_path: grid must be strictly decreasing");
        }
    }

    LambdaPathResult result;
    const int m = design.group_count();
    result.lambda2_values.assign(lambda2_grid.begin(), lambda2_grid.end());
    result.group_norms.resize(static_cast<long>(lambda2_grid.size()), m);

    std::optional<std::vector<Vector>> warm;
    for (size_t i = 0; i < lambda2_grid.size(); ++i) {
        ShrinkConfig point = config;
        point.lambda2 = lambda2_grid[i];
        SolverTrace trace = shrink_solve(design, point, std::move(warm));
        for (int j = 0; j < m; ++j) {
            result.group_norms(static_cast<long>(i), j) =
                trace.alpha[static_cast<size_t>(j)].norm();
        }
        result.final_objectives.push_back(trace.final_objective);
        result.iterations.push_back(trace.iterations);
        result.termination.push_back(trace.termination);
        warm = trace.alpha;
        if (i + 1 == lambda2_grid.size()) result.final_alpha = std::move(trace.alpha);
    }
    return result;
}

SelectionConfusion selection_confusion(std::span<const int> selected,
                                       std::span<const int> truth, int total_groups) {
    const std::set<int> truth_set(truth.begin(), truth.end());
    SelectionConfusion out;
    for (int j : selected) {
        if (truth_set.count(j)) {
            ++out.true_positives;
        } else {
            ++out.false_positives;
        }
    }
    out.false_negatives = static_cast<int>(truth_set.size()) - out.true_positives;
    const int negatives = total_groups - static_cast<int>(truth_set.size());
    out.tpr = truth_set.empty()
                  ? 0.0
                  : static_cast<double>(out.true_positives) / static_cast<double>(truth_set.size());
    out.fpr = negatives <= 0
                  ? 0.0
                  : static_cast<double>(out.false_positives) / static_cast<double>(negatives);
    return out;
}

std::vector<std::vector<int>> singleton_and_pair_groups(int dims) {
    if (dims < 1) throw ValidationError("singleton_and_pair_groups: dims must be >= 1");
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < dims; ++i) groups.push_back({i});
    for (int i = 0; i < dims; ++i) {
        for (int j = i + 1; j < dims; ++j) groups.push_back({i, j});
    }
    return groups;
}

std::vector<std::vector<int>> restricted_pair_groups(int dims, int head_dims,
                                                     int decoy_pairs, std::uint64_t seed) {
    if (head_dims < 0 || head_dims > dims) {
        throw ValidationError("restricted_pair_groups: head_dims out of range");
    }
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < dims; ++i) groups.push_back({i});
    std::set<std::pair<int, int>> chosen;
    for (int i = 0; i < head_dims; ++i) {
        for (int j = i + 1; j < head_dims; ++j) chosen.insert({i, j});
    }
    auto stream = substream(seed, 0xDEC);
    int guard = 0;
    while (static_cast<int>(chosen.size()) < decoy_pairs + head_dims * (head_dims - 1) / 2) {
        const int i = static_cast<int>(stream.below(static_cast<std::uint64_t>(dims)));
        const int j = static_cast<int>(stream.below(static_cast<std::uint64_t>(dims)));
        if (i != j) chosen.insert({std::min(i, j), std::max(i, j)});
        if (++guard > 1000000) break;
    }
    for (const auto& [i, j] : chosen) groups.push_back({i, j});
    return groups;
}

GroupKernelDesign build_gaussian_group_design(const Matrix& x, const Vector& y,
                                              std::vector<std::vector<int>> groups,
                                              double bandwidth_multiplier) {
    const long n = x.rows();
    if (y.size() != n) throw DimensionMismatch("build_gaussian_group_design: X/Y mismatch");
    if (groups.empty()) throw EmptyInput("build_gaussian_group_design: no groups");
    const double bytes = static_cast<double>(groups.size()) * static_cast<double>(n) *
                         static_cast<double>(n) * 8.0;
    if (bytes > 4e9) {
        throw TooLarge("build_gaussian_group_design: kernel storage above 4 GB; "
                       "restrict the group set");
    }

    // Standardize features, center the target; bandwidths on the
    // standardized columns.
    Vector mean(x.cols());
    Vector sd(x.cols());
    for (long c = 0; c < x.cols(); ++c) {
        mean[c] = x.col(c).mean();
        sd[c] = std::sqrt((x.col(c).array() - mean[c]).square().mean());
        if (sd[c] == 0.0 || x.col(c).minCoeff() == x.col(c).maxCoeff()) {
            throw DegenerateColumn("build_gaussian_group_design: constant column " +
                                   std::to_string(c));
        }
    }
    Matrix xn = (x.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
    Vector y_centered = y.array() - y.mean();
    const Vector h = compute_bandwidths(xn, bandwidth_multiplier);

    std::vector<Matrix> kernels;
    kernels.reserve(groups.size());
    for (const auto& group : groups) {
        for (int c : group) {
            if (c < 0 || c >= x.cols()) {
                throw BadSubset("build_gaussian_group_design: coordinate out of range");
            }
        }
        Matrix k(n, n);
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j <= i; ++j) {
                double log_value = 0.0;
                for (int c : group) {
                    const double diff = xn(i, c) - xn(j, c);
                    log_value -= diff * diff / (2.0 * h[c] * h[c]);
                }
                const double value = std::exp(log_value);
                k(i, j) = value;
                k(j, i) = value;
            }
        }
        kernels.push_back(std::move(k));
    }
    return GroupKernelDesign(std::move(kernels), std::move(y_centered), std::move(groups));
}

}  // namespace salsa
