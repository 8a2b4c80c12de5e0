#include <doctest.h>

#include <cmath>
#include <salsa/linalg.hpp>
#include <salsa/shrink.hpp>
#include <set>

#include "test_support.hpp"

using namespace salsa;

namespace {

// Well-conditioned PSD group kernels plus a random target.
GroupKernelDesign random_design(long n, int groups, std::uint64_t seed, double ridge = 0.5) {
    std::vector<Matrix> kernels;
    std::vector<std::vector<int>> descriptors;
    for (int j = 0; j < groups; ++j) {
        kernels.push_back(testsup::random_spd(n, seed + static_cast<std::uint64_t>(j), ridge));
        descriptors.push_back({j});
    }
    Vector y = testsup::random_vector(n, seed + 1000);
    return GroupKernelDesign(std::move(kernels), std::move(y), std::move(descriptors));
}

ShrinkConfig config_for(ShrinkSolver solver, double l1, double l2, int iters = 2000,
                        double tol = 1e-12) {
    ShrinkConfig config;
    config.solver = solver;
    config.lambda1 = l1;
    config.lambda2 = l2;
    config.max_iterations = iters;
    config.objective_tol = tol;
    return config;
}

void check_monotone(const SolverTrace& trace) {
    for (size_t i = 1; i < trace.objectives.size(); ++i) {
        CHECK(trace.objectives[i] <=
              trace.objectives[i - 1] + 1e-12 * (1.0 + std::abs(trace.objectives[i - 1])));
    }
}

}  // namespace

TEST_CASE("objective value basics") {
    const GroupKernelDesign design = random_design(10, 3, 1);
    const std::vector<Vector> zero(3, Vector::Zero(10));
    CHECK(shrink_objective(zero, design, 0.3, 0.7) ==
          doctest::Approx(0.5 * design.y().squaredNorm()).epsilon(1e-12));

    // exact interpolation with a single invertible kernel
    const GroupKernelDesign single = random_design(8, 1, 2);
    const Vector alpha = solve_spd(cholesky_factor(single.kernel(0)), single.y());
    const std::vector<Vector> blocks{alpha};
    CHECK(shrink_objective(blocks, single, 0.0, 0.0) <=
          1e-16 * single.y().squaredNorm() + 1e-18);
}

TEST_CASE("objective is quadratically homogeneous when lambda2 = 0") {
    const GroupKernelDesign base = random_design(9, 2, 3);
    std::vector<Vector> alpha{testsup::random_vector(9, 31), testsup::random_vector(9, 32)};
    const double f1 = shrink_objective(alpha, base, 0.4, 0.0);

    const double t = 2.5;
    std::vector<Matrix> kernels{base.kernel(0), base.kernel(1)};
    GroupKernelDesign scaled(std::move(kernels), t * base.y(), base.groups());
    for (auto& block : alpha) block *= t;
    const double f2 = shrink_objective(alpha, scaled, 0.4, 0.0);
    CHECK(f2 == doctest::Approx(t * t * f1).epsilon(1e-10));
}

TEST_CASE("group prox is the group soft threshold") {
    Vector v(2);
    v << 3.0, 4.0;
    CHECK(group_prox(v, 5.0).norm() == 0.0);
    CHECK(group_prox(v, 6.0).norm() == 0.0);
    CHECK(group_prox(v, 0.0) == v);

    const Vector shrunk = group_prox(v, 1.0);
    CHECK(shrunk[0] == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(shrunk[1] == doctest::Approx(3.2).epsilon(1e-12));

    SplitMix64 rng(404);
    for (int rep = 0; rep < 30; ++rep) {
        const Vector block = testsup::random_vector(6, rng.next());
        const double threshold = rng.uniform(0.0, 2.0);
        const Vector out = group_prox(block, threshold);
        CHECK(out.norm() ==
              doctest::Approx(std::max(0.0, block.norm() - threshold)).epsilon(1e-12));
        if (out.norm() > 0.0) {
            // parallel to the input
            CHECK((out / out.norm() - block / block.norm()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    CHECK_THROWS_AS(group_prox(v, -1.0), ValidationError);
}

TEST_CASE("smooth gradient matches central finite differences") {
    SplitMix64 rng(77);
    for (int rep = 0; rep < 4; ++rep) {
        const long n = 6 + static_cast<long>(rng.below(10));  // <= 15
        const int m = 2 + static_cast<int>(rng.below(3));     // <= 4
        const GroupKernelDesign design = random_design(n, m, rng.next());
        const double l1 = rng.uniform(0.0, 1.0);

        std::vector<Vector> alpha;
        for (int j = 0; j < m; ++j) alpha.push_back(testsup::random_vector(n, rng.next()));
        const auto grad = smooth_gradient(alpha, design, l1);

        const double step = 1e-5;
        for (int j = 0; j < m; ++j) {
            for (long i = 0; i < n; ++i) {
                auto plus = alpha;
                auto minus = alpha;
                plus[static_cast<size_t>(j)][i] += step;
                minus[static_cast<size_t>(j)][i] -= step;
                const double fd = (shrink_objective(plus, design, l1, 0.0) -
                                   shrink_objective(minus, design, l1, 0.0)) /
                                  (2.0 * step);
                const double analytic = grad[static_cast<size_t>(j)][i];
                CHECK(std::abs(fd - analytic) <= 1e-5 * (1.0 + std::abs(analytic)));
            }
        }
    }
}

TEST_CASE("huge lambda2 kills every block immediately") {
    const GroupKernelDesign design = random_design(12, 4, 9);
    const double lambda2 = 1.01 * zero_threshold(design);

    for (ShrinkSolver solver : {ShrinkSolver::ProxGrad, ShrinkSolver::AccelProxGrad,
                                ShrinkSolver::Bcgd, ShrinkSolver::ExactBcd,
                                ShrinkSolver::Subgradient}) {
        const SolverTrace trace =
            shrink_solve(design, config_for(solver, 0.1, lambda2, 200));
        for (const auto& block : trace.alpha) {
            CHECK(block.cwiseAbs().maxCoeff() == 0.0);
        }
        if (solver == ShrinkSolver::ProxGrad || solver == ShrinkSolver::AccelProxGrad) {
            CHECK(trace.iterations <= 2);
        }
    }
}

TEST_CASE("unpenalized single-kernel problem reaches the interpolation floor") {
    const GroupKernelDesign design = random_design(10, 1, 11, 1.0);
    const double y_scale = 0.5 * design.y().squaredNorm();
    const SolverTrace trace =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, 0.0, 0.0, 4000));
    CHECK(trace.final_objective <= 1e-6 * (1.0 + y_scale));
    check_monotone(trace);
}

TEST_CASE("prox-gradient trace is monotone on a selection-style instance") {
    // moderate instance in the style of the 50-dimensional selection model
    const Matrix x = testsup::random_matrix(60, 8, 21);
    Vector y(60);
    for (long i = 0; i < 60; ++i) y[i] = std::sin(2.0 * x(i, 0)) + x(i, 1) * x(i, 1);
    const auto groups = singleton_and_pair_groups(8);
    const GroupKernelDesign design = build_gaussian_group_design(x, y, groups, 20.0);
    const double lambda2 = 0.05 * zero_threshold(design);

    const SolverTrace accel =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, 1e-3, lambda2, 300));
    check_monotone(accel);
    const SolverTrace plain =
        prox_grad(design, config_for(ShrinkSolver::ProxGrad, 1e-3, lambda2, 300));
    check_monotone(plain);
}

TEST_CASE("prox fixed point holds at convergence") {
    const GroupKernelDesign design = random_design(14, 3, 23);
    const double lambda2 = 0.1 * zero_threshold(design);
    const SolverTrace trace =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, 0.2, lambda2, 5000, 1e-13));
    REQUIRE(trace.termination == "converged");
    REQUIRE(trace.final_step > 0.0);

    const auto grad = smooth_gradient(trace.alpha, design, 0.2);
    double residual = 0.0;
    double alpha_norm = 0.0;
    for (size_t j = 0; j < trace.alpha.size(); ++j) {
        const Vector stepped =
            group_prox(trace.alpha[j] - trace.final_step * grad[j], trace.final_step * lambda2);
        residual += (trace.alpha[j] - stepped).squaredNorm();
        alpha_norm += trace.alpha[j].squaredNorm();
    }
    CHECK(std::sqrt(residual) <= 1e-5 * (1.0 + std::sqrt(alpha_norm)));
}

TEST_CASE("bcgd with an identity kernel lands on the block minimizer in one sweep") {
    // For K = I the scalar model h = 1 + lambda1 is the exact Hessian, so the
    // first update solves min 1/2|y-a|^2 + (l1/2)|a|^2 + l2|a| outright.
    const long n = 7;
    const double l1 = 2.0;
    const double l2 = 0.8;
    Vector y = testsup::random_vector(n, 29);
    y *= 3.0;
    std::vector<Matrix> kernels{Matrix::Identity(n, n)};
    GroupKernelDesign design(std::move(kernels), y, {{0}});

    const Vector expected = group_prox(y, l2) / (1.0 + l1);
    const SolverTrace trace = bcgd(design, config_for(ShrinkSolver::Bcgd, l1, l2, 1));
    REQUIRE(trace.alpha.size() == 1);
    CHECK((trace.alpha[0] - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exact bcd zero test and identity-kernel secular solution") {
    const long n = 6;
    Vector y = testsup::random_vector(n, 33);
    std::vector<Matrix> kernels{Matrix::Identity(n, n)};

    SUBCASE("block is zeroed when the data term is weak") {
        GroupKernelDesign design(kernels, y, {{0}});
        const double lambda2 = y.norm() / 0.9;  // ||b|| = ||y|| = 0.9 lambda2
        const SolverTrace trace =
            exact_bcd(design, config_for(ShrinkSolver::ExactBcd, 0.0, lambda2, 3));
        CHECK(trace.alpha[0].cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("A = I gives the soft-threshold solution") {
        GroupKernelDesign design(kernels, y, {{0}});
        const double lambda2 = 0.4 * y.norm();
        const SolverTrace trace =
            exact_bcd(design, config_for(ShrinkSolver::ExactBcd, 0.0, lambda2, 3));
        const Vector expected = group_prox(y, lambda2);  // t = |y| - l2 along y
        CHECK((trace.alpha[0] - expected).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(trace.alpha[0].norm() ==
              doctest::Approx(y.norm() - lambda2).epsilon(1e-10));
    }
}

TEST_CASE("single-block exact solve is already globally optimal") {
    const GroupKernelDesign design = random_design(12, 1, 35);
    const double lambda2 = 0.2 * zero_threshold(design);
    const SolverTrace one_shot =
        exact_bcd(design, config_for(ShrinkSolver::ExactBcd, 0.3, lambda2, 2));
    const SolverTrace long_run =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, 0.3, lambda2, 20000, 1e-14));
    CHECK(one_shot.final_objective <=
          long_run.final_objective + 1e-8 * (1.0 + std::abs(long_run.final_objective)));
    CHECK(std::abs(one_shot.final_objective - long_run.final_objective) <=
          1e-6 * (1.0 + std::abs(long_run.final_objective)));
}

TEST_CASE("solvers agree on a shared 20x20 instance") {
    const GroupKernelDesign design = random_design(20, 5, 37);
    const double l1 = 0.1;
    const double lambda2 = 0.15 * zero_threshold(design);

    const SolverTrace accel =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, l1, lambda2, 6000, 1e-13));
    const SolverTrace cgd = bcgd(design, config_for(ShrinkSolver::Bcgd, l1, lambda2, 4000, 1e-13));
    const SolverTrace exact =
        exact_bcd(design, config_for(ShrinkSolver::ExactBcd, l1, lambda2, 400, 1e-13));

    check_monotone(accel);
    check_monotone(cgd);
    check_monotone(exact);

    const double reference = exact.final_objective;
    CHECK(std::abs(accel.final_objective - reference) <= 1e-4 * (1.0 + std::abs(reference)));
    CHECK(std::abs(cgd.final_objective - reference) <= 1e-4 * (1.0 + std::abs(reference)));
}

TEST_CASE("subgradient method approaches the smooth optimum slowly") {
    const GroupKernelDesign design = random_design(20, 3, 39);
    ShrinkConfig sub = config_for(ShrinkSolver::Subgradient, 0.05, 0.0, 5000, 0.0);
    sub.initial_step = 0.5;
    const SolverTrace trace = subgradient_solve(design, sub);
    const SolverTrace reference =
        prox_grad(design, config_for(ShrinkSolver::AccelProxGrad, 0.05, 0.0, 6000, 1e-13));
    CHECK(trace.best_objectives.back() <=
          reference.final_objective + 1e-2 * (1.0 + std::abs(reference.final_objective)));

    // running best is non-increasing by construction
    for (size_t i = 1; i < trace.best_objectives.size(); ++i) {
        CHECK(trace.best_objectives[i] <= trace.best_objectives[i - 1]);
    }
}

TEST_CASE("subgradient stays at a stationary zero start") {
    const long n = 5;
    std::vector<Matrix> kernels{Matrix::Identity(n, n)};
    GroupKernelDesign design(std::move(kernels), Vector::Zero(n), {{0}});
    const SolverTrace trace =
        subgradient_solve(design, config_for(ShrinkSolver::Subgradient, 0.0, 0.3, 50, 0.0));
    CHECK(trace.alpha[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("selected groups thresholding") {
    std::vector<Vector> alpha{Vector::Zero(4), Vector::Ones(4), Vector::Zero(4)};
    CHECK(selected_groups(alpha, 0.0) == std::vector<int>{1});
    alpha[1].setZero();
    CHECK(selected_groups(alpha, 0.0).empty());
    CHECK_THROWS_AS(selected_groups(alpha, -0.5), ValidationError);
}

TEST_CASE("lambda path: kill threshold, warm starts, and the unpenalized end") {
    const GroupKernelDesign design = random_design(15, 4, 41, 1.0);
    const double top = zero_threshold(design);
    const std::vector<double> grid{1.1 * top, 0.4 * top, 0.1 * top, 0.0};

    ShrinkConfig config = config_for(ShrinkSolver::AccelProxGrad, 0.05, 0.0, 6000, 1e-13);
    const LambdaPathResult path = lambda_path(design, config, grid);
    REQUIRE(path.group_norms.rows() == 4);

    // above the threshold everything is zero
    CHECK(path.group_norms.row(0).maxCoeff() == 0.0);

    // reproducible
    const LambdaPathResult again = lambda_path(design, config, grid);
    CHECK(path.group_norms == again.group_norms);

    // the lambda2 = 0 row matches a direct unpenalized solve
    const SolverTrace direct =
        exact_bcd(design, config_for(ShrinkSolver::ExactBcd, 0.05, 0.0, 500, 1e-14));
    for (int j = 0; j < 4; ++j) {
        const double from_path = path.group_norms(3, j);
        const double from_direct = direct.alpha[static_cast<size_t>(j)].norm();
        CHECK(std::abs(from_path - from_direct) <= 1e-3 * (1.0 + from_direct));
    }

    CHECK_THROWS_AS(lambda_path(design, config, std::vector<double>{1.0, 1.0}),
                    ValidationError);
    CHECK_THROWS_AS(lambda_path(design, config, std::vector<double>{}), EmptyGrid);
}

TEST_CASE("selection confusion accounting") {
    const std::vector<int> truth{0, 1, 2, 3};
    const std::vector<int> selected{0, 1, 2, 3, 7, 9};
    const SelectionConfusion confusion = selection_confusion(selected, truth, 104);
    CHECK(confusion.true_positives == 4);
    CHECK(confusion.false_positives == 2);
    CHECK(confusion.false_negatives == 0);
    CHECK(confusion.tpr == 1.0);
    CHECK(confusion.fpr == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("group construction helpers") {
    const auto all = singleton_and_pair_groups(5);
    CHECK(all.size() == 5 + 10);
    CHECK(all[5] == std::vector<int>{0, 1});

    const auto restricted = restricted_pair_groups(50, 12, 54, 7);
    CHECK(restricted.size() == 50 + 66 + 54);
    // pairs are distinct and ordered
    std::set<std::pair<int, int>> seen;
    for (size_t g = 50; g < restricted.size(); ++g) {
        REQUIRE(restricted[g].size() == 2);
        CHECK(restricted[g][0] < restricted[g][1]);
        seen.insert({restricted[g][0], restricted[g][1]});
    }
    CHECK(seen.size() == 120);
}

TEST_CASE("gaussian group design has unit diagonal and symmetric kernels") {
    const Matrix x = testsup::random_matrix(25, 6, 43);
    const Vector y = testsup::random_vector(25, 44);
    const auto design =
        build_gaussian_group_design(x, y, {{0}, {1, 2}, {3, 4, 5}}, 20.0);
    CHECK(design.group_count() == 3);
    for (int j = 0; j < 3; ++j) {
        const Matrix& k = design.kernel(j);
        CHECK(k == Matrix(k.transpose()));
        for (long i = 0; i < 25; ++i) CHECK(k(i, i) == 1.0);
        CHECK(k.minCoeff() > 0.0);
        CHECK(k.maxCoeff() <= 1.0);
    }
    CHECK(std::abs(design.y().mean()) <= 1e-12);

    Matrix constant = x;
    constant.col(2).setConstant(1.0);
    CHECK_THROWS_AS(build_gaussian_group_design(constant, y, {{0}, {2}}, 20.0),
                    DegenerateColumn);
}

TEST_CASE("design and config validation") {
    CHECK_THROWS_AS(GroupKernelDesign({}, Vector::Ones(3), {}), EmptyInput);
    std::vector<Matrix> wrong{Matrix::Identity(2, 2)};
    CHECK_THROWS_AS(GroupKernelDesign(wrong, Vector::Ones(3), {{0}}), DimensionMismatch);
    Matrix asym(3, 3);
    asym << 1, 2, 3, 0, 1, 2, 0, 0, 1;
    CHECK_THROWS_AS(GroupKernelDesign({asym}, Vector::Ones(3), {{0}}), NotSymmetric);

    ShrinkConfig bad;
    bad.lambda2 = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = ShrinkConfig{};
    bad.backtrack_shrink = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    const GroupKernelDesign design = random_design(5, 2, 45);
    ShrinkConfig mismatched;
    mismatched.solver = ShrinkSolver::Bcgd;
    CHECK_THROWS_AS(prox_grad(design, mismatched), ValidationError);
}
