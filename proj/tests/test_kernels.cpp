#include <doctest.h>

#include <cmath>
#include <salsa/combinatorics.hpp>
#include <salsa/kernels.hpp>

#include "test_support.hpp"

using namespace salsa;

namespace {

EspKernelSpec unit_spec(int dims, int order,
                        KernelVariant variant = KernelVariant::ExactOrder) {
    return EspKernelSpec(order, Vector::Ones(dims), 1.0, variant);
}

// Independent route for all ESPs of s: expand prod_i (1 + s_i t) coefficient
// by coefficient. Every operation is a positive add, so there is no
// cancellation; good reference for large D where enumeration is infeasible.
std::vector<double> esp_by_expansion(const std::vector<double>& s, int order) {
    std::vector<double> e(static_cast<size_t>(order) + 1, 0.0);
    e[0] = 1.0;
    int filled = 0;
    for (double value : s) {
        filled = std::min(filled + 1, order);
        for (int m = filled; m >= 1; --m) {
            e[static_cast<size_t>(m)] += value * e[static_cast<size_t>(m) - 1];
        }
    }
    return e;
}

}  // namespace

TEST_CASE("base kernel values at zero distance are all one") {
    const auto spec = unit_spec(4, 2);
    const Vector x = testsup::random_vector(4, 3);
    const Vector s = base_kernel_values(x, x, spec);
    CHECK(s == Vector::Ones(4));
}

TEST_CASE("base kernel value matches the Gaussian formula") {
    const auto spec = unit_spec(1, 1);
    Vector x(1), x2(1);
    x << 0.0;
    x2 << std::sqrt(2.0);
    const Vector s = base_kernel_values(x, x2, spec);
    CHECK(s[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("base kernel depends only on distance over bandwidth") {
    Vector h1(3), h2(3);
    h1 << 0.5, 1.0, 2.0;
    h2 = 2.0 * h1;
    const EspKernelSpec narrow(2, h1);
    const EspKernelSpec wide(2, h2);
    const Vector x = testsup::random_vector(3, 9);
    const Vector delta = testsup::random_vector(3, 10);
    const Vector s_narrow = base_kernel_values(x, x + delta, narrow);
    const Vector s_wide = base_kernel_values(x, x + 2.0 * delta, wide);
    CHECK((s_narrow - s_wide).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("girard-newton on s = (1,2,3)") {
    const std::vector<double> s{1.0, 2.0, 3.0};
    EspWorkspace ws;
    girard_newton_esp(s, 3, ws);
    CHECK(ws.e[0] == 1.0);
    CHECK(ws.e[1] == 6.0);
    CHECK(ws.e[2] == 11.0);
    CHECK(ws.e[3] == 6.0);
    CHECK(ws.p[0] == 6.0);
    CHECK(ws.p[1] == 14.0);
    CHECK(ws.p[2] == 36.0);
    // the recurrence identity at m = 2, exact in floating point here
    CHECK(ws.e[2] == (ws.e[1] * ws.p[0] - ws.e[0] * ws.p[1]) / 2.0);
}

TEST_CASE("order zero returns e = (1)") {
    const std::vector<double> s{0.3, 0.7, 0.9};
    const auto e = girard_newton_esp(s, 0);
    REQUIRE(e.size() == 1);
    CHECK(e[0] == 1.0);
}

TEST_CASE("all-ones vector gives binomial coefficients") {
    for (int dims : {3, 7, 12}) {
        const std::vector<double> s(static_cast<size_t>(dims), 1.0);
        const auto e = girard_newton_esp(s, dims);
        for (int m = 0; m <= dims; ++m) {
            CHECK(e[static_cast<size_t>(m)] ==
                  doctest::Approx(static_cast<double>(binomial_exact(dims, m)))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("order above the dimension is rejected") {
    const std::vector<double> s{1.0, 2.0};
    CHECK_THROWS_AS(girard_newton_esp(s, 3), OrderExceedsDimension);
}

TEST_CASE("brute force enumeration spot values") {
    const std::vector<double> s{1.0, 2.0, 3.0};
    CHECK(brute_force_esp(s, 3) == 6.0);
    CHECK(brute_force_esp(s, 1) == 6.0);
    const std::vector<double> quarter(4, 0.5);
    CHECK(brute_force_esp(quarter, 2) == doctest::Approx(1.5).epsilon(1e-15));
    const std::vector<double> wide(40, 0.5);
    CHECK_THROWS_AS(brute_force_esp(wide, 20), TooLarge);
}

TEST_CASE("recurrence agrees with enumeration") {
    SplitMix64 rng(2024);
    for (int rep = 0; rep < 200; ++rep) {
        const int dims = 2 + static_cast<int>(rng.below(11));
        std::vector<double> s(static_cast<size_t>(dims));
        for (auto& v : s) v = rng.uniform(1e-3, 1.0);
        const auto e = girard_newton_esp(s, dims);
        for (int d = 0; d <= dims; ++d) {
            const double oracle = brute_force_esp(s, d);
            CHECK(std::abs(e[static_cast<size_t>(d)] - oracle) <=
                  1e-10 * (1.0 + std::abs(oracle)));
        }
    }
}

TEST_CASE("recurrence is stable up to order 64 on base-kernel values") {
    // The alternating sum stays at roundoff scale relative to the largest
    // ESP, and entries within six decades of the peak keep full relative
    // accuracy. Deep-tail orders (e.g. e_64 ~ prod s_i, tens of decades
    // below the peak) carry no relative accuracy; the kernel never uses
    // values in that regime.
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
        SplitMix64 rng(seed);
        std::vector<double> s(64);
        for (auto& v : s) v = rng.uniform(1e-4, 1.0);
        const auto e = girard_newton_esp(s, 64);
        const auto reference = esp_by_expansion(s, 64);
        double peak = 0.0;
        for (double r : reference) peak = std::max(peak, std::abs(r));
        for (int m = 0; m <= 64; ++m) {
            const double ref = reference[static_cast<size_t>(m)];
            const double err = std::abs(e[static_cast<size_t>(m)] - ref);
            CHECK(err <= 1e-12 * peak);
            if (std::abs(ref) >= 1e-6 * peak) {
                CHECK(err <= 1e-8 * std::abs(ref));
            }
        }
    }
}

TEST_CASE("sum of all ESPs equals the product expansion") {
    SplitMix64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const int dims = 2 + static_cast<int>(rng.below(10));
        std::vector<double> s(static_cast<size_t>(dims));
        double product = 1.0;
        for (auto& v : s) {
            v = rng.uniform(0.0, 2.0);
            product *= 1.0 + v;
        }
        const auto e = girard_newton_esp(s, dims);
        double total = 0.0;
        for (double value : e) total += value;
        CHECK(std::abs(total - product) <= 1e-10 * (1.0 + std::abs(product)));
    }
}

TEST_CASE("raising any base value cannot lower the ESP") {
    SplitMix64 rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        const int dims = 3 + static_cast<int>(rng.below(8));
        std::vector<double> s(static_cast<size_t>(dims));
        for (auto& v : s) v = rng.uniform(1e-3, 1.0);
        const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(dims)));
        const int bump = static_cast<int>(rng.below(static_cast<std::uint64_t>(dims)));
        const double before = girard_newton_esp(s, d)[static_cast<size_t>(d)];
        s[static_cast<size_t>(bump)] += rng.uniform(0.0, 1.0);
        const double after = girard_newton_esp(s, d)[static_cast<size_t>(d)];
        CHECK(after >= before - 1e-12 * (1.0 + std::abs(before)));
    }
}

TEST_CASE("esp_kernel at zero distance counts the subsets") {
    const auto spec = unit_spec(6, 3);
    const Vector x = testsup::random_vector(6, 8);
    CHECK(esp_kernel(x, x, spec) == doctest::Approx(20.0).epsilon(1e-12));  // C(6,3)

    const auto upto = unit_spec(3, 2, KernelVariant::AllOrdersUpTo);
    CHECK(esp_kernel(x.head(3), x.head(3), upto) ==
          doctest::Approx(6.0).epsilon(1e-12));  // C(3,1) + C(3,2)
}

TEST_CASE("esp_kernel equals the scaled enumeration oracle") {
    Vector h(8);
    h << 0.7, 1.1, 0.9, 1.4, 2.0, 0.8, 1.0, 1.3;
    const EspKernelSpec spec(3, h, 2.5);
    SplitMix64 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector x = testsup::random_vector(8, rng.next());
        const Vector x2 = testsup::random_vector(8, rng.next());
        const Vector s = base_kernel_values(x, x2, spec);
        const std::vector<double> sv(s.data(), s.data() + s.size());
        const double oracle = 2.5 * brute_force_esp(sv, 3);
        const double value = esp_kernel(x, x2, spec);
        CHECK(std::abs(value - oracle) <= 1e-10 * (1.0 + std::abs(oracle)));
        CHECK(value == esp_kernel(x2, x, spec));  // exact symmetry
    }
}

TEST_CASE("kernel matrix basics") {
    const auto spec = unit_spec(5, 2);

    SUBCASE("single point") {
        const Matrix x = testsup::random_matrix(1, 5, 4);
        const Matrix k = kernel_matrix(x, spec);
        REQUIRE(k.rows() == 1);
        CHECK(k(0, 0) == doctest::Approx(10.0).epsilon(1e-12));  // C(5,2)
    }

    SUBCASE("duplicate rows produce identical kernel rows") {
        Matrix x = testsup::random_matrix(6, 5, 12);
        x.row(3) = x.row(1);
        const Matrix k = kernel_matrix(x, spec);
        CHECK(k.row(1) == k.row(3));
    }

    SUBCASE("bitwise symmetric with constant diagonal") {
        const Matrix x = testsup::random_matrix(12, 5, 13);
        const Matrix k = kernel_matrix(x, spec);
        CHECK(k == Matrix(k.transpose()));
        for (long i = 0; i < k.rows(); ++i) CHECK(k(i, i) == k(0, 0));
    }

    SUBCASE("positive semidefinite up to roundoff") {
        const Matrix x = testsup::random_matrix(30, 5, 14);
        const Matrix k = kernel_matrix(x, spec);
        const SymmetricEigen e = eigen_sym(k);
        CHECK(e.values.minCoeff() >= -1e-8);
    }

    SUBCASE("thread count does not change the bits") {
        const Matrix x = testsup::random_matrix(17, 5, 15);
        CHECK(kernel_matrix(x, spec, 1) == kernel_matrix(x, spec, 3));
    }
}

TEST_CASE("cross kernel matches the square kernel and the scalar kernel") {
    const auto spec = unit_spec(4, 2);
    const Matrix x = testsup::random_matrix(7, 4, 21);
    CHECK(kernel_cross_matrix(x, x, spec) == kernel_matrix(x, spec));

    const Matrix empty(0, 4);
    const Matrix k = kernel_cross_matrix(empty, x, spec);
    CHECK(k.rows() == 0);
    CHECK(k.cols() == 7);

    const Matrix a = testsup::random_matrix(1, 4, 22);
    const Matrix b = testsup::random_matrix(1, 4, 23);
    const Matrix single = kernel_cross_matrix(a, b, spec);
    CHECK(single(0, 0) == esp_kernel(a.row(0), b.row(0), spec));
}

TEST_CASE("subset kernel evaluation") {
    Vector h(4);
    h << 1.0, 2.0, 0.5, 1.5;
    const EspKernelSpec spec2(2, h, 3.0);
    const Vector x = testsup::random_vector(4, 31);
    const Vector x2 = testsup::random_vector(4, 32);

    const std::vector<int> subset{0, 2};
    const Vector s = base_kernel_values(x, x2, spec2);
    CHECK(subset_kernel_eval(x, x2, subset, spec2) ==
          doctest::Approx(s[0] * s[2]).epsilon(1e-15));
    CHECK(subset_kernel_eval(x, x, subset, spec2) == 1.0);

    const EspKernelSpec full(4, h, 1.0);
    const std::vector<int> everything{0, 1, 2, 3};
    CHECK(subset_kernel_eval(x, x2, everything, full) ==
          doctest::Approx(s.prod()).epsilon(1e-14));

    CHECK_THROWS_AS(subset_kernel_eval(x, x2, std::vector<int>{0, 0}, spec2), BadSubset);
    CHECK_THROWS_AS(subset_kernel_eval(x, x2, std::vector<int>{0, 9}, spec2), BadSubset);
    CHECK_THROWS_AS(subset_kernel_eval(x, x2, std::vector<int>{0}, spec2), BadSubset);
}

TEST_CASE("spec construction rejects bad parameters") {
    CHECK_THROWS_AS(EspKernelSpec(0, Vector::Ones(3)), OrderExceedsDimension);
    CHECK_THROWS_AS(EspKernelSpec(4, Vector::Ones(3)), OrderExceedsDimension);
    CHECK_THROWS_AS(EspKernelSpec(1, Vector::Zero(3)), ValidationError);
    Vector tiny = Vector::Ones(3);
    tiny[1] = 1e-13;  // below the bandwidth floor
    CHECK_THROWS_AS(EspKernelSpec(1, tiny), ValidationError);
    CHECK_THROWS_AS(EspKernelSpec(1, Vector::Ones(3), 0.0), ValidationError);
}

TEST_CASE("kernel ops validate their inputs") {
    const auto spec = unit_spec(3, 2);
    CHECK_THROWS_AS(base_kernel_values(Vector::Ones(2), Vector::Ones(3), spec),
                    DimensionMismatch);
    Vector bad = Vector::Ones(3);
    bad[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(base_kernel_values(bad, Vector::Ones(3), spec), NonFinite);
    CHECK_THROWS_AS(kernel_matrix(Matrix::Ones(2, 4), spec), DimensionMismatch);
}
