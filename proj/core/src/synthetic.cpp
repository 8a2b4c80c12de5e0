#include "salsa/synthetic.hpp"

#include <cmath>

#include "salsa/combinatorics.hpp"

namespace salsa {

BumpFunctionSpec BumpFunctionSpec::default_spec(int dim, std::uint64_t seed) {
    if (dim < 1) throw ValidationError("BumpFunctionSpec: dim must be >= 1");
    BumpFunctionSpec spec;
    spec.dim = dim;
    spec.weight1 = 1.0 / 3.0;
    spec.weight2 = 1.0 / 3.0;
    spec.centers.resize(3, dim);
    auto stream = substream(seed, 0xB00Fu);
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < dim; ++j) spec.centers(k, j) = stream.uniform(-0.5, 0.5);
    }
    spec.bump_bandwidth = 0.01 * std::sqrt(static_cast<double>(dim));
    return spec;
}

void BumpFunctionSpec::validate() const {
    if (dim < 1) throw ValidationError("BumpFunctionSpec: dim must be >= 1");
    if (!(weight1 >= 0.0 && weight1 <= 1.0) || !(weight2 >= 0.0 && weight2 <= 1.0) ||
        weight1 + weight2 > 1.0 + 1e-15) {
        throw ValidationError("BumpFunctionSpec: weights must satisfy 0 <= a1, a2, a1+a2 <= 1");
    }
    if (centers.rows() != 3 || centers.cols() != dim) {
        throw DimensionMismatch("BumpFunctionSpec: centers must be 3 x dim");
    }
    if (!(bump_bandwidth > 0.0)) {
        throw ValidationError("BumpFunctionSpec: bandwidth must be positive");
    }
}

double eval_bump_function(const BumpFunctionSpec& spec, const Vector& x) {
    if (x.size() != spec.dim) {
        throw DimensionMismatch("eval_bump_function: point length mismatch");
    }
    const double h = spec.bump_bandwidth;
    const double log_scale = -static_cast<double>(spec.dim) * std::log(h);
    const double weights[3] = {spec.weight1, spec.weight2,
                               1.0 - spec.weight1 - spec.weight2};

    // log-sum-exp over the (at most three) active mixture terms
    double terms[3];
    int active = 0;
    for (int k = 0; k < 3; ++k) {
        if (weights[k] <= 0.0) continue;
        const double sq = (x - spec.centers.row(k).transpose()).squaredNorm();
        terms[active++] = std::log(weights[k]) + log_scale - sq / (2.0 * h * h);
    }
    if (active == 0) throw ValidationError("eval_bump_function: all weights are zero");

    double peak = terms[0];
    for (int k = 1; k < active; ++k) peak = std::max(peak, terms[k]);
    double sum = 0.0;
    for (int k = 0; k < active; ++k) sum += std::exp(terms[k] - peak);
    const double value = peak + std::log(sum);
    if (!std::isfinite(value)) throw NonFinite("eval_bump_function: non-finite value");
    return value;
}

AdditiveComposition::AdditiveComposition(BumpFunctionSpec spec, int ambient_dim)
    : spec_(std::move(spec)), ambient_dim_(ambient_dim) {
    spec_.validate();
    if (spec_.dim > ambient_dim_) {
        throw OrderExceedsDimension("AdditiveComposition: spec.dim exceeds the ambient dimension");
    }
    if (binomial_exact(ambient_dim_, spec_.dim) > 1'000'000ULL) {
        throw TooLarge("AdditiveComposition: C(D,d) exceeds 10^6 terms");
    }
    for_each_subset(ambient_dim_, spec_.dim,
                    [&](const std::vector<int>& idx) { subsets_.push_back(idx); });
}

double AdditiveComposition::operator()(const Vector& x) const {
    if (x.size() != ambient_dim_) {
        throw DimensionMismatch("AdditiveComposition: point length mismatch");
    }
    Vector projected(spec_.dim);
    double total = 0.0;
    for (const auto& subset : subsets_) {
        for (int j = 0; j < spec_.dim; ++j) projected[j] = x[subset[static_cast<size_t>(j)]];
        total += eval_bump_function(spec_, projected);
    }
    return total;
}

double spam_f1(double x) { return -2.0 * std::sin(2.0 * x); }
double spam_f2(double x) { return x * x - 1.0 / 3.0; }
double spam_f3(double x) { return x - 0.5; }
double spam_f4(double x) { return std::exp(-x) + std::exp(-1.0) - 1.0; }

SpamSelectionData spam_selection_sample(long n, std::uint64_t seed) {
    constexpr int kDims = 50;
    auto model = [](const Vector& x) {
        return spam_f1(x[0]) + spam_f2(x[1]) + spam_f3(x[2]) + spam_f4(x[3]) +
               spam_f1(x[4] * x[5]) + spam_f2(x[6] * x[7]) + spam_f3(x[8] * x[9]) +
               spam_f4(x[10] * x[11]);
    };
    SpamSelectionData out;
    // Unit-variance Gaussian noise, fixed by the generative model.
    out.data = sample_dataset(model, kDims, n, 1.0, seed, "spam-setting2");
    out.true_groups = {{0}, {1}, {2}, {3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}};
    return out;
}

}  // namespace salsa
