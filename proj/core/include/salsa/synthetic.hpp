#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salsa/linalg.hpp"
#include "salsa/rng.hpp"

namespace salsa {

// Log of three Gaussian bumps on [-1,1]^dim with common width 0.01*sqrt(dim).
// The test function behind the synthetic regression benchmarks.
struct BumpFunctionSpec {
    int dim = 1;
    double weight1 = 1.0 / 3.0;  // first two mixture weights; third is the remainder
    double weight2 = 1.0 / 3.0;
    Matrix centers;              // 3 x dim, one center per row
    double bump_bandwidth = 0.0; // 0.01 * sqrt(dim), stored for inspection

    // Weights 1/3 each, centers drawn once from a seeded uniform on
    // [-0.5, 0.5]^dim: reproducible, well-separated modes.
    static BumpFunctionSpec default_spec(int dim, std::uint64_t seed);

    void validate() const;
};

// Stabilized via max-shift before exponentiation; the raw exponentials
// underflow for most of the domain at this bandwidth.
double eval_bump_function(const BumpFunctionSpec& spec, const Vector& x);

// f(x) = sum over all size-d coordinate subsets (lexicographic) of the bump
// function on the projected coordinates.
class AdditiveComposition {
  public:
    AdditiveComposition(BumpFunctionSpec spec, int ambient_dim);

    double operator()(const Vector& x) const;
    int ambient_dim() const { return ambient_dim_; }
    long term_count() const { return static_cast<long>(subsets_.size()); }
    const std::vector<std::vector<int>>& subsets() const { return subsets_; }

  private:
    BumpFunctionSpec spec_;
    int ambient_dim_;
    std::vector<std::vector<int>> subsets_;
};

struct SyntheticDataset {
    Matrix x;  // n x D in [-1,1]^D
    Vector y;
    std::string generator;
    std::uint64_t seed = 0;
    double noise_sd = 0.0;
};

// X uniform on [-1,1]^D from per-row substreams of `seed`; Y = f(X_i) +
// noise_sd * N(0,1). Rows are independent streams, so the dataset does not
// depend on generation order.
template <typename Fn>
SyntheticDataset sample_dataset(Fn&& f, int dims, long n, double noise_sd,
                                std::uint64_t seed, std::string generator = "custom");

struct SpamSelectionData {
    SyntheticDataset data;  // D = 50
    // True support among the 50 + C(50,2) candidate groups: four singletons
    // and four coordinate pairs.
    std::vector<std::vector<int>> true_groups;
};

// The 50-dimensional function-selection model: four singleton components and
// four components driven by coordinate products, unit Gaussian noise.
SpamSelectionData spam_selection_sample(long n, std::uint64_t seed);

// Component functions of the selection model, exposed for tests.
double spam_f1(double x);  // -2 sin(2x)
double spam_f2(double x);  // x^2 - 1/3
double spam_f3(double x);  // x - 1/2
double spam_f4(double x);  // e^-x + e^-1 - 1

// --- implementation ---

template <typename Fn>
SyntheticDataset sample_dataset(Fn&& f, int dims, long n, double noise_sd,
                                std::uint64_t seed, std::string generator) {
    if (n < 1) throw TooFewRows("sample_dataset: need at least 1 row");
    if (dims < 1) throw ValidationError("sample_dataset: need at least 1 dimension");

    SyntheticDataset ds;
    ds.x.resize(n, dims);
    ds.y.resize(n);
    ds.generator = std::move(generator);
    ds.seed = seed;
    ds.noise_sd = noise_sd;
    for (long i = 0; i < n; ++i) {
        auto stream = substream(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < dims; ++j) ds.x(i, j) = stream.uniform(-1.0, 1.0);
        const Vector row = ds.x.row(i);
        ds.y[i] = f(row) + noise_sd * stream.normal();
    }
    return ds;
}

}  // namespace salsa
