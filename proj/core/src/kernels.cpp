#include "salsa/kernels.hpp"

#include <cmath>

#include "salsa/combinatorics.hpp"
#include "salsa/parallel.hpp"

namespace salsa {

EspKernelSpec::EspKernelSpec(int order, Vector bandwidths, double scale,
                             KernelVariant variant)
    : order_(order),
      bandwidths_(std::move(bandwidths)),
      scale_(scale),
      variant_(variant) {
    const int dims = static_cast<int>(bandwidths_.size());
    if (dims < 1) {
        throw ValidationError("EspKernelSpec: needs at least one dimension");
    }
    if (order_ < 1 || order_ > dims) {
        throw OrderExceedsDimension("EspKernelSpec: order must be in [1, D]");
    }
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw ValidationError("EspKernelSpec: scale must be positive");
    }
    for (int i = 0; i < dims; ++i) {
        // Reject rather than clamp: a bandwidth this small means the caller's
        // data or formula is broken.
        if (!(bandwidths_[i] >= 1e-12) || !std::isfinite(bandwidths_[i])) {
            throw ValidationError("EspKernelSpec: bandwidths must be >= 1e-12");
        }
    }
    inv_two_h_sq_ = (2.0 * bandwidths_.array().square()).inverse();
}

namespace {

void base_values_into(const double* x, const double* x2, const double* inv_two_h_sq,
                      int dims, double* out) {
    for (int i = 0; i < dims; ++i) {
        const double diff = x[i] - x2[i];
        out[i] = std::exp(-diff * diff * inv_two_h_sq[i]);
    }
}

// Recurrence triangle on precomputed base values.
void girard_newton_into(const double* s, int dims, int order, EspWorkspace& ws) {
    ws.resize(order);
    if (order == 0) return;

    // Power sums p_1..p_order by running products.
    std::vector<double> pw(s, s + dims);
    for (int m = 0; m < order; ++m) {
        double sum = 0.0;
        if (m == 0) {
            for (int i = 0; i < dims; ++i) sum += pw[i];
        } else {
            for (int i = 0; i < dims; ++i) {
                pw[i] *= s[i];
                sum += pw[i];
            }
        }
        ws.p[static_cast<size_t>(m)] = sum;
    }

    for (int m = 1; m <= order; ++m) {
        double acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= m; ++i) {
            acc += sign * ws.e[static_cast<size_t>(m - i)] * ws.p[static_cast<size_t>(i - 1)];
            sign = -sign;
        }
        ws.e[static_cast<size_t>(m)] = acc / static_cast<double>(m);
    }
}

double combine_orders(const EspWorkspace& ws, const EspKernelSpec& spec) {
    if (spec.variant() == KernelVariant::ExactOrder) {
        return spec.scale() * ws.e[static_cast<size_t>(spec.order())];
    }
    // Orders 1..d; e_0 is excluded since a constant offset is absorbed by
    // target centering.
    double sum = 0.0;
    for (int m = 1; m <= spec.order(); ++m) sum += ws.e[static_cast<size_t>(m)];
    return spec.scale() * sum;
}

void check_point(const Vector& x, int dims, const char* who) {
    if (static_cast<int>(x.size()) != dims) {
        throw DimensionMismatch(std::string(who) + ": point length does not match spec");
    }
    if (!x.allFinite()) {
        throw NonFinite(std::string(who) + ": non-finite input");
    }
}

}  // namespace

Vector base_kernel_values(const Vector& x, const Vector& x2, const EspKernelSpec& spec) {
    check_point(x, spec.dims(), "base_kernel_values");
    check_point(x2, spec.dims(), "base_kernel_values");
    Vector s(spec.dims());
    base_values_into(x.data(), x2.data(), spec.inv_two_h_sq().data(), spec.dims(), s.data());
    return s;
}

void girard_newton_esp(std::span<const double> s, int order, EspWorkspace& ws) {
    if (order < 0 || order > static_cast<int>(s.size())) {
        throw OrderExceedsDimension("girard_newton_esp: order must be in [0, D]");
    }
    girard_newton_into(s.data(), static_cast<int>(s.size()), order, ws);
}

std::vector<double> girard_newton_esp(std::span<const double> s, int order) {
    EspWorkspace ws;
    girard_newton_esp(s, order, ws);
    return ws.e;
}

double brute_force_esp(std::span<const double> s, int order) {
    const int dims = static_cast<int>(s.size());
    if (order < 0 || order > dims) {
        throw OrderExceedsDimension("brute_force_esp: order must be in [0, D]");
    }
    if (binomial_exact(dims, order) > 10'000'000ULL) {
        throw TooLarge("brute_force_esp: C(D,d) exceeds the enumeration guard");
    }
    if (order == 0) return 1.0;
    double total = 0.0;
    for_each_subset(dims, order, [&](const std::vector<int>& idx) {
        double prod = 1.0;
        for (int i : idx) prod *= s[static_cast<size_t>(i)];
        total += prod;
    });
    return total;
}

double esp_kernel(const Vector& x, const Vector& x2, const EspKernelSpec& spec) {
    const Vector s = base_kernel_values(x, x2, spec);
    EspWorkspace ws;
    girard_newton_into(s.data(), spec.dims(), spec.order(), ws);
    return combine_orders(ws, spec);
}

Matrix kernel_matrix(const Matrix& x, const EspKernelSpec& spec, int threads) {
    const long n = x.rows();
    if (n < 1) throw DimensionMismatch("kernel_matrix: need at least one row");
    if (static_cast<int>(x.cols()) != spec.dims()) {
        throw DimensionMismatch("kernel_matrix: column count does not match spec");
    }
    if (!x.allFinite()) throw NonFinite("kernel_matrix: non-finite input");

    const int dims = spec.dims();
    const Matrix xt = x.transpose();  // points are contiguous columns
    Matrix k(n, n);
    parallel_for(n, resolve_threads(threads), [&](long begin, long end) {
        std::vector<double> s(static_cast<size_t>(dims));
        EspWorkspace ws;
        for (long i = begin; i < end; ++i) {
            for (long j = 0; j <= i; ++j) {
                base_values_into(xt.col(i).data(), xt.col(j).data(),
                                 spec.inv_two_h_sq().data(), dims, s.data());
                girard_newton_into(s.data(), dims, spec.order(), ws);
                const double value = combine_orders(ws, spec);
                k(i, j) = value;
                k(j, i) = value;
            }
        }
    });
    return k;
}

Matrix kernel_cross_matrix(const Matrix& x_new, const Matrix& x_train,
                           const EspKernelSpec& spec, int threads) {
    if (static_cast<int>(x_new.cols()) != spec.dims() ||
        static_cast<int>(x_train.cols()) != spec.dims()) {
        throw DimensionMismatch("kernel_cross_matrix: column count does not match spec");
    }
    if (!x_new.allFinite() || !x_train.allFinite()) {
        throw NonFinite("kernel_cross_matrix: non-finite input");
    }

    const long m = x_new.rows();
    const long n = x_train.rows();
    const int dims = spec.dims();
    const Matrix new_t = x_new.transpose();
    const Matrix train_t = x_train.transpose();
    Matrix k(m, n);
    parallel_for(m, resolve_threads(threads), [&](long begin, long end) {
        std::vector<double> s(static_cast<size_t>(dims));
        EspWorkspace ws;
        for (long i = begin; i < end; ++i) {
            for (long j = 0; j < n; ++j) {
                base_values_into(new_t.col(i).data(), train_t.col(j).data(),
                                 spec.inv_two_h_sq().data(), dims, s.data());
                girard_newton_into(s.data(), dims, spec.order(), ws);
                k(i, j) = combine_orders(ws, spec);
            }
        }
    });
    return k;
}

double subset_kernel_eval(const Vector& x, const Vector& x2,
                          std::span<const int> subset, const EspKernelSpec& spec) {
    check_point(x, spec.dims(), "subset_kernel_eval");
    check_point(x2, spec.dims(), "subset_kernel_eval");
    if (static_cast<int>(subset.size()) != spec.order()) {
        throw BadSubset("subset_kernel_eval: subset size must equal the kernel order");
    }
    double prod = 1.0;
    long seen_mask_ok = 1;
    std::vector<char> seen(static_cast<size_t>(spec.dims()), 0);
    for (int i : subset) {
        if (i < 0 || i >= spec.dims() || seen[static_cast<size_t>(i)]) {
            seen_mask_ok = 0;
            break;
        }
        seen[static_cast<size_t>(i)] = 1;
        const double diff = x[i] - x2[i];
        prod *= std::exp(-diff * diff * spec.inv_two_h_sq()[i]);
    }
    if (!seen_mask_ok) {
        throw BadSubset("subset_kernel_eval: indices must be distinct and within [0, D)");
    }
    return prod;
}

}  // namespace salsa
