#pragma once

#include <cstdint>
#include <vector>

#include "salsa/errors.hpp"

namespace salsa {

// Exact C(n, k) with overflow checking; throws TooLarge above 2^63 - 1.
inline std::uint64_t binomial_exact(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > static_cast<unsigned __int128>(INT64_MAX)) {
            throw TooLarge("binomial_exact: C(n,k) exceeds 2^63-1");
        }
    }
    return static_cast<std::uint64_t>(result);
}

// Visit all size-k subsets of {0,...,n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

}  // namespace salsa
