#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace sapcert {

/// C(n, k), saturating at `cap` to avoid overflow in feasibility checks.
inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        if (result > cap) return cap + 1;
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result > cap ? cap + 1 : result;
}

/// Sum of C(n, j) for j in [1, k], saturating at cap.
inline std::uint64_t subset_count_up_to(int n, int k, std::uint64_t cap) {
    std::uint64_t total = 0;
    for (int j = 1; j <= k; ++j) {
        total += binomial_capped(n, j, cap);
        if (total > cap) return cap + 1;
    }
    return total;
}

/// Visits every k-subset of {0..n-1} in lexicographic order.
/// f receives the subset as a const std::vector<int>&.
template <typename F>
void for_each_combination(int n, int k, F&& f) {
    if (k < 0 || k > n) return;
    if (k == 0) {
        const std::vector<int> empty;
        f(empty);
        return;
    }
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(std::as_const(idx));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Visits every nonempty subset of size <= k, smallest sizes first.
template <typename F>
void for_each_subset_up_to(int n, int k, F&& f) {
    for (int size = 1; size <= k && size <= n; ++size) {
        for_each_combination(n, size, f);
    }
}

} // namespace sapcert
