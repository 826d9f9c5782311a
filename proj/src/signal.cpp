#include "sapcert/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sapcert/rng.hpp"

namespace sapcert {

double lq_quasinorm(const Signal& x, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("lq_quasinorm: q must be positive");
    if (std::isinf(q)) return norm_inf(x);
    if (q == 1.0) return norm1(x);
    if (q == 2.0) return norm2(x);
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::fabs(v), q);
    return std::pow(acc, 1.0 / q);
}

double sparsity_scale(int s, double q, double r) {
    const double ratio = std::isinf(r) ? 0.0 : q / r;
    return std::pow(static_cast<double>(s), ratio - 1.0);
}

namespace {

// indices ordered by |h| descending, ties by lowest index
std::vector<int> magnitude_order(const Signal& h) {
    std::vector<int> idx(h.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::fabs(h[a]) > std::fabs(h[b]); });
    return idx;
}

} // namespace

BestTermResult best_s_term(const Signal& x, int s, double q) {
    const int n = static_cast<int>(x.size());
    if (s < 0 || s > n) throw std::invalid_argument("best_s_term: s out of range");
    BestTermResult out;
    out.kept.assign(n, 0.0);
    const std::vector<int> order = magnitude_order(x);
    out.support.assign(order.begin(), order.begin() + s);
    std::sort(out.support.begin(), out.support.end());
    Signal tail = x;
    for (int i : out.support) {
        out.kept[i] = x[i];
        tail[i] = 0.0;
    }
    out.sigma = lq_quasinorm(tail, q);
    return out;
}

BlockPartition greedy_block_partition(const Signal& h, int s, const std::vector<int>& s0) {
    const int n = static_cast<int>(h.size());
    if (s < 1) throw std::invalid_argument("greedy_block_partition: s must be >= 1");
    if (static_cast<int>(s0.size()) > s) throw std::invalid_argument("greedy_block_partition: |S0| > s");
    std::vector<bool> used(n, false);
    for (int i : s0) {
        if (i < 0 || i >= n || used[i]) throw std::invalid_argument("greedy_block_partition: bad S0");
        used[i] = true;
    }
    BlockPartition out;
    out.blocks.push_back(s0);
    std::vector<int> rest;
    for (int i : magnitude_order(h))
        if (!used[i]) rest.push_back(i);
    for (std::size_t pos = 0; pos < rest.size(); pos += s) {
        const std::size_t end = std::min(rest.size(), pos + s);
        std::vector<int> block(rest.begin() + pos, rest.begin() + end);
        std::sort(block.begin(), block.end());
        out.blocks.push_back(std::move(block));
    }
    return out;
}

Signal generate_s_sparse(int n, int s, std::uint64_t seed, double mag_lo, double mag_hi) {
    if (s < 0 || s > n) throw std::invalid_argument("generate_s_sparse: s out of range");
    if (!(mag_lo >= 0.0 && mag_hi >= mag_lo)) throw std::invalid_argument("generate_s_sparse: bad magnitude range");
    Rng rng(seed);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
        const int j = rng.uniform_int(i, n - 1);
        std::swap(idx[i], idx[j]);
    }
    Signal x(n, 0.0);
    for (int i = 0; i < s; ++i) {
        const int sign = rng.sign();
        x[idx[i]] = sign * rng.uniform(mag_lo, mag_hi);
    }
    return x;
}

Signal generate_compressible(int n, double theta, std::uint64_t seed) {
    if (!(theta > 0.0)) throw std::invalid_argument("generate_compressible: theta must be positive");
    Rng rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    Signal x(n, 0.0);
    for (int k = 0; k < n; ++k)
        x[perm[k]] = rng.sign() * std::pow(static_cast<double>(k + 1), -theta);
    return x;
}

} // namespace sapcert
