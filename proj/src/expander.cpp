#include "sapcert/expander.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sapcert/combinatorics.hpp"
#include "sapcert/rng.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

void BipartiteGraph::validate() const {
    if (left_count < 1 || right_count < 1) throw std::invalid_argument("graph: empty side");
    if (degree < 1 || degree > right_count) throw std::invalid_argument("graph: bad degree");
    if (neighbors.size() != static_cast<std::size_t>(left_count))
        throw std::invalid_argument("graph: neighbor list count != left vertices");
    for (const auto& list : neighbors) {
        if (static_cast<int>(list.size()) != degree) throw std::invalid_argument("graph: wrong neighbor count");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i] < 0 || list[i] >= right_count) throw std::invalid_argument("graph: neighbor out of range");
            if (i > 0 && list[i] <= list[i - 1]) throw std::invalid_argument("graph: neighbors not sorted distinct");
        }
    }
}

Matrix BipartiteGraph::adjacency_matrix() const {
    Matrix phi(right_count, left_count);
    for (int j = 0; j < left_count; ++j)
        for (int i : neighbors[j]) phi(i, j) = 1.0;
    return phi;
}

BipartiteGraph random_left_regular(int n, int m, int d, std::uint64_t seed) {
    if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("random_left_regular: counts must be positive");
    if (d > m) throw std::invalid_argument("random_left_regular: degree exceeds right vertex count");
    Rng rng(seed);
    BipartiteGraph g;
    g.left_count = n;
    g.right_count = m;
    g.degree = d;
    g.neighbors.resize(n);
    std::vector<int> pool(m);
    for (int j = 0; j < n; ++j) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < d; ++i) std::swap(pool[i], pool[rng.uniform_int(i, m - 1)]);
        g.neighbors[j].assign(pool.begin(), pool.begin() + d);
        std::sort(g.neighbors[j].begin(), g.neighbors[j].end());
    }
    g.validate();
    return g;
}

BipartiteGraph perfect_matching(int n) {
    BipartiteGraph g;
    g.left_count = g.right_count = n;
    g.degree = 1;
    g.neighbors.resize(n);
    for (int i = 0; i < n; ++i) g.neighbors[i] = {i};
    g.validate();
    return g;
}

ExpansionCertificate expansion_alpha(const BipartiteGraph& g, int k) {
    g.validate();
    const int n = g.left_count;
    if (k < 1 || k > n) throw std::invalid_argument("expansion_alpha: k out of range");
    std::uint64_t work = 0;
    for (int size = 1; size <= k; ++size) {
        work += binomial_capped(n, size, 10000000ULL) * static_cast<std::uint64_t>(size);
        if (work > 10000000ULL) throw std::invalid_argument("expansion_alpha: enumeration exceeds cap");
    }

    std::vector<int> stamp(g.right_count, -1);
    int epoch = 0;
    double alpha = 0.0;
    for_each_subset_up_to(n, k, [&](const std::vector<int>& subset) {
        ++epoch;
        int reached = 0;
        for (int v : subset)
            for (int w : g.neighbors[v])
                if (stamp[w] != epoch) {
                    stamp[w] = epoch;
                    ++reached;
                }
        const double value = 1.0 - static_cast<double>(reached) /
                                       (static_cast<double>(g.degree) * static_cast<double>(subset.size()));
        alpha = std::max(alpha, value);
    });
    return {k, alpha, CertMethod::exhaustive};
}

SapCertificate sap_constants_expander(int d, double alpha, int s) {
    if (d < 1) throw std::invalid_argument("sap_constants_expander: degree must be positive");
    if (s < 1) throw std::invalid_argument("sap_constants_expander: s must be positive");
    if (!(alpha >= 0.0 && alpha < 0.25))
        throw std::invalid_argument("sap_constants_expander: alpha must lie in [0, 1/4)");
    SapCertificate cert;
    cert.s = s;
    cert.p = cert.q = cert.r = 1.0;
    cert.d_const = 1.0 / (d * (1.0 - 4.0 * alpha));
    cert.beta = 2.0 * alpha / (1.0 - 4.0 * alpha);
    cert.provenance = SapProvenance::expander;
    return cert;
}

double corollary1_bound(int d, double alpha, double eps, double sigma_s) {
    if (d < 1) throw std::invalid_argument("corollary1_bound: degree must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0 / 6.0))
        throw std::invalid_argument("corollary1_bound: alpha must lie in [0, 1/6)");
    if (!(eps >= 0.0 && sigma_s >= 0.0)) throw std::invalid_argument("corollary1_bound: negative input");
    return 4.0 / (d * (1.0 - 6.0 * alpha)) * eps + (2.0 - 4.0 * alpha) / (1.0 - 6.0 * alpha) * sigma_s;
}

std::pair<double, double> rip1_deviation(const BipartiteGraph& g, int s, int sample_count, std::uint64_t seed) {
    g.validate();
    if (s < 1) throw std::invalid_argument("rip1_deviation: s must be positive");
    const int n = g.left_count;
    const int size = std::min(2 * s, n);
    const Matrix phi = g.adjacency_matrix();
    Rng rng(seed);

    double lo = 1.0, hi = 0.0;
    auto evaluate = [&](const Vector& x) {
        const double nx = norm1(x);
        if (nx <= 0.0) return;
        const double ratio = norm1(matvec(phi, x)) / (g.degree * nx);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    };

    const std::uint64_t support_total = binomial_capped(n, size, 200000);
    const bool exhaustive_supports = support_total <= 200000;
    // per-support sign budget: at most 2^15, shrunk further so the whole
    // scan stays around 2e6 vectors
    const std::uint64_t divisor = exhaustive_supports ? std::max<std::uint64_t>(support_total, 1)
                                                      : static_cast<std::uint64_t>(std::max(sample_count, 1));
    const std::uint64_t sign_budget =
        std::clamp<std::uint64_t>(2000000ULL / divisor, 8ULL, 1ULL << 15);

    auto per_support = [&](const std::vector<int>& support) {
        const int sz = static_cast<int>(support.size());
        const bool exhaust_signs = sz < 63 && (1ULL << sz) <= sign_budget;
        const std::uint64_t pattern_count = exhaust_signs ? (1ULL << sz) : sign_budget;
        for (std::uint64_t it = 0; it < pattern_count; ++it) {
            const std::uint64_t mask = exhaust_signs ? it : rng.next_u64();
            Vector x(n, 0.0);
            for (int b = 0; b < sz; ++b) x[support[b]] = (mask >> b) & 1 ? -1.0 : 1.0;
            evaluate(x);
        }
        // a few random-magnitude draws per support
        for (int it = 0; it < 4; ++it) {
            Vector x(n, 0.0);
            for (int b = 0; b < sz; ++b) {
                const int sign = rng.sign();
                x[support[b]] = sign * rng.uniform(0.2, 1.0);
            }
            evaluate(x);
        }
    };

    if (exhaustive_supports) {
        for_each_combination(n, size, per_support);
    } else {
        for (int it = 0; it < sample_count; ++it) {
            std::vector<int> pool(n);
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < size; ++i) std::swap(pool[i], pool[rng.uniform_int(i, n - 1)]);
            std::vector<int> support(pool.begin(), pool.begin() + size);
            std::sort(support.begin(), support.end());
            per_support(support);
        }
    }
    return {lo, hi};
}

void write_graph(std::ostream& os, const BipartiteGraph& g) {
    os << g.left_count << ' ' << g.right_count << ' ' << g.degree << '\n';
    for (const auto& list : g.neighbors) {
        for (std::size_t i = 0; i < list.size(); ++i) os << (i ? " " : "") << list[i] + 1;
        os << '\n';
    }
}

BipartiteGraph read_graph(std::istream& is) {
    BipartiteGraph g;
    if (!(is >> g.left_count >> g.right_count >> g.degree))
        throw std::invalid_argument("graph: malformed header");
    g.neighbors.assign(g.left_count, {});
    for (auto& list : g.neighbors) {
        list.resize(g.degree);
        for (int& v : list) {
            if (!(is >> v)) throw std::invalid_argument("graph: truncated neighbor list");
            --v; // stored 1-based
        }
        std::sort(list.begin(), list.end());
    }
    g.validate();
    return g;
}

} // namespace sapcert
