#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sapcert/certify.hpp"
#include "sapcert/matrix.hpp"

namespace sapcert {

/// d-left-regular bipartite graph; neighbors[j] lists the d distinct right
/// vertices of left vertex j, sorted, 0-based.
struct BipartiteGraph {
    int left_count = 0;   // n
    int right_count = 0;  // m
    int degree = 0;       // d
    std::vector<std::vector<int>> neighbors;

    void validate() const;
    /// 0/1 adjacency matrix Phi, size m x n, column sums all d.
    Matrix adjacency_matrix() const;
};

/// Neighbors sampled without replacement per left vertex; deterministic per seed.
BipartiteGraph random_left_regular(int n, int m, int d, std::uint64_t seed);

/// Left vertex i wired to right vertex i (d = 1); the adjacency matrix is a
/// permutation (identity) matrix.
BipartiteGraph perfect_matching(int n);

struct ExpansionCertificate {
    int checked_size = 0; // k
    double alpha_star = 0.0;
    CertMethod method = CertMethod::exhaustive;
};

/// alpha*(k) = max over nonempty |S| <= k of 1 - |N(S)|/(d |S|), exhaustive.
/// Enumeration capped at C(n,k)*k <= 1e7 (input error beyond).
ExpansionCertificate expansion_alpha(const BipartiteGraph& g, int k);

/// D = 1/(d (1-4 alpha)), beta = 2 alpha/(1-4 alpha), with p = q = r = 1.
/// Requires alpha in [0, 1/4).
SapCertificate sap_constants_expander(int d, double alpha, int s);

/// Right-hand side 4 eps/(d (1-6 alpha)) + (2-4 alpha)/(1-6 alpha) sigma_s.
/// Requires alpha in [0, 1/6).
double corollary1_bound(int d, double alpha, double eps, double sigma_s);

/// (min, max) of ||Phi x||_1 / (d ||x||_1) over sampled 2s-sparse x; sign
/// patterns enumerated up to 2^15 per support, supports exhausted when small.
std::pair<double, double> rip1_deviation(const BipartiteGraph& g, int s, int sample_count,
                                         std::uint64_t seed = 29);

/// Text format: line 1 "n m d", then n lines of d neighbor indices (1-based).
void write_graph(std::ostream& os, const BipartiteGraph& g);
BipartiteGraph read_graph(std::istream& is);

} // namespace sapcert
