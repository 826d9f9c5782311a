#pragma once

#include <cstdint>
#include <vector>

#include "sapcert/matrix.hpp"

namespace sapcert {

/// Signals are plain real vectors; Vector doubles as the signal type.
using Signal = Vector;

/// (sum |x_i|^q)^(1/q); max |x_i| for q = inf. Requires q > 0.
double lq_quasinorm(const Signal& x, double q);

/// s^(q/r - 1) with the q/inf -> 0 convention used by every bound here.
double sparsity_scale(int s, double q, double r);

struct BestTermResult {
    Signal kept;        // s largest magnitudes kept (ties -> lowest index), zeros elsewhere
    std::vector<int> support;
    double sigma;       // ||x - kept||_q
};

/// Best s-term approximation and its lq error sigma_{s,q}. The kept index
/// set depends only on magnitudes, so it is the same for every q.
BestTermResult best_s_term(const Signal& x, int s, double q);

struct BlockPartition {
    std::vector<std::vector<int>> blocks; // S0, S1, S2, ...
};

/// S1 = the s largest magnitudes of h outside s0, S2 = the next s, and so on
/// until {0..n-1} is covered. Requires |s0| <= s and s >= 1.
BlockPartition greedy_block_partition(const Signal& h, int s, const std::vector<int>& s0);

/// Exactly s nonzeros with uniformly random support, magnitudes in
/// [mag_lo, mag_hi], random signs. Deterministic per seed.
Signal generate_s_sparse(int n, int s, std::uint64_t seed, double mag_lo = 1.0, double mag_hi = 2.0);

/// Sorted magnitudes k^{-theta}, random signs, random permutation.
Signal generate_compressible(int n, double theta, std::uint64_t seed);

} // namespace sapcert
