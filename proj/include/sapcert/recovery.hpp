#pragma once

#include <optional>
#include <string>

#include "sapcert/matrix.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

/// Instance of   min ||y||_q^q  s.t.  ||A y - z||_p <= eps.
struct RecoveryProblem {
    Matrix a;
    Signal measurements; // z, length m
    double eps = 0.0;
    double p = 2.0;      // residual norm exponent; 1, 2, or inf on certified paths
    double q = 1.0;      // objective exponent, in (0, 1]

    void validate() const;
};

enum class SolveStatus { success, iteration_limit, internal_error };

std::string to_string(SolveStatus s);

struct RecoveryResult {
    Signal solution;
    double residual_norm = 0.0; // ||A x* - z||_p
    double objective = 0.0;     // ||x*||_q^q
    bool certified_optimal = false;
    SolveStatus status = SolveStatus::internal_error;
};

/// Exact l1 minimization through the LP lift. Requires q = 1 and either
/// p in {1, inf}, or eps = 0 (equality constraints, any p).
RecoveryResult solve_l1(const RecoveryProblem& problem);

/// l1 minimization on the l2 residual ball (p = 2, eps > 0) via ADMM with an
/// exact ball projection; the result is feasible but not certified optimal.
RecoveryResult solve_l1_l2(const RecoveryProblem& problem);

/// Iteratively reweighted least squares heuristic for 0 < q < 1, eps = 0.
/// Requires A with full row rank; never certified optimal.
RecoveryResult solve_lq_irls(const RecoveryProblem& problem);

/// Brute force over all supports of size <= max_support: least squares on
/// each support, keep the feasible candidate with minimal ||y||_q^q.
/// Returns nothing when no candidate is feasible. Enumeration capped at 1e6.
std::optional<RecoveryResult> sparse_oracle(const RecoveryProblem& problem, int max_support);

} // namespace sapcert
