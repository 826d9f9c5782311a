#pragma once

#include <string>

#include "sapcert/matrix.hpp"

namespace sapcert {

/// min c'x  s.t.  eq_lhs x = eq_rhs,  ineq_lhs x <= ineq_rhs,  lower <= x <= upper.
/// Bounds may be +-inf. Constraint blocks may have zero rows.
struct LinearProgram {
    Vector objective;
    Matrix eq_lhs;
    Vector eq_rhs;
    Matrix ineq_lhs;
    Vector ineq_rhs;
    Vector lower;
    Vector upper;

    explicit LinearProgram(int num_vars);
    int num_vars() const { return static_cast<int>(objective.size()); }
    void add_eq(Vector row, double rhs);
    void add_ineq(Vector row, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    Vector point;
    double objective_value = 0.0;
};

/// Two-phase primal simplex on a dense tableau with Bland's anti-cycling
/// pivot rule. Deterministic; feasibility/optimality tolerance 1e-8.
LpSolution solve_lp(const LinearProgram& lp);

} // namespace sapcert
