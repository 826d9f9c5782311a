#pragma once

#include <optional>

namespace sapcert {

/// Stable-recovery right-hand sides. eq3/eq4 apply when q < r, eq5 when
/// q = r; inapplicable entries are empty.
///   eq3: ||x*-x||_r^q <= (3+b)D/(1-b) (2e)^q + 2(1+b)^2/(1-b) s^(q/r-1) sigma^q
///   eq4: ||x*-x||_q^q <= (3+b)D/(1-b) s^(1-q/p) (2e)^q + 2(1+b)^2/(1-b) sigma^q
///   eq5: ||x*-x||_q^q <= 2D/(1-b) (2e)^q + 2(1+b)/(1-b) sigma^q
struct Theorem1Rhs {
    std::optional<double> eq3;
    std::optional<double> eq4;
    std::optional<double> eq5;
};

/// Requires D > 0, beta in [0, 1), q in (0, 1], q <= r, eps >= 0, sigma >= 0.
Theorem1Rhs theorem1_rhs(double d_const, double beta, double eps, int s, double sigma,
                         double p, double q, double r);

/// l1 error bound from the null space constant (p = q = 1):
///   4 inf||R||_1 / (1-gamma) eps + (2+2 gamma)/(1-gamma) sigma_s.
/// Requires gamma in [0, 1).
double corollary2_bound(double gamma, double min_right_inverse_norm, double eps, double sigma_s);

} // namespace sapcert
