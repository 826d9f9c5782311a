#include "sapcert/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "sapcert/signal.hpp"

namespace sapcert {

Theorem1Rhs theorem1_rhs(double d_const, double beta, double eps, int s, double sigma,
                         double p, double q, double r) {
    if (!(d_const > 0.0)) throw std::invalid_argument("theorem1_rhs: D must be positive");
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("theorem1_rhs: beta must lie in [0, 1)");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("theorem1_rhs: q must lie in (0, 1]");
    if (!(r >= q)) throw std::invalid_argument("theorem1_rhs: requires q <= r");
    if (!(eps >= 0.0 && sigma >= 0.0)) throw std::invalid_argument("theorem1_rhs: negative input");
    if (s < 1) throw std::invalid_argument("theorem1_rhs: s must be positive");

    const double noise = std::pow(2.0 * eps, q);
    const double tail = std::pow(sigma, q);
    const double one_minus = 1.0 - beta;

    Theorem1Rhs out;
    if (q < r) {
        const double lead = (3.0 + beta) * d_const / one_minus;
        const double trail = 2.0 * (1.0 + beta) * (1.0 + beta) / one_minus;
        out.eq3 = lead * noise + trail * sparsity_scale(s, q, r) * tail;
        const double p_ratio = std::isinf(p) ? 0.0 : q / p;
        out.eq4 = lead * std::pow(static_cast<double>(s), 1.0 - p_ratio) * noise + trail * tail;
    } else {
        out.eq5 = 2.0 * d_const / one_minus * noise + 2.0 * (1.0 + beta) / one_minus * tail;
    }
    return out;
}

double corollary2_bound(double gamma, double min_right_inverse_norm, double eps, double sigma_s) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("corollary2_bound: gamma must lie in [0, 1)");
    if (!(min_right_inverse_norm > 0.0)) throw std::invalid_argument("corollary2_bound: norm must be positive");
    if (!(eps >= 0.0 && sigma_s >= 0.0)) throw std::invalid_argument("corollary2_bound: negative input");
    return 4.0 * min_right_inverse_norm / (1.0 - gamma) * eps + (2.0 + 2.0 * gamma) / (1.0 - gamma) * sigma_s;
}

} // namespace sapcert
