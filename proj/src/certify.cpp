#include "sapcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sapcert/combinatorics.hpp"
#include "sapcert/linalg.hpp"
#include "sapcert/lp.hpp"
#include "sapcert/parallel.hpp"
#include "sapcert/rng.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

namespace {

constexpr std::uint64_t kEnumCap = 1000000;
constexpr double kSlack = 1.0e-9;

Vector random_gaussian(Rng& rng, int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

// ||x_S||_q^q / ||x_{S^c}||_q^q with S = the s largest magnitudes (the worst
// support for a given x at any q); infinite when the tail vanishes.
double support_ratio(const Vector& x, int s, double q) {
    Vector mags(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mags[i] = std::fabs(x[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < static_cast<int>(mags.size()); ++i)
        (i < s ? head : tail) += q == 1.0 ? mags[i] : std::pow(mags[i], q);
    if (tail <= 1.0e-14 * head) return head > 0.0 ? kInf : 0.0;
    return head / tail;
}

} // namespace

std::string to_string(CertMethod m) {
    return m == CertMethod::exhaustive ? "exhaustive" : "sampled-lower-bound";
}

std::string to_string(SapProvenance p) {
    switch (p) {
        case SapProvenance::rip_transfer: return "rip-transfer";
        case SapProvenance::nsp_transfer: return "nsp-transfer";
        case SapProvenance::expander: return "expander";
        case SapProvenance::direct_lower_bound: return "direct-lower-bound";
    }
    return "unknown";
}

RipCertificate rip_constant(const Matrix& a, int s, int samples, std::uint64_t seed) {
    const int n = a.cols();
    if (s < 1 || s > n) throw std::invalid_argument("rip_constant: s out of range");

    if (binomial_capped(n, s, kEnumCap) <= kEnumCap) {
        std::vector<std::vector<int>> supports;
        for_each_combination(n, s, [&](const std::vector<int>& sub) { supports.push_back(sub); });
        std::vector<double> lo(supports.size()), hi(supports.size());
        parallel_for(0, static_cast<int>(supports.size()), [&](int i) {
            const Matrix sub = a.columns(supports[i]);
            Matrix gram(s, s);
            for (int p = 0; p < s; ++p)
                for (int r = p; r < s; ++r) {
                    double acc = 0.0;
                    for (int row = 0; row < sub.rows(); ++row) acc += sub(row, p) * sub(row, r);
                    gram(p, r) = acc;
                    gram(r, p) = acc;
                }
            const EigenResult eig = symmetric_eigen(gram);
            lo[i] = eig.values.front();
            hi[i] = eig.values.back();
        });
        double lambda_min = kInf, lambda_max = -kInf;
        for (std::size_t i = 0; i < supports.size(); ++i) {
            lambda_min = std::min(lambda_min, lo[i]);
            lambda_max = std::max(lambda_max, hi[i]);
        }
        return {s, std::max(lambda_max - 1.0, 1.0 - lambda_min), CertMethod::exhaustive};
    }

    Rng rng(seed);
    double worst = 0.0;
    for (int it = 0; it < samples; ++it) {
        Signal x = generate_s_sparse(n, s, rng.next_u64(), 0.1, 1.0);
        const double nx = norm2(x);
        if (nx == 0.0) continue;
        const double ratio = dot(matvec(a, x), matvec(a, x)) / (nx * nx);
        worst = std::max(worst, std::fabs(ratio - 1.0));
    }
    return {s, worst, CertMethod::sampled_lower_bound};
}

NspCertificate nsp_constant_l1(const Matrix& a, int s) {
    const int n = a.cols();
    if (s < 1 || s > n) throw std::invalid_argument("nsp_constant_l1: s out of range");

    const Matrix basis = null_space_basis(a);
    const int k = basis.cols();
    NspCertificate cert;
    cert.s = s;
    cert.q = 1.0;
    if (k == 0) {
        cert.gamma = 0.0;
        return cert;
    }

    const std::uint64_t support_count = binomial_capped(n, s, kEnumCap);
    const bool over_cap = support_count > kEnumCap || s >= 20 || support_count > (kEnumCap >> s);
    if (over_cap) {
        cert.method = CertMethod::sampled_lower_bound;
        cert.gamma = nsp_gamma_sampled_lower_bound(a, s, 100000, 23);
        return cert;
    }

    double best = 0.0;
    std::vector<int> best_support;
    bool unbounded = false;

    for_each_combination(n, s, [&](const std::vector<int>& support) {
        if (unbounded) return;
        std::vector<int> complement;
        complement.reserve(n - s);
        {
            std::vector<bool> in_s(n, false);
            for (int i : support) in_s[i] = true;
            for (int i = 0; i < n; ++i)
                if (!in_s[i]) complement.push_back(i);
        }
        const int nc = static_cast<int>(complement.size());
        // variables: c (k, free), t (nc, >= 0)
        for (std::uint64_t mask = 0; mask < (1ULL << s); ++mask) {
            LinearProgram lp(k + nc);
            for (int j = 0; j < nc; ++j) lp.lower[k + j] = 0.0;
            for (int row = 0; row < s; ++row) {
                const double sign = (mask >> row) & 1 ? -1.0 : 1.0;
                for (int j = 0; j < k; ++j) lp.objective[j] -= sign * basis(support[row], j);
            }
            for (int i = 0; i < nc; ++i) {
                Vector up(k + nc, 0.0), dn(k + nc, 0.0);
                for (int j = 0; j < k; ++j) {
                    up[j] = basis(complement[i], j);
                    dn[j] = -basis(complement[i], j);
                }
                up[k + i] = -1.0;
                dn[k + i] = -1.0;
                lp.add_ineq(std::move(up), 0.0);
                lp.add_ineq(std::move(dn), 0.0);
            }
            Vector budget(k + nc, 0.0);
            for (int i = 0; i < nc; ++i) budget[k + i] = 1.0;
            lp.add_ineq(std::move(budget), 1.0);

            const LpSolution sol = solve_lp(lp);
            if (sol.status == LpStatus::unbounded) {
                unbounded = true;
                best_support = support;
                return;
            }
            if (sol.status != LpStatus::optimal)
                throw std::runtime_error("nsp_constant_l1: LP did not solve");
            if (-sol.objective_value > best) {
                best = -sol.objective_value;
                best_support = support;
            }
        }
    });

    cert.gamma = unbounded ? kInf : best;
    cert.witness_support = best_support;
    return cert;
}

double nsp_gamma_sampled_lower_bound(const Matrix& a, int s, int samples, std::uint64_t seed,
                                     double q) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::invalid_argument("nsp_gamma_sampled_lower_bound: q must lie in (0, 1]");
    const Matrix basis = null_space_basis(a);
    const int k = basis.cols();
    if (k == 0) return 0.0;
    const int n = a.cols();
    Rng rng(seed);

    double best = 0.0;
    Vector best_c;
    auto try_c = [&](const Vector& c) {
        const double nc = norm2(c);
        if (nc < 1.0e-14) return;
        const double ratio = support_ratio(matvec(basis, c), s, q);
        if (ratio > best) {
            best = ratio;
            best_c = scaled(c, 1.0 / nc);
        }
    };

    // structured starts: coordinates of the projections of e_i onto N(A)
    for (int i = 0; i < n; ++i) {
        Vector c(k);
        for (int j = 0; j < k; ++j) c[j] = basis(i, j);
        try_c(c);
    }
    // shrinking-neighborhood resampling around the incumbent
    const int rounds = 5;
    const int per_round = std::max(1, samples / rounds);
    double radius = 1.0;
    for (int round = 0; round < rounds; ++round) {
        for (int it = 0; it < per_round; ++it) {
            Vector c = random_gaussian(rng, k);
            if (round > 0 && !best_c.empty()) c = best_c + scaled(c, radius);
            try_c(c);
        }
        radius *= 0.3;
    }
    return best;
}

double min_right_inverse_l1(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    const SvdResult f = svd(a);
    if (f.rank() < m) throw std::invalid_argument("min_right_inverse_l1: matrix must have full row rank");

    std::vector<double> values(m);
    parallel_for(0, m, [&](int i) {
        // min sum(r+ + r-) s.t. A (r+ - r-) = e_i
        LinearProgram lp(2 * n);
        for (int j = 0; j < 2 * n; ++j) {
            lp.objective[j] = 1.0;
            lp.lower[j] = 0.0;
        }
        for (int row = 0; row < m; ++row) {
            Vector eq(2 * n, 0.0);
            for (int j = 0; j < n; ++j) {
                eq[j] = a(row, j);
                eq[n + j] = -a(row, j);
            }
            lp.add_eq(std::move(eq), row == i ? 1.0 : 0.0);
        }
        const LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::optimal)
            throw std::runtime_error("min_right_inverse_l1: LP did not solve");
        values[i] = sol.objective_value;
    });
    return *std::max_element(values.begin(), values.end());
}

Theorem4Coefficients theorem4_coefficients(double delta) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("theorem4_coefficients: delta must lie in [0, 1)");
    const double root = std::sqrt(1.0 + delta) + std::sqrt(2.0 * delta);
    Theorem4Coefficients out;
    out.c1 = root / ((1.0 - delta) * std::sqrt(1.0 + delta));
    out.c2 = (root / (1.0 - delta)) * (root / (1.0 - delta)) * delta;
    return out;
}

SapCertificate sap_from_rip(double delta_2s, int s, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("sap_from_rip: q must lie in (0, 1]");
    if (s < 1) throw std::invalid_argument("sap_from_rip: s must be positive");
    const Theorem4Coefficients c = theorem4_coefficients(delta_2s); // validates delta
    SapCertificate cert;
    cert.s = s;
    cert.p = 2.0;
    cert.q = q;
    cert.r = 2.0;
    cert.d_const = std::pow(c.c1, q / 2.0);
    cert.beta = std::pow(c.c2, q / 2.0);
    cert.provenance = SapProvenance::rip_transfer;
    return cert;
}

SapCertificate sap_from_nsp(const Matrix& a, const NspCertificate& nsp) {
    if (nsp.q != 1.0) throw std::invalid_argument("sap_from_nsp: only q = 1 is implemented");
    if (nsp.method != CertMethod::exhaustive)
        throw std::invalid_argument("sap_from_nsp: needs an exhaustive gamma certificate");
    if (!std::isfinite(nsp.gamma)) throw std::invalid_argument("sap_from_nsp: gamma is infinite, no certificate");
    SapCertificate cert;
    cert.s = nsp.s;
    cert.p = cert.q = cert.r = 1.0;
    cert.d_const = std::max(1.0, nsp.gamma) * min_right_inverse_l1(a);
    cert.beta = nsp.gamma;
    cert.provenance = SapProvenance::nsp_transfer;
    return cert;
}

double sap_beta_lower_bound(const Matrix& a, int s, double p, double q, double r, double d_const,
                            int samples, std::uint64_t seed) {
    if (!(d_const > 0.0)) throw std::invalid_argument("sap_beta_lower_bound: D must be positive");
    const int n = a.cols();
    if (s < 1 || s > n) throw std::invalid_argument("sap_beta_lower_bound: s out of range");

    const Matrix basis = null_space_basis(a);
    const int k = basis.cols();

    // an s-sparse null-space vector forces beta = infinity
    if (k > 0 && binomial_capped(n, s, kEnumCap) <= kEnumCap) {
        bool found = false;
        for_each_combination(n, s, [&](const std::vector<int>& support) {
            if (found) return;
            std::vector<bool> in_s(n, false);
            for (int i : support) in_s[i] = true;
            Matrix rows_outside(n - s, k);
            int row = 0;
            for (int i = 0; i < n; ++i) {
                if (in_s[i]) continue;
                for (int j = 0; j < k; ++j) rows_outside(row, j) = basis(i, j);
                ++row;
            }
            if (k > n - s) {
                found = true; // more basis vectors than constraints
                return;
            }
            const SvdResult f = svd(rows_outside);
            if (f.singular_values.back() <= 1.0e-10) found = true;
        });
        if (found) return kInf;
    }

    const double scale = sparsity_scale(s, q, r);
    double best = 0.0;
    auto evaluate = [&](const Vector& x) {
        const double nx = norm2(x);
        if (nx < 1.0e-14) return;
        const BestTermResult bt = best_s_term(x, s, q);
        if (bt.sigma <= 1.0e-12 * lq_quasinorm(x, q)) return; // sigma = 0 excluded by definition
        const double head = std::pow(lq_quasinorm(bt.kept, r), q);
        const double image = std::pow(lq_quasinorm(matvec(a, x), p), q);
        const double ratio = (head - d_const * image) / (scale * std::pow(bt.sigma, q));
        best = std::max(best, ratio);
    };

    Rng rng(seed);
    for (int i = 0; i < n && k > 0; ++i) {
        Vector c(k);
        for (int j = 0; j < k; ++j) c[j] = basis(i, j);
        if (norm2(c) > 1.0e-14) evaluate(matvec(basis, c));
    }
    for (int it = 0; it < samples; ++it) {
        switch (it % 4) {
            case 0:
                evaluate(random_gaussian(rng, n));
                break;
            case 1: {
                if (k == 0) {
                    evaluate(random_gaussian(rng, n));
                    break;
                }
                evaluate(matvec(basis, random_gaussian(rng, k)));
                break;
            }
            case 2: {
                Signal spike = generate_s_sparse(n, std::min(n, s + 1 + (it / 4) % s), rng.next_u64());
                evaluate(spike);
                break;
            }
            default: {
                Vector x(n);
                for (int j = 0; j < n; ++j) x[j] = rng.sign();
                evaluate(x);
                break;
            }
        }
    }
    return std::max(best, 0.0);
}

CheckReport nsp_from_sap_check(const Matrix& a, const SapCertificate& cert, int samples, std::uint64_t seed) {
    const int n = a.cols();
    const int s = cert.s;
    CheckReport report;
    const Matrix basis = null_space_basis(a);
    const int k = basis.cols();
    if (k == 0) {
        report.detail = "null space is trivial; property holds vacuously";
        return report;
    }
    if (subset_count_up_to(n, s, kEnumCap) > kEnumCap)
        throw std::invalid_argument("nsp_from_sap_check: support enumeration too large");

    std::vector<std::vector<int>> subsets;
    for_each_subset_up_to(n, s, [&](const std::vector<int>& sub) { subsets.push_back(sub); });

    Rng rng(seed);
    int checked = 0;
    for (int it = 0; it < samples && report.pass; ++it) {
        Vector x = matvec(basis, random_gaussian(rng, k));
        const double nx = norm2(x);
        if (nx < 1.0e-14) continue;
        x = scaled(x, 1.0 / nx);
        ++checked;
        for (const auto& sub : subsets) {
            double head = 0.0, tail = 0.0;
            std::vector<bool> in_s(n, false);
            for (int i : sub) in_s[i] = true;
            for (int i = 0; i < n; ++i) {
                const double t = std::pow(std::fabs(x[i]), cert.q);
                (in_s[i] ? head : tail) += t;
            }
            if (head > cert.beta * tail + kSlack) {
                report.pass = false;
                report.witness = x;
                report.witness_support = sub;
                std::ostringstream os;
                os << "null-space vector violates ||x_S||_q^q <= beta ||x_Sc||_q^q: " << head << " > "
                   << cert.beta * tail;
                report.detail = os.str();
                break;
            }
        }
    }

    if (report.pass && cert.q == 1.0) {
        const NspCertificate nsp = nsp_constant_l1(a, s);
        if (!std::isfinite(nsp.gamma) || nsp.gamma > cert.beta + kSlack) {
            report.pass = false;
            report.witness_support = nsp.witness_support;
            std::ostringstream os;
            os << "gamma_s (" << to_string(nsp.method) << ") = " << nsp.gamma << " exceeds beta = " << cert.beta;
            report.detail = os.str();
        } else {
            std::ostringstream os;
            os << "checked " << checked << " null-space samples over " << subsets.size()
               << " supports; gamma_s = " << nsp.gamma << " <= beta = " << cert.beta;
            report.detail = os.str();
        }
    } else if (report.pass) {
        std::ostringstream os;
        os << "checked " << checked << " null-space samples over " << subsets.size() << " supports";
        report.detail = os.str();
    }
    return report;
}

CheckReport lower_frame_check(const Matrix& a, const SapCertificate& cert, int samples, std::uint64_t seed) {
    const int n = a.cols();
    const int s = cert.s;
    CheckReport report;
    const double bound_s = 1.0 / cert.d_const;
    const double bound_2s = (1.0 - cert.beta) / (2.0 * cert.d_const);
    const int big = std::min(2 * s, n);

    if (cert.p == 2.0 && cert.r == 2.0 && subset_count_up_to(n, big, kEnumCap) <= kEnumCap) {
        double min_s = kInf, min_2s = kInf;
        std::vector<int> argmin_s, argmin_2s;
        for_each_subset_up_to(n, big, [&](const std::vector<int>& sub) {
            const double smin = submatrix_extreme_singular_values(a, sub).first;
            if (static_cast<int>(sub.size()) <= s && smin < min_s) {
                min_s = smin;
                argmin_s = sub;
            }
            if (smin < min_2s) {
                min_2s = smin;
                argmin_2s = sub;
            }
        });
        std::ostringstream os;
        os << "exhaustive sigma_min over |S|<=" << s << ": " << min_s << " (need >= " << std::pow(bound_s, 1.0 / cert.q)
           << "); over |S|<=" << big << ": " << min_2s << " (need >= "
           << (bound_2s > 0.0 ? std::pow(bound_2s, 1.0 / cert.q) : 0.0) << ")";
        report.detail = os.str();
        if (std::pow(min_s, cert.q) + kSlack < bound_s) {
            report.pass = false;
            report.witness_support = argmin_s;
            return report;
        }
        if (bound_2s > 0.0 && std::pow(min_2s, cert.q) + kSlack < bound_2s) {
            report.pass = false;
            report.witness_support = argmin_2s;
            return report;
        }
        return report;
    }

    Rng rng(seed);
    for (int it = 0; it < samples; ++it) {
        const int size = 1 + rng.uniform_int(0, big - 1);
        Signal x = generate_s_sparse(n, size, rng.next_u64(), 0.5, 2.0);
        const double lhs = std::pow(lq_quasinorm(matvec(a, x), cert.p), cert.q);
        const double rhs = std::pow(lq_quasinorm(x, cert.r), cert.q);
        const double bound = size <= s ? bound_s : bound_2s;
        if (lhs + kSlack < bound * rhs) {
            report.pass = false;
            report.witness = x;
            std::ostringstream os;
            os << "sampled " << size << "-sparse vector violates the lower frame bound: " << lhs << " < "
               << bound * rhs;
            report.detail = os.str();
            return report;
        }
    }
    report.detail = "sampled sparse vectors satisfy both lower frame bounds";
    return report;
}

CheckReport converse_check(const Matrix& a, double b1, double b2, int s, double p, double q,
                           int samples, std::uint64_t seed) {
    if (!(b1 > 0.0 && b2 > 0.0)) throw std::invalid_argument("converse_check: constants must be positive");
    const int n = a.cols();
    CheckReport report;
    const Matrix basis = null_space_basis(a);
    const int k = basis.cols();
    const double scale = sparsity_scale(s, q, p);

    Rng rng(seed);
    int it = 0;
    auto examine = [&](Vector x) {
        if (!report.pass) return;
        const double nx = norm2(x);
        if (nx < 1.0e-14) return;
        x = scaled(x, 1.0 / nx);
        const double lhs = std::pow(lq_quasinorm(x, p), q);
        const double image = std::pow(lq_quasinorm(matvec(a, x), p), q);
        const double sigma = best_s_term(x, s, q).sigma;
        const double rhs = b1 * image + b2 * scale * std::pow(sigma, q);
        if (lhs > rhs + kSlack) {
            report.pass = false;
            report.witness = x;
            std::ostringstream os;
            os << "converse inequality violated: " << lhs << " > " << rhs;
            report.detail = os.str();
        }
    };

    for (; it < samples && report.pass; ++it) {
        switch (it % 4) {
            case 0:
                examine(random_gaussian(rng, n));
                break;
            case 1:
                examine(generate_s_sparse(n, 1 + rng.uniform_int(0, std::min(2 * s, n) - 1), rng.next_u64()));
                break;
            case 2: {
                if (k == 0) {
                    examine(random_gaussian(rng, n));
                    break;
                }
                examine(matvec(basis, random_gaussian(rng, k)));
                break;
            }
            default: {
                Vector x(n);
                for (int j = 0; j < n; ++j) x[j] = rng.sign();
                examine(x);
                break;
            }
        }
    }
    if (report.pass) {
        std::ostringstream os;
        os << "converse inequality holds on " << it << " sampled vectors";
        report.detail = os.str();
    }
    return report;
}

} // namespace sapcert
