// Acceptance suite. Runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion; exit code is nonzero when any fail.
//
// Criteria 1/2/5/6/9 share an instance family: random 10x20 row-orthonormal
// matrices whose exhaustive delta_4 makes the RIP-to-SAP transfer yield
// beta < 1. That selection gate requires delta_4 < (sqrt(2)-1)/2 ~ 0.2071,
// which no matrix of this size reaches (the pairwise column coherence alone
// forces delta_2 >= ~0.23 for unit-ish columns; observed delta_4 here is
// ~0.93+). The search runs exactly as stated and those criteria report
// honest failures with the measured evidence instead of a weakened gate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sapcert/bounds.hpp"
#include "sapcert/certify.hpp"
#include "sapcert/combinatorics.hpp"
#include "sapcert/expander.hpp"
#include "sapcert/harness.hpp"
#include "sapcert/linalg.hpp"
#include "sapcert/precondition.hpp"
#include "sapcert/recovery.hpp"
#include "sapcert/rng.hpp"
#include "sapcert/signal.hpp"

using namespace sapcert;

namespace {

struct Instance {
    std::uint64_t seed = 0;
    Matrix a;
    double delta4 = 0.0;
    SapCertificate rip_cert; // p = r = 2, q = 1
};

struct NspRoute {
    SapCertificate cert; // p = q = r = 1
    double gamma = 0.0;
    double right_inverse = 0.0;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void announce(int id, const Outcome& out, double seconds) {
    std::printf("[%s] criterion %2d (%5.1fs): %s\n", out.pass ? "PASS" : "FAIL", id, seconds,
                out.detail.c_str());
    if (!out.pass) ++failures;
}

template <typename F>
void run(int id, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    announce(id, out, secs);
}

double beta_one_threshold_bisect(double lo, double hi, int iters) {
    // smallest delta with C2(delta) = 1, i.e. beta = 1 at q = 1
    for (int it = 0; it < iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        (theorem4_coefficients(mid).c2 < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double beta_one_threshold_walk(int iters) {
    // second bracketing strategy: walk down from the right until C2 < 1,
    // then bisect the last step
    double hi = 0.9;
    double step = 0.9;
    while (theorem4_coefficients(hi).c2 >= 1.0) {
        step *= 0.5;
        hi -= step;
    }
    return beta_one_threshold_bisect(hi, hi + step, iters);
}

// ----- the shared instance search (criterion 1's selection gate) -----

constexpr int kSeedBudget = 400;
constexpr int kWanted = 5;

struct SearchResult {
    std::vector<Instance> instances;
    int seeds_tried = 0;
    double min_delta4 = kInf;
    double threshold = 0.0;
};

SearchResult search_instances() {
    SearchResult res;
    res.threshold = beta_one_threshold_bisect(0.0, 0.999, 60);
    const auto start = std::chrono::steady_clock::now();
    for (int seed = 0; seed < kSeedBudget; ++seed) {
        if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > 40.0) break;
        ++res.seeds_tried;
        Matrix a = orthonormal_rows_matrix(10, 20, 1000 + static_cast<std::uint64_t>(seed));
        const RipCertificate rip = rip_constant(a, 4);
        res.min_delta4 = std::min(res.min_delta4, rip.delta);
        if (rip.delta >= 1.0) continue;
        const SapCertificate cert = sap_from_rip(rip.delta, 2, 1.0);
        if (cert.beta < 1.0) {
            res.instances.push_back({static_cast<std::uint64_t>(seed), std::move(a), rip.delta, cert});
            if (static_cast<int>(res.instances.size()) >= kWanted) break;
        }
    }
    return res;
}

std::string blocked_detail(const SearchResult& sr) {
    std::ostringstream os;
    os << "blocked: criterion 1 selection produced no instances (searched " << sr.seeds_tried
       << " seeds, min delta_4 = " << sr.min_delta4 << ", need < " << sr.threshold << ")";
    return os.str();
}

} // namespace

int main() {
    std::printf("acceptance suite: SAP certification toolkit\n");

    const SearchResult sr = search_instances();
    std::vector<std::optional<NspRoute>> nsp_routes(sr.instances.size());
    bool criterion2_passed = false;

    // 1. Exact recovery on RIP-certified 10x20 row-orthonormal instances.
    run(1, [&]() -> Outcome {
        Outcome out;
        if (static_cast<int>(sr.instances.size()) < kWanted) {
            std::ostringstream os;
            os << "found " << sr.instances.size() << "/" << kWanted
               << " instances with exhaustive delta_4 giving sap_from_rip beta < 1 after "
               << sr.seeds_tried << " seeds; min delta_4 = " << sr.min_delta4
               << " vs required < " << sr.threshold
               << " (unattainable at 10x20: column coherence keeps delta_4 near 1)";
            out.detail = os.str();
            return out;
        }
        int trials = 0;
        double worst = 0.0;
        for (const Instance& inst : sr.instances) {
            for (int t = 0; t < 20; ++t) {
                const Signal x = generate_s_sparse(20, 2, mix_seed(inst.seed, 50 + t));
                const Vector z = matvec(inst.a, x);
                const RecoveryResult r = solve_l1({inst.a, z, 0.0, kInf, 1.0});
                if (r.status != SolveStatus::success) {
                    out.detail = "solver failure";
                    return out;
                }
                worst = std::max(worst, norm_inf(r.solution - x));
                ++trials;
            }
        }
        out.pass = worst <= 1e-7;
        std::ostringstream os;
        os << trials << " trials on " << sr.instances.size() << " instances, max ||x*-x||_inf = " << worst;
        out.detail = os.str();
        return out;
    });

    // 2. The q = r = 1 error bound (rhs eq5) via the NSP transfer (p = 1).
    run(2, [&]() -> Outcome {
        Outcome out;
        if (sr.instances.empty()) {
            out.detail = blocked_detail(sr);
            return out;
        }
        int evaluated = 0, violations = 0;
        double max_gamma = 0.0;
        for (std::size_t i = 0; i < sr.instances.size(); ++i) {
            const Instance& inst = sr.instances[i];
            const NspCertificate nsp = nsp_constant_l1(inst.a, 2);
            max_gamma = std::max(max_gamma, nsp.gamma);
            if (nsp.method != CertMethod::exhaustive || !std::isfinite(nsp.gamma) || nsp.gamma >= 1.0)
                continue;
            NspRoute route;
            route.cert = sap_from_nsp(inst.a, nsp);
            route.gamma = nsp.gamma;
            route.right_inverse = route.cert.d_const / std::max(1.0, nsp.gamma);
            nsp_routes[i] = route;
            for (int t = 0; t < 100; ++t) {
                const Signal x = generate_compressible(20, 1.0, mix_seed(inst.seed, 900 + t));
                const double sigma = best_s_term(x, 2, 1.0).sigma;
                Rng rng(mix_seed(inst.seed, 7000 + t));
                for (const double eps : {0.0, 0.01, 0.1}) {
                    const Vector z = matvec(inst.a, x) + random_lp_sphere(10, 1.0, eps, rng);
                    const RecoveryResult r = solve_l1({inst.a, z, eps, 1.0, 1.0});
                    const double rhs =
                        *theorem1_rhs(route.cert.d_const, route.cert.beta, eps, 2, sigma, 1.0, 1.0, 1.0).eq5;
                    if (norm1(r.solution - x) > rhs + 1e-9) ++violations;
                    ++evaluated;
                }
            }
        }
        std::size_t certified = 0;
        for (const auto& r : nsp_routes) certified += r.has_value();
        out.pass = certified == sr.instances.size() && violations == 0 && evaluated > 0;
        std::ostringstream os;
        os << certified << "/" << sr.instances.size() << " instances had gamma_2 < 1 (max gamma_2 = "
           << max_gamma << "); " << evaluated << " bound evaluations, " << violations << " violations";
        out.detail = os.str();
        criterion2_passed = out.pass;
        return out;
    });

    // 3. Closed-form constant reproduction and the beta = 1 threshold.
    run(3, [&]() -> Outcome {
        Outcome out;
        const Theorem4Coefficients c = theorem4_coefficients(0.1);
        const long double delta = 0.1L;
        const long double root = std::sqrt(1.0L + delta) + std::sqrt(2.0L * delta);
        const long double c1 = root / ((1.0L - delta) * std::sqrt(1.0L + delta));
        const long double c2 = root * root / ((1.0L - delta) * (1.0L - delta)) * delta;
        const double err1 = std::fabs(c.c1 - static_cast<double>(c1));
        const double err2 = std::fabs(c.c2 - static_cast<double>(c2));

        const double t1 = beta_one_threshold_bisect(0.0, 0.999, 80);
        const double t2 = beta_one_threshold_walk(80);
        const double spread = std::fabs(t1 - t2);

        out.pass = err1 <= 1e-12 && err2 <= 1e-12 && spread <= 1e-6;
        std::ostringstream os;
        os << "C1 err = " << err1 << ", C2 err = " << err2 << ", threshold = " << t1
           << " (two bracketing strategies differ by " << spread << ")";
        out.detail = os.str();
        return out;
    });

    // 4. gamma exactness and sampler sanity on 20 random 5x10 matrices.
    run(4, [&]() -> Outcome {
        Outcome out;
        const NspCertificate row = nsp_constant_l1(Matrix(1, 2, {1, 1}), 1);
        if (std::fabs(row.gamma - 1.0) > 1e-12) {
            out.detail = "gamma of [1 1] is " + std::to_string(row.gamma);
            return out;
        }
        int close = 0;
        bool upper_ok = true;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Matrix a = gaussian_matrix(5, 10, 2000 + seed);
            const NspCertificate lp = nsp_constant_l1(a, 1);
            const double sampled = nsp_gamma_sampled_lower_bound(a, 1, 100000, 3000 + seed);
            if (sampled > lp.gamma + 1e-6) upper_ok = false;
            if (sampled >= lp.gamma - 0.05) ++close;
        }
        out.pass = upper_ok && close >= 15;
        std::ostringstream os;
        os << "gamma([1 1]) = 1 exactly; sampled lower bound <= LP on all, within 0.05 on " << close
           << "/20";
        out.detail = os.str();
        return out;
    });

    // 5. gamma_2 never exceeds beta for any criterion-1 certificate.
    run(5, [&]() -> Outcome {
        Outcome out;
        if (sr.instances.empty()) {
            out.detail = blocked_detail(sr);
            return out;
        }
        double worst_slack = -kInf;
        for (const Instance& inst : sr.instances) {
            const NspCertificate nsp = nsp_constant_l1(inst.a, 2);
            if (!std::isfinite(nsp.gamma)) {
                out.detail = "gamma_2 infinite on instance";
                return out;
            }
            worst_slack = std::max(worst_slack, nsp.gamma - inst.rip_cert.beta);
        }
        out.pass = worst_slack <= 1e-9;
        std::ostringstream os;
        os << "max (gamma_2 - beta) over instances = " << worst_slack;
        out.detail = os.str();
        return out;
    });

    // 6. Lower frame bounds implied by each criterion-1 certificate.
    run(6, [&]() -> Outcome {
        Outcome out;
        if (sr.instances.empty()) {
            out.detail = blocked_detail(sr);
            return out;
        }
        for (const Instance& inst : sr.instances) {
            const CheckReport rep = lower_frame_check(inst.a, inst.rip_cert);
            if (!rep.pass) {
                out.detail = "violated: " + rep.detail;
                return out;
            }
        }
        out.pass = true;
        out.detail = "exhaustive sigma_min over |S| <= 4 satisfied both lower frame bounds on all instances";
        return out;
    });

    // 7. Expander error bound on the perfect matching.
    run(7, [&]() -> Outcome {
        Outcome out;
        const BipartiteGraph g = perfect_matching(12);
        const ExpansionCertificate alpha = expansion_alpha(g, 4);
        if (alpha.alpha_star != 0.0) {
            out.detail = "alpha* of the perfect matching is nonzero";
            return out;
        }
        const Matrix phi = g.adjacency_matrix();
        int violations = 0, trials = 0;
        double max_ratio = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Signal x = generate_compressible(12, 1.0, mix_seed(77, t));
            const double sigma = best_s_term(x, 2, 1.0).sigma;
            Rng rng(mix_seed(78, t));
            for (const double eps : {0.0, 0.05}) {
                const Vector z = matvec(phi, x) + random_lp_sphere(12, 1.0, eps, rng);
                const RecoveryResult r = solve_l1({phi, z, eps, 1.0, 1.0});
                const double bound = corollary1_bound(1, 0.0, eps, sigma); // 4 eps + 2 sigma
                const double observed = norm1(r.solution - x);
                if (observed > bound + 1e-9) ++violations;
                if (bound > 1e-12) max_ratio = std::max(max_ratio, observed / bound);
                ++trials;
            }
        }
        out.pass = violations == 0;
        std::ostringstream os;
        os << trials << " trials, " << violations << " violations, max observed/bound = " << max_ratio;
        out.detail = os.str();
        return out;
    });

    // 8. eq12_value against the closed-form cap.
    run(8, [&]() -> Outcome {
        Outcome out;
        const double row_value = eq12_value(Matrix(1, 2, {1, 1}));
        if (std::fabs(row_value - std::sqrt(2.0)) > 1e-9) {
            out.detail = "eq12([1 1]) = " + std::to_string(row_value);
            return out;
        }
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const Matrix a = gaussian_matrix(4, 8, 4000 + seed);
            worst = std::max(worst, eq12_value(a));
        }
        out.pass = worst <= std::sqrt(8.0) + 1e-9;
        std::ostringstream os;
        os << "eq12([1 1]) = sqrt(2); max over 50 random 4x8 = " << worst << " <= sqrt(8) = "
           << std::sqrt(8.0);
        out.detail = os.str();
        return out;
    });

    // 9. Converse inequality with the constants a passing criterion 2 implies.
    run(9, [&]() -> Outcome {
        Outcome out;
        if (sr.instances.empty()) {
            out.detail = blocked_detail(sr);
            return out;
        }
        if (!criterion2_passed) {
            out.detail = "blocked: criterion 2 did not produce a passing bound run";
            return out;
        }
        for (std::size_t i = 0; i < sr.instances.size(); ++i) {
            if (!nsp_routes[i]) continue;
            const NspRoute& route = *nsp_routes[i];
            const double b1 = 4.0 * route.cert.d_const / (1.0 - route.cert.beta);
            const double b2 = 2.0 * (1.0 + route.cert.beta) / (1.0 - route.cert.beta);
            const CheckReport rep = converse_check(sr.instances[i].a, b1, b2, 2, 1.0, 1.0, 10000);
            if (!rep.pass) {
                out.detail = "violated: " + rep.detail;
                return out;
            }
        }
        out.pass = true;
        out.detail = "converse inequality held on 10^4 samples per instance";
        return out;
    });

    // 10. Falsification sensitivity of the certificate checks.
    run(10, [&]() -> Outcome {
        Outcome out;
        const Matrix row(1, 2, {1, 1});
        SapCertificate corrupted = sap_from_nsp(row, nsp_constant_l1(row, 1));
        corrupted.beta *= 0.5;
        const CheckReport nsp_rep = nsp_from_sap_check(row, corrupted);
        const bool caught_beta = !nsp_rep.pass && (!nsp_rep.witness.empty() || !nsp_rep.witness_support.empty());

        // lower_frame_check with D scaled by 0.1; runs on a criterion-1
        // instance when one exists, otherwise on a square near-orthogonal
        // matrix with its own exhaustive RIP certificate (stated here since
        // criterion 6 had no instances to corrupt).
        Matrix subject;
        SapCertificate frame_cert;
        std::string source;
        if (!sr.instances.empty()) {
            subject = sr.instances.front().a;
            frame_cert = sr.instances.front().rip_cert;
            source = "criterion-1 instance";
        } else {
            const Matrix q = orthonormal_rows_matrix(12, 12, 777);
            Matrix pert = Matrix::identity(12);
            Rng rng(778);
            for (int i = 0; i < 12; ++i)
                for (int j = i; j < 12; ++j) {
                    const double v = 0.01 * rng.normal();
                    pert(i, j) += v;
                    if (i != j) pert(j, i) += v;
                }
            subject = matmul(q, pert);
            const RipCertificate rip = rip_constant(subject, 4);
            frame_cert = sap_from_rip(rip.delta, 2, 1.0);
            source = "fallback near-orthogonal 12x12 (delta_4 = " + std::to_string(rip.delta) + ")";
        }
        SapCertificate weak_d = frame_cert;
        weak_d.d_const *= 0.1;
        const CheckReport frame_rep = lower_frame_check(subject, weak_d);
        const bool caught_d = !frame_rep.pass && !frame_rep.witness_support.empty();

        out.pass = caught_beta && caught_d;
        std::ostringstream os;
        os << "beta*0.5 on [1 1] " << (caught_beta ? "caught with witness" : "NOT caught") << "; D*0.1 on "
           << source << " " << (caught_d ? "caught with witness support" : "NOT caught");
        out.detail = os.str();
        return out;
    });

    std::printf("%d/10 criteria passed\n", 10 - failures);
    if (failures > 0)
        std::printf("criteria 1, 2, 5, 6, 9 depend on an instance family whose selection gate "
                    "(delta_4 < 0.2071 at 10x20) is numerically unattainable; see the detail lines.\n");
    return failures == 0 ? 0 : 1;
}
