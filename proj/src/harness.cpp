#include "sapcert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sapcert/bounds.hpp"
#include "sapcert/combinatorics.hpp"
#include "sapcert/io.hpp"
#include "sapcert/linalg.hpp"
#include "sapcert/lp.hpp"
#include "sapcert/parallel.hpp"
#include "sapcert/recovery.hpp"
#include "sapcert/signal.hpp"

namespace sapcert {

using nlohmann::json;

std::string to_string(Ensemble e) {
    switch (e) {
        case Ensemble::gaussian: return "gaussian";
        case Ensemble::orthonormal_rows: return "orthonormal-rows";
        case Ensemble::expander: return "expander";
        case Ensemble::file: return "file";
    }
    return "unknown";
}

std::string to_string(SignalKind k) { return k == SignalKind::sparse ? "sparse" : "compressible"; }

Ensemble ensemble_from_string(const std::string& s) {
    if (s == "gaussian") return Ensemble::gaussian;
    if (s == "orthonormal-rows") return Ensemble::orthonormal_rows;
    if (s == "expander") return Ensemble::expander;
    if (s == "file") return Ensemble::file;
    throw std::invalid_argument("unknown ensemble: " + s);
}

SignalKind signal_kind_from_string(const std::string& s) {
    if (s == "sparse") return SignalKind::sparse;
    if (s == "compressible") return SignalKind::compressible;
    throw std::invalid_argument("unknown signal kind: " + s);
}

void ExperimentConfig::validate() const {
    if (!(m >= 1 && n >= m && 2 * s <= m && s >= 1))
        throw std::invalid_argument("config: need 1 <= 2s <= m <= n");
    if (q != 1.0) throw std::invalid_argument("config: bound evaluation requires q = 1");
    if (!(p == 1.0 || p == 2.0 || std::isinf(p))) throw std::invalid_argument("config: p must be 1, 2, or inf");
    if (trials < 0) throw std::invalid_argument("config: negative trial count");
    if (eps_grid.empty()) throw std::invalid_argument("config: empty eps grid");
    for (double e : eps_grid)
        if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("config: eps must be finite and >= 0");
    if (ensemble == Ensemble::expander && (expander_degree < 1 || expander_degree > m))
        throw std::invalid_argument("config: expander degree out of range");
    if (ensemble == Ensemble::file && matrix_file.empty())
        throw std::invalid_argument("config: matrix_file required for the file ensemble");
    if (format != "json" && format != "csv") throw std::invalid_argument("config: format must be json or csv");
}

Matrix gaussian_matrix(int m, int n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
    return a;
}

Matrix orthonormal_rows_matrix(int m, int n, std::uint64_t seed) {
    // U of the SVD of a random Gaussian square matrix is Haar-orthogonal.
    const Matrix g = gaussian_matrix(n, n, seed);
    const SvdResult f = svd(g);
    Matrix a(m, n);
    const double scale = std::sqrt(static_cast<double>(n) / m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * f.u(j, i);
    return a;
}

Vector random_lp_sphere(int m, double p, double eps, Rng& rng) {
    Vector noise(m, 0.0);
    if (eps == 0.0) return noise;
    if (std::isinf(p)) {
        // pick a face, fill the rest uniformly
        const int face = rng.uniform_int(0, m - 1);
        for (int i = 0; i < m; ++i) noise[i] = rng.uniform(-eps, eps);
        noise[face] = rng.sign() * eps;
        return noise;
    }
    if (p == 1.0) {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            noise[i] = rng.exponential();
            total += noise[i];
        }
        for (int i = 0; i < m; ++i) {
            const int sign = rng.sign();
            noise[i] = sign * noise[i] * eps / total;
        }
        return noise;
    }
    if (p == 2.0) {
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            noise[i] = rng.normal();
            total += noise[i] * noise[i];
        }
        const double scale = eps / std::sqrt(total);
        for (int i = 0; i < m; ++i) noise[i] *= scale;
        return noise;
    }
    throw std::invalid_argument("random_lp_sphere: p must be 1, 2, or inf");
}

namespace {

constexpr double kBoundSlack = 1.0e-9;

Matrix build_matrix(const ExperimentConfig& cfg, std::optional<BipartiteGraph>& graph) {
    switch (cfg.ensemble) {
        case Ensemble::gaussian: return gaussian_matrix(cfg.m, cfg.n, mix_seed(cfg.seed, 0));
        case Ensemble::orthonormal_rows: return orthonormal_rows_matrix(cfg.m, cfg.n, mix_seed(cfg.seed, 0));
        case Ensemble::expander: {
            graph = random_left_regular(cfg.n, cfg.m, cfg.expander_degree, mix_seed(cfg.seed, 0));
            return graph->adjacency_matrix();
        }
        case Ensemble::file: return load_matrix(cfg.matrix_file);
    }
    throw std::logic_error("unreachable ensemble");
}

std::vector<CertificateRecord> certify_routes(const ExperimentConfig& cfg, const Matrix& a,
                                              const std::optional<BipartiteGraph>& graph) {
    std::vector<CertificateRecord> records;
    const std::uint64_t enum_cap = 1000000;

    // A certificate's error bound needs the solve's residual exponent to
    // match its own p, except at eps = 0 where the constraint is an equality
    // and every norm of A(x*-x)'s budget is zero.
    const bool has_zero_eps = std::any_of(cfg.eps_grid.begin(), cfg.eps_grid.end(),
                                          [](double e) { return e == 0.0; });
    auto mark_usable = [&](CertificateRecord& rec) {
        rec.usable = rec.cert.beta < 1.0 && rec.cert.q == cfg.q &&
                     (rec.cert.p == cfg.p || has_zero_eps);
    };

    // RIP route (p = r = 2)
    if (binomial_capped(cfg.n, 2 * cfg.s, enum_cap) <= enum_cap) {
        const RipCertificate rip = rip_constant(a, 2 * cfg.s);
        if (rip.method == CertMethod::exhaustive && rip.delta < 1.0) {
            CertificateRecord rec;
            rec.label = "rip-transfer";
            rec.cert = sap_from_rip(rip.delta, cfg.s, cfg.q);
            rec.delta = rip.delta;
            mark_usable(rec);
            records.push_back(std::move(rec));
        }
    }

    // NSP route (p = q = r = 1)
    const NspCertificate nsp = nsp_constant_l1(a, cfg.s);
    if (nsp.method == CertMethod::exhaustive && std::isfinite(nsp.gamma)) {
        const SvdResult f = svd(a);
        if (a.rows() <= a.cols() && f.rank() == a.rows()) {
            CertificateRecord rec;
            rec.label = "nsp-transfer";
            rec.cert = sap_from_nsp(a, nsp);
            rec.gamma = nsp.gamma;
            rec.right_inverse_l1 = rec.cert.d_const / std::max(1.0, nsp.gamma);
            mark_usable(rec);
            records.push_back(std::move(rec));
        }
    }

    // Expander route (p = q = r = 1)
    if (graph) {
        const ExpansionCertificate exp_cert = expansion_alpha(*graph, std::min(2 * cfg.s, cfg.n));
        if (exp_cert.alpha_star < 0.25) {
            CertificateRecord rec;
            rec.label = "expander";
            rec.cert = sap_constants_expander(graph->degree, exp_cert.alpha_star, cfg.s);
            rec.alpha = exp_cert.alpha_star;
            rec.graph_degree = graph->degree;
            mark_usable(rec);
            records.push_back(std::move(rec));
        }
    }
    return records;
}

RecoveryResult solve_trial(const Matrix& a, const Vector& z, double eps, double p, double q) {
    RecoveryProblem pr{a, z, eps, p, q};
    if (q == 1.0) {
        if (p == 2.0 && eps > 0.0) return solve_l1_l2(pr);
        return solve_l1(pr);
    }
    return solve_lq_irls(pr);
}

} // namespace

BoundReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    BoundReport report;
    report.config = cfg;

    std::optional<BipartiteGraph> graph;
    const Matrix a = build_matrix(cfg, graph);
    report.certificates = certify_routes(cfg, a, graph);
    report.uncertified = std::none_of(report.certificates.begin(), report.certificates.end(),
                                      [](const CertificateRecord& r) { return r.usable; });

    const int rows_total = cfg.trials * static_cast<int>(cfg.eps_grid.size());
    report.trials.assign(rows_total, TrialRow{});

    parallel_for(0, cfg.trials, [&](int t) {
        const std::uint64_t trial_seed = mix_seed(cfg.seed, 1000 + t);
        const Signal x = cfg.signal_kind == SignalKind::sparse
                             ? generate_s_sparse(cfg.n, cfg.s, trial_seed, cfg.mag_lo, cfg.mag_hi)
                             : generate_compressible(cfg.n, cfg.theta, trial_seed);
        const double sigma = best_s_term(x, cfg.s, cfg.q).sigma;
        const Vector ax = matvec(a, x);

        for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e) {
            const double eps = cfg.eps_grid[e];
            Rng noise_rng(mix_seed(trial_seed, 7 + e));
            const Vector z = ax + random_lp_sphere(cfg.m, cfg.p, eps, noise_rng);

            TrialRow row;
            row.index = t * static_cast<int>(cfg.eps_grid.size()) + static_cast<int>(e);
            row.seed = trial_seed;
            row.eps = eps;
            row.sigma = sigma;

            const RecoveryResult sol = solve_trial(a, z, eps, cfg.p, cfg.q);
            row.solver_status = to_string(sol.status);
            const Vector h = sol.solution - x;
            row.err_q = lq_quasinorm(h, cfg.q);
            row.err_r = norm2(h);

            for (std::size_t c = 0; c < report.certificates.size(); ++c) {
                const CertificateRecord& rec = report.certificates[c];
                if (!rec.usable) continue;
                if (rec.cert.p != cfg.p && eps != 0.0) continue;
                const SapCertificate& cert = rec.cert;
                const double sigma_cert = best_s_term(x, cert.s, cert.q).sigma;
                const Theorem1Rhs rhs =
                    theorem1_rhs(cert.d_const, cert.beta, eps, cert.s, sigma_cert, cert.p, cert.q, cert.r);
                auto add_bound = [&](const char* name, double observed, double value) {
                    TrialBound b;
                    b.name = std::string(name) + "[" + rec.label + "]";
                    b.observed = observed;
                    b.rhs = value;
                    b.pass = observed <= value + kBoundSlack;
                    row.bounds.push_back(std::move(b));
                };
                if (rhs.eq3)
                    add_bound("thm1_eq3", std::pow(lq_quasinorm(h, cert.r), cert.q), *rhs.eq3);
                if (rhs.eq4)
                    add_bound("thm1_eq4", std::pow(lq_quasinorm(h, cert.q), cert.q), *rhs.eq4);
                if (rhs.eq5)
                    add_bound("thm1_eq5", std::pow(lq_quasinorm(h, cert.q), cert.q), *rhs.eq5);
                if (rec.alpha && cfg.p == 1.0 && cfg.q == 1.0 && *rec.alpha < 1.0 / 6.0)
                    add_bound("cor1", norm1(h), corollary1_bound(*rec.graph_degree, *rec.alpha, eps, sigma_cert));
                if (rec.gamma && cfg.p == 1.0 && cfg.q == 1.0 && *rec.gamma < 1.0)
                    add_bound("cor2", norm1(h), corollary2_bound(*rec.gamma, *rec.right_inverse_l1, eps, sigma_cert));
            }
            row.pass = std::all_of(row.bounds.begin(), row.bounds.end(),
                                   [](const TrialBound& b) { return b.pass; });
            report.trials[row.index] = std::move(row);
        }
    });

    for (const TrialRow& row : report.trials) {
        for (const TrialBound& b : row.bounds) {
            if (!b.pass) ++report.violations;
            if (b.rhs > 1.0e-300) report.max_ratio = std::max(report.max_ratio, b.observed / b.rhs);
        }
        if (!row.pass) report.all_pass = false;
    }
    return report;
}

namespace {

json cert_to_json(const CertificateRecord& rec) {
    json j{{"label", rec.label},
           {"provenance", to_string(rec.cert.provenance)},
           {"s", rec.cert.s},
           {"p", rec.cert.p},
           {"q", rec.cert.q},
           {"r", rec.cert.r},
           {"D", rec.cert.d_const},
           {"beta", rec.cert.beta},
           {"usable", rec.usable}};
    if (rec.delta) j["delta"] = *rec.delta;
    if (rec.gamma) j["gamma"] = *rec.gamma;
    if (rec.right_inverse_l1) j["right_inverse_l1"] = *rec.right_inverse_l1;
    if (rec.alpha) j["alpha"] = *rec.alpha;
    if (rec.graph_degree) j["graph_degree"] = *rec.graph_degree;
    return j;
}

CertificateRecord cert_from_json(const json& j) {
    CertificateRecord rec;
    rec.label = j.at("label").get<std::string>();
    const std::string prov = j.at("provenance").get<std::string>();
    if (prov == "rip-transfer") rec.cert.provenance = SapProvenance::rip_transfer;
    else if (prov == "nsp-transfer") rec.cert.provenance = SapProvenance::nsp_transfer;
    else if (prov == "expander") rec.cert.provenance = SapProvenance::expander;
    else rec.cert.provenance = SapProvenance::direct_lower_bound;
    rec.cert.s = j.at("s").get<int>();
    rec.cert.p = j.at("p").get<double>();
    rec.cert.q = j.at("q").get<double>();
    rec.cert.r = j.at("r").get<double>();
    rec.cert.d_const = j.at("D").get<double>();
    rec.cert.beta = j.at("beta").get<double>();
    rec.usable = j.at("usable").get<bool>();
    if (j.contains("delta")) rec.delta = j.at("delta").get<double>();
    if (j.contains("gamma")) rec.gamma = j.at("gamma").get<double>();
    if (j.contains("right_inverse_l1")) rec.right_inverse_l1 = j.at("right_inverse_l1").get<double>();
    if (j.contains("alpha")) rec.alpha = j.at("alpha").get<double>();
    if (j.contains("graph_degree")) rec.graph_degree = j.at("graph_degree").get<int>();
    return rec;
}

json config_to_json_obj(const ExperimentConfig& cfg) {
    return json{{"ensemble", to_string(cfg.ensemble)},
                {"m", cfg.m},
                {"n", cfg.n},
                {"s", cfg.s},
                {"p", std::isinf(cfg.p) ? json("inf") : json(cfg.p)},
                {"q", cfg.q},
                {"eps", cfg.eps_grid},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"signal", to_string(cfg.signal_kind)},
                {"theta", cfg.theta},
                {"magnitude", {cfg.mag_lo, cfg.mag_hi}},
                {"degree", cfg.expander_degree},
                {"matrix_file", cfg.matrix_file},
                {"output", cfg.output_path},
                {"format", cfg.format}};
}

ExperimentConfig config_from_json_obj(const json& j) {
    ExperimentConfig cfg;
    cfg.ensemble = ensemble_from_string(j.at("ensemble").get<std::string>());
    cfg.m = j.at("m").get<int>();
    cfg.n = j.at("n").get<int>();
    cfg.s = j.at("s").get<int>();
    if (j.at("p").is_string()) cfg.p = kInf;
    else cfg.p = j.at("p").get<double>();
    if (j.contains("q")) cfg.q = j.at("q").get<double>();
    cfg.eps_grid = j.at("eps").get<std::vector<double>>();
    cfg.trials = j.at("trials").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("signal")) cfg.signal_kind = signal_kind_from_string(j.at("signal").get<std::string>());
    if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
    if (j.contains("magnitude")) {
        cfg.mag_lo = j.at("magnitude").at(0).get<double>();
        cfg.mag_hi = j.at("magnitude").at(1).get<double>();
    }
    if (j.contains("degree")) cfg.expander_degree = j.at("degree").get<int>();
    if (j.contains("matrix_file")) cfg.matrix_file = j.at("matrix_file").get<std::string>();
    if (j.contains("output")) cfg.output_path = j.at("output").get<std::string>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
    return cfg;
}

} // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_to_json_obj(cfg).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

std::string report_to_json(const BoundReport& report) {
    json j;
    j["config"] = config_to_json_obj(report.config);
    j["certificates"] = json::array();
    for (const auto& rec : report.certificates) j["certificates"].push_back(cert_to_json(rec));
    j["uncertified"] = report.uncertified;
    j["trials"] = json::array();
    for (const auto& row : report.trials) {
        json bounds = json::array();
        for (const auto& b : row.bounds)
            bounds.push_back(json{{"name", b.name}, {"observed", b.observed}, {"rhs", b.rhs}, {"pass", b.pass}});
        j["trials"].push_back(json{{"index", row.index},
                                   {"seed", row.seed},
                                   {"eps", row.eps},
                                   {"sigma", row.sigma},
                                   {"err_q", row.err_q},
                                   {"err_r", row.err_r},
                                   {"solver_status", row.solver_status},
                                   {"bounds", std::move(bounds)},
                                   {"pass", row.pass}});
    }
    j["summary"] = json{{"trial_rows", report.trials.size()},
                        {"violations", report.violations},
                        {"max_ratio", report.max_ratio},
                        {"all_pass", report.all_pass}};
    return j.dump(2);
}

BoundReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    BoundReport report;
    report.config = config_from_json_obj(j.at("config"));
    for (const auto& c : j.at("certificates")) report.certificates.push_back(cert_from_json(c));
    report.uncertified = j.at("uncertified").get<bool>();
    for (const auto& t : j.at("trials")) {
        TrialRow row;
        row.index = t.at("index").get<int>();
        row.seed = t.at("seed").get<std::uint64_t>();
        row.eps = t.at("eps").get<double>();
        row.sigma = t.at("sigma").get<double>();
        row.err_q = t.at("err_q").get<double>();
        row.err_r = t.at("err_r").get<double>();
        row.solver_status = t.at("solver_status").get<std::string>();
        for (const auto& b : t.at("bounds")) {
            TrialBound tb;
            tb.name = b.at("name").get<std::string>();
            tb.observed = b.at("observed").get<double>();
            tb.rhs = b.at("rhs").get<double>();
            tb.pass = b.at("pass").get<bool>();
            row.bounds.push_back(std::move(tb));
        }
        row.pass = t.at("pass").get<bool>();
        report.trials.push_back(std::move(row));
    }
    report.violations = j.at("summary").at("violations").get<int>();
    report.max_ratio = j.at("summary").at("max_ratio").get<double>();
    report.all_pass = j.at("summary").at("all_pass").get<bool>();
    return report;
}

std::string report_to_csv(const BoundReport& report) {
    // bound columns fixed by the first row that carries them, in cert order
    std::vector<std::string> bound_names;
    for (const auto& row : report.trials)
        for (const auto& b : row.bounds)
            if (std::find(bound_names.begin(), bound_names.end(), b.name) == bound_names.end())
                bound_names.push_back(b.name);

    std::ostringstream os;
    os << "trial,seed,eps,sigma,err_q,err_r,solver_status";
    for (const auto& name : bound_names) os << ',' << name << "_observed," << name << "_rhs," << name << "_pass";
    os << ",pass\n";
    for (const auto& row : report.trials) {
        os << row.index << ',' << row.seed << ',' << format_double(row.eps) << ',' << format_double(row.sigma)
           << ',' << format_double(row.err_q) << ',' << format_double(row.err_r) << ',' << row.solver_status;
        for (const auto& name : bound_names) {
            const auto it = std::find_if(row.bounds.begin(), row.bounds.end(),
                                         [&](const TrialBound& b) { return b.name == name; });
            if (it == row.bounds.end()) {
                os << ",,,";
            } else {
                os << ',' << format_double(it->observed) << ',' << format_double(it->rhs) << ','
                   << (it->pass ? 1 : 0);
            }
        }
        os << ',' << (row.pass ? 1 : 0) << '\n';
    }
    return os.str();
}

void emit_report(const BoundReport& report, const std::string& format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    if (format == "json") out << report_to_json(report) << '\n';
    else if (format == "csv") out << report_to_csv(report);
    else throw std::invalid_argument("emit_report: format must be json or csv");
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace sapcert
