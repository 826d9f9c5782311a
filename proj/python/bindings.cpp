#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "sapcert/bounds.hpp"
#include "sapcert/certify.hpp"
#include "sapcert/expander.hpp"
#include "sapcert/harness.hpp"
#include "sapcert/precondition.hpp"
#include "sapcert/recovery.hpp"
#include "sapcert/signal.hpp"

namespace py = pybind11;
using namespace sapcert;

namespace {

using PyMatrix = std::vector<std::vector<double>>;

Matrix to_matrix(const PyMatrix& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("matrix must be nonempty");
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows.front().size());
    Matrix a(m, n);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw std::invalid_argument("ragged matrix rows");
        for (int j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    return a;
}

PyMatrix from_matrix(const Matrix& a) {
    PyMatrix rows(a.rows(), std::vector<double>(a.cols()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j);
    return rows;
}

RecoveryProblem make_problem(const PyMatrix& a, const Vector& z, double eps, double p, double q) {
    return RecoveryProblem{to_matrix(a), z, eps, p, q};
}

} // namespace

PYBIND11_MODULE(_sapcert, m) {
    m.doc() = "measurement-matrix certification (SAP/NSP/RIP) and l1 recovery";

    py::class_<RipCertificate>(m, "RipCertificate")
        .def_readonly("s", &RipCertificate::s)
        .def_readonly("delta", &RipCertificate::delta)
        .def_property_readonly("method",
                               [](const RipCertificate& c) { return to_string(c.method); });

    py::class_<NspCertificate>(m, "NspCertificate")
        .def_readonly("s", &NspCertificate::s)
        .def_readonly("q", &NspCertificate::q)
        .def_readonly("gamma", &NspCertificate::gamma)
        .def_readonly("witness_support", &NspCertificate::witness_support)
        .def_property_readonly("method",
                               [](const NspCertificate& c) { return to_string(c.method); });

    py::class_<SapCertificate>(m, "SapCertificate")
        .def_readonly("s", &SapCertificate::s)
        .def_readonly("p", &SapCertificate::p)
        .def_readonly("q", &SapCertificate::q)
        .def_readonly("r", &SapCertificate::r)
        .def_readonly("D", &SapCertificate::d_const)
        .def_readonly("beta", &SapCertificate::beta)
        .def_property_readonly("provenance",
                               [](const SapCertificate& c) { return to_string(c.provenance); });

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("pass_", &CheckReport::pass)
        .def_readonly("detail", &CheckReport::detail)
        .def_readonly("witness", &CheckReport::witness)
        .def_readonly("witness_support", &CheckReport::witness_support)
        .def("__bool__", [](const CheckReport& r) { return r.pass; });

    py::class_<RecoveryResult>(m, "RecoveryResult")
        .def_readonly("solution", &RecoveryResult::solution)
        .def_readonly("residual_norm", &RecoveryResult::residual_norm)
        .def_readonly("objective", &RecoveryResult::objective)
        .def_readonly("certified_optimal", &RecoveryResult::certified_optimal)
        .def_property_readonly("status",
                               [](const RecoveryResult& r) { return to_string(r.status); });

    py::class_<ExpansionCertificate>(m, "ExpansionCertificate")
        .def_readonly("checked_size", &ExpansionCertificate::checked_size)
        .def_readonly("alpha_star", &ExpansionCertificate::alpha_star);

    // signal model
    m.def("lq_quasinorm", [](const Vector& x, double q) { return lq_quasinorm(x, q); },
          py::arg("x"), py::arg("q"));
    m.def(
        "best_s_term",
        [](const Vector& x, int s, double q) {
            const BestTermResult r = best_s_term(x, s, q);
            return py::make_tuple(r.kept, r.sigma);
        },
        py::arg("x"), py::arg("s"), py::arg("q") = 1.0);
    m.def("generate_s_sparse", &generate_s_sparse, py::arg("n"), py::arg("s"), py::arg("seed"),
          py::arg("mag_lo") = 1.0, py::arg("mag_hi") = 2.0);
    m.def("generate_compressible", &generate_compressible, py::arg("n"), py::arg("theta"),
          py::arg("seed"));
    m.def(
        "greedy_block_partition",
        [](const Vector& h, int s, const std::vector<int>& s0) {
            return greedy_block_partition(h, s, s0).blocks;
        },
        py::arg("h"), py::arg("s"), py::arg("s0") = std::vector<int>{});

    // recovery
    m.def(
        "solve_l1",
        [](const PyMatrix& a, const Vector& z, double eps, double p) {
            return solve_l1(make_problem(a, z, eps, p, 1.0));
        },
        py::arg("a"), py::arg("z"), py::arg("eps") = 0.0, py::arg("p") = 2.0);
    m.def(
        "solve_l1_l2",
        [](const PyMatrix& a, const Vector& z, double eps) {
            return solve_l1_l2(make_problem(a, z, eps, 2.0, 1.0));
        },
        py::arg("a"), py::arg("z"), py::arg("eps"));
    m.def(
        "solve_lq_irls",
        [](const PyMatrix& a, const Vector& z, double q) {
            return solve_lq_irls(make_problem(a, z, 0.0, 2.0, q));
        },
        py::arg("a"), py::arg("z"), py::arg("q"));
    m.def(
        "sparse_oracle",
        [](const PyMatrix& a, const Vector& z, int k, double eps, double p, double q)
            -> std::optional<RecoveryResult> {
            return sparse_oracle(make_problem(a, z, eps, p, q), k);
        },
        py::arg("a"), py::arg("z"), py::arg("k"), py::arg("eps") = 0.0, py::arg("p") = 2.0,
        py::arg("q") = 1.0);

    // certification
    m.def(
        "rip_constant",
        [](const PyMatrix& a, int s) { return rip_constant(to_matrix(a), s); },
        py::arg("a"), py::arg("s"));
    m.def(
        "nsp_constant_l1",
        [](const PyMatrix& a, int s) { return nsp_constant_l1(to_matrix(a), s); },
        py::arg("a"), py::arg("s"));
    m.def(
        "min_right_inverse_l1",
        [](const PyMatrix& a) { return min_right_inverse_l1(to_matrix(a)); }, py::arg("a"));
    m.def("theorem4_coefficients", [](double delta) {
        const Theorem4Coefficients c = theorem4_coefficients(delta);
        return py::make_tuple(c.c1, c.c2);
    });
    m.def("sap_from_rip", &sap_from_rip, py::arg("delta_2s"), py::arg("s"), py::arg("q") = 1.0);
    m.def(
        "sap_from_nsp",
        [](const PyMatrix& a, const NspCertificate& cert) { return sap_from_nsp(to_matrix(a), cert); },
        py::arg("a"), py::arg("cert"));
    m.def(
        "sap_beta_lower_bound",
        [](const PyMatrix& a, int s, double p, double q, double r, double d) {
            return sap_beta_lower_bound(to_matrix(a), s, p, q, r, d);
        },
        py::arg("a"), py::arg("s"), py::arg("p"), py::arg("q"), py::arg("r"), py::arg("D"));
    m.def(
        "nsp_from_sap_check",
        [](const PyMatrix& a, const SapCertificate& cert) { return nsp_from_sap_check(to_matrix(a), cert); },
        py::arg("a"), py::arg("cert"));
    m.def(
        "lower_frame_check",
        [](const PyMatrix& a, const SapCertificate& cert) { return lower_frame_check(to_matrix(a), cert); },
        py::arg("a"), py::arg("cert"));
    m.def(
        "converse_check",
        [](const PyMatrix& a, double b1, double b2, int s, double p, double q, int samples) {
            return converse_check(to_matrix(a), b1, b2, s, p, q, samples);
        },
        py::arg("a"), py::arg("b1"), py::arg("b2"), py::arg("s"), py::arg("p"), py::arg("q"),
        py::arg("samples") = 10000);

    // expander graphs (exposed through adjacency matrices)
    m.def(
        "random_left_regular_adjacency",
        [](int n, int m_, int d, std::uint64_t seed) {
            return from_matrix(random_left_regular(n, m_, d, seed).adjacency_matrix());
        },
        py::arg("n"), py::arg("m"), py::arg("d"), py::arg("seed"));
    m.def("perfect_matching_adjacency",
          [](int n) { return from_matrix(perfect_matching(n).adjacency_matrix()); }, py::arg("n"));
    m.def(
        "expansion_alpha_star",
        [](int n, int m_, int d, std::uint64_t seed, int k) {
            return expansion_alpha(random_left_regular(n, m_, d, seed), k);
        },
        py::arg("n"), py::arg("m"), py::arg("d"), py::arg("seed"), py::arg("k"));
    m.def("sap_constants_expander", &sap_constants_expander, py::arg("d"), py::arg("alpha"),
          py::arg("s"));
    m.def("corollary1_bound", &corollary1_bound, py::arg("d"), py::arg("alpha"), py::arg("eps"),
          py::arg("sigma_s"));
    m.def(
        "rip1_deviation",
        [](int n, int m_, int d, std::uint64_t seed, int s, int samples) {
            const auto [lo, hi] = rip1_deviation(random_left_regular(n, m_, d, seed), s, samples);
            return py::make_tuple(lo, hi);
        },
        py::arg("n"), py::arg("m"), py::arg("d"), py::arg("seed"), py::arg("s"),
        py::arg("samples") = 200);

    // preconditioning
    m.def(
        "svd_preconditioner",
        [](const PyMatrix& a) {
            const auto [pre, tilde] = svd_preconditioner(to_matrix(a));
            return py::make_tuple(from_matrix(pre.p), from_matrix(tilde));
        },
        py::arg("a"));
    m.def("eq12_value", [](const PyMatrix& a) { return eq12_value(to_matrix(a)); }, py::arg("a"));

    // bounds and the harness
    m.def(
        "theorem1_rhs",
        [](double d, double beta, double eps, int s, double sigma, double p, double q, double r) {
            const Theorem1Rhs rhs = theorem1_rhs(d, beta, eps, s, sigma, p, q, r);
            py::dict out;
            if (rhs.eq3) out["eq3"] = *rhs.eq3;
            if (rhs.eq4) out["eq4"] = *rhs.eq4;
            if (rhs.eq5) out["eq5"] = *rhs.eq5;
            return out;
        },
        py::arg("D"), py::arg("beta"), py::arg("eps"), py::arg("s"), py::arg("sigma"), py::arg("p"),
        py::arg("q"), py::arg("r"));
    m.def("corollary2_bound", &corollary2_bound, py::arg("gamma"), py::arg("min_right_inverse_norm"),
          py::arg("eps"), py::arg("sigma_s"));
    m.def(
        "run_experiment_json",
        [](const std::string& config_json) {
            const ExperimentConfig cfg = config_from_json(config_json);
            return report_to_json(run_experiment(cfg));
        },
        py::arg("config_json"), "run an experiment from a config JSON string, returns the report JSON");

    m.attr("__version__") = "0.1.0";
}
