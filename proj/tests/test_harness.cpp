#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sapcert/bounds.hpp"
#include "sapcert/harness.hpp"
#include "sapcert/io.hpp"
#include "sapcert/linalg.hpp"
#include "sapcert/rng.hpp"

using namespace sapcert;

namespace {

// writes a near-orthogonal square matrix to a temp file, returns the path
std::string temp_matrix_file(int n, double spread, std::uint64_t seed) {
    const Matrix q = orthonormal_rows_matrix(n, n, seed);
    Matrix pert = Matrix::identity(n);
    Rng rng(seed + 1);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = spread * rng.normal();
            pert(i, j) += v;
            if (i != j) pert(j, i) += v;
        }
    const Matrix a = matmul(q, pert);
    std::string path = "harness_test_matrix_" + std::to_string(seed) + ".txt";
    save_matrix(a, path);
    return path;
}

} // namespace

TEST_CASE("theorem 1 right-hand sides") {
    const Theorem1Rhs zero = theorem1_rhs(1.0, 0.0, 0.0, 2, 0.0, 2.0, 1.0, 2.0);
    CHECK(*zero.eq3 == doctest::Approx(0.0));
    CHECK(*zero.eq4 == doctest::Approx(0.0));
    CHECK_FALSE(zero.eq5.has_value());

    const Theorem1Rhs eq5 = theorem1_rhs(1.0, 0.5, 0.1, 2, 0.3, 1.0, 1.0, 1.0);
    REQUIRE(eq5.eq5.has_value());
    CHECK(*eq5.eq5 == doctest::Approx(2.6).epsilon(1e-12));
    CHECK_FALSE(eq5.eq3.has_value());

    const Theorem1Rhs eq3 = theorem1_rhs(1.0, 0.0, 0.0, 4, 1.0, 2.0, 1.0, 2.0);
    CHECK(*eq3.eq3 == doctest::Approx(1.0).epsilon(1e-12)); // 2 * 4^{-1/2}

    CHECK_THROWS_AS(theorem1_rhs(1.0, 1.0, 0.1, 2, 0.1, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("corollary 2 bound") {
    CHECK(corollary2_bound(0.0, 1.0, 0.5, 0.25) == doctest::Approx(4.0 * 0.5 + 2.0 * 0.25));
    CHECK(corollary2_bound(0.5, 2.0, 1.0, 1.0) == doctest::Approx(16.0 + 6.0));
    CHECK_THROWS_AS(corollary2_bound(1.0, 1.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("noise lands exactly on the lp sphere") {
    Rng rng(1);
    for (const double p : {1.0, 2.0, kInf}) {
        for (int rep = 0; rep < 50; ++rep) {
            const Vector noise = random_lp_sphere(6, p, 0.37, rng);
            CHECK(lq_quasinorm(noise, p) == doctest::Approx(0.37).epsilon(1e-12));
        }
        CHECK(norm2(random_lp_sphere(6, p, 0.0, rng)) == 0.0);
    }
}

TEST_CASE("orthonormal-rows ensemble has orthogonal rows") {
    const Matrix a = orthonormal_rows_matrix(4, 10, 3);
    const Matrix gram = matmul(a, a.transposed());
    Matrix expect = Matrix::identity(4);
    for (int i = 0; i < 4; ++i) expect(i, i) = 10.0 / 4.0;
    CHECK(max_abs_diff(gram, expect) <= 1e-9);
}

TEST_CASE("exact recovery experiment on the orthonormal ensemble") {
    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::orthonormal_rows;
    cfg.m = 8;
    cfg.n = 16;
    cfg.s = 2;
    cfg.p = kInf;
    cfg.eps_grid = {0.0};
    cfg.trials = 10;
    cfg.seed = 42;
    const BoundReport report = run_experiment(cfg);
    REQUIRE(static_cast<int>(report.trials.size()) == 10);
    for (const TrialRow& row : report.trials) {
        CHECK(row.err_q <= 1e-7); // exact recovery at this size
        CHECK(row.pass);
    }
    CHECK(report.all_pass);
}

TEST_CASE("certified bounds hold end to end on a certified matrix") {
    const std::string path = temp_matrix_file(8, 0.005, 4242);

    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::file;
    cfg.matrix_file = path;
    cfg.m = 8;
    cfg.n = 8;
    cfg.s = 2;
    cfg.p = 1.0;
    cfg.eps_grid = {0.0, 0.05};
    cfg.trials = 8;
    cfg.seed = 7;
    cfg.signal_kind = SignalKind::compressible;
    cfg.theta = 1.0;

    const BoundReport report = run_experiment(cfg);
    std::remove(path.c_str());

    REQUIRE_FALSE(report.uncertified);
    // rip route (p = r = 2) applies on the eps = 0 rows, nsp route everywhere
    bool saw_eq3 = false, saw_eq4 = false, saw_eq5 = false, saw_cor2 = false;
    for (const TrialRow& row : report.trials) {
        for (const TrialBound& b : row.bounds) {
            if (b.name.find("thm1_eq3") != std::string::npos) saw_eq3 = true;
            if (b.name.find("thm1_eq4") != std::string::npos) saw_eq4 = true;
            if (b.name.find("thm1_eq5") != std::string::npos) saw_eq5 = true;
            if (b.name.find("cor2") != std::string::npos) saw_cor2 = true;
            CHECK(b.pass);
            if (row.eps > 0.0) CHECK(b.name.find("[nsp-transfer]") != std::string::npos);
        }
    }
    CHECK(saw_eq3);
    CHECK(saw_eq4);
    CHECK(saw_eq5);
    CHECK(saw_cor2);
    CHECK(report.all_pass);
    CHECK(report.violations == 0);
    CHECK(report.max_ratio <= 1.0 + 1e-9);
}

TEST_CASE("uncertified ensembles skip the bounds but emit trials") {
    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::gaussian;
    cfg.m = 4;
    cfg.n = 12;
    cfg.s = 2;
    cfg.p = 1.0;
    cfg.eps_grid = {0.0};
    cfg.trials = 3;
    cfg.seed = 11;
    const BoundReport report = run_experiment(cfg);
    CHECK(report.trials.size() == 3);
    if (report.uncertified)
        for (const TrialRow& row : report.trials) CHECK(row.bounds.empty());
}

TEST_CASE("report serialization round-trips") {
    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::orthonormal_rows;
    cfg.m = 6;
    cfg.n = 12;
    cfg.s = 2;
    cfg.p = kInf;
    cfg.eps_grid = {0.0, 0.01};
    cfg.trials = 4;
    cfg.seed = 99;
    const BoundReport report = run_experiment(cfg);

    const std::string text = report_to_json(report);
    const BoundReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);

    const std::string csv = report_to_csv(report);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == report.trials.size() + 1);

    // byte-identical reruns
    const BoundReport rerun = run_experiment(cfg);
    CHECK(report_to_csv(rerun) == csv);
    CHECK(report_to_json(rerun) == text);
}

TEST_CASE("config json round-trip keeps inf exponents") {
    ExperimentConfig cfg;
    cfg.p = kInf;
    cfg.eps_grid = {0.0, 0.5};
    cfg.m = 6;
    cfg.n = 12;
    cfg.s = 2;
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(std::isinf(back.p));
    CHECK(back.eps_grid == cfg.eps_grid);
    CHECK(back.m == cfg.m);
}

TEST_CASE("expander ensemble records alpha and applies corollary 1") {
    ExperimentConfig cfg;
    cfg.ensemble = Ensemble::expander;
    cfg.m = 18;
    cfg.n = 20;
    cfg.s = 2;
    cfg.p = 1.0;
    cfg.expander_degree = 4;
    cfg.eps_grid = {0.0};
    cfg.trials = 2;
    cfg.seed = 3;
    const BoundReport report = run_experiment(cfg);
    CHECK(report.trials.size() == 2);
    for (const auto& rec : report.certificates) {
        if (rec.label == "expander") {
            CHECK(rec.alpha.has_value());
            CHECK(*rec.alpha < 0.25);
        }
    }
}
