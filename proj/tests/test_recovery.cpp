#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sapcert/harness.hpp"
#include "sapcert/recovery.hpp"
#include "sapcert/rng.hpp"

using namespace sapcert;

namespace {

const Matrix kSmall(2, 3, {1, 0, 1, 0, 1, 1});
const Signal kSmallZ{1.0, 1.0};

Matrix random_matrix(int m, int n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    return a;
}

} // namespace

TEST_CASE("l1 recovery picks the sparse vertex") {
    // supports enumerated by hand: (1,1,0) costs 2, (0,0,1) costs 1
    const RecoveryProblem pr{kSmall, kSmallZ, 0.0, kInf, 1.0};
    const RecoveryResult r = solve_l1(pr);
    REQUIRE(r.status == SolveStatus::success);
    CHECK(r.certified_optimal);
    CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(norm_inf(r.solution - Signal{0.0, 0.0, 1.0}) <= 1e-9);

    const auto oracle = sparse_oracle(pr, 1);
    REQUIRE(oracle.has_value());
    CHECK(oracle->objective == doctest::Approx(r.objective).epsilon(1e-9));
}

TEST_CASE("zero vector wins once eps covers the measurements") {
    for (const double p : {1.0, kInf}) {
        RecoveryProblem pr{kSmall, kSmallZ, 0.0, p, 1.0};
        pr.eps = lq_quasinorm(kSmallZ, p) + 0.01;
        const RecoveryResult r = solve_l1(pr);
        REQUIRE(r.status == SolveStatus::success);
        CHECK(r.objective <= 1e-7);
    }
}

TEST_CASE("identity matrix returns the measurements") {
    const RecoveryProblem pr{Matrix::identity(3), {0.5, -1.0, 2.0}, 0.0, kInf, 1.0};
    const RecoveryResult r = solve_l1(pr);
    CHECK(norm_inf(r.solution - Signal{0.5, -1.0, 2.0}) <= 1e-9);
}

TEST_CASE("l2-ball path tracks the equality LP for tiny eps") {
    const RecoveryResult exact = solve_l1({kSmall, kSmallZ, 0.0, 2.0, 1.0});
    const RecoveryResult admm = solve_l1_l2({kSmall, kSmallZ, 1e-6, 2.0, 1.0});
    REQUIRE(admm.status == SolveStatus::success);
    CHECK(norm_inf(admm.solution - exact.solution) <= 1e-4);
    CHECK(admm.residual_norm <= 1e-6 + 1e-7);
    CHECK_FALSE(admm.certified_optimal);
}

TEST_CASE("l2-ball path returns zero for large eps") {
    RecoveryProblem pr{kSmall, kSmallZ, 0.0, 2.0, 1.0};
    pr.eps = norm2(kSmallZ) + 0.1;
    const RecoveryResult r = solve_l1_l2(pr);
    CHECK(lq_quasinorm(r.solution, 1.0) <= 1e-7);
}

TEST_CASE("l2-ball path keeps the support of a clean sparse signal") {
    const Matrix a = orthonormal_rows_matrix(6, 12, 3);
    Signal x(12, 0.0);
    x[4] = 1.5;
    const Vector z = matvec(a, x);
    const RecoveryResult r = solve_l1_l2({a, z, 1e-2, 2.0, 1.0});
    REQUIRE(r.status == SolveStatus::success);
    CHECK(r.residual_norm <= 1e-2 + 1e-7);
    int best = 0;
    for (int j = 0; j < 12; ++j)
        if (std::fabs(r.solution[j]) > std::fabs(r.solution[best])) best = j;
    CHECK(best == 4);
    CHECK(std::fabs(r.solution[4] - 1.5) <= 5e-2);
}

TEST_CASE("irls heuristic finds the lq-sparsest point") {
    const RecoveryProblem pr{kSmall, kSmallZ, 0.0, 2.0, 0.5};
    const RecoveryResult r = solve_lq_irls(pr);
    REQUIRE(r.status == SolveStatus::success);
    CHECK(norm_inf(r.solution - Signal{0.0, 0.0, 1.0}) <= 1e-6);
    CHECK_FALSE(r.certified_optimal);

    // brute-force confirmation that (0,0,1) is the l^0.5-best 1-sparse point
    const auto oracle = sparse_oracle(pr, 1);
    REQUIRE(oracle.has_value());
    CHECK(norm_inf(oracle->solution - Signal{0.0, 0.0, 1.0}) <= 1e-9);

    const RecoveryResult ident = solve_lq_irls({Matrix::identity(3), {1.0, -2.0, 0.5}, 0.0, 2.0, 0.5});
    CHECK(norm_inf(ident.solution - Signal{1.0, -2.0, 0.5}) <= 1e-9);

    CHECK_THROWS_AS(solve_lq_irls({Matrix(2, 2, {1, 1, 1, 1}), {1.0, 1.0}, 0.0, 2.0, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("sparse oracle edge cases") {
    const auto none = sparse_oracle({kSmall, kSmallZ, 0.5, kInf, 1.0}, 0);
    CHECK_FALSE(none.has_value());

    const auto zero_ok = sparse_oracle({kSmall, kSmallZ, 2.0, kInf, 1.0}, 0);
    REQUIRE(zero_ok.has_value());
    CHECK(zero_ok->objective == doctest::Approx(0.0));

    CHECK_THROWS_AS(sparse_oracle({kSmall, kSmallZ, 0.0, kInf, 1.0}, 7), std::invalid_argument);

    // combinatorial cap: C(30, 15) blows past 1e6
    const Matrix wide(1, 30, Vector(30, 1.0));
    CHECK_THROWS_AS(sparse_oracle({wide, {1.0}, 0.0, kInf, 1.0}, 15), std::invalid_argument);
}

TEST_CASE("LP agrees with full enumeration on 200 seeded problems") {
    // For eps = 0 the oracle is exact, so agreement is two-sided. For eps > 0
    // the oracle only visits least-squares points per support and the LP may
    // exploit the residual slack, so only LP <= oracle can be asserted.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(4000 + seed);
        const int m = 3 + static_cast<int>(seed % 3);
        const int n = 6 + static_cast<int>(seed % 3); // n <= 8 keeps 2^n small
        const Matrix a = random_matrix(m, n, 4000 + seed);
        const Signal x0 = generate_s_sparse(n, 2, 5000 + seed);
        Vector z = matvec(a, x0);
        const double p = (seed % 2 == 0) ? kInf : 1.0;
        const double eps = (seed % 3 == 0) ? rng.uniform(0.01, 0.3) : 0.0;
        const RecoveryProblem pr{a, z, eps, p, 1.0};

        const RecoveryResult lp = solve_l1(pr);
        REQUIRE(lp.status == SolveStatus::success);
        const auto oracle = sparse_oracle(pr, n);
        REQUIRE(oracle.has_value());
        CAPTURE(seed);
        CHECK(lp.objective <= oracle->objective + 1e-6);
        if (eps == 0.0) CHECK(lp.objective >= oracle->objective - 1e-6);
        CHECK(lp.residual_norm <= eps + 1e-7);
    }
}

TEST_CASE("objective is nonincreasing in eps") {
    const Matrix a = random_matrix(3, 6, 9001);
    const Signal x0 = generate_s_sparse(6, 2, 9002);
    const Vector z = matvec(a, x0);
    for (const double p : {1.0, kInf}) {
        double prev = kInf;
        for (const double eps : {0.0, 0.05, 0.1, 0.2, 0.5, 1.0}) {
            const RecoveryResult r = solve_l1({a, z, eps, p, 1.0});
            REQUIRE(r.status == SolveStatus::success);
            CHECK(r.objective <= prev + 1e-9);
            prev = r.objective;
        }
    }
}

TEST_CASE("zero is optimal whenever eps covers z") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matrix a = random_matrix(3, 5, 7000 + seed);
        Rng rng(7100 + seed);
        Vector z(3);
        for (double& v : z) v = rng.normal();
        for (const double p : {1.0, kInf}) {
            const double eps = lq_quasinorm(z, p) * 1.0001;
            const RecoveryResult r = solve_l1({a, z, eps, p, 1.0});
            CHECK(r.objective <= 1e-7);
        }
    }
}
