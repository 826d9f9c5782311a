#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sapcert/certify.hpp"
#include "sapcert/expander.hpp"
#include "sapcert/matrix.hpp"
#include "sapcert/rng.hpp"

namespace sapcert {

enum class Ensemble { gaussian, orthonormal_rows, expander, file };
enum class SignalKind { sparse, compressible };

std::string to_string(Ensemble e);
std::string to_string(SignalKind k);
Ensemble ensemble_from_string(const std::string& s);
SignalKind signal_kind_from_string(const std::string& s);

struct ExperimentConfig {
    Ensemble ensemble = Ensemble::gaussian;
    int m = 4;
    int n = 8;
    int s = 1;
    double p = 1.0;
    double q = 1.0; // solver objective exponent; bounds need q = 1
    std::vector<double> eps_grid = {0.0};
    int trials = 10;
    std::uint64_t seed = 1;
    SignalKind signal_kind = SignalKind::sparse;
    double theta = 1.0;     // compressible decay
    double mag_lo = 1.0;    // sparse magnitudes
    double mag_hi = 2.0;
    int expander_degree = 1;
    std::string matrix_file;
    std::string output_path;
    std::string format = "json";

    void validate() const;
};

/// One certificate route with the side quantities its bounds need.
struct CertificateRecord {
    std::string label;
    SapCertificate cert;
    std::optional<double> delta;             // rip route
    std::optional<double> gamma;             // nsp route
    std::optional<double> right_inverse_l1;  // nsp route
    std::optional<double> alpha;             // expander route
    std::optional<int> graph_degree;         // expander route
    bool usable = false;                     // beta < 1 and exponents match the solve
};

struct TrialBound {
    std::string name; // e.g. "thm1_eq5[nsp-transfer]"
    double observed = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct TrialRow {
    int index = 0;
    std::uint64_t seed = 0;
    double eps = 0.0;
    double sigma = 0.0; // sigma_{s,q}(x)
    double err_q = 0.0; // ||x*-x||_q
    double err_r = 0.0; // ||x*-x||_2 (reported alongside)
    std::string solver_status;
    std::vector<TrialBound> bounds;
    bool pass = true;
};

struct BoundReport {
    ExperimentConfig config;
    std::vector<CertificateRecord> certificates;
    bool uncertified = false;
    std::vector<TrialRow> trials;
    int violations = 0;
    double max_ratio = 0.0; // max observed/rhs over evaluated bounds
    bool all_pass = true;
};

/// Deterministic per config.seed; trials run concurrently and are merged in
/// trial order.
BoundReport run_experiment(const ExperimentConfig& cfg);

/// Ensemble constructors (exposed for tests and the CLI).
Matrix gaussian_matrix(int m, int n, std::uint64_t seed);
/// m rows of a random n x n orthogonal matrix, scaled by sqrt(n/m).
Matrix orthonormal_rows_matrix(int m, int n, std::uint64_t seed);
/// Noise drawn uniformly on the lp sphere of radius eps (exact norm).
Vector random_lp_sphere(int m, double p, double eps, Rng& rng);

std::string report_to_json(const BoundReport& report);
BoundReport report_from_json(const std::string& text);
std::string report_to_csv(const BoundReport& report);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

/// Writes the report; format is "json" or "csv".
void emit_report(const BoundReport& report, const std::string& format, const std::string& path);

} // namespace sapcert
