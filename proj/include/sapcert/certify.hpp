#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sapcert/matrix.hpp"

namespace sapcert {

enum class CertMethod { exhaustive, sampled_lower_bound };

std::string to_string(CertMethod m);

/// delta_s(A): worst eigenvalue deviation of A_S^t A_S from 1 over |S| = s.
struct RipCertificate {
    int s = 0;
    double delta = 0.0;
    CertMethod method = CertMethod::exhaustive;
};

/// gamma_s(A) in lq; infinity means some nonzero null-space vector lives on
/// at most s indices (witness_support names one such support).
struct NspCertificate {
    int s = 0;
    double q = 1.0;
    double gamma = 0.0;
    CertMethod method = CertMethod::exhaustive;
    std::vector<int> witness_support;
};

enum class SapProvenance { rip_transfer, nsp_transfer, expander, direct_lower_bound };

std::string to_string(SapProvenance p);

/// Constants (D, beta) for ||x_s||_r^q <= D ||A x||_p^q + beta s^(q/r-1) sigma_{s,q}^q.
struct SapCertificate {
    int s = 0;
    double p = 2.0;
    double q = 1.0;
    double r = 2.0;
    double d_const = 1.0;
    double beta = 0.0;
    SapProvenance provenance = SapProvenance::direct_lower_bound;
};

struct CheckReport {
    bool pass = true;
    std::string detail;
    Vector witness;                   // offending vector, when one exists
    std::vector<int> witness_support; // offending support, when one exists
};

/// Exhaustive when C(n, s) <= 1e6, otherwise a sampled lower bound over
/// random s-sparse unit vectors (method tag says which).
RipCertificate rip_constant(const Matrix& a, int s, int samples = 10000, std::uint64_t seed = 7);

/// Exact gamma_s for q = 1 by LP over every support and sign pattern.
/// Falls back to a sampled lower bound when C(n, s) 2^s exceeds 1e6.
NspCertificate nsp_constant_l1(const Matrix& a, int s);

/// Adaptive sampling lower bound for gamma_s: best ratio
/// ||x_S||_q^q / ||x_{S^c}||_q^q over sampled null-space vectors. This is the
/// only gamma route for q < 1 (the exact computation exists for q = 1 only).
double nsp_gamma_sampled_lower_bound(const Matrix& a, int s, int samples, std::uint64_t seed,
                                     double q = 1.0);

/// max_i of min ||r||_1 s.t. A r = e_i; equals inf over right inverses of
/// the 1->1 operator norm. Requires full row rank.
double min_right_inverse_l1(const Matrix& a);

/// Squared-form constants of the RIP-to-SAP transfer:
///   ||x||_2^2 <= C1 ||Ax||_2^2 + C2 s^(1-2/q) sigma_{s,q}^2.
struct Theorem4Coefficients {
    double c1 = 1.0;
    double c2 = 0.0;
};
Theorem4Coefficients theorem4_coefficients(double delta);

/// (D, beta) = (C1^(q/2), C2^(q/2)) with p = r = 2. Requires delta in [0, 1).
SapCertificate sap_from_rip(double delta_2s, int s, double q);

/// D = max(1, gamma) inf_R ||R||_{1->1}, beta = gamma, with p = q = r = 1.
/// Requires an exhaustive certificate with finite gamma and q = 1.
SapCertificate sap_from_nsp(const Matrix& a, const NspCertificate& cert);

/// Adversarial sampling lower bound on the minimal beta compatible with the
/// given D. Infinite when an s-sparse null-space vector exists.
double sap_beta_lower_bound(const Matrix& a, int s, double p, double q, double r, double d_const,
                            int samples = 4000, std::uint64_t seed = 11);

/// Null space property implied by a SAP certificate: checks
/// ||x_S||_q^q <= beta ||x_{S^c}||_q^q on sampled null-space vectors over all
/// |S| <= s, and (for q = 1) that the exhaustive gamma_s is <= beta.
CheckReport nsp_from_sap_check(const Matrix& a, const SapCertificate& cert,
                               int samples = 500, std::uint64_t seed = 13);

/// Lower frame bounds implied by a SAP certificate:
///   (1/D) ||x||_r^q <= ||Ax||_p^q on sparse x with |supp| <= s, and
///   ((1-beta)/(2D)) ||x||_r^q <= ||Ax||_p^q on |supp| <= 2s.
/// Exhaustive via submatrix singular values when p = r = 2.
CheckReport lower_frame_check(const Matrix& a, const SapCertificate& cert,
                              int samples = 2000, std::uint64_t seed = 17);

/// ||x||_p^q <= B1 ||Ax||_p^q + B2 s^(q/p-1) sigma_{s,q}^q on sampled and
/// structured vectors.
CheckReport converse_check(const Matrix& a, double b1, double b2, int s, double p, double q,
                           int samples, std::uint64_t seed = 19);

} // namespace sapcert
