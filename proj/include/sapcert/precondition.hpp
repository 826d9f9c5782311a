#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "sapcert/certify.hpp"
#include "sapcert/matrix.hpp"

namespace sapcert {

/// P = (Sigma')^{-1} U^t from the SVD of a full-row-rank A; PA has
/// orthonormal rows and the same null space as A.
struct Preconditioner {
    Matrix p;            // m x m
    Vector sigma_prime;  // the m nonzero singular values of A
};

/// Returns (P, PA). Throws when A is rank deficient.
std::pair<Preconditioner, Matrix> svd_preconditioner(const Matrix& a);

/// max_i over the first m right singular vectors v_i of the l1 distance
/// from v_i to the null space N(A); equals inf ||R||_{1->1} over right
/// inverses of the preconditioned matrix. Requires full row rank.
double eq12_value(const Matrix& a);

/// Checks the preconditioning invariances: gamma_s(PA) = gamma_s(A)
/// (exhaustive, q = 1), and if a SAP certificate for A is supplied, its
/// transfer to PA with D scaled by ||P^{-1}||_{p->p}^q on sampled vectors.
CheckReport invariance_check(const Matrix& a, const Matrix& p, int s,
                             const std::optional<SapCertificate>& cert = std::nullopt,
                             int samples = 2000, std::uint64_t seed = 31);

} // namespace sapcert
