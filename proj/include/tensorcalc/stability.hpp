#pragma once

#include "tensorcalc/matrix.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/tensor.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tensorcalc {

/// The two order-4 Lyapunov transformations of a square matrix A, defined by
/// their actions under the trailing-modes contraction:
///   a_c  * X = A X + X A^T      (type I),   a_c  = I x_c A   + A x_c I
///   a_ac * X = A X + X^T A      (type II),  a_ac = I x_ac A^T + A x_c I
/// The type-II tensor uses A^T in the anti-cross term: that is the unique
/// decomposable form whose action produces the X^T A summand.
struct LyapunovPair {
    DenseTensor a_c;
    DenseTensor a_ac;
};

inline LyapunovPair lyapunov_tensors(const DenseTensor& a) {
    require_square(a, "lyapunov_tensors");
    const DenseTensor id = identity_matrix(a.dim(0));
    return {cross_c(id, a) + cross_c(a, id), cross_ac(id, transpose(a)) + cross_c(a, id)};
}

/// V(x) = x^T P x.
inline double cqlf_value(const DenseTensor& p, const DenseTensor& x, double sym_tol = 1e-12) {
    require_square(p, "cqlf_value");
    if (!is_symmetric_matrix(p, sym_tol)) throw std::invalid_argument("cqlf_value: symmetric P required");
    if (x.order() != 1 || x.dim(0) != p.dim(0)) throw std::invalid_argument("cqlf_value: size mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < p.dim(0); ++i) {
        for (std::size_t j = 0; j < p.dim(0); ++j) v += x.values()[i] * p(i, j) * x.values()[j];
    }
    return v;
}

/// The matrix A^T P + P A governing dV/dt = x^T (A^T P + P A) x along
/// dx/dt = A x. Equals the left contraction P * a_c of the type-I tensor.
inline DenseTensor cqlf_derivative(const DenseTensor& a, const DenseTensor& p, double sym_tol = 1e-12) {
    require_square(a, "cqlf_derivative");
    require_square(p, "cqlf_derivative");
    if (!is_symmetric_matrix(p, sym_tol)) throw std::invalid_argument("cqlf_derivative: symmetric P required");
    return mat_mul(transpose(a), p) + mat_mul(p, a);
}

struct CertificateResult {
    bool stable = false;
    bool p_positive_definite = false;
    bool decrease_definite = false;   // A^T P + P A negative definite
    double min_pivot_p = 0.0;         // worst Cholesky pivot of P
    double min_pivot_decrease = 0.0;  // worst Cholesky pivot of -(A^T P + P A)
    std::string detail;
};

/// Certifies asymptotic stability through the candidate CQLF x^T P x:
/// P > 0 and A^T P + P A < 0, both tested by attempted Cholesky
/// factorization with the given pivot tolerance. Never throws on an
/// uncertifiable pair; the result carries the failing pivot as a witness.
inline CertificateResult stability_certificate(const DenseTensor& a, const DenseTensor& p,
                                               double tol = 1e-10, double sym_tol = 1e-12) {
    CertificateResult res;
    const CholeskyResult cp = cholesky(p, tol);
    res.p_positive_definite = cp.success;
    res.min_pivot_p = cp.min_pivot;

    const DenseTensor q = cqlf_derivative(a, p, sym_tol);
    const CholeskyResult cq = cholesky(-1.0 * q, tol);
    res.decrease_definite = cq.success;
    res.min_pivot_decrease = cq.min_pivot;

    res.stable = res.p_positive_definite && res.decrease_definite;
    if (!res.p_positive_definite) {
        res.detail = "P is not positive definite (pivot " + std::to_string(res.min_pivot_p) + ")";
    } else if (!res.decrease_definite) {
        res.detail = "A^T P + P A is not negative definite (pivot " +
                     std::to_string(res.min_pivot_decrease) + ")";
    } else {
        res.detail = "certified";
    }
    return res;
}

/// Solves A^T P + P A = -Q through the vectorized n^2 x n^2 linear system;
/// the result is symmetrized. Test-fixture plumbing for building certified
/// pairs.
inline DenseTensor lyapunov_solve(const DenseTensor& a, const DenseTensor& q) {
    require_square(a, "lyapunov_solve");
    require_square(q, "lyapunov_solve");
    const std::size_t n = a.dim(0);
    if (q.dim(0) != n) throw std::invalid_argument("lyapunov_solve: size mismatch");
    // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P) with column stacking.
    const DenseTensor id = identity_matrix(n);
    const DenseTensor at = transpose(a);
    const DenseTensor system = kron(id, at) + kron(at, id);
    DenseTensor rhs({n * n});
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) rhs.values()[j * n + i] = -q(i, j);
    }
    const DenseTensor vec_p = solve_linear(system, rhs);
    DenseTensor p({n, n});
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) p(i, j) = vec_p.values()[j * n + i];
    }
    return 0.5 * (p + transpose(p));
}

} // namespace tensorcalc
