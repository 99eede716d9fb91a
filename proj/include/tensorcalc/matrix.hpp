#pragma once

#include "tensorcalc/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

// Small dense-matrix kernels over order-2 DenseTensor values. Everything is
// desk scale (n in the tens at most), so the routines favour clarity over
// blocking: partial-pivot LU, Cholesky with a pivot tolerance, cofactor
// adjugates and a scaling-and-squaring exponential.

namespace tensorcalc {

inline void require_matrix(const DenseTensor& a, const char* what) {
    if (a.order() != 2) throw std::invalid_argument(std::string(what) + ": matrix required");
}

inline void require_square(const DenseTensor& a, const char* what) {
    require_matrix(a, what);
    if (a.dim(0) != a.dim(1)) throw std::invalid_argument(std::string(what) + ": square matrix required");
}

inline DenseTensor mat_mul(const DenseTensor& a, const DenseTensor& b) {
    require_matrix(a, "mat_mul");
    require_matrix(b, "mat_mul");
    if (a.dim(1) != b.dim(0)) throw std::invalid_argument("mat_mul: inner dimensions differ");
    const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
    DenseTensor r({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t s = 0; s < k; ++s) {
            const double av = a(i, s);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += av * b(s, j);
        }
    }
    return r;
}

inline DenseTensor mat_vec(const DenseTensor& a, const DenseTensor& x) {
    require_matrix(a, "mat_vec");
    if (x.order() != 1 || x.dim(0) != a.dim(1)) throw std::invalid_argument("mat_vec: size mismatch");
    DenseTensor r({a.dim(0)});
    for (std::size_t i = 0; i < a.dim(0); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.dim(1); ++j) s += a(i, j) * x.values()[j];
        r.values()[i] = s;
    }
    return r;
}

inline DenseTensor transpose(const DenseTensor& a) {
    require_matrix(a, "transpose");
    return permute(a, {1, 0});
}

inline DenseTensor kron(const DenseTensor& a, const DenseTensor& b) {
    require_matrix(a, "kron");
    require_matrix(b, "kron");
    const std::size_t am = a.dim(0), an = a.dim(1), bm = b.dim(0), bn = b.dim(1);
    DenseTensor r({am * bm, an * bn});
    for (std::size_t i = 0; i < am; ++i) {
        for (std::size_t j = 0; j < an; ++j) {
            for (std::size_t k = 0; k < bm; ++k) {
                for (std::size_t l = 0; l < bn; ++l) {
                    r(i * bm + k, j * bn + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// LU factorization (partial pivoting) and its consumers
// ---------------------------------------------------------------------------

struct LuFactors {
    DenseTensor lu;              // packed L (unit diagonal) and U
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

inline LuFactors lu_factor(const DenseTensor& a, double pivot_tol = 0.0) {
    require_square(a, "lu_factor");
    const std::size_t n = a.dim(0);
    LuFactors f{a, std::vector<std::size_t>(n), 1, false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(f.lu(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(f.lu(r, col)) > best) {
                best = std::abs(f.lu(r, col));
                piv = r;
            }
        }
        if (best <= pivot_tol) {
            f.singular = true;
            continue;
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(col, j));
            std::swap(f.perm[piv], f.perm[col]);
            f.sign = -f.sign;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = f.lu(r, col) / f.lu(col, col);
            f.lu(r, col) = factor;
            for (std::size_t j = col + 1; j < n; ++j) f.lu(r, j) -= factor * f.lu(col, j);
        }
    }
    return f;
}

inline double determinant(const DenseTensor& a) {
    require_square(a, "determinant");
    const std::size_t n = a.dim(0);
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    LuFactors f = lu_factor(a);
    double det = f.sign;
    for (std::size_t i = 0; i < n; ++i) det *= f.lu(i, i);
    return f.singular ? 0.0 : det;
}

/// Solves A x = b via the packed LU factors.
inline DenseTensor lu_solve(const LuFactors& f, const DenseTensor& b) {
    if (f.singular) throw std::domain_error("lu_solve: matrix is singular");
    const std::size_t n = f.lu.dim(0);
    if (b.order() != 1 || b.dim(0) != n) throw std::invalid_argument("lu_solve: size mismatch");
    DenseTensor x({n});
    for (std::size_t i = 0; i < n; ++i) {
        double s = b.values()[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x.values()[j];
        x.values()[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x.values()[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x.values()[j];
        x.values()[i] = s / f.lu(i, i);
    }
    return x;
}

inline DenseTensor solve_linear(const DenseTensor& a, const DenseTensor& b) {
    return lu_solve(lu_factor(a), b);
}

inline DenseTensor inverse(const DenseTensor& a) {
    require_square(a, "inverse");
    const std::size_t n = a.dim(0);
    LuFactors f = lu_factor(a);
    if (f.singular) throw std::domain_error("inverse: matrix is singular");
    DenseTensor inv({n, n});
    DenseTensor e({n});
    for (std::size_t j = 0; j < n; ++j) {
        e.values().assign(n, 0.0);
        e.values()[j] = 1.0;
        DenseTensor col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col.values()[i];
    }
    return inv;
}

/// Frobenius-norm condition estimate ||A||_F ||A^{-1}||_F; infinity when singular.
inline double condition_estimate(const DenseTensor& a) {
    try {
        return frobenius_norm(a) * frobenius_norm(inverse(a));
    } catch (const std::domain_error&) {
        return std::numeric_limits<double>::infinity();
    }
}

namespace detail {

inline DenseTensor minor_matrix(const DenseTensor& a, std::size_t row, std::size_t col) {
    const std::size_t n = a.dim(0);
    DenseTensor m({n - 1, n - 1});
    for (std::size_t i = 0, r = 0; i < n; ++i) {
        if (i == row) continue;
        for (std::size_t j = 0, c = 0; j < n; ++j) {
            if (j == col) continue;
            m(r, c++) = a(i, j);
        }
        ++r;
    }
    return m;
}

inline DenseTensor cofactor_matrix(const DenseTensor& a) {
    const std::size_t n = a.dim(0);
    DenseTensor c({n, n});
    if (n == 1) {
        c(0, 0) = 1.0;
        return c;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            c(i, j) = sign * determinant(minor_matrix(a, i, j));
        }
    }
    return c;
}

} // namespace detail

/// Adjugate adj(A), satisfying A adj(A) = det(A) I. Cofactor expansion up to
/// n = 4, det * inverse beyond that, falling back to cofactors when singular.
inline DenseTensor adjugate(const DenseTensor& a) {
    require_square(a, "adjugate");
    const std::size_t n = a.dim(0);
    if (n <= 4) return transpose(detail::cofactor_matrix(a));
    LuFactors f = lu_factor(a);
    if (!f.singular) {
        double det = f.sign;
        for (std::size_t i = 0; i < n; ++i) det *= f.lu(i, i);
        return det * inverse(a);
    }
    return transpose(detail::cofactor_matrix(a));
}

// ---------------------------------------------------------------------------
// Cholesky-based definiteness test
// ---------------------------------------------------------------------------

struct CholeskyResult {
    bool success = false;
    double min_pivot = 0.0; // smallest diagonal pivot before its square root
    DenseTensor lower;
};

/// Attempts A = L L^T on a symmetric matrix. Fails (without throwing) as soon
/// as a pivot drops to tol or below; min_pivot reports the worst pivot seen.
inline CholeskyResult cholesky(const DenseTensor& a, double tol = 1e-10) {
    require_square(a, "cholesky");
    const std::size_t n = a.dim(0);
    CholeskyResult res;
    res.lower = DenseTensor({n, n});
    res.min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= res.lower(i, k) * res.lower(j, k);
            if (i == j) {
                res.min_pivot = std::min(res.min_pivot, s);
                if (s <= tol) return res;
                res.lower(i, i) = std::sqrt(s);
            } else {
                res.lower(i, j) = s / res.lower(j, j);
            }
        }
    }
    res.success = true;
    return res;
}

// ---------------------------------------------------------------------------
// matrix exponential
// ---------------------------------------------------------------------------

/// exp(A) by scaling and squaring: scale so ||A/2^s||_F <= 0.5, sum an
/// 18-term Taylor series via Horner, then square s times.
inline DenseTensor matrix_exp(const DenseTensor& a) {
    require_square(a, "matrix_exp");
    const std::size_t n = a.dim(0);
    double norm = frobenius_norm(a);
    std::size_t squarings = 0;
    while (norm > 0.5 && squarings < 64) {
        norm /= 2.0;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -static_cast<int>(squarings));
    DenseTensor b = scale * a;

    constexpr std::size_t terms = 18;
    DenseTensor t = identity_matrix(n);
    for (std::size_t k = terms; k >= 1; --k) {
        t = identity_matrix(n) + (1.0 / static_cast<double>(k)) * mat_mul(b, t);
    }
    for (std::size_t s = 0; s < squarings; ++s) t = mat_mul(t, t);
    return t;
}

} // namespace tensorcalc
