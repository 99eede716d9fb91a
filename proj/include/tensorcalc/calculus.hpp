#pragma once

#include "tensorcalc/matrix.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/tensor.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

// Derivative tensors of matrix-valued maps. A derivative d Y / d X is stored
// as the order p+q tensor whose (i1..ip; j1..jq) entry is the partial of
// y_{j...} with respect to x_{i...}: the X-shape modes come first.

namespace tensorcalc {

using MatrixFunction = std::function<DenseTensor(const DenseTensor&)>;

/// Central-difference derivative tensor of F at X: slice (i,j,:,:) holds
/// (F(X + h E_ij) - F(X - h E_ij)) / (2h).
inline DenseTensor fd_derivative(const MatrixFunction& f, const DenseTensor& x, double h = 1e-5) {
    require_matrix(x, "fd_derivative");
    if (h <= 0.0) throw std::invalid_argument("fd_derivative: step must be positive");
    const std::size_t m = x.dim(0), n = x.dim(1);
    DenseTensor probe = f(x);
    Shape rshape = {m, n};
    rshape.insert(rshape.end(), probe.shape().begin(), probe.shape().end());
    DenseTensor r(rshape);
    DenseTensor xp = x, xm = x;
    std::vector<std::size_t> idx(rshape.size(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            xp(i, j) = x(i, j) + h;
            xm(i, j) = x(i, j) - h;
            DenseTensor fp = f(xp), fm = f(xm);
            if (!all_finite(fp) || !all_finite(fm)) {
                throw std::domain_error("fd_derivative: non-finite value at perturbation (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            }
            idx[0] = i;
            idx[1] = j;
            std::size_t pos = 0;
            std::vector<std::size_t> sub(probe.order(), 0);
            do {
                for (std::size_t k = 0; k < probe.order(); ++k) idx[2 + k] = sub[k];
                r.at(idx) = (fp.values()[pos] - fm.values()[pos]) / (2.0 * h);
                ++pos;
            } while (detail::next_index(sub, probe.shape()));
            xp(i, j) = x(i, j);
            xm(i, j) = x(i, j);
        }
    }
    return r;
}

/// Derivative tensor of F restricted to symmetric X. Off-diagonal entries are
/// perturbed in pairs, X +/- h (E_ij + E_ji), and the difference is divided
/// by 2h (not 4h): under this convention dX/dX for symmetric X is exactly
/// the closed-form tensor with unit off-diagonal sensitivities. The result
/// is symmetric in the first index pair by construction.
inline DenseTensor fd_derivative_sym(const MatrixFunction& f, const DenseTensor& x, double h = 1e-5,
                                     double sym_tol = 1e-12) {
    require_square(x, "fd_derivative_sym");
    if (!is_symmetric_matrix(x, sym_tol)) {
        throw std::invalid_argument("fd_derivative_sym: symmetric matrix required");
    }
    const std::size_t n = x.dim(0);
    DenseTensor probe = f(x);
    Shape rshape = {n, n};
    rshape.insert(rshape.end(), probe.shape().begin(), probe.shape().end());
    DenseTensor r(rshape);
    std::vector<std::size_t> idx(rshape.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            DenseTensor xp = x, xm = x;
            xp(i, j) += h;
            xm(i, j) -= h;
            if (i != j) {
                xp(j, i) += h;
                xm(j, i) -= h;
            }
            DenseTensor fp = f(xp), fm = f(xm);
            if (!all_finite(fp) || !all_finite(fm)) {
                throw std::domain_error("fd_derivative_sym: non-finite value at perturbation (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            }
            std::size_t pos = 0;
            std::vector<std::size_t> sub(probe.order(), 0);
            do {
                const double v = (fp.values()[pos] - fm.values()[pos]) / (2.0 * h);
                for (std::size_t k = 0; k < probe.order(); ++k) idx[2 + k] = sub[k];
                idx[0] = i;
                idx[1] = j;
                r.at(idx) = v;
                idx[0] = j;
                idx[1] = i;
                r.at(idx) = v;
                ++pos;
            } while (detail::next_index(sub, probe.shape()));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// closed forms for general (unconstrained) X
// ---------------------------------------------------------------------------

/// d(lambda A)/dX = Lambda x A, where Lambda holds d lambda / d x_ij.
inline DenseTensor d_scalar_times(const DenseTensor& lambda_grad, const DenseTensor& a) {
    require_matrix(lambda_grad, "d_scalar_times");
    require_matrix(a, "d_scalar_times");
    return outer(lambda_grad, a);
}

/// d(tr X)/dX = I_n.
inline DenseTensor d_trace(std::size_t n) { return identity_matrix(n); }

/// d(det X)/dX: the cofactor matrix, i.e. the transposed adjugate.
inline DenseTensor d_det(const DenseTensor& x) {
    require_square(x, "d_det");
    return transpose(adjugate(x));
}

/// dX/dX = I_m x_c I_n.
inline DenseTensor d_identity(std::size_t m, std::size_t n) {
    return cross_c(identity_matrix(m), identity_matrix(n));
}

/// dX^T/dX = I_m x_ac I_n.
inline DenseTensor d_transpose(std::size_t m, std::size_t n) {
    return cross_ac(identity_matrix(m), identity_matrix(n));
}

/// d(AXB)/dX = A^T x_c B.
inline DenseTensor d_AXB(const DenseTensor& a, const DenseTensor& b) {
    require_matrix(a, "d_AXB");
    require_matrix(b, "d_AXB");
    return cross_c(transpose(a), b);
}

/// Product rule in derivative-tensor form:
/// d(YZ)/dX = (dY/dX) *_4 Z + Y *_3 (dZ/dX).
inline DenseTensor d_product(const DenseTensor& dy, const DenseTensor& dz,
                             const DenseTensor& y, const DenseTensor& z) {
    if (dy.order() != 4 || dz.order() != 4) {
        throw std::invalid_argument("d_product: order-4 derivative tensors required");
    }
    if (y.order() != 2 || z.order() != 2 || y.dim(1) != z.dim(0)) {
        throw std::invalid_argument("d_product: inner dimensions of Y and Z differ");
    }
    if (dy.dim(0) != dz.dim(0) || dy.dim(1) != dz.dim(1)) {
        throw std::invalid_argument("d_product: derivative tensors disagree on the X shape");
    }
    return contract_mode(dy, z, 3, Side::Right) + contract_mode(dz, y, 2, Side::Left);
}

/// dX^{-1}/dX = -X^{-T} x_c X^{-1}. Throws std::domain_error when X is
/// singular (condition estimate infinite); callers that need conditioning
/// diagnostics can probe condition_estimate(x) first.
inline DenseTensor d_inverse(const DenseTensor& x) {
    require_square(x, "d_inverse");
    DenseTensor xinv;
    try {
        xinv = inverse(x);
    } catch (const std::domain_error&) {
        throw std::domain_error("d_inverse: singular matrix (cond estimate inf)");
    }
    return -1.0 * cross_c(transpose(xinv), xinv);
}

/// dX^m/dX = sum_{s=1}^{m} (X^{s-1})^T x_c X^{m-s}.
inline DenseTensor d_power(const DenseTensor& x, std::size_t m) {
    require_square(x, "d_power");
    if (m == 0) throw std::invalid_argument("d_power: exponent must be positive");
    const std::size_t n = x.dim(0);
    std::vector<DenseTensor> powers(m + 1, identity_matrix(n));
    for (std::size_t k = 1; k <= m; ++k) powers[k] = mat_mul(powers[k - 1], x);
    DenseTensor r({n, n, n, n});
    for (std::size_t s = 1; s <= m; ++s) {
        r = r + cross_c(transpose(powers[s - 1]), powers[m - s]);
    }
    return r;
}

// ---------------------------------------------------------------------------
// symmetric-variable forms
// ---------------------------------------------------------------------------

/// The three tensors attached to a symmetric X by the symmetric-variable
/// calculus: the 3-order associated tensor (2x_ii on the main diagonal,
/// x_ik on the two mixed diagonals), the fully symmetric 4-order spread of X
/// over all index 2-subsets, and the outer-product pair I x X + X x I.
struct SymmetricAssociated {
    DenseTensor x3;   // n x n x n
    DenseTensor xs;   // order 4, fully symmetric
    DenseTensor xnat; // order 4, paired symmetric
};

inline SymmetricAssociated sym_associated(const DenseTensor& x, double sym_tol = 1e-12) {
    require_square(x, "sym_associated");
    if (!is_symmetric_matrix(x, sym_tol)) {
        throw std::invalid_argument("sym_associated: symmetric matrix required");
    }
    const std::size_t n = x.dim(0);
    SymmetricAssociated r{DenseTensor({n, n, n}), DenseTensor({n, n, n, n}), DenseTensor({n, n, n, n})};

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j && j == k) {
                    r.x3(i, j, k) = 2.0 * x(i, i);
                } else if (i == j) {
                    r.x3(i, j, k) = x(i, k);
                } else if (i == k) {
                    r.x3(i, j, k) = x(i, j);
                }
            }
        }
    }

    // xs: sum of I x_alpha X over all 2-subsets alpha of the four modes.
    const DenseTensor id = identity_matrix(n);
    const std::size_t subsets[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& alpha : subsets) {
        std::vector<std::size_t> rest;
        for (std::size_t m = 0; m < 4; ++m) {
            if (m != alpha[0] && m != alpha[1]) rest.push_back(m);
        }
        r.xs = r.xs + outer_partition({id, x}, ModePartition{{alpha[0], alpha[1]}, rest});
    }

    r.xnat = outer(id, x) + outer(x, id);
    return r;
}

/// dX/dX for symmetric X: I x_c I + I x_ac I - J_{4;n}.
inline DenseTensor d_sym_identity(std::size_t n) {
    const DenseTensor id = identity_matrix(n);
    return cross_c(id, id) + cross_ac(id, id) - unit_tensor(4, n);
}

/// dX^2/dX for symmetric X: X_s - X_nat - (the diagonal embedding of the
/// associated 3-order tensor, delta_ij X3(i,k,l)).
inline DenseTensor d_sym_square(const DenseTensor& x, double sym_tol = 1e-12) {
    SymmetricAssociated s = sym_associated(x, sym_tol);
    const std::size_t n = x.dim(0);
    DenseTensor embed({n, n, n, n});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) embed(i, i, k, l) = s.x3(i, k, l);
        }
    }
    return s.xs - s.xnat - embed;
}

/// dX/dX for a d-order tensor variable: the pairwise identity of order 2d.
inline DenseTensor d_tensor_identity(std::size_t d, std::size_t n) {
    if (d == 0 || n == 0) throw std::invalid_argument("d_tensor_identity: positive order and dim required");
    return identity_operator(Shape(d, n));
}

} // namespace tensorcalc
