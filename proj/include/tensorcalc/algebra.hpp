#pragma once

#include "tensorcalc/matrix.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/tensor.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace tensorcalc {

/// An even-order tensor viewed as a linear map on tensors of half its order:
/// application contracts the trailing d modes against the argument. The
/// first-half dims equal the second-half dims, so the family is closed under
/// the contraction product and carries powers, polynomials and exponentials.
class LinearOperator {
public:
    explicit LinearOperator(DenseTensor t) : tensor_(std::move(t)) {
        if (tensor_.order() % 2 != 0) {
            throw std::invalid_argument("LinearOperator: even order required");
        }
        const std::size_t d = tensor_.order() / 2;
        for (std::size_t k = 0; k < d; ++k) {
            if (tensor_.dim(k) != tensor_.dim(d + k)) {
                throw std::invalid_argument("LinearOperator: half shapes must match");
            }
        }
    }

    [[nodiscard]] std::size_t half_order() const { return tensor_.order() / 2; }
    [[nodiscard]] Shape half_shape() const {
        return Shape(tensor_.shape().begin(), tensor_.shape().begin() + half_order());
    }
    [[nodiscard]] const DenseTensor& tensor() const { return tensor_; }

    /// Applies the operator: contraction of the trailing half against x.
    [[nodiscard]] DenseTensor apply(const DenseTensor& x) const {
        return contract_last(tensor_, x, half_order());
    }

private:
    DenseTensor tensor_;
};

inline LinearOperator identity_like(const LinearOperator& a) {
    return LinearOperator(identity_operator(a.half_shape()));
}

/// 2C-style product: trailing half of a against leading half of b.
inline LinearOperator op_multiply(const LinearOperator& a, const LinearOperator& b) {
    if (a.half_shape() != b.half_shape()) {
        throw std::invalid_argument("op_multiply: operator shapes differ");
    }
    return LinearOperator(contract_last(a.tensor(), b.tensor(), a.half_order()));
}

/// Balanced matricization: the N x N matrix (N = product of half dims)
/// representing the operator so that applying it becomes a matrix-vector
/// product on the column-stacked argument. Within each index half the first
/// mode varies fastest, matching vec() for matrix arguments. The map is an
/// algebra isomorphism: products and exponentials commute with it.
inline DenseTensor balanced_matricization(const DenseTensor& op) {
    if (op.order() % 2 != 0) throw std::invalid_argument("balanced_matricization: even order required");
    const std::size_t d = op.order() / 2;
    std::size_t rows = 1, cols = 1;
    for (std::size_t k = 0; k < d; ++k) rows *= op.dim(k);
    for (std::size_t k = 0; k < d; ++k) cols *= op.dim(d + k);
    DenseTensor m({rows, cols});
    std::vector<std::size_t> idx(op.order(), 0);
    std::size_t pos = 0;
    do {
        std::size_t r = 0, c = 0;
        for (std::size_t k = d; k-- > 0;) r = r * op.dim(k) + idx[k];
        for (std::size_t k = d; k-- > 0;) c = c * op.dim(d + k) + idx[d + k];
        m(r, c) = op.values()[pos++];
    } while (detail::next_index(idx, op.shape()));
    return m;
}

/// Inverse of balanced_matricization for a given half shape.
inline DenseTensor operator_from_matrix(const DenseTensor& m, const Shape& half_shape) {
    require_square(m, "operator_from_matrix");
    Shape shape = half_shape;
    shape.insert(shape.end(), half_shape.begin(), half_shape.end());
    DenseTensor op(shape);
    const std::size_t d = half_shape.size();
    std::vector<std::size_t> idx(op.order(), 0);
    std::size_t pos = 0;
    do {
        std::size_t r = 0, c = 0;
        for (std::size_t k = d; k-- > 0;) r = r * op.dim(k) + idx[k];
        for (std::size_t k = d; k-- > 0;) c = c * op.dim(d + k) + idx[d + k];
        op.values()[pos++] = m(r, c);
    } while (detail::next_index(idx, shape));
    return op;
}

/// Column-stacking vectorization of a tensor, consistent with
/// balanced_matricization (first mode fastest). For matrices this is vec().
inline DenseTensor vectorize_state(const DenseTensor& x) {
    DenseTensor r({x.size()});
    std::vector<std::size_t> idx(x.order(), 0);
    std::size_t pos = 0;
    do {
        std::size_t c = 0;
        for (std::size_t k = x.order(); k-- > 0;) c = c * x.dim(k) + idx[k];
        r.values()[c] = x.values()[pos++];
    } while (detail::next_index(idx, x.shape()));
    return r;
}

inline DenseTensor state_from_vector(const DenseTensor& v, const Shape& shape) {
    if (v.order() != 1 || v.size() != detail::shape_product(shape)) {
        throw std::invalid_argument("state_from_vector: size mismatch");
    }
    DenseTensor x(shape);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::size_t pos = 0;
    do {
        std::size_t c = 0;
        for (std::size_t k = shape.size(); k-- > 0;) c = c * shape[k] + idx[k];
        x.values()[pos++] = v.values()[c];
    } while (detail::next_index(idx, shape));
    return x;
}

/// A^k with A^0 the pairwise identity operator.
inline LinearOperator op_power(const LinearOperator& a, std::size_t k) {
    LinearOperator r = identity_like(a);
    for (std::size_t i = 0; i < k; ++i) r = op_multiply(a, r);
    return r;
}

/// sum_j coeffs[j] A^j evaluated by Horner's scheme over the operator product.
inline LinearOperator op_polynomial(const LinearOperator& a, std::span<const double> coeffs) {
    const DenseTensor id = identity_operator(a.half_shape());
    if (coeffs.empty()) return LinearOperator(0.0 * id);
    DenseTensor r = coeffs.back() * id;
    for (std::size_t j = coeffs.size() - 1; j-- > 0;) {
        r = contract_last(a.tensor(), r, a.half_order()) + coeffs[j] * id;
    }
    return LinearOperator(std::move(r));
}

inline LinearOperator op_polynomial(const LinearOperator& a, std::initializer_list<double> coeffs) {
    return op_polynomial(a, std::span<const double>(coeffs.begin(), coeffs.size()));
}

/// exp(t A) = sum_k t^k A^k / k!. Computed through the balanced
/// matricization, which converts the series into an ordinary matrix
/// exponential; convergence is unconditional.
inline LinearOperator op_exp(const LinearOperator& a, double t = 1.0) {
    DenseTensor m = balanced_matricization(a.tensor());
    DenseTensor e = matrix_exp(t * m);
    return LinearOperator(operator_from_matrix(e, a.half_shape()));
}

// ---------------------------------------------------------------------------
// homogeneous polynomial forms
// ---------------------------------------------------------------------------

/// f_A(x) = A x^m = sum A_{i1..im} x_{i1} ... x_{im}. Symmetry of A is the
/// caller's contract; the value is well defined either way.
inline double poly_eval(const DenseTensor& a, const DenseTensor& x) {
    if (x.order() != 1) throw std::invalid_argument("poly_eval: vector argument required");
    for (std::size_t k = 0; k < a.order(); ++k) {
        if (a.dim(k) != x.dim(0)) throw std::invalid_argument("poly_eval: dimension mismatch");
    }
    std::vector<std::size_t> idx(a.order(), 0);
    double sum = 0.0;
    std::size_t pos = 0;
    do {
        double p = a.values()[pos++];
        if (p != 0.0) {
            for (std::size_t k : idx) p *= x.values()[k];
        }
        sum += p;
    } while (detail::next_index(idx, a.shape()));
    return sum;
}

/// Gradient of f_A for symmetric A: m * A x^{m-1}, contracted along the last
/// m-1 modes. Symmetry is required here because the closed form assumes it.
inline DenseTensor poly_grad(const DenseTensor& a, const DenseTensor& x, double sym_tol = 1e-12) {
    if (x.order() != 1) throw std::invalid_argument("poly_grad: vector argument required");
    for (std::size_t k = 0; k < a.order(); ++k) {
        if (a.dim(k) != x.dim(0)) throw std::invalid_argument("poly_grad: dimension mismatch");
    }
    if (!is_symmetric(a, sym_tol)) throw std::invalid_argument("poly_grad: symmetric tensor required");
    const std::size_t m = a.order();
    const double scale = static_cast<double>(m);
    if (m == 1) return scale * a;
    return scale * contract_last(a, rank1_symmetric(x, m - 1), m - 1);
}

} // namespace tensorcalc
