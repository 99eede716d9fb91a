#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensorcalc {

using Shape = std::vector<std::size_t>;

namespace detail {

inline std::size_t shape_product(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

inline std::string shape_to_string(const Shape& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

/// Advances a multi-index in row-major order (last mode fastest).
/// Returns false once the index wraps back to all zeros.
inline bool next_index(std::vector<std::size_t>& idx, const Shape& shape) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < shape[k]) return true;
        idx[k] = 0;
    }
    return false;
}

} // namespace detail

/// Dense tensor of arbitrary order. Values are stored flat in row-major
/// order (last index varies fastest). Every operation in this library
/// treats DenseTensor as an immutable value: inputs are never modified,
/// results are returned as new tensors.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero-filled tensor of the given shape.
    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        validate_shape();
        values_.assign(detail::shape_product(shape_), 0.0);
        compute_strides();
    }

    DenseTensor(Shape shape, std::vector<double> values)
        : shape_(std::move(shape)), values_(std::move(values)) {
        validate_shape();
        if (values_.size() != detail::shape_product(shape_)) {
            throw std::invalid_argument(
                "DenseTensor: " + std::to_string(values_.size()) +
                " values incompatible with shape " + detail::shape_to_string(shape_));
        }
        compute_strides();
    }

    [[nodiscard]] std::size_t order() const { return shape_.size(); }
    [[nodiscard]] const Shape& shape() const { return shape_; }
    [[nodiscard]] std::size_t dim(std::size_t mode) const {
        if (mode >= shape_.size()) throw std::out_of_range("DenseTensor::dim: mode out of range");
        return shape_[mode];
    }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& strides() const { return strides_; }

    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::vector<double>& values() { return values_; }

    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> idx) const {
        if (idx.size() != shape_.size()) {
            throw std::invalid_argument("DenseTensor: index order mismatch");
        }
        std::size_t pos = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] >= shape_[k]) throw std::out_of_range("DenseTensor: index out of range");
            pos += idx[k] * strides_[k];
        }
        return pos;
    }

    [[nodiscard]] double at(std::span<const std::size_t> idx) const { return values_[flat_index(idx)]; }
    [[nodiscard]] double& at(std::span<const std::size_t> idx) { return values_[flat_index(idx)]; }

    /// Convenience multi-index access: t(i, j, k, ...). Indices are 0-based.
    template <class... I>
    [[nodiscard]] double operator()(I... i) const {
        const std::size_t idx[] = {static_cast<std::size_t>(i)...};
        return at(std::span<const std::size_t>(idx, sizeof...(I)));
    }
    template <class... I>
    [[nodiscard]] double& operator()(I... i) {
        const std::size_t idx[] = {static_cast<std::size_t>(i)...};
        return at(std::span<const std::size_t>(idx, sizeof...(I)));
    }

    [[nodiscard]] bool same_shape(const DenseTensor& other) const { return shape_ == other.shape_; }

private:
    void validate_shape() {
        if (shape_.empty()) throw std::invalid_argument("DenseTensor: order must be at least 1");
        for (std::size_t d : shape_) {
            if (d == 0) throw std::invalid_argument("DenseTensor: every dimension must be positive");
        }
    }

    void compute_strides() {
        strides_.assign(shape_.size(), 1);
        for (std::size_t k = shape_.size() - 1; k-- > 0;) {
            strides_[k] = strides_[k + 1] * shape_[k + 1];
        }
    }

    Shape shape_;
    std::vector<double> values_;
    std::vector<std::size_t> strides_;
};

// ---------------------------------------------------------------------------
// elementwise arithmetic
// ---------------------------------------------------------------------------

inline void require_same_shape(const DenseTensor& a, const DenseTensor& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                    detail::shape_to_string(a.shape()) + " vs " +
                                    detail::shape_to_string(b.shape()));
    }
}

inline DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "tensor add");
    DenseTensor r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] += b.values()[i];
    return r;
}

inline DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "tensor subtract");
    DenseTensor r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.values()[i] -= b.values()[i];
    return r;
}

inline DenseTensor operator*(double s, const DenseTensor& a) {
    DenseTensor r = a;
    for (double& v : r.values()) v *= s;
    return r;
}

inline DenseTensor operator*(const DenseTensor& a, double s) { return s * a; }

inline DenseTensor operator-(const DenseTensor& a) { return -1.0 * a; }

inline DenseTensor identity_matrix(std::size_t n) {
    DenseTensor r({n, n});
    for (std::size_t i = 0; i < n; ++i) r(i, i) = 1.0;
    return r;
}

// ---------------------------------------------------------------------------
// norms and comparisons
// ---------------------------------------------------------------------------

inline double frobenius_norm(const DenseTensor& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const DenseTensor& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    }
    return m;
}

inline bool all_finite(const DenseTensor& a) {
    return std::all_of(a.values().begin(), a.values().end(),
                       [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// reshaping
// ---------------------------------------------------------------------------

/// Generalized transpose: result mode i is input mode perm[i].
inline DenseTensor permute(const DenseTensor& a, std::span<const std::size_t> perm) {
    if (perm.size() != a.order()) throw std::invalid_argument("permute: order mismatch");
    std::vector<bool> seen(a.order(), false);
    Shape shape(a.order());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= a.order() || seen[perm[i]]) {
            throw std::invalid_argument("permute: not a permutation");
        }
        seen[perm[i]] = true;
        shape[i] = a.shape()[perm[i]];
    }
    DenseTensor r(shape);
    std::vector<std::size_t> idx(a.order(), 0);
    std::size_t pos = 0;
    do {
        std::size_t src = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) src += idx[i] * a.strides()[perm[i]];
        r.values()[pos++] = a.values()[src];
    } while (detail::next_index(idx, shape));
    return r;
}

inline DenseTensor permute(const DenseTensor& a, std::initializer_list<std::size_t> perm) {
    return permute(a, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/// Mode-k unfolding: rows indexed by mode k, the remaining modes flattened
/// row-major in increasing mode order. Modes are 0-based.
inline DenseTensor unfold(const DenseTensor& a, std::size_t mode) {
    if (mode >= a.order()) throw std::invalid_argument("unfold: mode out of range");
    std::vector<std::size_t> perm;
    perm.push_back(mode);
    for (std::size_t k = 0; k < a.order(); ++k) {
        if (k != mode) perm.push_back(k);
    }
    DenseTensor p = permute(a, perm);
    return DenseTensor({a.dim(mode), a.size() / a.dim(mode)}, p.values());
}

/// Reshape to a matrix by grouping modes: rows iterate row_modes (in the
/// given order, row-major), columns iterate col_modes. The two groups must
/// disjointly cover all modes.
inline DenseTensor group_unfold(const DenseTensor& a,
                                std::span<const std::size_t> row_modes,
                                std::span<const std::size_t> col_modes) {
    if (row_modes.size() + col_modes.size() != a.order()) {
        throw std::invalid_argument("group_unfold: groups must cover all modes");
    }
    std::vector<std::size_t> perm(row_modes.begin(), row_modes.end());
    perm.insert(perm.end(), col_modes.begin(), col_modes.end());
    DenseTensor p = permute(a, perm); // also rejects overlaps
    std::size_t rows = 1;
    for (std::size_t m : row_modes) rows *= a.dim(m);
    return DenseTensor({rows, a.size() / rows}, p.values());
}

inline DenseTensor group_unfold(const DenseTensor& a,
                                std::initializer_list<std::size_t> row_modes,
                                std::initializer_list<std::size_t> col_modes) {
    return group_unfold(a, std::span<const std::size_t>(row_modes.begin(), row_modes.size()),
                        std::span<const std::size_t>(col_modes.begin(), col_modes.size()));
}

// ---------------------------------------------------------------------------
// vectorization
// ---------------------------------------------------------------------------

/// Column-stacking vectorization of a matrix:
/// vec(X) = (x11, x21, ..., xm1, x12, ..., xmn).
inline DenseTensor vectorize(const DenseTensor& x) {
    if (x.order() != 2) throw std::invalid_argument("vectorize: matrix required");
    const std::size_t m = x.dim(0), n = x.dim(1);
    DenseTensor r({m * n});
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) r.values()[j * m + i] = x(i, j);
    }
    return r;
}

inline bool is_symmetric_matrix(const DenseTensor& x, double tol = 1e-12) {
    if (x.order() != 2 || x.dim(0) != x.dim(1)) return false;
    for (std::size_t i = 0; i < x.dim(0); ++i) {
        for (std::size_t j = i + 1; j < x.dim(1); ++j) {
            if (std::abs(x(i, j) - x(j, i)) > tol) return false;
        }
    }
    return true;
}

/// Patterned vectorization of a symmetric matrix: the upper triangle read
/// column by column, (x11, x12, x22, x13, x23, x33, ...); n(n+1)/2 entries.
inline DenseTensor vectorize_sym(const DenseTensor& x, double tol = 1e-12) {
    if (x.order() != 2 || x.dim(0) != x.dim(1)) {
        throw std::invalid_argument("vectorize_sym: square matrix required");
    }
    if (!is_symmetric_matrix(x, tol)) {
        throw std::invalid_argument("vectorize_sym: matrix is not symmetric within tolerance");
    }
    const std::size_t n = x.dim(0);
    DenseTensor r({n * (n + 1) / 2});
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) r.values()[pos++] = x(i, j);
    }
    return r;
}

// ---------------------------------------------------------------------------
// symmetry
// ---------------------------------------------------------------------------

/// Symmetric rank-1 tensor x^m with entries x_{i1}...x_{im}.
inline DenseTensor rank1_symmetric(const DenseTensor& x, std::size_t m) {
    if (x.order() != 1) throw std::invalid_argument("rank1_symmetric: vector required");
    if (m == 0) throw std::invalid_argument("rank1_symmetric: order must be positive");
    DenseTensor r(Shape(m, x.dim(0)));
    std::vector<std::size_t> idx(m, 0);
    std::size_t pos = 0;
    do {
        double p = 1.0;
        for (std::size_t k : idx) p *= x.values()[k];
        r.values()[pos++] = p;
    } while (detail::next_index(idx, r.shape()));
    return r;
}

/// True iff every entry is invariant under all index permutations, i.e.
/// A_sigma equals the entry at the sorted index. Requires a hypercube.
inline bool is_symmetric(const DenseTensor& a, double tol = 1e-12) {
    for (std::size_t k = 1; k < a.order(); ++k) {
        if (a.dim(k) != a.dim(0)) throw std::invalid_argument("is_symmetric: hypercube required");
    }
    std::vector<std::size_t> idx(a.order(), 0), sorted(a.order());
    do {
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::abs(a.at(idx) - a.at(sorted)) > tol) return false;
    } while (detail::next_index(idx, a.shape()));
    return true;
}

/// True iff the order-2d tensor is invariant under independent permutations
/// of its first d and last d indices. Each half must be dimension-uniform.
inline bool is_paired_symmetric(const DenseTensor& a, double tol = 1e-12) {
    if (a.order() % 2 != 0) throw std::invalid_argument("is_paired_symmetric: even order required");
    const std::size_t d = a.order() / 2;
    for (std::size_t k = 1; k < d; ++k) {
        if (a.dim(k) != a.dim(0) || a.dim(d + k) != a.dim(d)) {
            throw std::invalid_argument("is_paired_symmetric: halves must be dimension-uniform");
        }
    }
    std::vector<std::size_t> idx(a.order(), 0), canon(a.order());
    do {
        canon.assign(idx.begin(), idx.end());
        std::sort(canon.begin(), canon.begin() + d);
        std::sort(canon.begin() + d, canon.end());
        if (std::abs(a.at(idx) - a.at(canon)) > tol) return false;
    } while (detail::next_index(idx, a.shape()));
    return true;
}

} // namespace tensorcalc
