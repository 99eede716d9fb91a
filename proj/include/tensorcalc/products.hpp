#pragma once

#include "tensorcalc/tensor.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace tensorcalc {

// ---------------------------------------------------------------------------
// outer products
// ---------------------------------------------------------------------------

/// Outer (tensor) product: (A x B)_{i...;j...} = A_{i...} B_{j...}.
inline DenseTensor outer(const DenseTensor& a, const DenseTensor& b) {
    Shape shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    DenseTensor r(std::move(shape));
    std::size_t pos = 0;
    for (double va : a.values()) {
        for (double vb : b.values()) r.values()[pos++] = va * vb;
    }
    return r;
}

/// Assignment of output modes to factor tensors. blocks[k] lists, in
/// increasing order, the output modes bound to factor k's own modes.
struct ModePartition {
    std::vector<std::vector<std::size_t>> blocks;

    ModePartition() = default;
    ModePartition(std::initializer_list<std::vector<std::size_t>> b) : blocks(b) {}
    explicit ModePartition(std::vector<std::vector<std::size_t>> b) : blocks(std::move(b)) {}
};

/// Partition outer product [A_1 x ... x A_r][pi]: output mode set is split
/// into blocks, block k addressing factor k, so that e.g. blocks
/// {{0,4},{1,5},{2,3,6,7}} gives K_{i1..i8} = a_{i1 i5} b_{i2 i6} c_{i3 i4 i7 i8}.
inline DenseTensor outer_partition(const std::vector<DenseTensor>& factors,
                                   const ModePartition& pi) {
    if (factors.empty()) throw std::invalid_argument("outer_partition: no factors");
    if (pi.blocks.size() != factors.size()) {
        throw std::invalid_argument("outer_partition: block count must match factor count");
    }
    std::size_t p = 0;
    for (const auto& f : factors) p += f.order();

    Shape shape(p, 0);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& block = pi.blocks[k];
        if (block.size() != factors[k].order()) {
            throw std::invalid_argument("outer_partition: block size must equal factor order");
        }
        for (std::size_t t = 0; t < block.size(); ++t) {
            if (t > 0 && block[t] <= block[t - 1]) {
                throw std::invalid_argument("outer_partition: block modes must be increasing");
            }
            if (block[t] >= p || shape[block[t]] != 0) {
                throw std::invalid_argument("outer_partition: blocks must partition the output modes");
            }
            shape[block[t]] = factors[k].dim(t);
        }
    }

    DenseTensor r(shape);
    std::vector<std::size_t> idx(p, 0);
    std::vector<std::size_t> sub;
    std::size_t pos = 0;
    do {
        double v = 1.0;
        for (std::size_t k = 0; k < factors.size(); ++k) {
            sub.clear();
            for (std::size_t m : pi.blocks[k]) sub.push_back(idx[m]);
            v *= factors[k].at(sub);
        }
        r.values()[pos++] = v;
    } while (detail::next_index(idx, shape));
    return r;
}

/// A x_c B: modes (0,2) to A, (1,3) to B, so (A x_c B)_{ijkl} = A_{ik} B_{jl}.
inline DenseTensor cross_c(const DenseTensor& a, const DenseTensor& b) {
    return outer_partition({a, b}, ModePartition{{0, 2}, {1, 3}});
}

/// A x_ac B: modes (0,3) to A, (1,2) to B, so (A x_ac B)_{ijkl} = A_{il} B_{jk}.
inline DenseTensor cross_ac(const DenseTensor& a, const DenseTensor& b) {
    return outer_partition({a, b}, ModePartition{{0, 3}, {1, 2}});
}

// ---------------------------------------------------------------------------
// contractive products
// ---------------------------------------------------------------------------

/// Paired modes for a general (S,T) contraction: left_modes[k] of the left
/// tensor contracts against right_modes[k] of the right tensor. Both lists
/// are strictly increasing and 0-based.
struct ModePairing {
    std::vector<std::size_t> left_modes;
    std::vector<std::size_t> right_modes;
};

/// General contractive product. The result keeps the unpaired modes of A in
/// their original order followed by the unpaired modes of B in theirs,
/// giving an order p+q-2k tensor.
inline DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const ModePairing& pr) {
    if (pr.left_modes.size() != pr.right_modes.size()) {
        throw std::invalid_argument("contract: pairing lists differ in length");
    }
    const std::size_t k = pr.left_modes.size();
    std::vector<bool> apaired(a.order(), false), bpaired(b.order(), false);
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t am = pr.left_modes[t], bm = pr.right_modes[t];
        if (t > 0 && (am <= pr.left_modes[t - 1] || bm <= pr.right_modes[t - 1])) {
            throw std::invalid_argument("contract: pairing modes must be strictly increasing");
        }
        if (am >= a.order() || bm >= b.order()) {
            throw std::invalid_argument("contract: pairing mode out of range");
        }
        if (a.dim(am) != b.dim(bm)) {
            throw std::invalid_argument(
                "contract: paired dims differ at mode pair (" + std::to_string(am) + "," +
                std::to_string(bm) + "): " + std::to_string(a.dim(am)) + " vs " +
                std::to_string(b.dim(bm)));
        }
        apaired[am] = true;
        bpaired[bm] = true;
    }

    std::vector<std::size_t> afree, bfree;
    for (std::size_t m = 0; m < a.order(); ++m) {
        if (!apaired[m]) afree.push_back(m);
    }
    for (std::size_t m = 0; m < b.order(); ++m) {
        if (!bpaired[m]) bfree.push_back(m);
    }

    Shape rshape;
    for (std::size_t m : afree) rshape.push_back(a.dim(m));
    for (std::size_t m : bfree) rshape.push_back(b.dim(m));
    const bool scalar = rshape.empty();
    if (scalar) rshape.push_back(1); // full pairing: inner product as a 1-element tensor

    // Enumerate the paired multi-index once as flat offsets into both tensors.
    Shape pshape;
    for (std::size_t m : pr.left_modes) pshape.push_back(a.dim(m));
    const std::size_t npair = detail::shape_product(pshape);
    std::vector<std::size_t> offa(npair), offb(npair);
    {
        std::vector<std::size_t> pidx(k, 0);
        std::size_t t = 0;
        if (k > 0) {
            do {
                std::size_t oa = 0, ob = 0;
                for (std::size_t j = 0; j < k; ++j) {
                    oa += pidx[j] * a.strides()[pr.left_modes[j]];
                    ob += pidx[j] * b.strides()[pr.right_modes[j]];
                }
                offa[t] = oa;
                offb[t] = ob;
                ++t;
            } while (detail::next_index(pidx, pshape));
        } else {
            offa[0] = offb[0] = 0;
        }
    }

    DenseTensor r(rshape);
    std::vector<std::size_t> fidx(afree.size() + bfree.size(), 0);
    Shape fshape;
    for (std::size_t m : afree) fshape.push_back(a.dim(m));
    for (std::size_t m : bfree) fshape.push_back(b.dim(m));
    const double* va = a.values().data();
    const double* vb = b.values().data();
    std::size_t pos = 0;
    do {
        std::size_t basea = 0, baseb = 0;
        for (std::size_t j = 0; j < afree.size(); ++j) basea += fidx[j] * a.strides()[afree[j]];
        for (std::size_t j = 0; j < bfree.size(); ++j) {
            baseb += fidx[afree.size() + j] * b.strides()[bfree[j]];
        }
        double sum = 0.0;
        for (std::size_t t = 0; t < npair; ++t) sum += va[basea + offa[t]] * vb[baseb + offb[t]];
        r.values()[pos++] = sum;
    } while (!fshape.empty() && detail::next_index(fidx, fshape));
    return r;
}

/// A *_{[k]} B: contracts the last k modes of A against the first k modes of B.
inline DenseTensor contract_last(const DenseTensor& a, const DenseTensor& b, std::size_t k) {
    if (k > a.order() || k > b.order()) {
        throw std::invalid_argument("contract_last: k exceeds tensor order");
    }
    ModePairing pr;
    for (std::size_t t = 0; t < k; ++t) {
        pr.left_modes.push_back(a.order() - k + t);
        pr.right_modes.push_back(t);
    }
    return contract(a, b, pr);
}

/// Scalar inner product <A, B> of two equally shaped tensors.
inline double inner(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
    return s;
}

enum class Side { Left, Right };

/// 1M contractive product: mode k of A is contracted against one index of
/// the matrix and replaced in place by the other.
///   Right (A *_k B): result_{..i..} = sum_j A_{..j..} B(j, i), B is dim_k x c.
///   Left  (B *_k A): result_{..i..} = sum_j B(i, j) A_{..j..}, B is r x dim_k.
inline DenseTensor contract_mode(const DenseTensor& a, const DenseTensor& b,
                                 std::size_t mode, Side side) {
    if (b.order() != 2) throw std::invalid_argument("contract_mode: matrix factor required");
    if (mode >= a.order()) throw std::invalid_argument("contract_mode: mode out of range");
    const std::size_t nk = a.dim(mode);
    const std::size_t match = (side == Side::Right) ? b.dim(0) : b.dim(1);
    if (match != nk) {
        throw std::invalid_argument("contract_mode: matrix is " + std::to_string(b.dim(0)) + "x" +
                                    std::to_string(b.dim(1)) + " but mode " + std::to_string(mode) +
                                    " has dimension " + std::to_string(nk));
    }
    const std::size_t out = (side == Side::Right) ? b.dim(1) : b.dim(0);

    Shape rshape = a.shape();
    rshape[mode] = out;
    DenseTensor r(rshape);
    const std::size_t astride = a.strides()[mode];
    const double* va = a.values().data();

    std::vector<std::size_t> idx(rshape.size(), 0);
    std::size_t pos = 0;
    do {
        std::size_t base = 0;
        for (std::size_t m = 0; m < idx.size(); ++m) {
            if (m != mode) base += idx[m] * a.strides()[m];
        }
        const std::size_t i = idx[mode];
        double sum = 0.0;
        if (side == Side::Right) {
            for (std::size_t j = 0; j < nk; ++j) sum += va[base + j * astride] * b(j, i);
        } else {
            for (std::size_t j = 0; j < nk; ++j) sum += b(i, j) * va[base + j * astride];
        }
        r.values()[pos++] = sum;
    } while (detail::next_index(idx, rshape));
    return r;
}

// ---------------------------------------------------------------------------
// structural tensors
// ---------------------------------------------------------------------------

/// Pairwise identity tensor of order 2d on dims (n_1, ..., n_d): the outer
/// product of d identity matrices under the interleaving partition
/// {{k, d+k}}, with entries prod_k delta_{i_k j_k}. Acts as a two-sided
/// identity for contraction along d modes.
inline DenseTensor identity_operator(const Shape& dims) {
    if (dims.empty()) throw std::invalid_argument("identity_operator: dims must be nonempty");
    const std::size_t d = dims.size();
    std::vector<DenseTensor> factors;
    ModePartition pi;
    for (std::size_t k = 0; k < d; ++k) {
        factors.push_back(identity_matrix(dims[k]));
        pi.blocks.push_back({k, d + k});
    }
    return outer_partition(factors, pi);
}

/// Unit tensor J_{d;n}: ones on the main diagonal, zeros elsewhere.
/// J_{2;n} is the identity matrix; for d > 2 it extracts diagonals rather
/// than acting as an identity.
inline DenseTensor unit_tensor(std::size_t d, std::size_t n) {
    if (d == 0 || n == 0) throw std::invalid_argument("unit_tensor: order and dimension must be positive");
    DenseTensor r(Shape(d, n));
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < n; ++i) {
        idx.assign(d, i);
        r.at(idx) = 1.0;
    }
    return r;
}

/// D(A): keeps the diagonal of a hypercube tensor, zeroing everything else.
inline DenseTensor diagonal_part(const DenseTensor& a) {
    for (std::size_t k = 1; k < a.order(); ++k) {
        if (a.dim(k) != a.dim(0)) throw std::invalid_argument("diagonal_part: hypercube required");
    }
    DenseTensor r(a.shape());
    std::vector<std::size_t> idx(a.order());
    for (std::size_t i = 0; i < a.dim(0); ++i) {
        idx.assign(a.order(), i);
        r.at(idx) = a.at(idx);
    }
    return r;
}

/// Commutation tensor K_{m,n} = I_m x_ac I_n, of shape m x n x n x m.
/// Contracting an m x n matrix against its leading two modes yields the
/// transpose; for square matrices the trailing contraction does as well.
inline DenseTensor commutation_tensor(std::size_t m, std::size_t n) {
    return cross_ac(identity_matrix(m), identity_matrix(n));
}

} // namespace tensorcalc
