#pragma once

#include "tensorcalc/matrix.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tensorcalc {

struct SvdResult {
    DenseTensor u;              // m x r, orthonormal columns
    std::vector<double> sigma;  // descending
    DenseTensor v;              // n x r, orthonormal columns
    std::size_t sweeps = 0;
};

namespace detail {

/// One-sided Jacobi (Hestenes) for m >= n: rotates column pairs of a working
/// copy until all pairs are numerically orthogonal, accumulating the
/// rotations in V. Columns whose norm underflows relative to the largest are
/// completed to an orthonormal basis so U always has orthonormal columns.
inline SvdResult jacobi_svd_tall(const DenseTensor& a) {
    const std::size_t m = a.dim(0), n = a.dim(1);
    DenseTensor w = a;                    // columns get orthogonalized in place
    DenseTensor v = identity_matrix(n);

    constexpr std::size_t max_sweeps = 60;
    const double eps = 1e-15;
    std::size_t sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += w(i, p) * w(i, p);
                    aqq += w(i, q) * w(i, q);
                    apq += w(i, p) * w(i, q);
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    if (sweep == max_sweeps) {
        throw std::runtime_error("svd: one-sided Jacobi did not converge within 60 sweeps");
    }

    SvdResult res;
    res.sweeps = sweep + 1;
    res.sigma.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        res.sigma[j] = std::sqrt(s);
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return res.sigma[x] > res.sigma[y]; });

    DenseTensor u({m, n}), vs({n, n});
    std::vector<double> sigma(n);
    const double sig_max = res.sigma.empty() ? 0.0 : res.sigma[order[0]];
    std::size_t completed = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sigma[j] = res.sigma[src];
        for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, src);
        if (sigma[j] > sig_max * 1e-300 && sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u(i, j) = w(i, src) / sigma[j];
        } else {
            // null column: extend with a unit vector orthogonalized against
            // the columns already placed
            for (std::size_t attempt = completed; attempt < completed + m; ++attempt) {
                DenseTensor cand({m});
                cand.values()[attempt % m] = 1.0;
                for (std::size_t k = 0; k < j; ++k) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < m; ++i) dot += u(i, k) * cand.values()[i];
                    for (std::size_t i = 0; i < m; ++i) cand.values()[i] -= dot * u(i, k);
                }
                const double nrm = frobenius_norm(cand);
                if (nrm > 1e-8) {
                    for (std::size_t i = 0; i < m; ++i) u(i, j) = cand.values()[i] / nrm;
                    break;
                }
            }
            ++completed;
        }
    }
    res.sigma = std::move(sigma);
    res.u = std::move(u);
    res.v = std::move(vs);
    return res;
}

} // namespace detail

/// Thin SVD  M = U diag(sigma) V^T  with descending singular values, by
/// one-sided Jacobi run on the shorter dimension side.
inline SvdResult svd(const DenseTensor& m) {
    require_matrix(m, "svd");
    if (m.dim(0) >= m.dim(1)) return detail::jacobi_svd_tall(m);
    SvdResult t = detail::jacobi_svd_tall(transpose(m));
    SvdResult res;
    res.u = std::move(t.v);
    res.v = std::move(t.u);
    res.sigma = std::move(t.sigma);
    res.sweeps = t.sweeps;
    return res;
}

/// Partial Tucker decomposition along mode_set: per-mode column-orthonormal
/// factors (n_k x r_k) from the unfolding SVDs, and the core obtained by
/// contracting each of those modes with the factor transpose. Reconstruction
/// contracts them back, so  A ~ core x_k U_k  over the mode set.
struct TuckerFactors {
    DenseTensor core;
    std::vector<std::size_t> mode_set;  // sorted, 0-based
    std::vector<DenseTensor> factors;   // n_k x r_k each
    std::vector<std::size_t> ranks;
};

inline TuckerFactors partial_tucker(const DenseTensor& a, std::vector<std::size_t> modes,
                                    std::vector<std::size_t> ranks) {
    if (modes.size() != ranks.size()) {
        throw std::invalid_argument("partial_tucker: one rank per mode required");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (i > 0 && modes[i] <= modes[i - 1]) {
            throw std::invalid_argument("partial_tucker: modes must be strictly increasing");
        }
        if (modes[i] >= a.order()) throw std::invalid_argument("partial_tucker: mode out of range");
        if (ranks[i] == 0 || ranks[i] > a.dim(modes[i])) {
            throw std::invalid_argument("partial_tucker: rank " + std::to_string(ranks[i]) +
                                        " invalid for mode of dimension " +
                                        std::to_string(a.dim(modes[i])));
        }
    }

    TuckerFactors f;
    f.mode_set = std::move(modes);
    f.ranks = std::move(ranks);
    f.core = a;
    for (std::size_t i = 0; i < f.mode_set.size(); ++i) {
        const std::size_t mode = f.mode_set[i];
        const SvdResult s = svd(unfold(a, mode));
        const std::size_t nk = a.dim(mode), rk = f.ranks[i];
        DenseTensor u({nk, rk});
        for (std::size_t r = 0; r < nk; ++r) {
            for (std::size_t c = 0; c < rk; ++c) u(r, c) = s.u(r, c);
        }
        f.factors.push_back(u);
        // core <- core *_mode U^T : sum_j core[.. j ..] U(j, c)
        f.core = contract_mode(f.core, u, mode, Side::Right);
    }
    return f;
}

inline DenseTensor tucker_reconstruct(const TuckerFactors& f) {
    DenseTensor r = f.core;
    for (std::size_t i = 0; i < f.mode_set.size(); ++i) {
        r = contract_mode(r, f.factors[i], f.mode_set[i], Side::Left);
    }
    return r;
}

/// Tucker rank vector: per mode, the number of singular values of the
/// unfolding above tol * sigma_max.
inline std::vector<std::size_t> tucker_rank(const DenseTensor& a, double tol = 1e-8) {
    if (tol <= 0.0) throw std::invalid_argument("tucker_rank: tolerance must be positive");
    std::vector<std::size_t> ranks(a.order(), 0);
    for (std::size_t mode = 0; mode < a.order(); ++mode) {
        const SvdResult s = svd(unfold(a, mode));
        const double cutoff = s.sigma.empty() ? 0.0 : tol * s.sigma.front();
        std::size_t r = 0;
        for (double sig : s.sigma) {
            if (sig > cutoff && sig > 0.0) ++r;
        }
        ranks[mode] = r;
    }
    return ranks;
}

/// Storage and per-step work accounting for a partial Tucker reduction of an
/// operator tensor: rows are the modes outside the set, columns the modes in
/// it, and one application costs two flops per matrix entry.
struct ReductionCost {
    std::size_t full_elements = 0;
    std::size_t core_elements = 0;
    double flops_full = 0.0;
    double flops_reduced = 0.0;
    double ratio = 1.0;
};

inline ReductionCost reduction_cost(const Shape& shape, const std::vector<std::size_t>& modes,
                                    const std::vector<std::size_t>& ranks) {
    if (modes.size() != ranks.size()) throw std::invalid_argument("reduction_cost: modes/ranks mismatch");
    ReductionCost c;
    c.full_elements = detail::shape_product(shape);
    std::size_t rows = c.full_elements, cols_full = 1, cols_red = 1;
    std::size_t core = 1;
    Shape core_shape = shape;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] >= shape.size() || ranks[i] > shape[modes[i]]) {
            throw std::invalid_argument("reduction_cost: invalid mode or rank");
        }
        core_shape[modes[i]] = ranks[i];
        cols_full *= shape[modes[i]];
        cols_red *= ranks[i];
    }
    core = detail::shape_product(core_shape);
    rows = c.full_elements / cols_full;
    c.core_elements = core;
    c.flops_full = 2.0 * static_cast<double>(rows) * static_cast<double>(cols_full);
    c.flops_reduced = 2.0 * static_cast<double>(rows) * static_cast<double>(cols_red);
    c.ratio = c.flops_full / c.flops_reduced;
    return c;
}

} // namespace tensorcalc
