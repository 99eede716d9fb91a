#pragma once

#include "tensorcalc/algebra.hpp"
#include "tensorcalc/calculus.hpp"
#include "tensorcalc/demo.hpp"
#include "tensorcalc/matrix.hpp"
#include "tensorcalc/ode.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/random.hpp"
#include "tensorcalc/stability.hpp"
#include "tensorcalc/tensor.hpp"
#include "tensorcalc/tucker.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Named numerical verification suites. Each suite draws seeded random
// instances, evaluates one family of identities with both sides computed
// independently, and reports the worst error against a fixed tolerance.
// These back the CLI `verify` command and the acceptance run.

namespace tensorcalc::verify {

struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    double wall_ms = 0.0;

    [[nodiscard]] bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

namespace detail {

inline CheckResult check(std::string name, double err, double tol) {
    return {std::move(name), err, tol, err <= tol};
}

inline CheckResult check_flag(std::string name, bool ok) {
    return {std::move(name), ok ? 0.0 : 1.0, 0.0, ok};
}

inline double rel_error(const DenseTensor& got, const DenseTensor& want) {
    return max_abs_diff(got, want) / std::max(max_abs(want), 1e-30);
}

inline Shape random_shape(Xoshiro256& rng, std::size_t order, std::size_t max_dim) {
    Shape s(order);
    for (auto& d : s) d = 1 + rng.uniform_index(max_dim);
    return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// tensor-product identity suites
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> suite_lemma2_2(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + rng.uniform_index(3);
        const Shape dims = detail::random_shape(rng, d, 4);
        const DenseTensor a = random_tensor(rng, dims);
        const DenseTensor id = identity_operator(dims);
        worst = std::max(worst, max_abs_diff(contract_last(id, a, d), a));
        worst = std::max(worst, max_abs_diff(contract_last(a, id, d), a));
    }
    return {detail::check("pairwise identity is two-sided (exact)", worst, 0.0)};
}

inline std::vector<CheckResult> suite_prop2_1(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst1 = 0.0, worst2 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 2 + rng.uniform_index(2);
        const Shape dims = detail::random_shape(rng, p, 4);
        const DenseTensor a = random_tensor(rng, dims);

        // (1) chained right 1M products compose through the matrix product
        const std::size_t k = rng.uniform_index(p);
        const std::size_t mk = 1 + rng.uniform_index(4), lk = 1 + rng.uniform_index(4);
        const DenseTensor b = random_tensor(rng, {dims[k], mk});
        const DenseTensor c = random_tensor(rng, {mk, lk});
        const DenseTensor lhs1 = contract_mode(contract_mode(a, b, k, Side::Right), c, k, Side::Right);
        const DenseTensor rhs1 = contract_mode(a, mat_mul(b, c), k, Side::Right);
        worst1 = std::max(worst1, max_abs_diff(lhs1, rhs1));

        // (2) two 1M products equal one 2-mode contraction against B x_c C
        const std::size_t i = rng.uniform_index(p - 1);
        const std::size_t j = i + 1 + rng.uniform_index(p - i - 1);
        const DenseTensor bi = random_tensor(rng, {dims[i], 1 + rng.uniform_index(4)});
        const DenseTensor cj = random_tensor(rng, {dims[j], 1 + rng.uniform_index(4)});
        const DenseTensor lhs2 =
            contract_mode(contract_mode(a, bi, i, Side::Right), cj, j, Side::Right);
        const DenseTensor paired = contract(a, cross_c(bi, cj), ModePairing{{i, j}, {0, 1}});
        // reinsert the two surviving factor modes at positions i and j
        std::vector<std::size_t> perm(p);
        std::size_t src = 0;
        for (std::size_t t = 0; t < p; ++t) {
            if (t == i) {
                perm[t] = p - 2;
            } else if (t == j) {
                perm[t] = p - 1;
            } else {
                perm[t] = src++;
            }
        }
        const DenseTensor rhs2 = permute(paired, perm);
        worst2 = std::max(worst2, max_abs_diff(lhs2, rhs2));
    }
    return {detail::check("chained 1M products compose (A*B*C = A*(BC))", worst1, 1e-12),
            detail::check("split 1M products equal the paired contraction", worst2, 1e-12)};
}

inline std::vector<CheckResult> suite_prop2_2(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    bool iff_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + rng.uniform_index(2);
        const std::size_t n = 2 + rng.uniform_index(3);
        const DenseTensor a = random_tensor(rng, Shape(d, n));
        const DenseTensor j = unit_tensor(2 * d, n);
        const DenseTensor ja = contract_last(j, a, d);
        const DenseTensor aj = contract_last(a, j, d);
        const DenseTensor diag = diagonal_part(a);
        worst = std::max(worst, max_abs_diff(ja, diag));
        worst = std::max(worst, max_abs_diff(aj, diag));
        // identity behaviour holds exactly for diagonal tensors and fails otherwise
        if (max_abs_diff(contract_last(j, diag, d), diag) != 0.0) iff_ok = false;
        if (max_abs_diff(ja, a) < 1e-12 && max_abs_diff(a, diag) > 1e-9) iff_ok = false;
    }
    return {detail::check("unit tensor extracts the diagonal (J*A = A*J = D(A))", worst, 1e-12),
            detail::check_flag("J*A = A exactly when A is diagonal", iff_ok)};
}

inline std::vector<CheckResult> suite_lemma2_3(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w1 = 0, w2 = 0, w3 = 0, w4 = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(4), n = 1 + rng.uniform_index(4);
        const DenseTensor a = random_tensor(rng, {m, n});
        const DenseTensor at = transpose(a);
        const DenseTensor im = identity_matrix(m), in = identity_matrix(n);
        const DenseTensor id = cross_c(im, in);

        const DenseTensor e1 = cross_c(at, in);
        w1 = std::max(w1, max_abs_diff(contract_mode(id, at, 0, Side::Left), e1));
        w1 = std::max(w1, max_abs_diff(contract_mode(id, a, 0, Side::Right), e1));

        const DenseTensor e2 = cross_c(im, a);
        w2 = std::max(w2, max_abs_diff(contract_mode(id, a, 1, Side::Left), e2));
        w2 = std::max(w2, max_abs_diff(contract_mode(id, at, 1, Side::Right), e2));

        const DenseTensor e3 = cross_c(a, in);
        w3 = std::max(w3, max_abs_diff(contract_mode(id, at, 2, Side::Left), e3));
        w3 = std::max(w3, max_abs_diff(contract_mode(id, a, 2, Side::Right), e3));

        const DenseTensor e4 = cross_c(im, at);
        w4 = std::max(w4, max_abs_diff(contract_mode(id, a, 3, Side::Left), e4));
        w4 = std::max(w4, max_abs_diff(contract_mode(id, at, 3, Side::Right), e4));
    }
    return {detail::check("mode-1 products give A^T x_c I", w1, 1e-13),
            detail::check("mode-2 products give I x_c A", w2, 1e-13),
            detail::check("mode-3 products give A x_c I", w3, 1e-13),
            detail::check("mode-4 products give I x_c A^T", w4, 1e-13)};
}

inline std::vector<CheckResult> suite_lemma2_4(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_chain = 0.0, w_sandwich = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 1 + rng.uniform_index(2);
        const std::size_t d = 1 + rng.uniform_index(3);
        Shape bshape = detail::random_shape(rng, d, 4);
        const std::size_t k = rng.uniform_index(d);
        const std::size_t b_k = bshape[k];
        const std::size_t u_rows = 1 + rng.uniform_index(4);
        const std::size_t v_cols = 1 + rng.uniform_index(4);
        const DenseTensor bt = random_tensor(rng, bshape);
        const DenseTensor u = random_tensor(rng, {u_rows, b_k});
        const DenseTensor v = random_tensor(rng, {u_rows, v_cols});

        // sandwich identity: U *_k B *_k V = (V^T U) *_k B = B *_k (U^T V)
        const DenseTensor sandwich =
            contract_mode(contract_mode(bt, u, k, Side::Left), v, k, Side::Right);
        const DenseTensor via_left = contract_mode(bt, mat_mul(transpose(v), u), k, Side::Left);
        const DenseTensor via_right = contract_mode(bt, mat_mul(transpose(u), v), k, Side::Right);
        w_sandwich = std::max(w_sandwich, max_abs_diff(sandwich, via_left));
        w_sandwich = std::max(w_sandwich, max_abs_diff(sandwich, via_right));

        // chained form: [A *_{p+k} (V^T U)] *_[d] B = A *_[d] [U *_k B *_k V]
        Shape ashape = detail::random_shape(rng, p, 4);
        Shape atrail = bshape;
        atrail[k] = v_cols;
        ashape.insert(ashape.end(), atrail.begin(), atrail.end());
        const DenseTensor a = random_tensor(rng, ashape);
        const DenseTensor lhs =
            contract_last(contract_mode(a, mat_mul(transpose(v), u), p + k, Side::Right), bt, d);
        const DenseTensor rhs = contract_last(a, sandwich, d);
        w_chain = std::max(w_chain, max_abs_diff(lhs, rhs));
    }
    return {detail::check("matrix sandwich collapses to one product", w_sandwich, 1e-12),
            detail::check("transform chains move through the d-mode contraction", w_chain, 1e-12)};
}

inline std::vector<CheckResult> suite_lemma2_5(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_free = 0.0, w_contracted = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 1 + rng.uniform_index(2);
        const std::size_t q = 1 + rng.uniform_index(3);
        Shape ashape = detail::random_shape(rng, p + q, 4);
        const DenseTensor a = random_tensor(rng, ashape);
        Shape bshape(ashape.begin() + p, ashape.end());
        const DenseTensor b = random_tensor(rng, bshape);

        // free-mode transform commutes with the contraction
        const std::size_t kf = rng.uniform_index(p);
        const DenseTensor uf = random_tensor(rng, {ashape[kf], 1 + rng.uniform_index(4)});
        const DenseTensor lhs1 = contract_last(contract_mode(a, uf, kf, Side::Right), b, q);
        const DenseTensor rhs1 = contract_mode(contract_last(a, b, q), uf, kf, Side::Right);
        w_free = std::max(w_free, max_abs_diff(lhs1, rhs1));

        // contracted-mode transform moves onto the other factor
        const std::size_t kc = rng.uniform_index(q);
        const std::size_t w = 1 + rng.uniform_index(4);
        Shape ashape2 = ashape;
        ashape2[p + kc] = w;
        const DenseTensor a2 = random_tensor(rng, ashape2);
        const DenseTensor u = random_tensor(rng, {w, bshape[kc]});
        const DenseTensor lhs2 = contract_last(contract_mode(a2, u, p + kc, Side::Right), b, q);
        const DenseTensor rhs2a = contract_last(a2, contract_mode(b, u, kc, Side::Left), q);
        const DenseTensor rhs2b = contract_last(a2, contract_mode(b, transpose(u), kc, Side::Right), q);
        w_contracted = std::max(w_contracted, max_abs_diff(lhs2, rhs2a));
        w_contracted = std::max(w_contracted, max_abs_diff(lhs2, rhs2b));
    }
    return {detail::check("free-mode transforms commute with contraction", w_free, 1e-12),
            detail::check("contracted-mode transforms move to the other factor", w_contracted, 1e-12)};
}

inline std::vector<CheckResult> suite_eq3_20(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(4), n = 1 + rng.uniform_index(4);
        const std::size_t r = 1 + rng.uniform_index(4), s = 1 + rng.uniform_index(4);
        const DenseTensor a = random_tensor(rng, {m, n});
        const DenseTensor b = random_tensor(rng, {r, s});
        const DenseTensor c = random_tensor(rng, {s, 1 + rng.uniform_index(4)});
        const DenseTensor lhs = contract_mode(cross_c(a, b), c, 3, Side::Right);
        const DenseTensor rhs = cross_c(a, mat_mul(b, c));
        worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    return {detail::check("(A x_c B) *_4 C = A x_c (BC)", worst, 1e-13)};
}

inline std::vector<CheckResult> suite_commutation(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng.uniform_index(4), n = 1 + rng.uniform_index(4);
        const DenseTensor a = random_tensor(rng, {m, n});
        const DenseTensor k = commutation_tensor(m, n);
        const DenseTensor at = contract(a, k, ModePairing{{0, 1}, {0, 1}});
        worst = std::max(worst, max_abs_diff(at, transpose(a)));
    }
    return {detail::check("commutation tensor transposes (exact)", worst, 0.0)};
}

// ---------------------------------------------------------------------------
// derivative suites
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> suite_lemma3_1(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_const = 0, w_scalar = 0, w_trace = 0, w_det = 0, w_id = 0, w_tr = 0, w_adj = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + rng.uniform_index(2), n = 2 + rng.uniform_index(2);
        const DenseTensor x = random_tensor(rng, {m, n});
        const DenseTensor a = random_tensor(rng, {2, 3});

        w_const = std::max(w_const, max_abs(fd_derivative([&](const DenseTensor&) { return a; }, x)));

        const DenseTensor fd_scalar = fd_derivative(
            [&](const DenseTensor& t) {
                double s = 0.0;
                for (double v : t.values()) s += v * v;
                return s * a;
            },
            x);
        w_scalar = std::max(w_scalar, detail::rel_error(d_scalar_times(2.0 * x, a), fd_scalar));

        const std::size_t ns = 3;
        const DenseTensor xs = random_tensor(rng, {ns, ns});
        const DenseTensor fd_trace = fd_derivative(
            [&](const DenseTensor& t) {
                double s = 0.0;
                for (std::size_t i = 0; i < ns; ++i) s += t(i, i);
                return DenseTensor({1, 1}, {s});
            },
            xs);
        double wt = 0.0;
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < ns; ++j) {
                wt = std::max(wt, std::abs(fd_trace(i, j, 0, 0) - d_trace(ns)(i, j)));
            }
        w_trace = std::max(w_trace, wt);

        const DenseTensor fd_det = fd_derivative(
            [](const DenseTensor& t) { return DenseTensor({1, 1}, {determinant(t)}); }, xs);
        const DenseTensor dd = d_det(xs);
        double wd = 0.0;
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t j = 0; j < ns; ++j) wd = std::max(wd, std::abs(fd_det(i, j, 0, 0) - dd(i, j)));
        w_det = std::max(w_det, wd / std::max(max_abs(dd), 1e-30));

        w_id = std::max(w_id, max_abs_diff(fd_derivative([](const DenseTensor& t) { return t; }, x),
                                           d_identity(m, n)));
        w_tr = std::max(w_tr, max_abs_diff(fd_derivative([](const DenseTensor& t) { return permute(t, {1, 0}); }, x),
                                           d_transpose(m, n)));

        // adjugate identity underpinning the determinant rule
        w_adj = std::max(w_adj, max_abs_diff(mat_mul(xs, adjugate(xs)),
                                             determinant(xs) * identity_matrix(ns)));
    }
    return {detail::check("constant maps differentiate to zero (exact)", w_const, 0.0),
            detail::check("scalar-times-constant rule vs finite differences", w_scalar, 1e-6),
            detail::check("trace derivative is the identity", w_trace, 1e-9),
            detail::check("determinant derivative is the cofactor matrix", w_det, 1e-6),
            detail::check("dX/dX is the cross identity (FD exact for linear maps)", w_id, 1e-10),
            detail::check("dX^T/dX is the anti-cross identity", w_tr, 1e-10),
            detail::check("X adj(X) = det(X) I", w_adj, 1e-10)};
}

inline std::vector<CheckResult> suite_thm3_2(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double wa = 0, wb = 0, wc = 0, wd = 0, w319 = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 2 + rng.uniform_index(2), n = 2 + rng.uniform_index(2);
        const DenseTensor x = random_tensor(rng, {m, n});
        const DenseTensor a = random_tensor(rng, {3, m});
        const DenseTensor b = random_tensor(rng, {n, 2});

        wa = std::max(wa, detail::rel_error(d_AXB(a, b),
                                            fd_derivative([&](const DenseTensor& t) {
                                                return mat_mul(a, mat_mul(t, b));
                                            }, x)));

        const DenseTensor a2 = random_tensor(rng, {2, m});
        const DenseTensor b2 = random_tensor(rng, {n, 3});
        auto yf = [&](const DenseTensor& t) { return mat_mul(a, mat_mul(t, b)); };   // 3 x 2
        auto zf = [&](const DenseTensor& t) { return mat_mul(a2, mat_mul(t, b2)); }; // 2 x 3
        const DenseTensor closed = d_product(d_AXB(a, b), d_AXB(a2, b2), yf(x), zf(x));
        const DenseTensor fd = fd_derivative(
            [&](const DenseTensor& t) { return mat_mul(yf(t), zf(t)); }, x);
        wb = std::max(wb, detail::rel_error(closed, fd));

        const std::size_t ns = 3;
        const DenseTensor xs = random_tensor(rng, {ns, ns});
        const DenseTensor square_form =
            cross_c(identity_matrix(ns), xs) + cross_c(transpose(xs), identity_matrix(ns));
        wc = std::max(wc, max_abs_diff(d_power(xs, 2), square_form));
        wc = std::max(wc, detail::rel_error(square_form, fd_derivative([](const DenseTensor& t) {
                                                return mat_mul(t, t);
                                            }, xs)));

        DenseTensor xw = random_tensor(rng, {ns, ns});
        while (condition_estimate(xw) > 100.0) xw = random_tensor(rng, {ns, ns});
        wd = std::max(wd, detail::rel_error(d_inverse(xw),
                                            fd_derivative([](const DenseTensor& t) { return inverse(t); }, xw)));

        // the intermediate solve form: X *_3 dX^{-1}/dX = -I x_c X^{-1}
        const DenseTensor lhs319 = contract_mode(d_inverse(xw), xw, 2, Side::Left);
        const DenseTensor rhs319 = -1.0 * cross_c(identity_matrix(ns), inverse(xw));
        w319 = std::max(w319, max_abs_diff(lhs319, rhs319));
    }
    return {detail::check("sandwich rule d(AXB)/dX = A^T x_c B", wa, 1e-6),
            detail::check("product rule vs finite differences", wb, 1e-6),
            detail::check("square rule I x_c X + X^T x_c I", wc, 1e-6),
            detail::check("inverse rule -X^{-T} x_c X^{-1}", wd, 1e-6),
            detail::check("solve form X *_3 dX^{-1} = -I x_c X^{-1}", w319, 1e-12)};
}

inline std::vector<CheckResult> suite_thm3_3(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_fd = 0, w_rec = 0;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3;
        const DenseTensor x = random_tensor(rng, {n, n});
        for (std::size_t m = 1; m <= 4; ++m) {
            auto f = [m](const DenseTensor& t) {
                DenseTensor r = identity_matrix(t.dim(0));
                for (std::size_t k = 0; k < m; ++k) r = mat_mul(r, t);
                return r;
            };
            w_fd = std::max(w_fd, detail::rel_error(d_power(x, m), fd_derivative(f, x)));
        }
        for (std::size_t m = 1; m <= 3; ++m) {
            DenseTensor xm = identity_matrix(n);
            for (std::size_t k = 0; k < m; ++k) xm = mat_mul(xm, x);
            const DenseTensor rec = contract_mode(d_power(x, m), x, 3, Side::Right) +
                                    contract_mode(d_identity(n, n), xm, 2, Side::Left);
            w_rec = std::max(w_rec, max_abs_diff(d_power(x, m + 1), rec));
        }
        auto quartic = [](const DenseTensor& t) {
            return mat_mul(mat_mul(t, t), mat_mul(t, t));
        };
        const double e1 = max_abs_diff(fd_derivative(quartic, x, 1e-3), d_power(x, 4));
        const double e2 = max_abs_diff(fd_derivative(quartic, x, 5e-4), d_power(x, 4));
        ratio_lo = std::min(ratio_lo, e1 / e2);
        ratio_hi = std::max(ratio_hi, e1 / e2);
    }
    std::vector<CheckResult> out = {
        detail::check("power rule vs finite differences (m <= 4)", w_fd, 1e-6),
        detail::check("induction recursion d(X^{m+1})", w_rec, 1e-12)};
    out.push_back(detail::check_flag(
        "second-order FD convergence (halving h shrinks error 3x-5x)",
        ratio_lo > 3.0 && ratio_hi < 5.0));
    return out;
}

inline std::vector<CheckResult> suite_thm3_5(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_id = 0, w_sq = 0;
    bool paired = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(2);
        const DenseTensor x = random_symmetric_matrix(rng, n);
        w_id = std::max(w_id, detail::rel_error(d_sym_identity(n),
                                                fd_derivative_sym([](const DenseTensor& t) { return t; }, x)));
        w_sq = std::max(w_sq, detail::rel_error(d_sym_square(x),
                                                fd_derivative_sym([](const DenseTensor& t) {
                                                    return mat_mul(t, t);
                                                }, x)));
        paired = paired && is_paired_symmetric(d_sym_identity(n), 1e-11) &&
                 is_paired_symmetric(d_sym_square(x), 1e-11);
    }
    return {detail::check("symmetric identity rule vs paired-perturbation FD", w_id, 1e-6),
            detail::check("symmetric square rule vs paired-perturbation FD", w_sq, 1e-6),
            detail::check_flag("both symmetric derivatives are paired symmetric", paired)};
}

inline std::vector<CheckResult> suite_thm3_6(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + rng.uniform_index(3);
        const std::size_t n = 2 + rng.uniform_index(2);
        const DenseTensor a = random_tensor(rng, Shape(d, n));
        const DenseTensor id = d_tensor_identity(d, n);
        worst = std::max(worst, max_abs_diff(contract_last(id, a, d), a));
    }
    return {detail::check("tensor-variable identity acts as the identity", worst, 1e-12)};
}

inline std::vector<CheckResult> suite_eq3_14(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    bool structure = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(3);
        const DenseTensor x = random_symmetric_matrix(rng, n);
        const SymmetricAssociated s = sym_associated(x);
        const DenseTensor id = identity_matrix(n);
        const DenseTensor xc = cross_c(id, x) + cross_c(x, id);
        const DenseTensor xac = cross_ac(id, x) + cross_ac(x, id);
        worst = std::max(worst, max_abs_diff(xc + xac, s.xs - s.xnat));
        structure = structure && is_symmetric(s.xs, 1e-12) && is_paired_symmetric(s.xnat, 1e-12);
    }
    return {detail::check("X^c + X^ac = X_s - X^nat", worst, 1e-13),
            detail::check_flag("X_s fully symmetric, X^nat paired symmetric", structure)};
}

// ---------------------------------------------------------------------------
// ODE suites
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> suite_thm4_3(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_vec = 0.0, w_block = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t p = 2 + rng.uniform_index(2), n = 2 + rng.uniform_index(2);
        std::vector<DenseTensor> mats;
        for (std::size_t k = 0; k < n; ++k) mats.push_back(random_tensor(rng, {p, p}));
        const CoefficientTensor c = coefficient_tensor(mats);
        const LinearOperator op(c.tensor);
        const DenseTensor x = random_tensor(rng, {p, n});
        const DenseTensor m = balanced_matricization(c.tensor);
        w_vec = std::max(w_vec, max_abs_diff(vectorize(op.apply(x)), mat_vec(m, vectorize(x))));

        DenseTensor expected({p * n, p * n});
        for (std::size_t j = 0; j + 1 < n; ++j)
            for (std::size_t i = 0; i < p; ++i) expected(j * p + i, (j + 1) * p + i) = 1.0;
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t k = 0; k < p; ++k) expected((n - 1) * p + i, l * p + k) = -mats[l](i, k);
        w_block = std::max(w_block, max_abs_diff(m, expected));
    }
    return {detail::check("vec(A*X) = M vec(X) for the coefficient tensor", w_vec, 1e-13),
            detail::check("balanced matricization shows the companion block pattern (exact)", w_block, 0.0)};
}

inline std::vector<CheckResult> suite_thm4_5(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0, w0 = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t p = 2 + rng.uniform_index(2), n = 2 + rng.uniform_index(2);
        DenseTensor t = random_tensor(rng, {p, n, p, n});
        t = (2.0 / frobenius_norm(t)) * t;
        const LinearOperator op(t);
        const DenseTensor c = random_tensor(rng, {p, n});
        w0 = std::max(w0, max_abs_diff(solve_exact(op, c, 0.0), c));
        const double tt = rng.uniform(0.1, 0.8), h = 1e-4;
        const DenseTensor fd =
            (1.0 / (2.0 * h)) * (solve_exact(op, c, tt + h) - solve_exact(op, c, tt - h));
        worst = std::max(worst, max_abs_diff(fd, op.apply(solve_exact(op, c, tt))));
    }
    return {detail::check("initial condition X(0) = C", w0, 1e-14),
            detail::check("d/dt exp(tA)*C = A * X(t) by finite differences", worst, 1e-6)};
}

inline std::vector<CheckResult> suite_thm4_6(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    bool refusal = true;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3, m = 3;
        DenseTensor base = random_tensor(rng, {n, n});
        base = (1.0 / frobenius_norm(base)) * base;
        const DenseTensor slices[3] = {identity_matrix(n) + 0.5 * base, mat_mul(base, base),
                                       0.3 * identity_matrix(n) - 1.0 * base};
        DenseTensor gen({m, n, n});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t cc = 0; cc < n; ++cc) gen(i, r, cc) = slices[i](r, cc);
        const DenseTensor c0 = random_tensor(rng, {n});
        const DenseTensor t = random_tensor(rng, {m}, -0.5, 0.5);
        const double h = 1e-5;
        for (std::size_t i = 0; i < m; ++i) {
            DenseTensor tp = t, tm = t;
            tp.values()[i] += h;
            tm.values()[i] -= h;
            const DenseTensor fd =
                (1.0 / (2.0 * h)) * (solve_multitime(gen, c0, tp) - solve_multitime(gen, c0, tm));
            worst = std::max(worst, max_abs_diff(fd, mat_vec(slices[i], solve_multitime(gen, c0, t))));
        }
    }
    try {
        Xoshiro256 rng2(seed + 1);
        const DenseTensor bad = random_tensor(rng2, {2, 3, 3});
        solve_multitime(bad, DenseTensor({3}, {1, 0, 0}), DenseTensor({2}));
        refusal = false;
    } catch (const std::invalid_argument&) {
    }
    return {detail::check("every slice PDE dx/dt_i = A_i x holds (commuting slices)", worst, 1e-6),
            detail::check_flag("non-commuting slices are refused", refusal)};
}

inline std::vector<CheckResult> suite_lemma4_1(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0, w_comp = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const DenseTensor alpha = 0.3 * random_tensor(rng, {3});
        const DenseTensor q = 0.3 * random_symmetric_matrix(rng, 3);
        const CubicSystem sys = assemble_cubic(alpha, q);
        const double a1 = alpha.values()[0], a2 = alpha.values()[1], a3 = alpha.values()[2];
        auto scalar_form = [&](const DenseTensor& y) {
            double f = a1 * y.values()[0] + a2 * y.values()[1] + a3 * y.values()[2];
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) f += y.values()[i] * q(i, j) * y.values()[j];
            return DenseTensor({3}, {y.values()[1], y.values()[2], f});
        };
        DenseTensor ya = 0.2 * random_tensor(rng, {3});
        DenseTensor yb = ya;
        const double h = 1e-3;
        auto rk4 = [h](const std::function<DenseTensor(const DenseTensor&)>& rhs, DenseTensor y) {
            const DenseTensor k1 = rhs(y);
            const DenseTensor k2 = rhs(y + 0.5 * h * k1);
            const DenseTensor k3 = rhs(y + 0.5 * h * k2);
            const DenseTensor k4 = rhs(y + h * k3);
            return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        };
        for (int step = 0; step < 1000; ++step) {
            ya = rk4(sys.rhs, ya);
            yb = rk4(scalar_form, yb);
            worst = std::max(worst, max_abs_diff(ya, yb));
        }
        const DenseTensor x = random_tensor(rng, {3});
        double expect = a1 * x.values()[0] + a2 * x.values()[1] + a3 * x.values()[2];
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) expect += x.values()[i] * q(i, j) * x.values()[j];
        w_comp = std::max(w_comp, std::abs(sys.rhs(x).values()[2] - expect));
    }
    return {detail::check("tensorized cubic system matches the scalar form over [0,1]", worst, 1e-8),
            detail::check("third component carries alpha^T x + x^T Q x", w_comp, 1e-13)};
}

inline std::vector<CheckResult> suite_companion(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t deg = 4;
        std::vector<double> coeffs(deg);
        for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
        const DenseTensor a = companion_matrix(coeffs);
        DenseTensor vand({deg + 1, deg + 1});
        DenseTensor rhs({deg + 1});
        for (std::size_t s = 0; s <= deg; ++s) {
            const double xval = static_cast<double>(s) - 1.5;
            double pw = 1.0;
            for (std::size_t c = 0; c <= deg; ++c) {
                vand(s, c) = pw;
                pw *= xval;
            }
            rhs.values()[s] = determinant(xval * identity_matrix(deg) - a);
        }
        const DenseTensor sol = solve_linear(vand, rhs);
        for (std::size_t c = 0; c < deg; ++c) worst = std::max(worst, std::abs(sol.values()[c] - coeffs[c]));
        worst = std::max(worst, std::abs(sol.values()[deg] - 1.0));
    }
    return {detail::check("char poly of the companion matrix recovers the coefficients", worst, 1e-10)};
}

inline std::vector<CheckResult> suite_integrators(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double rk4_worst = 0.0;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t p = 3, q = 3;
        DenseTensor m = random_tensor(rng, {p * q, p * q});
        m = (1.0 / frobenius_norm(m)) * m - 1.2 * identity_matrix(p * q);
        const LinearOperator op(operator_from_matrix(m, {p, q}));
        const DenseTensor x0 = random_tensor(rng, {p, q});
        const DenseTensor exact = solve_exact(op, x0, 1.0);
        rk4_worst = std::max(rk4_worst,
                             max_abs_diff(integrate(op, x0, 1e-2, 100, Method::Rk4).states.back(), exact));
        const double e1 = max_abs_diff(integrate(op, x0, 1e-2, 100, Method::Euler).states.back(), exact);
        const double e2 = max_abs_diff(integrate(op, x0, 5e-3, 200, Method::Euler).states.back(), exact);
        ratio_lo = std::min(ratio_lo, e1 / e2);
        ratio_hi = std::max(ratio_hi, e1 / e2);
    }
    return {detail::check("RK4 vs exact solution at h = 1e-2", rk4_worst, 1e-7),
            detail::check_flag("Euler halving ratio within [1.8, 2.2]",
                               ratio_lo > 1.8 && ratio_hi < 2.2)};
}

inline std::vector<CheckResult> suite_tucker(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_rec = 0.0, w_orth = 0.0;
    bool ranks_ok = true, monotone = true;

    // planted 6-order system, trailing ranks (3,3)
    DenseTensor g({6, 6, 6, 6, 3, 3});
    for (double& v : g.values()) {
        const double x = rng.gaussian();
        v = (rng.uniform() < 0.1) ? x : 0.0;
    }
    const DenseTensor u5 = random_orthonormal(rng, 6, 3);
    const DenseTensor u6 = random_orthonormal(rng, 6, 3);
    DenseTensor a = contract_mode(g, u5, 4, Side::Left);
    a = contract_mode(a, u6, 5, Side::Left);
    const std::vector<std::size_t> recovered = tucker_rank(a);
    ranks_ok = recovered[4] == 3 && recovered[5] == 3;
    const TuckerFactors f = partial_tucker(a, {4, 5}, {3, 3});
    w_rec = std::max(w_rec, max_abs_diff(tucker_reconstruct(f), a) / frobenius_norm(a));
    for (const auto& u : f.factors) {
        w_orth = std::max(w_orth, max_abs_diff(mat_mul(transpose(u), u), identity_matrix(u.dim(1))));
    }

    // full HOSVD on a random tensor
    const DenseTensor b = random_tensor(rng, {3, 4, 2});
    const TuckerFactors fb = partial_tucker(b, {0, 1, 2}, {3, 4, 2});
    w_rec = std::max(w_rec, max_abs_diff(tucker_reconstruct(fb), b) / frobenius_norm(b));
    for (const auto& u : fb.factors) {
        w_orth = std::max(w_orth, max_abs_diff(mat_mul(transpose(u), u), identity_matrix(u.dim(1))));
    }

    // truncation error shrinks as the rank grows
    const DenseTensor c = random_tensor(rng, {5, 5, 5});
    double prev = 1e300;
    for (std::size_t r = 1; r <= 5; ++r) {
        const TuckerFactors fc = partial_tucker(c, {1}, {r});
        const double err = frobenius_norm(tucker_reconstruct(fc) - c);
        if (err > prev + 1e-12) monotone = false;
        prev = err;
    }

    return {detail::check("exact-rank reconstruction error (relative)", w_rec, 1e-10),
            detail::check("factor orthonormality", w_orth, 1e-10),
            detail::check_flag("rank recovery on the planted tensor", ranks_ok),
            detail::check_flag("truncation error is monotone in the rank", monotone)};
}

inline std::vector<CheckResult> suite_lyapunov(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    double w_c = 0.0, w_ac = 0.0, w_scale = 0.0, w_left = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(3);
        const DenseTensor a = random_tensor(rng, {n, n});
        const DenseTensor x = random_tensor(rng, {n, n});
        const LyapunovPair pair = lyapunov_tensors(a);
        w_c = std::max(w_c, max_abs_diff(contract_last(pair.a_c, x, 2),
                                         mat_mul(a, x) + mat_mul(x, transpose(a))));
        w_ac = std::max(w_ac, max_abs_diff(contract_last(pair.a_ac, x, 2),
                                           mat_mul(a, x) + mat_mul(transpose(x), a)));
        const LyapunovPair scaled = lyapunov_tensors(2.5 * a);
        w_scale = std::max(w_scale, max_abs_diff(scaled.a_c, 2.5 * pair.a_c));
        const DenseTensor p = random_symmetric_matrix(rng, n);
        w_left = std::max(w_left, max_abs_diff(contract(p, pair.a_c, ModePairing{{0, 1}, {0, 1}}),
                                               cqlf_derivative(a, p)));
    }

    bool certificates = true;
    certificates = certificates && stability_certificate(-1.0 * identity_matrix(2), identity_matrix(2)).stable;
    certificates = certificates && !stability_certificate(identity_matrix(2), identity_matrix(2)).stable;
    const DenseTensor osc({2, 2}, {0, 1, -1, -1});
    certificates = certificates && stability_certificate(osc, lyapunov_solve(osc, identity_matrix(2))).stable;

    bool decreasing = true;
    for (int sys = 0; sys < 5; ++sys) {
        const std::size_t n = 3;
        DenseTensor a = random_tensor(rng, {n, n}, -0.5, 0.5);
        for (std::size_t i = 0; i < n; ++i) a(i, i) = -2.0 - rng.uniform();
        const DenseTensor p = lyapunov_solve(a, identity_matrix(n));
        if (!stability_certificate(a, p).stable) {
            decreasing = false;
            continue;
        }
        const DenseTensor x0 = random_tensor(rng, {n});
        double prev = cqlf_value(p, x0);
        for (int k = 1; k <= 100; ++k) {
            const double v = cqlf_value(p, mat_vec(matrix_exp(0.01 * k * a), x0));
            if (v >= prev) decreasing = false;
            prev = v;
        }
    }

    return {detail::check("type-I action a_c * X = AX + X A^T", w_c, 1e-13),
            detail::check("type-II action a_ac * X = AX + X^T A", w_ac, 1e-13),
            detail::check("scaling covariance of the pair", w_scale, 1e-13),
            detail::check("left contraction P * a_c = A^T P + P A", w_left, 1e-13),
            detail::check_flag("certificate verdicts on the reference systems", certificates),
            detail::check_flag("certified systems decrease V along the exact flow", decreasing)};
}

inline std::vector<CheckResult> suite_algorithm1(std::uint64_t seed) {
    const double step = 1e-3;
    const std::size_t steps = 1000;

    const ReductionDemo planted = make_reduction_demo(seed);
    const double err_planted = reduction_error_at_ranks(planted, 3, step, steps, Method::Euler);
    const double err_full = reduction_error_at_ranks(planted, 6, step, steps, Method::Euler);
    const double err_starved = reduction_error_at_ranks(planted, 1, step, steps, Method::Euler);

    // Monotone decay in the rank is an observation about a fixed dense
    // instance, not a theorem (adversarial draws can break it), so this
    // check pins its own instance instead of following the caller's seed.
    const ReductionDemo dense = make_dense_demo(0x5eedULL);
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t r = 1; r <= 5; ++r) {
        const double err = reduction_error_at_ranks(dense, r, step, steps, Method::Euler);
        if (err > prev + 1e-12) monotone = false;
        prev = err;
    }

    return {detail::check("planted rank-(3,3) system is reduced exactly", err_planted, 1e-6),
            detail::check("full-rank reduction reproduces the full trajectory", err_full, 1e-12),
            detail::check_flag("starved ranks (1,1) degrade the planted run",
                               err_starved > err_planted),
            detail::check_flag("error decays monotonically in the rank on the pinned dense system",
                               monotone)};
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

using SuiteFn = std::function<std::vector<CheckResult>(std::uint64_t)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"lemma2.2", suite_lemma2_2},   {"prop2.1", suite_prop2_1},
        {"prop2.2", suite_prop2_2},     {"lemma2.3", suite_lemma2_3},
        {"lemma2.4", suite_lemma2_4},   {"lemma2.5", suite_lemma2_5},
        {"eq3.20", suite_eq3_20},       {"commutation", suite_commutation},
        {"lemma3.1", suite_lemma3_1},   {"thm3.2", suite_thm3_2},
        {"thm3.3", suite_thm3_3},       {"thm3.5", suite_thm3_5},
        {"thm3.6", suite_thm3_6},       {"eq3.14", suite_eq3_14},
        {"thm4.3", suite_thm4_3},       {"thm4.5", suite_thm4_5},
        {"thm4.6", suite_thm4_6},       {"lemma4.1", suite_lemma4_1},
        {"companion", suite_companion}, {"integrators", suite_integrators},
        {"tucker", suite_tucker},       {"lyapunov", suite_lyapunov},
        {"algorithm1", suite_algorithm1},
    };
    return table;
}

inline std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : suite_registry()) names.push_back(name);
    return names;
}

class UnknownSuite : public std::runtime_error {
public:
    explicit UnknownSuite(const std::string& name)
        : std::runtime_error("unknown suite: " + name) {}
};

inline Report run_suite(const std::string& name, std::uint64_t seed) {
    for (const auto& [suite_name, fn] : suite_registry()) {
        if (suite_name == name) {
            Report r;
            r.suite = name;
            r.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            r.checks = fn(seed);
            r.wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
            return r;
        }
    }
    throw UnknownSuite(name);
}

} // namespace tensorcalc::verify
