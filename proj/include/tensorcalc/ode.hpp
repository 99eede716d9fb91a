#pragma once

#include "tensorcalc/algebra.hpp"
#include "tensorcalc/matrix.hpp"
#include "tensorcalc/products.hpp"
#include "tensorcalc/tensor.hpp"
#include "tensorcalc/tucker.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tensorcalc {

/// Companion matrix of x^(n) + a_{n-1} x^(n-1) + ... + a_0 x = 0:
/// ones on the superdiagonal, (-a_0, ..., -a_{n-1}) in the last row.
inline DenseTensor companion_matrix(std::span<const double> coeffs) {
    const std::size_t n = coeffs.size();
    if (n == 0) throw std::invalid_argument("companion_matrix: at least one coefficient required");
    DenseTensor a({n, n});
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = -coeffs[j];
    return a;
}

inline DenseTensor companion_matrix(std::initializer_list<double> coeffs) {
    return companion_matrix(std::span<const double>(coeffs.begin(), coeffs.size()));
}

// ---------------------------------------------------------------------------
// solution basis from the characteristic roots
// ---------------------------------------------------------------------------

struct BasisTerm {
    std::size_t power; // j - 1
    double rate;       // lambda_i
};

/// The n linearly independent solutions t^{j-1} e^{lambda_i t} spanned by the
/// given (root, multiplicity) pairs. Root finding is not performed here;
/// roots are inputs. Real roots only.
struct SolutionBasis {
    std::vector<BasisTerm> terms;
};

inline SolutionBasis solution_basis(const std::vector<std::pair<double, std::size_t>>& roots,
                                    std::size_t n) {
    std::size_t total = 0;
    for (const auto& [rate, mult] : roots) total += mult;
    if (total != n) {
        throw std::invalid_argument("solution_basis: multiplicities sum to " + std::to_string(total) +
                                    ", expected " + std::to_string(n));
    }
    SolutionBasis basis;
    for (const auto& [rate, mult] : roots) {
        for (std::size_t j = 0; j < mult; ++j) basis.terms.push_back({j, rate});
    }
    return basis;
}

inline double basis_eval(const BasisTerm& term, double t) {
    return std::pow(t, static_cast<double>(term.power)) * std::exp(term.rate * t);
}

// ---------------------------------------------------------------------------
// coefficient tensor of an n-th order p-variate linear ODE
// ---------------------------------------------------------------------------

/// The p x n x p x n operator encoding x^(n) + A_{n-1} x^(n-1) + ... + A_0 x = 0
/// as dX/dt = A * X on the state matrix X with columns (x, x', ..., x^(n-1)):
/// ones at (i,j,i,j+1) shift derivatives left, and row j = n holds
/// -A_{l-1}(i,k).
struct CoefficientTensor {
    DenseTensor tensor;
    std::size_t state_dim = 0; // p
    std::size_t ode_order = 0; // n
};

inline CoefficientTensor coefficient_tensor(const std::vector<DenseTensor>& a_list) {
    if (a_list.empty()) throw std::invalid_argument("coefficient_tensor: at least one matrix required");
    const std::size_t n = a_list.size();
    const std::size_t p = a_list.front().dim(0);
    for (const auto& a : a_list) {
        require_square(a, "coefficient_tensor");
        if (a.dim(0) != p) throw std::invalid_argument("coefficient_tensor: matrices must share size");
    }
    DenseTensor t({p, n, p, n});
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) t(i, j, i, j + 1) = 1.0;
        for (std::size_t k = 0; k < p; ++k) {
            for (std::size_t l = 0; l < n; ++l) t(i, n - 1, k, l) = -a_list[l](i, k);
        }
    }
    return {std::move(t), p, n};
}

// ---------------------------------------------------------------------------
// cubic scalar third-order ODE in first-order tensor form
// ---------------------------------------------------------------------------

/// x''' = a1 x + a2 x' + a3 x'' + (x, x', x'')^T Q (x, x', x'') assembled as
/// dx/dt = B x + A3 x^2 with B = (e2; e3; alpha^T) and A3(2,:,:) = Q.
struct CubicSystem {
    DenseTensor linear;    // 3 x 3
    DenseTensor quadratic; // 3 x 3 x 3
    std::function<DenseTensor(const DenseTensor&)> rhs;
};

inline CubicSystem assemble_cubic(const DenseTensor& alpha, const DenseTensor& q,
                                  double sym_tol = 1e-12) {
    if (alpha.order() != 1 || alpha.dim(0) != 3) {
        throw std::invalid_argument("assemble_cubic: alpha must be a 3-vector");
    }
    require_square(q, "assemble_cubic");
    if (q.dim(0) != 3 || !is_symmetric_matrix(q, sym_tol)) {
        throw std::invalid_argument("assemble_cubic: symmetric 3x3 Q required");
    }
    CubicSystem sys;
    sys.linear = DenseTensor({3, 3});
    sys.linear(0, 1) = 1.0;
    sys.linear(1, 2) = 1.0;
    for (std::size_t j = 0; j < 3; ++j) sys.linear(2, j) = alpha.values()[j];
    sys.quadratic = DenseTensor({3, 3, 3});
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t k = 0; k < 3; ++k) sys.quadratic(2, j, k) = q(j, k);
    }
    const DenseTensor b = sys.linear;
    const DenseTensor a3 = sys.quadratic;
    sys.rhs = [b, a3](const DenseTensor& x) {
        DenseTensor r = mat_vec(b, x);
        for (std::size_t i = 0; i < 3; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                for (std::size_t k = 0; k < 3; ++k) s += a3(i, j, k) * x.values()[j] * x.values()[k];
            }
            r.values()[i] += s;
        }
        return r;
    };
    return sys;
}

// ---------------------------------------------------------------------------
// exact solutions
// ---------------------------------------------------------------------------

/// X(t) = exp(t A) * C, the general solution of dX/dt = A * X with X(0) = C.
inline DenseTensor solve_exact(const LinearOperator& a, const DenseTensor& c, double t) {
    return op_exp(a, t).apply(c);
}

/// Multi-time linear system dx/dt = A * x with x in R^n, t in R^m and
/// generator A of shape m x n x n: each slice A_i drives d x / d t_i = A_i x.
/// The closed form exp(sum_i t_i A_i) c requires the slices to commute;
/// non-commuting slices are refused with the offending pair named.
inline DenseTensor solve_multitime(const DenseTensor& a, const DenseTensor& c, const DenseTensor& t,
                                   double commute_tol = 1e-10) {
    if (a.order() != 3 || a.dim(1) != a.dim(2)) {
        throw std::invalid_argument("solve_multitime: generator of shape m x n x n required");
    }
    const std::size_t m = a.dim(0), n = a.dim(1);
    if (c.order() != 1 || c.dim(0) != n) throw std::invalid_argument("solve_multitime: bad initial state");
    if (t.order() != 1 || t.dim(0) != m) throw std::invalid_argument("solve_multitime: bad time vector");

    std::vector<DenseTensor> slices;
    for (std::size_t i = 0; i < m; ++i) {
        DenseTensor s({n, n});
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t col = 0; col < n; ++col) s(r, col) = a(i, r, col);
        }
        slices.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const DenseTensor comm = mat_mul(slices[i], slices[j]) - mat_mul(slices[j], slices[i]);
            const double bound = commute_tol * frobenius_norm(slices[i]) * frobenius_norm(slices[j]);
            if (frobenius_norm(comm) > bound) {
                throw std::invalid_argument(
                    "solve_multitime: slices " + std::to_string(i) + " and " + std::to_string(j) +
                    " do not commute (||[A_i,A_j]||_F = " + std::to_string(frobenius_norm(comm)) + ")");
            }
        }
    }
    DenseTensor s({n, n});
    for (std::size_t i = 0; i < m; ++i) s = s + t.values()[i] * slices[i];
    return mat_vec(matrix_exp(s), c);
}

// ---------------------------------------------------------------------------
// multi-time systems with tensor states
// ---------------------------------------------------------------------------

/// dX/dT = A * X with tensor time T: the generator has shape
/// (T-shape) x (X-shape) x (X-shape).
struct MultiTimeSystem {
    DenseTensor generator;
    Shape t_shape;
    Shape x_shape;

    MultiTimeSystem(DenseTensor g, Shape ts, Shape xs)
        : generator(std::move(g)), t_shape(std::move(ts)), x_shape(std::move(xs)) {
        if (generator.order() != t_shape.size() + 2 * x_shape.size()) {
            throw std::invalid_argument("MultiTimeSystem: generator order mismatch");
        }
        for (std::size_t k = 0; k < t_shape.size(); ++k) {
            if (generator.dim(k) != t_shape[k]) {
                throw std::invalid_argument("MultiTimeSystem: T-shape mismatch");
            }
        }
        for (std::size_t k = 0; k < x_shape.size(); ++k) {
            if (generator.dim(t_shape.size() + k) != x_shape[k] ||
                generator.dim(t_shape.size() + x_shape.size() + k) != x_shape[k]) {
                throw std::invalid_argument("MultiTimeSystem: X-shape mismatch");
            }
        }
    }
};

/// Generator of the dynamics along the ray T(s) = s D: the chain rule gives
/// dX/ds = (D * A) * X, so contracting the direction against the leading
/// T-modes yields a linear operator on X-shaped states.
inline LinearOperator directional_generator(const MultiTimeSystem& sys, const DenseTensor& d) {
    if (d.shape() != sys.t_shape) {
        throw std::invalid_argument("directional_generator: direction must have the T shape");
    }
    ModePairing pr;
    for (std::size_t k = 0; k < sys.t_shape.size(); ++k) {
        pr.left_modes.push_back(k);
        pr.right_modes.push_back(k);
    }
    return LinearOperator(contract(d, sys.generator, pr));
}

// ---------------------------------------------------------------------------
// fixed-step integrators
// ---------------------------------------------------------------------------

enum class Method { Euler, Rk4, Exact };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Euler: return "euler";
        case Method::Rk4: return "rk4";
        case Method::Exact: return "exact";
    }
    return "?";
}

struct Trajectory {
    std::vector<double> times;
    std::vector<DenseTensor> states;
    Method method = Method::Euler;
    double step = 0.0;
    double flops_per_step = 0.0;
};

/// Integrates dX/ds = L * X from X0 with a fixed step. The operator is
/// matricized once; Euler and classical RK4 advance with matrix-vector
/// products, Exact advances with the precomputed step propagator exp(h M).
/// flops_per_step counts multiply-adds of operator applications
/// (2 N^2 per application). Throws when the state leaves the finite range,
/// naming the step.
inline Trajectory integrate(const LinearOperator& l, const DenseTensor& x0, double h,
                            std::size_t steps, Method method) {
    if (h <= 0.0) throw std::invalid_argument("integrate: step must be positive");
    if (x0.shape() != l.half_shape()) {
        throw std::invalid_argument("integrate: state shape does not match the operator");
    }
    const DenseTensor m = balanced_matricization(l.tensor());
    const std::size_t n = m.dim(0);
    const double* mp = m.values().data();

    auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = mp + i * n;
            for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    };

    Trajectory traj;
    traj.method = method;
    traj.step = h;
    traj.flops_per_step = 2.0 * static_cast<double>(n) * static_cast<double>(n) *
                          (method == Method::Rk4 ? 4.0 : 1.0);
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);

    std::vector<double> x = vectorize_state(x0).values();
    traj.times.push_back(0.0);
    traj.states.push_back(x0);

    DenseTensor prop;
    if (method == Method::Exact) prop = matrix_exp(h * m);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    for (std::size_t step = 1; step <= steps; ++step) {
        switch (method) {
            case Method::Euler:
                matvec(x, k1);
                for (std::size_t i = 0; i < n; ++i) x[i] += h * k1[i];
                break;
            case Method::Rk4:
                matvec(x, k1);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
                matvec(tmp, k2);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
                matvec(tmp, k3);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
                matvec(tmp, k4);
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                break;
            case Method::Exact: {
                const double* pp = prop.values().data();
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    const double* row = pp + i * n;
                    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
                    tmp[i] = s;
                }
                x.swap(tmp);
                break;
            }
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("integrate: non-finite state at step " + std::to_string(step));
            }
        }
        traj.times.push_back(h * static_cast<double>(step));
        traj.states.push_back(state_from_vector(DenseTensor({n}, x), x0.shape()));
    }
    return traj;
}

// ---------------------------------------------------------------------------
// model reduction pipeline
// ---------------------------------------------------------------------------

struct ReduceSolveConfig {
    std::vector<std::size_t> ranks; // one per trailing state mode
    double step = 1e-3;
    std::size_t steps = 1000;
    Method method = Method::Euler;
};

struct ReduceSolveResult {
    Trajectory full;
    Trajectory reduced;
    std::vector<DenseTensor> lifted; // reduced states lifted to full space
    TuckerFactors factors;
    double error_fro = 0.0;   // max over the grid of ||X_full - X_lift||_F
    double error_final = 0.0; // same at the final time
    double error_rel = 0.0;   // error_fro / max ||X_full||_F
    ReductionCost cost;
    double wall_ms_full = 0.0;
    double wall_ms_reduced = 0.0;
};

/// Model reduction for dX/dT = A * X with matrix states, integrated along the
/// ray T(s) = s D. Factors come from the partial Tucker decomposition of A on
/// its two trailing (input-state) modes; the reduced generator is the
/// Galerkin projection of the directional operator, with BOTH the output and
/// input state modes contracted against the same factors, which closes the
/// reduced dynamics and is exact on matching planted structure. The reported
/// cost keeps the single-sided core accounting (rows x reduced columns).
inline ReduceSolveResult reduce_and_solve(const DenseTensor& a, const DenseTensor& x0,
                                          const DenseTensor& direction,
                                          const ReduceSolveConfig& cfg) {
    if (a.order() < 5) {
        throw std::invalid_argument("reduce_and_solve: generator must have T-modes plus two state mode pairs");
    }
    const std::size_t t_order = a.order() - 4;
    const std::size_t p = a.dim(t_order), q = a.dim(t_order + 1);
    if (a.dim(t_order + 2) != p || a.dim(t_order + 3) != q) {
        throw std::invalid_argument("reduce_and_solve: trailing state mode pairs disagree");
    }
    if (x0.order() != 2 || x0.dim(0) != p || x0.dim(1) != q) {
        throw std::invalid_argument("reduce_and_solve: initial state must be " + std::to_string(p) +
                                    "x" + std::to_string(q));
    }
    if (cfg.ranks.size() != 2) throw std::invalid_argument("reduce_and_solve: two ranks required");

    Shape t_shape(a.shape().begin(), a.shape().begin() + t_order);
    MultiTimeSystem sys(a, t_shape, {p, q});
    const LinearOperator l_full = directional_generator(sys, direction);

    const std::vector<std::size_t> mode_set = {a.order() - 2, a.order() - 1};
    ReduceSolveResult res;
    res.factors = partial_tucker(a, mode_set, cfg.ranks);
    const DenseTensor& u5 = res.factors.factors[0];
    const DenseTensor& u6 = res.factors.factors[1];

    // Galerkin projection of the directional operator on all four state modes.
    DenseTensor lt = contract_mode(l_full.tensor(), u5, 0, Side::Right);
    lt = contract_mode(lt, u6, 1, Side::Right);
    lt = contract_mode(lt, u5, 2, Side::Right);
    lt = contract_mode(lt, u6, 3, Side::Right);
    const LinearOperator l_reduced(lt);

    const DenseTensor x0_reduced = mat_mul(transpose(u5), mat_mul(x0, u6));

    const auto t0 = std::chrono::steady_clock::now();
    res.full = integrate(l_full, x0, cfg.step, cfg.steps, cfg.method);
    const auto t1 = std::chrono::steady_clock::now();
    res.reduced = integrate(l_reduced, x0_reduced, cfg.step, cfg.steps, cfg.method);
    const auto t2 = std::chrono::steady_clock::now();
    res.wall_ms_full = std::chrono::duration<double, std::milli>(t1 - t0).count();
    res.wall_ms_reduced = std::chrono::duration<double, std::milli>(t2 - t1).count();

    const DenseTensor u6t = transpose(u6);
    double max_norm = 0.0;
    res.lifted.reserve(res.reduced.states.size());
    for (std::size_t k = 0; k < res.reduced.states.size(); ++k) {
        DenseTensor lift = mat_mul(u5, mat_mul(res.reduced.states[k], u6t));
        const double err = frobenius_norm(res.full.states[k] - lift);
        res.error_fro = std::max(res.error_fro, err);
        max_norm = std::max(max_norm, frobenius_norm(res.full.states[k]));
        if (k + 1 == res.reduced.states.size()) res.error_final = err;
        res.lifted.push_back(std::move(lift));
    }
    res.error_rel = (max_norm > 0.0) ? res.error_fro / max_norm : res.error_fro;
    res.cost = reduction_cost(a.shape(), mode_set, cfg.ranks);
    return res;
}

} // namespace tensorcalc
