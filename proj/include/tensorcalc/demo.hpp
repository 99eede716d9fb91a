#pragma once

#include "tensorcalc/algebra.hpp"
#include "tensorcalc/ode.hpp"
#include "tensorcalc/random.hpp"
#include "tensorcalc/tensor.hpp"

#include <cstdint>

namespace tensorcalc {

/// A seeded 6-order, 6-dimensional reduction benchmark: sparse Gaussian core
/// lifted by shared orthonormal factors on all four state modes (so the
/// reduction closes exactly at ranks (3,3)), initial state inside the planted
/// subspace, all-ones direction, and the generator normalized so the
/// directional operator has Frobenius norm 1.5.
struct ReductionDemo {
    DenseTensor generator;
    DenseTensor x0;
    DenseTensor direction;
};

inline ReductionDemo make_reduction_demo(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    DenseTensor core({6, 6, 3, 3, 3, 3});
    for (double& v : core.values()) {
        const double g = rng.gaussian();
        v = (rng.uniform() < 0.1) ? g : 0.0;
    }
    const DenseTensor u5 = random_orthonormal(rng, 6, 3);
    const DenseTensor u6 = random_orthonormal(rng, 6, 3);
    DenseTensor a = contract_mode(core, u5, 2, Side::Left);
    a = contract_mode(a, u6, 3, Side::Left);
    a = contract_mode(a, u5, 4, Side::Left);
    a = contract_mode(a, u6, 5, Side::Left);

    ReductionDemo demo;
    demo.direction = DenseTensor({6, 6});
    for (double& v : demo.direction.values()) v = 1.0;

    const MultiTimeSystem sys(a, {6, 6}, {6, 6});
    const double norm =
        frobenius_norm(balanced_matricization(directional_generator(sys, demo.direction).tensor()));
    demo.generator = (1.5 / norm) * a;

    const DenseTensor seed_state = random_gaussian_tensor(rng, {3, 3});
    demo.x0 = mat_mul(u5, mat_mul(seed_state, transpose(u6)));
    return demo;
}

/// A dense (non-planted) 6-order system with a random initial state, for
/// rank-sweep studies where the reduction is only approximate.
inline ReductionDemo make_dense_demo(std::uint64_t seed) {
    Xoshiro256 rng(seed);
    ReductionDemo demo;
    DenseTensor a = random_gaussian_tensor(rng, Shape(6, 6));
    demo.direction = DenseTensor({6, 6});
    for (double& v : demo.direction.values()) v = 1.0;
    const MultiTimeSystem sys(a, {6, 6}, {6, 6});
    const double norm =
        frobenius_norm(balanced_matricization(directional_generator(sys, demo.direction).tensor()));
    demo.generator = (1.5 / norm) * a;
    demo.x0 = random_gaussian_tensor(rng, {6, 6});
    return demo;
}

inline double reduction_error_at_ranks(const ReductionDemo& demo, std::size_t rank, double step,
                                       std::size_t steps, Method method) {
    ReduceSolveConfig cfg;
    cfg.ranks = {rank, rank};
    cfg.step = step;
    cfg.steps = steps;
    cfg.method = method;
    return reduce_and_solve(demo.generator, demo.x0, demo.direction, cfg).error_fro;
}

} // namespace tensorcalc
