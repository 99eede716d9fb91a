#include "tensorcalc/random.hpp"
#include "tensorcalc/tucker.hpp"

#include <catch2/catch.hpp>

using namespace tensorcalc;

namespace {

double orthonormality_defect(const DenseTensor& u) {
    return max_abs_diff(mat_mul(transpose(u), u), identity_matrix(u.dim(1)));
}

} // namespace

TEST_CASE("svd basics", "[tucker]") {
    SECTION("diagonal matrix") {
        const SvdResult s = svd(DenseTensor({2, 2}, {3, 0, 0, 1}));
        CHECK(s.sigma[0] == Approx(3.0));
        CHECK(s.sigma[1] == Approx(1.0));
    }
    SECTION("rank-1 outer product") {
        Xoshiro256 rng(227);
        const DenseTensor u = random_tensor(rng, {5});
        const DenseTensor v = random_tensor(rng, {3});
        DenseTensor m({5, 3});
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = u.values()[i] * v.values()[j];
        const SvdResult s = svd(m);
        CHECK(s.sigma[0] == Approx(frobenius_norm(u) * frobenius_norm(v)).epsilon(1e-12));
        CHECK(s.sigma[1] < 1e-12 * s.sigma[0] + 1e-300);
        CHECK(orthonormality_defect(s.u) < 1e-12);
    }
    SECTION("random rectangular reconstruction, both orientations") {
        Xoshiro256 rng(229);
        for (const Shape& shape : {Shape{6, 8}, Shape{8, 6}}) {
            const DenseTensor m = random_tensor(rng, shape);
            const SvdResult s = svd(m);
            CHECK(orthonormality_defect(s.u) < 1e-12);
            CHECK(orthonormality_defect(s.v) < 1e-12);
            DenseTensor rec({shape[0], shape[1]});
            const std::size_t r = s.sigma.size();
            for (std::size_t i = 0; i < shape[0]; ++i)
                for (std::size_t j = 0; j < shape[1]; ++j) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < r; ++k) acc += s.u(i, k) * s.sigma[k] * s.v(j, k);
                    rec(i, j) = acc;
                }
            CHECK(max_abs_diff(rec, m) < 1e-10 * frobenius_norm(m));
            for (std::size_t k = 1; k < r; ++k) CHECK(s.sigma[k - 1] >= s.sigma[k]);
        }
    }
    SECTION("zero matrix keeps orthonormal factors") {
        const SvdResult s = svd(DenseTensor({3, 2}));
        CHECK(s.sigma[0] == 0.0);
        CHECK(orthonormality_defect(s.u) < 1e-12);
    }
}

TEST_CASE("partial_tucker recovers planted structure", "[tucker]") {
    Xoshiro256 rng(233);

    SECTION("rank-1 plant on the first mode") {
        const DenseTensor u = random_tensor(rng, {4});
        const DenseTensor rest = random_tensor(rng, {3, 2});
        DenseTensor a({4, 3, 2});
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 2; ++k) a(i, j, k) = u.values()[i] * rest(j, k);
        const TuckerFactors f = partial_tucker(a, {0}, {1});
        CHECK(max_abs_diff(tucker_reconstruct(f), a) < 1e-12 * frobenius_norm(a));
    }
    SECTION("full-mode full-rank decomposition is exact (HOSVD)") {
        const DenseTensor a = random_tensor(rng, {3, 4, 2});
        const TuckerFactors f = partial_tucker(a, {0, 1, 2}, {3, 4, 2});
        for (const auto& u : f.factors) CHECK(orthonormality_defect(u) < 1e-10);
        CHECK(max_abs_diff(tucker_reconstruct(f), a) < 1e-12);
    }
    SECTION("6-order plant with trailing-mode ranks (3,3)") {
        DenseTensor g({6, 6, 6, 6, 3, 3});
        for (double& v : g.values()) {
            const double x = rng.gaussian();
            v = (rng.uniform() < 0.1) ? x : 0.0;
        }
        const DenseTensor u5 = random_orthonormal(rng, 6, 3);
        const DenseTensor u6 = random_orthonormal(rng, 6, 3);
        DenseTensor a = contract_mode(g, u5, 4, Side::Left);
        a = contract_mode(a, u6, 5, Side::Left);
        REQUIRE(a.shape() == Shape{6, 6, 6, 6, 6, 6});

        const std::vector<std::size_t> ranks = tucker_rank(a);
        CHECK(ranks[4] == 3);
        CHECK(ranks[5] == 3);

        const TuckerFactors f = partial_tucker(a, {4, 5}, {3, 3});
        CHECK(max_abs_diff(tucker_reconstruct(f), a) < 1e-10 * frobenius_norm(a));
        CHECK(orthonormality_defect(f.factors[0]) < 1e-10);
        CHECK(orthonormality_defect(f.factors[1]) < 1e-10);
    }
    SECTION("rank exceeding the dimension is rejected") {
        const DenseTensor a = random_tensor(rng, {2, 3});
        CHECK_THROWS_AS(partial_tucker(a, {0}, {3}), std::invalid_argument);
    }
}

TEST_CASE("tucker_reconstruct edge cases", "[tucker]") {
    Xoshiro256 rng(239);
    const DenseTensor a = random_tensor(rng, {3, 2, 4});

    SECTION("empty mode set reproduces the core") {
        const TuckerFactors f = partial_tucker(a, {}, {});
        CHECK(max_abs_diff(f.core, a) == 0.0);
        CHECK(max_abs_diff(tucker_reconstruct(f), a) == 0.0);
    }
    SECTION("single-mode truncation error equals the discarded tail energy") {
        const SvdResult s = svd(unfold(a, 2));
        const TuckerFactors f = partial_tucker(a, {2}, {2});
        const double err = frobenius_norm(tucker_reconstruct(f) - a);
        double tail = 0.0;
        for (std::size_t k = 2; k < s.sigma.size(); ++k) tail += s.sigma[k] * s.sigma[k];
        tail = std::sqrt(tail);
        CHECK(err == Approx(tail).epsilon(1e-10));
    }
    SECTION("multi-mode truncation error stays within the stacked tails") {
        const DenseTensor b = random_tensor(rng, {4, 4, 4});
        const TuckerFactors f = partial_tucker(b, {0, 1, 2}, {2, 2, 2});
        const double err = frobenius_norm(tucker_reconstruct(f) - b);
        double bound = 0.0;
        for (std::size_t mode = 0; mode < 3; ++mode) {
            const SvdResult s = svd(unfold(b, mode));
            for (std::size_t k = 2; k < s.sigma.size(); ++k) bound += s.sigma[k] * s.sigma[k];
        }
        CHECK(err <= 2.0 * std::sqrt(bound));
    }
    SECTION("projection idempotence") {
        const TuckerFactors f = partial_tucker(a, {0, 2}, {2, 3});
        const DenseTensor projected = tucker_reconstruct(f);
        const TuckerFactors f2 = partial_tucker(projected, {0, 2}, {2, 3});
        CHECK(max_abs_diff(tucker_reconstruct(f2), projected) < 1e-10 * frobenius_norm(projected));
    }
}

TEST_CASE("tucker_rank", "[tucker]") {
    CHECK(tucker_rank(unit_tensor(3, 2)) == std::vector<std::size_t>{2, 2, 2});

    Xoshiro256 rng(241);
    const DenseTensor x = random_tensor(rng, {3});
    const DenseTensor y = random_tensor(rng, {4});
    const DenseTensor z = random_tensor(rng, {2});
    const DenseTensor r1 = outer(outer(x, y), z);
    CHECK(tucker_rank(r1) == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("factored contraction through the core", "[tucker]") {
    // With A = G lifted by per-mode factors, contracting A against B equals
    // projecting B, contracting the core, and lifting the result.
    Xoshiro256 rng(251);
    const DenseTensor g = random_tensor(rng, {2, 3, 2, 2});
    const DenseTensor u0 = random_orthonormal(rng, 4, 2);
    const DenseTensor u1 = random_orthonormal(rng, 4, 3);
    const DenseTensor v0 = random_orthonormal(rng, 3, 2);
    const DenseTensor v1 = random_orthonormal(rng, 3, 2);

    DenseTensor a = contract_mode(g, u0, 0, Side::Left);
    a = contract_mode(a, u1, 1, Side::Left);
    a = contract_mode(a, v0, 2, Side::Left);
    a = contract_mode(a, v1, 3, Side::Left);

    const DenseTensor b = random_tensor(rng, {3, 3});
    const DenseTensor direct = contract_last(a, b, 2);

    const DenseTensor b_proj = mat_mul(transpose(v0), mat_mul(b, v1));
    DenseTensor via_core = contract_last(g, b_proj, 2);
    via_core = contract_mode(via_core, u0, 0, Side::Left);
    via_core = contract_mode(via_core, u1, 1, Side::Left);
    CHECK(max_abs_diff(direct, via_core) < 1e-10);
}

TEST_CASE("reduction_cost accounting", "[tucker]") {
    const ReductionCost c = reduction_cost(Shape(6, 6), {4, 5}, {3, 3});
    CHECK(c.full_elements == 46656);
    CHECK(c.core_elements == 11664);
    CHECK(c.flops_full == Approx(2.0 * 1296.0 * 36.0));
    CHECK(c.flops_reduced == Approx(2.0 * 1296.0 * 9.0));
    CHECK(c.ratio == Approx(4.0));

    const ReductionCost full = reduction_cost({4, 4, 4}, {1, 2}, {4, 4});
    CHECK(full.ratio == Approx(1.0));
}
