#include "tensorcalc/random.hpp"
#include "tensorcalc/stability.hpp"

#include <catch2/catch.hpp>

using namespace tensorcalc;

TEST_CASE("lyapunov_tensors closed forms", "[stability]") {
    SECTION("zero matrix") {
        const LyapunovPair p = lyapunov_tensors(DenseTensor({3, 3}));
        CHECK(max_abs(p.a_c) == 0.0);
        CHECK(max_abs(p.a_ac) == 0.0);
    }
    SECTION("identity doubles") {
        Xoshiro256 rng(181);
        const LyapunovPair p = lyapunov_tensors(identity_matrix(3));
        const DenseTensor x = random_tensor(rng, {3, 3});
        CHECK(max_abs_diff(contract_last(p.a_c, x, 2), 2.0 * x) < 1e-15);
    }
    SECTION("random agreement with direct matrix arithmetic") {
        Xoshiro256 rng(191);
        for (int trial = 0; trial < 20; ++trial) {
            const DenseTensor a = random_tensor(rng, {3, 3});
            const DenseTensor x = random_tensor(rng, {3, 3});
            const LyapunovPair p = lyapunov_tensors(a);
            const DenseTensor xt = transpose(x);
            CHECK(max_abs_diff(contract_last(p.a_c, x, 2),
                               mat_mul(a, x) + mat_mul(x, transpose(a))) < 1e-13);
            CHECK(max_abs_diff(contract_last(p.a_ac, x, 2),
                               mat_mul(a, x) + mat_mul(xt, a)) < 1e-13);
        }
    }
    SECTION("the naive anti-cross pair transposes the type-I action") {
        Xoshiro256 rng(307);
        const DenseTensor a = random_tensor(rng, {3, 3});
        const DenseTensor x = random_tensor(rng, {3, 3});
        const DenseTensor id = identity_matrix(3);
        const DenseTensor naive = cross_ac(id, a) + cross_ac(a, id);
        const DenseTensor expect = transpose(mat_mul(a, x) + mat_mul(x, transpose(a)));
        CHECK(max_abs_diff(contract_last(naive, x, 2), expect) < 1e-13);
    }
    SECTION("scaling covariance") {
        Xoshiro256 rng(193);
        const DenseTensor a = random_tensor(rng, {2, 2});
        const LyapunovPair p1 = lyapunov_tensors(a);
        const LyapunovPair p2 = lyapunov_tensors(3.5 * a);
        CHECK(max_abs_diff(3.5 * p1.a_c, p2.a_c) < 1e-14);
        CHECK(max_abs_diff(3.5 * p1.a_ac, p2.a_ac) < 1e-14);
    }
    SECTION("left contraction of the type-I tensor gives the V-dot matrix") {
        Xoshiro256 rng(197);
        const DenseTensor a = random_tensor(rng, {3, 3});
        const DenseTensor p = random_symmetric_matrix(rng, 3);
        const LyapunovPair ly = lyapunov_tensors(a);
        const DenseTensor left = contract(p, ly.a_c, ModePairing{{0, 1}, {0, 1}});
        CHECK(max_abs_diff(left, cqlf_derivative(a, p)) < 1e-13);
    }
}

TEST_CASE("cqlf value and derivative", "[stability]") {
    Xoshiro256 rng(199);
    const DenseTensor a = random_tensor(rng, {3, 3});
    const DenseTensor x = random_tensor(rng, {3});

    CHECK(cqlf_value(identity_matrix(3), x) == Approx(inner(x, x)).margin(1e-14));
    CHECK(cqlf_value(identity_matrix(3), DenseTensor({3})) == 0.0);
    CHECK(max_abs_diff(cqlf_derivative(a, identity_matrix(3)), a + transpose(a)) < 1e-15);
    CHECK_THROWS_AS(cqlf_value(DenseTensor({2, 2}, {1, 2, 3, 4}), DenseTensor({2})),
                    std::invalid_argument);

    SECTION("matches the time derivative of V along the flow") {
        const DenseTensor p = random_symmetric_matrix(rng, 3);
        const double h = 1e-5;
        auto v_at = [&](double t) {
            const DenseTensor xt = mat_vec(matrix_exp(t * a), x);
            return cqlf_value(p, xt);
        };
        const double fd = (v_at(h) - v_at(-h)) / (2.0 * h);
        const DenseTensor q = cqlf_derivative(a, p);
        double direct = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) direct += x.values()[i] * q(i, j) * x.values()[j];
        CHECK(fd == Approx(direct).margin(1e-7));
    }
}

TEST_CASE("stability certificate", "[stability]") {
    SECTION("A = -I with P = I certifies") {
        const CertificateResult r = stability_certificate(-1.0 * identity_matrix(2), identity_matrix(2));
        CHECK(r.stable);
        CHECK(r.p_positive_definite);
        CHECK(r.decrease_definite);
    }
    SECTION("A = I with P = I does not") {
        const CertificateResult r = stability_certificate(identity_matrix(2), identity_matrix(2));
        CHECK_FALSE(r.stable);
        CHECK(r.p_positive_definite);
        CHECK_FALSE(r.decrease_definite);
    }
    SECTION("oscillator with the solved Lyapunov candidate certifies") {
        const DenseTensor a({2, 2}, {0, 1, -1, -1});
        const DenseTensor p = lyapunov_solve(a, identity_matrix(2));
        CHECK(max_abs_diff(cqlf_derivative(a, p), -1.0 * identity_matrix(2)) < 1e-12);
        const CertificateResult r = stability_certificate(a, p);
        CHECK(r.stable);
    }
    SECTION("certified implies V strictly decreasing along the exact flow") {
        Xoshiro256 rng(211);
        // stable system: random strictly diagonally dominant negative matrix
        DenseTensor a = random_tensor(rng, {3, 3}, -0.5, 0.5);
        for (std::size_t i = 0; i < 3; ++i) a(i, i) = -2.0 - rng.uniform();
        const DenseTensor p = lyapunov_solve(a, identity_matrix(3));
        REQUIRE(stability_certificate(a, p).stable);
        const DenseTensor x0 = random_tensor(rng, {3});
        double prev = cqlf_value(p, x0);
        for (int k = 1; k <= 100; ++k) {
            const double t = 0.01 * k;
            const double v = cqlf_value(p, mat_vec(matrix_exp(t * a), x0));
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("lyapunov_solve solves the adjoint equation", "[stability]") {
    Xoshiro256 rng(223);
    DenseTensor a = random_tensor(rng, {4, 4});
    for (std::size_t i = 0; i < 4; ++i) a(i, i) -= 3.0; // keep the spectrum away from the imaginary axis
    const DenseTensor q = random_symmetric_matrix(rng, 4);
    const DenseTensor p = lyapunov_solve(a, q);
    CHECK(is_symmetric_matrix(p, 1e-10));
    CHECK(max_abs_diff(mat_mul(transpose(a), p) + mat_mul(p, a), -1.0 * q) < 1e-10);
}
