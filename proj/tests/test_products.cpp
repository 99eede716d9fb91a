#include "tensorcalc/products.hpp"
#include "tensorcalc/random.hpp"

#include "oracles.hpp"

#include <catch2/catch.hpp>

using namespace tensorcalc;
using oracles::naive_contract;

TEST_CASE("outer product", "[products]") {
    const DenseTensor a({2}, {1, 2});
    const DenseTensor b({2}, {3, 4});
    const DenseTensor ab = outer(a, b);
    CHECK(ab.shape() == Shape{2, 2});
    CHECK(ab(0, 0) == 3.0);
    CHECK(ab(0, 1) == 4.0);
    CHECK(ab(1, 0) == 6.0);
    CHECK(ab(1, 1) == 8.0);

    CHECK(frobenius_norm(outer(a, DenseTensor({3}))) == 0.0);

    Xoshiro256 rng(17);
    const DenseTensor x = random_tensor(rng, {2, 3});
    const DenseTensor y = random_tensor(rng, {2});
    CHECK(frobenius_norm(outer(x, y)) ==
          Approx(frobenius_norm(x) * frobenius_norm(y)).epsilon(1e-13));
    CHECK(max_abs_diff(outer(x, y), oracles::naive_outer(x, y)) == 0.0);
}

TEST_CASE("outer_partition special cases", "[products]") {
    Xoshiro256 rng(23);
    const DenseTensor a = random_tensor(rng, {2, 2});
    const DenseTensor b = random_tensor(rng, {2, 2});

    const DenseTensor c = outer_partition({a, b}, ModePartition{{0, 2}, {1, 3}});
    const DenseTensor ac = outer_partition({a, b}, ModePartition{{0, 3}, {1, 2}});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    CHECK(c(i, j, k, l) == a(i, k) * b(j, l));
                    CHECK(ac(i, j, k, l) == a(i, l) * b(j, k));
                }
    CHECK(max_abs_diff(c, cross_c(a, b)) == 0.0);
    CHECK(max_abs_diff(ac, cross_ac(a, b)) == 0.0);

    // [I2, I2] under the interleaving partition acts as the identity
    const DenseTensor idop = outer_partition({identity_matrix(2), identity_matrix(2)},
                                             ModePartition{{0, 2}, {1, 3}});
    const DenseTensor x = random_tensor(rng, {2, 2});
    CHECK(max_abs_diff(naive_contract(idop, x, {2, 3}, {0, 1}), x) < 1e-15);
}

TEST_CASE("outer_partition general example", "[products]") {
    Xoshiro256 rng(29);
    const DenseTensor a = random_tensor(rng, {2, 2});
    const DenseTensor b = random_tensor(rng, {2, 2});
    const DenseTensor c = random_tensor(rng, {2, 2, 2, 2});
    const DenseTensor k =
        outer_partition({a, b, c}, ModePartition{{0, 4}, {1, 5}, {2, 3, 6, 7}});
    REQUIRE(k.order() == 8);
    std::vector<std::size_t> idx(8, 0);
    do {
        const double expect = a(idx[0], idx[4]) * b(idx[1], idx[5]) *
                              c(idx[2], idx[3], idx[6], idx[7]);
        REQUIRE(k.at(idx) == expect);
    } while (tensorcalc::detail::next_index(idx, k.shape()));

    CHECK_THROWS_AS(outer_partition({a, b}, ModePartition{{0, 1, 2}, {3}}), std::invalid_argument);
    CHECK_THROWS_AS(outer_partition({a, b}, ModePartition{{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("contract", "[products]") {
    SECTION("matrix product via pairing") {
        const DenseTensor a({2, 2}, {1, 2, 3, 4});
        const DenseTensor r = contract(a, identity_matrix(2), ModePairing{{1}, {0}});
        CHECK(max_abs_diff(r, a) == 0.0);
    }
    SECTION("full pairing is the inner product") {
        Xoshiro256 rng(31);
        const DenseTensor a = random_tensor(rng, {2, 3, 2});
        const DenseTensor s = contract(a, a, ModePairing{{0, 1, 2}, {0, 1, 2}});
        REQUIRE(s.size() == 1);
        CHECK(s.values()[0] == Approx(frobenius_norm(a) * frobenius_norm(a)).epsilon(1e-13));
        CHECK(inner(a, a) == Approx(s.values()[0]).margin(1e-15));
    }
    SECTION("random case against the naive oracle") {
        Xoshiro256 rng(37);
        const DenseTensor a = random_tensor(rng, {2, 3, 4});
        const DenseTensor b = random_tensor(rng, {3, 4, 5});
        const DenseTensor r = contract(a, b, ModePairing{{1, 2}, {0, 1}});
        CHECK(r.shape() == Shape{2, 5});
        CHECK(max_abs_diff(r, naive_contract(a, b, {1, 2}, {0, 1})) < 1e-14);
    }
    SECTION("dimension mismatch") {
        const DenseTensor a({2, 3});
        const DenseTensor b({2, 3});
        CHECK_THROWS_AS(contract(a, b, ModePairing{{1}, {0}}), std::invalid_argument);
    }
}

TEST_CASE("contract_last", "[products]") {
    Xoshiro256 rng(41);
    SECTION("2C product of a 4-order tensor with a matrix") {
        const DenseTensor a = random_tensor(rng, {3, 4, 3, 4});
        const DenseTensor x = random_tensor(rng, {3, 4});
        const DenseTensor r = contract_last(a, x, 2);
        CHECK(r.shape() == Shape{3, 4});
        CHECK(max_abs_diff(r, naive_contract(a, x, {2, 3}, {0, 1})) < 1e-14);
    }
    SECTION("pairwise identity is a left identity") {
        const DenseTensor x = random_tensor(rng, {2, 2});
        CHECK(max_abs_diff(contract_last(identity_operator({2, 2}), x, 2), x) < 1e-15);
    }
    SECTION("random 4-order against 2-order") {
        const DenseTensor a = random_tensor(rng, {2, 3, 2, 2});
        const DenseTensor b = random_tensor(rng, {2, 2});
        CHECK(max_abs_diff(contract_last(a, b, 2), naive_contract(a, b, {2, 3}, {0, 1})) < 1e-14);
    }
}

TEST_CASE("contract_mode", "[products]") {
    Xoshiro256 rng(43);
    const DenseTensor a = random_tensor(rng, {3, 4, 2});

    SECTION("identity factor is neutral") {
        for (std::size_t mode = 0; mode < 3; ++mode) {
            CHECK(max_abs_diff(contract_mode(a, identity_matrix(a.dim(mode)), mode, Side::Right), a) <
                  1e-15);
        }
    }
    SECTION("right product against the loop oracle") {
        const DenseTensor b = random_tensor(rng, {4, 5});
        const DenseTensor r = contract_mode(a, b, 1, Side::Right);
        CHECK(r.shape() == Shape{3, 5, 2});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t x = 0; x < 5; ++x)
                for (std::size_t k = 0; k < 2; ++k) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < 4; ++j) s += a(i, j, k) * b(j, x);
                    REQUIRE(r(i, x, k) == Approx(s).margin(1e-14));
                }
    }
    SECTION("left product against the loop oracle") {
        const DenseTensor b = random_tensor(rng, {5, 4});
        const DenseTensor r = contract_mode(a, b, 1, Side::Left);
        CHECK(r.shape() == Shape{3, 5, 2});
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t x = 0; x < 5; ++x)
                for (std::size_t k = 0; k < 2; ++k) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < 4; ++j) s += b(x, j) * a(i, j, k);
                    REQUIRE(r(i, x, k) == Approx(s).margin(1e-14));
                }
    }
    SECTION("right by B equals left by B transposed for square B") {
        const DenseTensor b = random_tensor(rng, {4, 4});
        const DenseTensor bt = permute(b, {1, 0});
        CHECK(max_abs_diff(contract_mode(a, b, 1, Side::Right),
                           contract_mode(a, bt, 1, Side::Left)) < 1e-15);
    }
    SECTION("chained right products compose through the matrix product") {
        // A *_k B *_k C = A *_k (BC)
        const DenseTensor b = random_tensor(rng, {4, 3});
        const DenseTensor c = random_tensor(rng, {3, 5});
        const DenseTensor lhs = contract_mode(contract_mode(a, b, 1, Side::Right), c, 1, Side::Right);
        DenseTensor bc({4, 5});
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 3; ++k) s += b(i, k) * c(k, j);
                bc(i, j) = s;
            }
        CHECK(max_abs_diff(lhs, contract_mode(a, bc, 1, Side::Right)) < 1e-13);
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(contract_mode(a, identity_matrix(5), 1, Side::Right), std::invalid_argument);
    }
}

TEST_CASE("identity_operator", "[products]") {
    CHECK(max_abs_diff(identity_operator({3}), identity_matrix(3)) == 0.0);

    Xoshiro256 rng(47);
    const DenseTensor x = random_tensor(rng, {3, 4});
    CHECK(max_abs_diff(contract_last(identity_operator({3, 4}), x, 2), x) < 1e-15);

    const DenseTensor a = random_tensor(rng, {2, 2, 2});
    const DenseTensor id = identity_operator({2, 2, 2});
    CHECK(max_abs_diff(naive_contract(id, a, {3, 4, 5}, {0, 1, 2}), a) < 1e-15);
    CHECK(max_abs_diff(naive_contract(a, id, {0, 1, 2}, {0, 1, 2}), a) < 1e-15);
}

TEST_CASE("unit_tensor and diagonal_part", "[products]") {
    CHECK(max_abs_diff(unit_tensor(2, 3), identity_matrix(3)) == 0.0);

    const DenseTensor j32 = unit_tensor(3, 2);
    CHECK(j32(0, 0, 0) == 1.0);
    CHECK(j32(1, 1, 1) == 1.0);
    CHECK(frobenius_norm(j32) == Approx(std::sqrt(2.0)));

    Xoshiro256 rng(53);
    const DenseTensor a = random_tensor(rng, {3, 3});
    // J * A = D(A): the order-2d unit tensor extracts diagonals, d = 2 here
    const DenseTensor j43 = unit_tensor(4, 3);
    CHECK(max_abs_diff(naive_contract(j43, a, {2, 3}, {0, 1}), diagonal_part(a)) < 1e-15);
    CHECK(max_abs_diff(naive_contract(a, j43, {0, 1}, {0, 1}), diagonal_part(a)) < 1e-15);

    const DenseTensor a3 = random_tensor(rng, {3, 3, 3});
    const DenseTensor j63 = unit_tensor(6, 3);
    CHECK(max_abs_diff(naive_contract(j63, a3, {3, 4, 5}, {0, 1, 2}), diagonal_part(a3)) < 1e-15);
    CHECK(max_abs_diff(naive_contract(a3, j63, {0, 1, 2}, {0, 1, 2}), diagonal_part(a3)) < 1e-15);

    const DenseTensor diag = diagonal_part(a3);
    CHECK(max_abs_diff(diagonal_part(diag), diag) == 0.0);

    DenseTensor allone({2, 2, 2});
    for (double& v : allone.values()) v = 1.0;
    CHECK(max_abs_diff(diagonal_part(allone), unit_tensor(3, 2)) == 0.0);

    CHECK_THROWS_AS(diagonal_part(DenseTensor({2, 3})), std::invalid_argument);
}

TEST_CASE("commutation tensor transposes", "[products]") {
    const DenseTensor a({2, 2}, {1, 2, 3, 4});
    const DenseTensor k22 = commutation_tensor(2, 2);
    const DenseTensor at = contract_last(k22, a, 2);
    CHECK(at(0, 0) == 1.0);
    CHECK(at(0, 1) == 3.0);
    CHECK(at(1, 0) == 2.0);
    CHECK(at(1, 1) == 4.0);

    Xoshiro256 rng(59);
    const DenseTensor s = random_symmetric_matrix(rng, 3);
    CHECK(max_abs_diff(contract_last(commutation_tensor(3, 3), s, 2), s) == 0.0);

    // For rectangular matrices the transpose action contracts the matrix
    // against the LEADING modes of K (the C * A form); the trailing form
    // only typechecks when m = n.
    const DenseTensor b = random_tensor(rng, {3, 4});
    const DenseTensor bt = contract(b, commutation_tensor(3, 4), ModePairing{{0, 1}, {0, 1}});
    CHECK(max_abs_diff(bt, permute(b, {1, 0})) == 0.0);
}
