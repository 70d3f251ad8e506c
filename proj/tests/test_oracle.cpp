#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diophantus/oracle.hpp"

using namespace diophantus;
using arith::i64;
using arith::u64;
using localsolve::quad_equation;

TEST_CASE("definite_search worked examples") {
    auto g = [](i64 n) { return quad_equation::make(1, 0, 64, 0, 64, 16, n); };
    auto dec = oracle::definite_search(g(65));
    REQUIRE(dec.solvable());
    CHECK(*dec.witness == std::vector<i64>{7, 0});

    CHECK_FALSE(oracle::definite_search(g(1)).solvable());

    dec = oracle::definite_search(quad_equation::make(1, 0, 64, 0, 0, 0, 73));
    REQUIRE(dec.solvable());
    CHECK(*dec.witness == std::vector<i64>{3, 1});

    CHECK_THROWS_AS(oracle::definite_search(quad_equation::make(1, 0, -34, 0, 0, 0, 2)), error);
}

TEST_CASE("definite_search handles negative-definite and shifted forms") {
    auto dec = oracle::definite_search(quad_equation::make(-1, 0, -1, 0, 0, 0, -25));
    REQUIRE(dec.solvable());
    auto w = *dec.witness;
    CHECK(w[0] * w[0] + w[1] * w[1] == 25);

    dec = oracle::definite_search(quad_equation::make(2, 1, 3, -4, 5, -6, 7));
    if (dec.solvable()) {
        auto v = *dec.witness;
        CHECK(2 * v[0] * v[0] + v[0] * v[1] + 3 * v[1] * v[1] - 4 * v[0] + 5 * v[1] - 6 == 7);
    }
}

TEST_CASE("split_form_decide worked examples") {
    auto dec = oracle::split_form_decide(1, 8);
    REQUIRE(dec.solvable());
    CHECK(*dec.witness == std::vector<i64>{3, 1});

    CHECK_FALSE(oracle::split_form_decide(1, 6).solvable());

    dec = oracle::split_form_decide(3, 27);
    REQUIRE(dec.solvable());
    CHECK(*dec.witness == std::vector<i64>{6, 1});

    CHECK_THROWS_AS(oracle::split_form_decide(1, 0), error);
}

TEST_CASE("split form closed form: k=1 solvable iff n != 2 mod 4") {
    for (i64 n = -10'000; n <= 10'000; ++n) {
        if (n == 0) continue;
        CHECK(oracle::split_form_decide(1, n).solvable() == (arith::mod_positive(n, 4) != 2));
    }
}

TEST_CASE("split witnesses verify") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 500; ++i) {
        u64 k = 1 + rng() % 9;
        i64 n = static_cast<i64>(rng() % 20'000) - 10'000;
        if (n == 0) continue;
        auto dec = oracle::split_form_decide(k, n);
        if (dec.solvable()) {
            auto w = *dec.witness;
            CHECK(arith::i128(w[0]) * w[0] - arith::i128(k) * k * w[1] * w[1] == n);
        }
    }
}

TEST_CASE("default basis is a system of algebraic integers") {
    auto basis = oracle::default_basis();
    CHECK_NOTHROW(oracle::validate_basis(basis));
    // Gram determinant det(Tr(ei ej)) = 5 * 136 * 680 = 462400,
    // the discriminant predicted for Q(sqrt5, sqrt34)
    arith::i128 gram[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            auto prod = basis[i] * basis[j];
            // trace = sum of the four conjugates = 4 * w / den
            arith::i128 tr4 = 4 * prod.w;
            REQUIRE(tr4 % prod.den == 0);
            gram[i][j] = tr4 / prod.den;
        }
    // 4x4 determinant by cofactor expansion
    auto det3 = [&](int r[3], int c[3]) {
        return gram[r[0]][c[0]] * (gram[r[1]][c[1]] * gram[r[2]][c[2]] -
                                   gram[r[1]][c[2]] * gram[r[2]][c[1]]) -
               gram[r[0]][c[1]] * (gram[r[1]][c[0]] * gram[r[2]][c[2]] -
                                   gram[r[1]][c[2]] * gram[r[2]][c[0]]) +
               gram[r[0]][c[2]] * (gram[r[1]][c[0]] * gram[r[2]][c[1]] -
                                   gram[r[1]][c[1]] * gram[r[2]][c[0]]);
    };
    arith::i128 det = 0;
    int rows[3] = {1, 2, 3};
    for (int j = 0; j < 4; ++j) {
        int cols[3], idx = 0;
        for (int c = 0; c < 4; ++c)
            if (c != j) cols[idx++] = c;
        arith::i128 minor = det3(rows, cols);
        det += (j % 2 == 0 ? 1 : -1) * gram[0][j] * minor;
    }
    CHECK(det == arith::i128(462400));
}

TEST_CASE("bad basis descriptors are rejected") {
    auto basis = oracle::default_basis();
    basis[1] = oracle::field_element::half(0, 1, 0, 0); // sqrt5 / 2, not integral
    CHECK_THROWS_AS(oracle::validate_basis(basis), error);
    try {
        oracle::validate_basis(basis);
    } catch (const error& e) {
        CHECK(e.code() == errc::bad_basis);
    }
}

TEST_CASE("norm_form_search worked examples") {
    auto basis = oracle::default_basis();
    auto dec = oracle::norm_form_search(basis, 1, {3});
    REQUIRE(dec.solvable());

    dec = oracle::norm_form_search(basis, 16, {3});
    REQUIRE(dec.solvable());
    auto w = *dec.witness;
    i64 W = 2 * w[0] + w[1], X = w[1], Y = 2 * w[2] + w[3], Z = w[3];
    CHECK(oracle::norm_of_half_coords(W, X, Y, Z) == 16);

    dec = oracle::norm_form_search(basis, -1, {8});
    CHECK(dec.verdict == status::unknown_witness);
    CHECK_THROWS_AS(oracle::norm_form_search(basis, 0, {3}), error);
}

TEST_CASE("norm is multiplicative under doubling") {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 100; ++i) {
        i64 W = 2 * (static_cast<i64>(rng() % 11) - 5);
        i64 X = 2 * (static_cast<i64>(rng() % 11) - 5);
        i64 Y = 2 * (static_cast<i64>(rng() % 11) - 5);
        i64 Z = 2 * (static_cast<i64>(rng() % 11) - 5);
        auto n1 = oracle::norm_of_half_coords(W, X, Y, Z);
        auto n2 = oracle::norm_of_half_coords(2 * W, 2 * X, 2 * Y, 2 * Z);
        REQUIRE(n1.has_value());
        REQUIRE(n2.has_value());
        CHECK(*n2 == 16 * *n1);
    }
}

TEST_CASE("norm sweep buckets match single searches") {
    auto basis = oracle::default_basis();
    auto hits = oracle::norm_form_sweep(basis, 40, 6);
    for (i64 n = -40; n <= 40; ++n) {
        if (n == 0) continue;
        auto dec = oracle::norm_form_search(basis, n, {6});
        CHECK(dec.solvable() == (hits.count(n) > 0));
    }
    // every bucketed witness has the right norm
    for (auto& [n, w] : hits) {
        i64 W = 2 * w[0] + w[1], X = w[1], Y = 2 * w[2] + w[3], Z = w[3];
        CHECK(oracle::norm_of_half_coords(W, X, Y, Z) == n);
    }
}
