#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "diophantus/arith.hpp"

using namespace diophantus;
using arith::i64;
using arith::u64;

namespace {

// independent oracle: Lucas-Lehmer test for Mersenne numbers 2^p - 1
bool lucas_lehmer(unsigned p) {
    u64 m = (u64(1) << p) - 1;
    u64 s = 4 % m;
    for (unsigned i = 0; i + 2 < p; ++i)
        s = (arith::mulmod(s, s, m) + m - 2) % m;
    return s == 0;
}

bool square_sum_enumeration(u64 m, u64& r, u64& s) {
    for (u64 a = 1; a * a * 2 <= m; ++a) {
        u64 rest = m - a * a;
        auto b = arith::square_root_exact(rest);
        if (b && *b >= a && std::gcd(a, *b) == 1) {
            r = *b;
            s = a;
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("is_prime basics") {
    CHECK_FALSE(arith::is_prime(1));
    CHECK(arith::is_prime(2));
    CHECK(arith::is_prime(17));
    CHECK_FALSE(arith::is_prime(561)); // Carmichael
    CHECK(arith::is_prime((u64(1) << 61) - 1));
}

TEST_CASE("2^61 - 1 cross-checked by trial division and Lucas-Lehmer") {
    u64 m = (u64(1) << 61) - 1;
    for (u64 d = 3; d < 1'000'000; d += 2) CHECK(m % d != 0);
    CHECK(lucas_lehmer(61));
    CHECK_FALSE(lucas_lehmer(11)); // 2^11 - 1 = 23 * 89
    CHECK_FALSE(arith::is_prime((u64(1) << 11) - 1));
}

TEST_CASE("factorize worked examples") {
    auto fp = arith::factorize(33);
    CHECK(fp.s0 == 0);
    CHECK(fp.s1 == 0);
    CHECK(fp.odd_primes == std::map<u64, std::uint32_t>{{3, 1}, {11, 1}});

    fp = arith::factorize(-68);
    CHECK(fp.s0 == 1);
    CHECK(fp.s1 == 2);
    CHECK(fp.odd_primes == std::map<u64, std::uint32_t>{{17, 1}});

    fp = arith::factorize(1'000'003);
    CHECK(fp.odd_primes == std::map<u64, std::uint32_t>{{1'000'003, 1}});
    CHECK(arith::is_prime(1'000'003));

    CHECK_THROWS_AS(arith::factorize(0), error);
    try {
        arith::factorize(0);
    } catch (const error& e) {
        CHECK(e.code() == errc::zero_input);
    }
}

TEST_CASE("factorize recomposes, including rho-sized cofactors") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        i64 n = static_cast<i64>(rng() % 1'000'000'000'000ull) + 2;
        if (rng() & 1) n = -n;
        auto fp = arith::factorize(n);
        CHECK(fp.recompose() == n);
        for (auto& [p, e] : fp.odd_primes) CHECK(arith::is_prime(p));
    }
    // two primes beyond the trial division limit
    auto fp = arith::factorize(i64(1'000'003) * 999'983);
    CHECK(fp.odd_primes == std::map<u64, std::uint32_t>{{999'983, 1}, {1'000'003, 1}});
}

TEST_CASE("factorize reports an exhausted rho budget") {
    arith::factorize_options opts;
    opts.rho_seed_attempts = 0; // no rho passes at all
    CHECK_THROWS_AS(arith::factorize(i64(1'000'003) * 999'983, opts), error);
    try {
        arith::factorize(i64(1'000'003) * 999'983, opts);
    } catch (const error& e) {
        CHECK(e.code() == errc::factorization_incomplete);
    }
}

TEST_CASE("jacobi worked examples") {
    CHECK(arith::jacobi(2, 17) == 1);
    CHECK(arith::jacobi(-1, 5) == 1);
    CHECK(arith::jacobi(17, 3) == -1);
    CHECK(arith::jacobi(0, 3) == 0);
    CHECK(arith::jacobi(5, 1) == 1);
    CHECK_THROWS_AS(arith::jacobi(3, 4), error);
}

TEST_CASE("jacobi satisfies the Euler criterion on random prime inputs") {
    auto primes = arith::primes_up_to(5000);
    std::mt19937_64 rng(19);
    for (int i = 0; i < 10'000; ++i) {
        u64 p = primes[2 + rng() % (primes.size() - 2)]; // odd primes
        i64 a = static_cast<i64>(rng() % 100'000) - 50'000;
        int j = arith::jacobi(a, p);
        u64 e = arith::powmod(arith::mod_positive(a, p), (p - 1) / 2, p);
        int euler = e == 0 ? 0 : (e == 1 ? 1 : -1);
        CHECK(j == euler);
    }
}

TEST_CASE("quadratic reciprocity for random odd prime pairs") {
    auto primes = arith::primes_up_to(2000);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 2000; ++i) {
        u64 p = primes[1 + rng() % (primes.size() - 1)];
        u64 q = primes[1 + rng() % (primes.size() - 1)];
        if (p == q) continue;
        int lhs = arith::jacobi(static_cast<i64>(p), q) * arith::jacobi(static_cast<i64>(q), p);
        int rhs = ((p - 1) / 2 % 2 == 1 && (q - 1) / 2 % 2 == 1) ? -1 : 1;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("sqrt_mod worked examples and properties") {
    CHECK(arith::sqrt_mod(2, 17) == 6);
    CHECK(arith::sqrt_mod(0, 7) == 0);
    CHECK_FALSE(arith::sqrt_mod(3, 7).has_value());
    CHECK_THROWS_AS(arith::sqrt_mod(2, 15), error);

    auto primes = arith::primes_up_to(3000);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 3000; ++i) {
        u64 p = primes[1 + rng() % (primes.size() - 1)];
        i64 a = static_cast<i64>(rng() % (2 * p)) - static_cast<i64>(p);
        auto r = arith::sqrt_mod(a, p);
        if (r) {
            CHECK(*r <= (p - 1) / 2);
            CHECK(arith::mulmod(*r, *r, p) == arith::mod_positive(a, p));
        } else {
            CHECK(arith::jacobi(a, p) == -1);
        }
    }
}

TEST_CASE("power_residue_solvable worked examples") {
    CHECK(arith::power_residue_solvable(2, 4, 73));
    CHECK_FALSE(arith::power_residue_solvable(2, 4, 17));
    CHECK(arith::power_residue_solvable(5, 1, 7));
    CHECK_THROWS_AS(arith::power_residue_solvable(17, 4, 17), error);
}

TEST_CASE("power_residue_solvable agrees with exhaustive scan below 500") {
    for (u64 p : arith::primes_up_to(500)) {
        if (p == 2) continue;
        for (u64 k : {2u, 3u, 4u}) {
            std::set<u64> residues;
            for (u64 x = 1; x < p; ++x) residues.insert(arith::powmod(x, k, p));
            for (u64 a = 1; a < p; ++a)
                CHECK(arith::power_residue_solvable(static_cast<i64>(a), k, p) ==
                      (residues.count(a) > 0));
        }
    }
}

TEST_CASE("quartic_roots_mod examples") {
    auto scan = [](std::array<i64, 5> c, u64 p) {
        for (u64 x = 0; x < p; ++x) {
            u64 v = 0;
            for (int i = 4; i >= 0; --i)
                v = (arith::mulmod(v, x, p) + arith::mod_positive(c[i], p)) % p;
            if (v == 0) return true;
        }
        return false;
    };
    std::array<i64, 5> theta{2, 0, -12, 0, 1}; // x^4 - 12 x^2 + 2
    CHECK(arith::quartic_roots_mod(theta, 31) == scan(theta, 31));
    CHECK(arith::quartic_roots_mod(theta, 7) == scan(theta, 7));
    CHECK(arith::quartic_roots_mod({0, 0, 0, 0, 1}, 13)); // x^4 has root 0
    for (u64 p : arith::primes_up_to(200))
        if (p > 2) CHECK(arith::quartic_roots_mod(theta, p) == scan(theta, p));
}

TEST_CASE("poly root detection: gcd path matches direct scan") {
    std::vector<i64> theta{2, 0, -12, 0, 1};
    for (u64 p : {1'000'003ull, 1'000'033ull, 1'048'583ull}) {
        bool via_gcd = arith::poly_has_root_mod(theta, p, 10);          // force gcd route
        bool via_scan = arith::poly_has_root_mod(theta, p, 2'000'000);  // force scan
        CHECK(via_gcd == via_scan);
    }
    std::vector<i64> x4m2{-2, 0, 0, 0, 1};
    for (u64 p : {73ull, 89ull, 113ull, 233ull, 257ull, 337ull}) {
        bool via_gcd = arith::poly_has_root_mod(x4m2, p, 10);
        bool via_scan = arith::poly_has_root_mod(x4m2, p, 2'000'000);
        CHECK(via_gcd == via_scan);
        CHECK(via_scan == arith::power_residue_solvable(2, 4, p));
    }
}

TEST_CASE("cornacchia worked examples") {
    CHECK(arith::cornacchia_two_squares(34) == std::make_pair(u64(5), u64(3)));
    CHECK(arith::cornacchia_two_squares(2) == std::make_pair(u64(1), u64(1)));
    CHECK(arith::cornacchia_two_squares(146) == std::make_pair(u64(11), u64(5)));
    CHECK_FALSE(arith::cornacchia_two_squares(12).has_value()); // 4 | 12
    CHECK_FALSE(arith::cornacchia_two_squares(21).has_value()); // 3 mod 4 factors
}

TEST_CASE("cornacchia agrees with enumeration") {
    for (u64 m = 2; m <= 2000; ++m) {
        auto got = arith::cornacchia_two_squares(m);
        u64 r = 0, s = 0;
        bool expect = square_sum_enumeration(m, r, s);
        CHECK(got.has_value() == expect);
        if (got) {
            CHECK(got->first * got->first + got->second * got->second == m);
            CHECK(std::gcd(got->first, got->second) == 1);
            CHECK(got->first >= got->second);
        }
    }
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        u64 m = 2 + rng() % 1'000'000;
        auto got = arith::cornacchia_two_squares(m);
        u64 r = 0, s = 0;
        bool expect = square_sum_enumeration(m, r, s);
        CHECK(got.has_value() == expect);
        if (got) CHECK(got->first * got->first + got->second * got->second == m);
    }
}

TEST_CASE("classify gauss64") {
    auto fp = arith::classify(arith::factorize(17), arith::family::gauss64);
    CHECK(fp.dset(arith::dclass::d2) == std::vector<u64>{17});
    CHECK(fp.dset(arith::dclass::d1).empty());

    fp = arith::classify(arith::factorize(1), arith::family::gauss64);
    CHECK(fp.classes.empty());
    CHECK(fp.n1 == 1);

    CHECK_THROWS_AS(arith::classify(arith::factorize(-5), arith::family::gauss64), error);
}

TEST_CASE("classify d34") {
    auto fp = arith::classify(arith::factorize(33), arith::family::d34);
    CHECK(fp.dset(arith::dclass::d1) == std::vector<u64>{3, 11});
    CHECK(fp.n1 == 33);

    fp = arith::classify(arith::factorize(-68), arith::family::d34);
    CHECK(fp.special == std::map<u64, std::uint32_t>{{17, 1}});
    CHECK(fp.s1 == 2);
    CHECK(fp.n1 == -1);

    fp = arith::classify(arith::factorize(1), arith::family::d34);
    CHECK(fp.n1 == 1);
}

TEST_CASE("d34 classification partitions D(n)") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 400; ++i) {
        i64 n = static_cast<i64>(rng() % 2'000'000) + 2;
        if (rng() & 1) n = -n;
        auto fp = arith::classify(arith::factorize(n), arith::family::d34);
        CHECK(fp.recompose() == n);
        std::size_t total = 0;
        for (auto c : {arith::dclass::d1, arith::dclass::d2, arith::dclass::d3,
                       arith::dclass::d4})
            total += fp.dset(c).size();
        CHECK(total == fp.odd_primes.size()); // D1 .. D4 partition D(n)
        CHECK(fp.classes.count(17) == 0);
        // n1 = (-1)^s0 prod_{p not in D2} p^e
        arith::i128 n1 = fp.s0 ? -1 : 1;
        for (auto& [p, e] : fp.odd_primes)
            if (fp.classes.at(p) != arith::dclass::d2)
                for (std::uint32_t j = 0; j < e; ++j) n1 *= p;
        CHECK(fp.n1 == static_cast<i64>(n1));
    }
}
