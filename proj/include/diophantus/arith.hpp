#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "error.hpp"

namespace diophantus::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

inline std::optional<u64> square_root_exact(u64 n) {
    u64 r = isqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

inline u64 mod_positive(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

// Modular inverse; requires gcd(a, m) = 1.
inline u64 inv_mod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) fail(errc::bad_input, "inverse of non-unit");
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

inline u64 valuation(u64 n, u64 p) {
    u64 v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// Deterministic Miller-Rabin; the fixed witness set decides all n < 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<u64> primes_up_to(u64 n) {
    std::vector<bool> sieve(n + 1, true);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

enum class dclass { d1, d2, d3, d4, unclassified };

inline const char* dclass_name(dclass c) {
    switch (c) {
    case dclass::d1: return "D1";
    case dclass::d2: return "D2";
    case dclass::d3: return "D3";
    case dclass::d4: return "D4";
    case dclass::unclassified: return "unclassified";
    }
    return "?";
}

enum class family { gauss64, d34, multinorm534 };

inline const char* family_name(family f) {
    switch (f) {
    case family::gauss64: return "gauss64";
    case family::d34: return "d34";
    case family::multinorm534: return "multinorm534";
    }
    return "?";
}

inline std::optional<family> family_from_name(std::string_view s) {
    if (s == "gauss64") return family::gauss64;
    if (s == "d34") return family::d34;
    if (s == "multinorm534") return family::multinorm534;
    return std::nullopt;
}

// Factorization shape n = (-1)^s0 * 2^s1 * (special primes) * p1^e1 ... pg^eg,
// with the odd primes carrying a per-family class label after classify().
struct factor_profile {
    i64 n = 0;
    int s0 = 0;       // sign exponent
    std::uint32_t s1 = 0; // exponent of 2
    std::map<u64, std::uint32_t> special;
    std::map<u64, std::uint32_t> odd_primes;
    std::map<u64, dclass> classes;
    i64 n1 = 0; // filled by classify()

    i64 recompose() const {
        i128 v = s0 ? -1 : 1;
        for (std::uint32_t i = 0; i < s1; ++i) v *= 2;
        for (auto& [p, e] : special)
            for (std::uint32_t i = 0; i < e; ++i) v *= p;
        for (auto& [p, e] : odd_primes)
            for (std::uint32_t i = 0; i < e; ++i) v *= p;
        return static_cast<i64>(v);
    }

    std::vector<u64> dset(dclass c) const {
        std::vector<u64> out;
        for (auto& [p, l] : classes)
            if (l == c) out.push_back(p);
        return out;
    }

    u64 exponent_sum(dclass c) const {
        u64 s = 0;
        for (auto& [p, l] : classes)
            if (l == c) s += odd_primes.at(p);
        return s;
    }
};

struct factorize_options {
    u64 bound = 1'000'000'000'000ull; // |n| cap
    u64 trial_limit = 100'000;
    int rho_seed_attempts = 24;
    u64 rho_iteration_budget = 1u << 22;
};

namespace detail {

// Brent's cycle-finding variant of Pollard rho, deterministic seed sequence.
inline std::optional<u64> pollard_rho(u64 n, const factorize_options& opts) {
    if ((n & 1) == 0) return 2;
    for (int c = 1; c <= opts.rho_seed_attempts; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 count = 0;
        auto step = [&](u64 v) { return (mulmod(v, v, n) + static_cast<u64>(c)) % n; };
        while (d == 1 && count < opts.rho_iteration_budget) {
            x = step(x);
            y = step(step(y));
            u64 diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
            ++count;
        }
        if (d != 0 && d != 1 && d != n) return d;
    }
    return std::nullopt;
}

inline void factor_into(u64 n, std::map<u64, std::uint32_t>& out, const factorize_options& opts) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    auto d = pollard_rho(n, opts);
    if (!d) fail(errc::factorization_incomplete, "cofactor resisted rho: " + std::to_string(n));
    factor_into(*d, out, opts);
    factor_into(n / *d, out, opts);
}

} // namespace detail

inline factor_profile factorize(i64 n, const factorize_options& opts = {}) {
    if (n == 0) fail(errc::zero_input, "factorize(0)");
    factor_profile fp;
    fp.n = n;
    fp.s0 = n < 0 ? 1 : 0;
    u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    if (m > opts.bound) fail(errc::bad_input, "|n| exceeds factorization bound");
    while ((m & 1) == 0) { m >>= 1; ++fp.s1; }
    for (u64 d = 3; d <= opts.trial_limit && d * d <= m; d += 2) {
        while (m % d == 0) { m /= d; ++fp.odd_primes[d]; }
    }
    if (m > 1) detail::factor_into(m, fp.odd_primes, opts);
    return fp;
}

// Jacobi symbol (a/n) for odd positive n.
inline int jacobi(i64 a, u64 n) {
    if (n == 0 || (n & 1) == 0) fail(errc::even_modulus, "jacobi needs odd positive modulus");
    u64 x = mod_positive(a, n);
    int result = 1;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            u64 r = n & 7;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, n);
        if ((x & 3) == 3 && (n & 3) == 3) result = -result;
        x %= n;
    }
    return n == 1 ? result : 0;
}

namespace detail {

// Tonelli-Shanks core; p must be an odd prime, av already reduced mod p.
inline std::optional<u64> sqrt_mod_unchecked(u64 av, u64 p) {
    if (av == 0) return 0;
    if (powmod(av, (p - 1) / 2, p) != 1) return std::nullopt;
    u64 r;
    if ((p & 3) == 3) {
        r = powmod(av, (p + 1) / 4, p);
    } else {
        u64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        u64 z = 2;
        while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
        u64 m = static_cast<u64>(s);
        u64 c = powmod(z, q, p);
        u64 t = powmod(av, q, p);
        r = powmod(av, (q + 1) / 2, p);
        while (t != 1) {
            u64 t2 = t;
            u64 i = 0;
            while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
            u64 b = c;
            for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
    }
    return std::min(r, p - r);
}

} // namespace detail

// Square root mod an odd prime; canonical representative <= (p-1)/2.
inline std::optional<u64> sqrt_mod(i64 a, u64 p) {
    if (p == 2 || !is_prime(p)) fail(errc::composite_modulus, "sqrt_mod needs an odd prime");
    return detail::sqrt_mod_unchecked(mod_positive(a, p), p);
}

// x^k = a mod p solvable? (p odd prime, p does not divide a)
inline bool power_residue_solvable(i64 a, u64 k, u64 p) {
    u64 av = mod_positive(a, p);
    if (av == 0) fail(errc::bad_input, "power_residue_solvable: p divides a");
    if (k == 0) fail(errc::bad_input, "power_residue_solvable: k must be positive");
    u64 g = std::gcd(k, p - 1);
    return powmod(av, (p - 1) / g, p) == 1;
}

namespace detail {

using poly = std::vector<u64>; // coefficients mod p, low degree first

inline void poly_trim(poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline poly poly_rem(poly a, const poly& b, u64 p) {
    u64 lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        u64 factor = mulmod(a.back(), lead_inv, p);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            u64 sub = mulmod(factor, b[i], p);
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        poly_trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline poly poly_mulmod(const poly& a, const poly& b, const poly& mod, u64 p) {
    poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    poly_trim(r);
    if (r.size() >= mod.size()) r = poly_rem(std::move(r), mod, p);
    return r;
}

inline poly poly_gcd(poly a, poly b, u64 p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        poly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace detail

// Does f have a root mod p? Direct scan below the threshold, gcd(x^p - x, f) above.
inline bool poly_has_root_mod(const std::vector<i64>& coeffs, u64 p, u64 scan_threshold = 1'000'000) {
    detail::poly f(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) f[i] = mod_positive(coeffs[i], p);
    detail::poly_trim(f);
    if (f.empty()) return true;            // zero polynomial
    if (f.size() == 1) return false;       // nonzero constant
    if (p < scan_threshold) {
        for (u64 x = 0; x < p; ++x) {
            u64 v = 0;
            for (std::size_t i = f.size(); i-- > 0;) v = (mulmod(v, x, p) + f[i]) % p;
            if (v == 0) return true;
        }
        return false;
    }
    // x^p mod f by binary exponentiation, then gcd(x^p - x, f).
    detail::poly x{0, 1};
    detail::poly acc{1};
    detail::poly base = x;
    if (base.size() >= f.size()) base = detail::poly_rem(base, f, p);
    u64 e = p;
    while (e) {
        if (e & 1) acc = detail::poly_mulmod(acc, base, f, p);
        base = detail::poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    // acc - x
    detail::poly diff = acc;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    detail::poly_trim(diff);
    detail::poly g = detail::poly_gcd(f, diff, p);
    return g.size() >= 2;
}

inline bool quartic_roots_mod(const std::array<i64, 5>& coeffs, u64 p) {
    return poly_has_root_mod(std::vector<i64>(coeffs.begin(), coeffs.end()), p);
}

namespace detail {

// Newton-lift r with r^2 = -1 (mod p) to mod p^e.
inline u64 lift_sqrt_minus_one(u64 r, u64 p, std::uint32_t e) {
    u64 mod = p;
    for (std::uint32_t k = 1; k < e; ++k) {
        u64 next_mod = mod * p;
        u64 fr = static_cast<u64>((u128(r) * r + 1) % next_mod);
        u64 dr = (2 * r) % next_mod;
        u64 correction = mulmod(fr / mod % p, inv_mod(dr % p, p), p);
        r = static_cast<u64>((u128(r) + u128(mod) * ((p - correction) % p)) % next_mod);
        mod = next_mod;
    }
    return r;
}

} // namespace detail

// Primitive two-squares decomposition m = r^2 + s^2 with gcd(r,s) = 1, r >= s > 0,
// via square roots of -1 and the classical Euclidean descent.
inline std::optional<std::pair<u64, u64>> cornacchia_two_squares(u64 m) {
    if (m <= 1) return std::nullopt;
    if (m == 2) return std::make_pair(1ull, 1ull);
    if (m % 4 == 0) return std::nullopt; // no primitive representation
    u64 m_odd = (m & 1) ? m : m / 2;
    factor_profile fp = factorize(static_cast<i64>(m_odd));
    std::vector<std::pair<u64, std::uint32_t>> pe(fp.odd_primes.begin(), fp.odd_primes.end());
    for (auto& [p, e] : pe)
        if (p % 4 == 3) return std::nullopt;

    // per-prime-power square roots of -1, combined over all sign choices
    std::vector<u64> roots, mods;
    for (auto& [p, e] : pe) {
        auto r = sqrt_mod(-1, p);
        if (!r) return std::nullopt;
        u64 lifted = detail::lift_sqrt_minus_one(*r, p, e);
        u64 pk = 1;
        for (std::uint32_t i = 0; i < e; ++i) pk *= p;
        roots.push_back(lifted);
        mods.push_back(pk);
    }

    auto descend = [&](u64 t) -> std::optional<std::pair<u64, u64>> {
        if (t < m - t) t = m - t; // representative in (m/2, m)
        u64 a = m, b = t;
        while (u128(b) * b > m) {
            u64 r = a % b;
            a = b;
            b = r;
        }
        u64 r = b;
        u64 rest = m - r * r;
        auto s = square_root_exact(rest);
        if (!s || *s == 0) return std::nullopt;
        if (std::gcd(r, *s) != 1) return std::nullopt;
        u64 hi = std::max(r, *s), lo = std::min(r, *s);
        return std::make_pair(hi, lo);
    };

    std::size_t combos = std::size_t(1) << roots.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        // CRT combine the chosen signs
        u64 t = (m & 1) ? 0 : 1;
        u64 mod = (m & 1) ? 1 : 2;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            u64 ri = (mask >> i) & 1 ? mods[i] - roots[i] : roots[i];
            u64 pk = mods[i];
            // t' = t mod `mod`, t' = ri mod pk
            u64 diff = mod_positive(static_cast<i64>(ri % pk) - static_cast<i64>(t % pk), pk);
            u64 step = mulmod(diff, inv_mod(mod % pk, pk), pk);
            t = static_cast<u64>((u128(t) + u128(step) * mod) % (u128(mod) * pk));
            mod *= pk;
        }
        if (auto rs = descend(t)) return rs;
    }
    return std::nullopt;
}

// Fill the per-family D-set labels, split out special primes, compute n1.
inline factor_profile classify(factor_profile fp, family fam) {
    fp.classes.clear();
    fp.special.clear();
    switch (fam) {
    case family::gauss64: {
        if (fp.n <= 0) fail(errc::non_positive, "gauss64 classification needs n > 0");
        for (auto& [p, e] : fp.odd_primes) {
            int m1 = jacobi(-1, p);
            int two = jacobi(2, p);
            if (m1 == 1 && two == -1) fp.classes[p] = dclass::d1;
            else if (m1 == 1 && two == 1 && !power_residue_solvable(2, 4, p))
                fp.classes[p] = dclass::d2;
            else fp.classes[p] = dclass::unclassified;
        }
        break;
    }
    case family::d34:
    case family::multinorm534: {
        auto it = fp.odd_primes.find(17);
        if (it != fp.odd_primes.end()) {
            fp.special[17] = it->second;
            fp.odd_primes.erase(it);
        }
        for (auto& [p, e] : fp.odd_primes) {
            int two = jacobi(2, p);
            int seventeen = jacobi(17, p);
            if (two == -1 && seventeen == -1) fp.classes[p] = dclass::d1;
            else if (two * seventeen == -1) fp.classes[p] = dclass::d2;
            else if (quartic_roots_mod({2, 0, -12, 0, 1}, p)) fp.classes[p] = dclass::d3;
            else fp.classes[p] = dclass::d4;
        }
        break;
    }
    }
    i128 n1 = fp.s0 ? -1 : 1;
    for (auto& [p, e] : fp.odd_primes) {
        if (fp.classes.at(p) == dclass::d2) continue;
        for (std::uint32_t i = 0; i < e; ++i) n1 *= p;
    }
    fp.n1 = static_cast<i64>(n1);
    return fp;
}

} // namespace diophantus::arith
