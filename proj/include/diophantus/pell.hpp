#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "bigint.hpp"
#include "decision.hpp"
#include "error.hpp"

namespace diophantus::pell {

using arith::i128;
using arith::i64;
using arith::u128;
using arith::u64;

// Continued fraction of sqrt(d), fundamental unit, negative Pell data.
struct pell_data {
    u64 d = 0;
    u64 a0 = 0;                   // floor(sqrt d)
    std::vector<u64> period;      // minimal period; last element is 2*a0
    bigint t, u;                  // minimal t^2 - d u^2 = 1
    std::optional<std::pair<bigint, bigint>> negative; // minimal x^2 - d y^2 = -1
};

namespace detail {

inline void require_nonsquare(u64 d) {
    if (d < 2 || arith::square_root_exact(d)) fail(errc::square_input, "d must be a nonsquare >= 2");
}

inline u64 isqrt_u128(u128 n) {
    if (n == 0) return 0;
    long double approx = sqrtl(static_cast<long double>(n));
    u64 r = approx >= 1.8e19L ? UINT64_MAX - 1 : static_cast<u64>(approx);
    while (r > 0 && u128(r) * r > n) --r;
    while (r < UINT64_MAX - 1 && u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace detail

// Minimal-period expansion of sqrt(d) via the (P, Q) recurrence.
inline pell_data continued_fraction(u64 d) {
    detail::require_nonsquare(d);
    pell_data pd;
    pd.d = d;
    pd.a0 = arith::isqrt(d);
    u64 P = pd.a0, Q = d - pd.a0 * pd.a0; // state after the integer part
    for (u64 steps = 0;; ++steps) {
        if (steps > 2 * d + 10) fail(errc::search_exhausted, "period did not close");
        u64 a = (pd.a0 + P) / Q;
        pd.period.push_back(a);
        if (Q == 1) break; // canonical period closes exactly when Q returns to 1
        u64 Pn = a * Q - P;
        Q = static_cast<u64>((u128(d) - u128(Pn) * Pn) / Q);
        P = Pn;
    }
    return pd;
}

namespace detail {

// Convergent numerator/denominator after consuming `terms` partial quotients.
inline std::pair<bigint, bigint> convergent(const pell_data& pd, std::size_t terms) {
    bigint h_prev(1), h_prev2(0);
    bigint k_prev(0), k_prev2(1);
    for (std::size_t i = 0; i < terms; ++i) {
        u64 a = i == 0 ? pd.a0 : pd.period[(i - 1) % pd.period.size()];
        bigint h = bigint(static_cast<i64>(a)) * h_prev + h_prev2;
        bigint k = bigint(static_cast<i64>(a)) * k_prev + k_prev2;
        h_prev2 = std::move(h_prev);
        h_prev = std::move(h);
        k_prev2 = std::move(k_prev);
        k_prev = std::move(k);
    }
    return {h_prev, k_prev};
}

inline bigint pell_form(const bigint& x, const bigint& y, u64 d) {
    return x * x - bigint(static_cast<i64>(d)) * y * y;
}

} // namespace detail

// Full analysis: expansion, fundamental solution, negative-Pell witness.
inline pell_data analyze(u64 d) {
    pell_data pd = continued_fraction(d);
    std::size_t period = pd.period.size();
    bool odd = period % 2 == 1;
    auto [h, k] = detail::convergent(pd, odd ? 2 * period : period);
    pd.t = h;
    pd.u = k;
    if (detail::pell_form(pd.t, pd.u, d) != bigint(1))
        fail(errc::search_exhausted, "fundamental solution verification failed");
    if (odd) {
        auto [hn, kn] = detail::convergent(pd, period);
        if (detail::pell_form(hn, kn, d) != bigint(-1))
            fail(errc::search_exhausted, "negative Pell verification failed");
        pd.negative = std::make_pair(hn, kn);
    }
    return pd;
}

inline std::pair<bigint, bigint> fundamental_solution(u64 d) {
    pell_data pd = analyze(d);
    return {pd.t, pd.u};
}

inline std::optional<std::pair<bigint, bigint>> negative_pell_witness(u64 d) {
    return analyze(d).negative;
}

inline bool negative_pell_solvable(u64 d) {
    return continued_fraction(d).period.size() % 2 == 1;
}

struct represent_options {
    u64 search_budget = 100'000'000; // cap on the y range
};

// Exact decision for x^2 - d y^2 = n: a witness, or a certified none.
// Every solution class contains a representative with
// 0 <= y <= sqrt(|n| (t+1) / (2d)), so scanning that range is complete.
inline decision represent(u64 d, i64 n, const represent_options& opts = {}) {
    detail::require_nonsquare(d);
    if (n == 0) fail(errc::zero_input, "represent(d, 0)");
    pell_data pd = analyze(d);

    u64 y_max = 0;
    {
        bigint bound = bigint(n < 0 ? -n : n) * (pd.t + bigint(1));
        // bound / (2d), conservatively rounded up, must fit in 128 bits
        u128 num = 0;
        {
            bigint probe = bound;
            int shifts = 0;
            while (!probe.is_zero() && shifts < 8) {
                auto [q, r] = probe.divmod_small(1u << 16);
                num |= u128(r) << (16 * shifts);
                probe = q;
                ++shifts;
            }
            if (!probe.is_zero())
                fail(errc::search_exhausted, "representation bound exceeds budget");
        }
        u128 m = num / (u128(2) * d) + 1;
        y_max = detail::isqrt_u128(m) + 1;
    }
    if (y_max > opts.search_budget) fail(errc::search_exhausted, "representation bound exceeds budget");

    for (u64 y = 0; y <= y_max; ++y) {
        i128 r = i128(n) + i128(d) * y * y;
        if (r < 0) continue;
        u64 x = detail::isqrt_u128(static_cast<u128>(r));
        if (i128(x) * x != r) continue;
        if (i128(x) * x - i128(d) * y * y != n)
            fail(errc::search_exhausted, "witness recheck failed");
        return decision::make_solvable({static_cast<i64>(x), static_cast<i64>(y)});
    }
    return decision::make_unsolvable();
}

// Apply the fundamental automorph (x, y) -> (t x + d u y, u x + t y) to the
// canonical representative; every output satisfies the form exactly.
inline std::vector<std::pair<bigint, bigint>> orbit_enumerate(u64 d, i64 n, std::size_t count) {
    decision base = represent(d, n);
    if (!base.solvable()) fail(errc::no_witness, "form does not represent n");
    pell_data pd = analyze(d);
    bigint x((*base.witness)[0]);
    bigint y((*base.witness)[1]);
    bigint dd(static_cast<i64>(d));
    std::vector<std::pair<bigint, bigint>> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (detail::pell_form(x, y, d) != bigint(n))
            fail(errc::search_exhausted, "orbit element verification failed");
        out.emplace_back(x, y);
        bigint nx = pd.t * x + dd * pd.u * y;
        bigint ny = pd.u * x + pd.t * y;
        x = std::move(nx);
        y = std::move(ny);
    }
    return out;
}

} // namespace diophantus::pell
