#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "arith.hpp"
#include "decision.hpp"
#include "error.hpp"
#include "localsolve.hpp"

namespace diophantus::oracle {

using arith::i128;
using arith::i64;
using arith::u128;
using arith::u64;

// Exhaustive decision for a definite binary quadratic: enumerate the finite
// feasible y interval and test x exactly.
inline decision definite_search(const localsolve::quad_equation& eq_in) {
    if (eq_in.disc >= 0) fail(errc::indefinite_form, "definite_search needs disc < 0");
    localsolve::quad_equation eq = eq_in;
    if (eq.a < 0) { // normalize to positive definite
        eq.a = -eq.a; eq.b = -eq.b; eq.c = -eq.c;
        eq.e = -eq.e; eq.f = -eq.f; eq.g = -eq.g; eq.n = -eq.n;
    }
    // feasible y: (by+e)^2 - 4a(cy^2 + fy + g - n) >= 0, a parabola opening down
    i128 A2 = eq.disc;
    i128 A1 = i128(2) * eq.b * eq.e - i128(4) * eq.a * eq.f;
    i128 A0 = i128(eq.e) * eq.e - i128(4) * eq.a * (i128(eq.g) - eq.n);
    i128 discy = A1 * A1 - i128(4) * A2 * A0;
    if (discy < 0) return decision::make_unsolvable();
    double sq = std::sqrt(static_cast<double>(discy));
    double r1 = (-static_cast<double>(A1) + sq) / (2.0 * static_cast<double>(A2));
    double r2 = (-static_cast<double>(A1) - sq) / (2.0 * static_cast<double>(A2));
    i64 ylo = static_cast<i64>(std::floor(std::min(r1, r2))) - 2;
    i64 yhi = static_cast<i64>(std::ceil(std::max(r1, r2))) + 2;

    std::optional<std::pair<i64, i64>> best;
    auto consider = [&](i64 x, i64 y) {
        i128 v = i128(eq.a) * x * x + i128(eq.b) * x * y + i128(eq.c) * y * y +
                 i128(eq.e) * x + i128(eq.f) * y + eq.g;
        if (v != eq.n) fail(errc::search_exhausted, "definite witness recheck failed");
        if (!best) { best = {x, y}; return; }
        auto key = [](std::pair<i64, i64> w) {
            return std::make_tuple(std::llabs(w.second), w.second < 0, std::llabs(w.first),
                                   w.first < 0);
        };
        if (key({x, y}) < key(*best)) best = {x, y};
    };
    for (i64 y = ylo; y <= yhi; ++y) {
        i128 B = i128(eq.b) * y + eq.e;
        i128 C = i128(eq.c) * y * y + i128(eq.f) * y + eq.g - eq.n;
        i128 dx = B * B - i128(4) * eq.a * C;
        if (dx < 0) continue;
        u64 root = 0;
        {
            u128 target = static_cast<u128>(dx);
            long double approx = sqrtl(static_cast<long double>(target));
            root = static_cast<u64>(approx);
            while (root > 0 && u128(root) * root > target) --root;
            while (u128(root + 1) * (root + 1) <= target) ++root;
            if (u128(root) * root != target) continue;
        }
        for (int sgn : {1, -1}) {
            i128 num = -B + i128(sgn) * root;
            if (num % (i128(2) * eq.a) != 0) continue;
            i128 x = num / (i128(2) * eq.a);
            if (x > INT64_MAX || x < INT64_MIN) continue;
            consider(static_cast<i64>(x), y);
            if (root == 0) break;
        }
    }
    if (!best) return decision::make_unsolvable();
    return decision::make_solvable({best->first, best->second});
}

// Exact decision for the split form x^2 - k^2 y^2 = n via divisor pairs:
// solvable iff some factorization n = u v has u = v mod 2 and 2k | v - u.
inline decision split_form_decide(u64 k, i64 n) {
    if (k == 0) fail(errc::bad_input, "split_form_decide needs k >= 1");
    if (n == 0) fail(errc::zero_input, "split_form_decide(k, 0)");
    u64 an = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    std::optional<std::pair<i64, i64>> best;
    auto consider = [&](i64 u, i64 v) {
        if (((u - v) & 1) != 0) return;
        i128 diff = i128(v) - u;
        if (diff % (i128(2) * k) != 0) return;
        i64 x = static_cast<i64>((i128(u) + v) / 2);
        i64 y = static_cast<i64>(diff / (i128(2) * k));
        if (i128(x) * x - i128(k) * k * y * y != n)
            fail(errc::search_exhausted, "split witness recheck failed");
        auto key = [](std::pair<i64, i64> w) {
            return std::make_tuple(std::llabs(w.second), w.second < 0, std::llabs(w.first),
                                   w.first < 0);
        };
        if (!best || key({x, y}) < key(*best)) best = {x, y};
    };
    for (u64 d = 1; d * d <= an; ++d) {
        if (an % d != 0) continue;
        i64 lo = static_cast<i64>(d), hi = static_cast<i64>(an / d);
        if (n > 0) {
            consider(lo, hi);
            consider(hi, lo);
            consider(-lo, -hi);
            consider(-hi, -lo);
        } else {
            consider(lo, -hi);
            consider(-hi, lo);
            consider(-lo, hi);
            consider(hi, -lo);
        }
    }
    if (!best) return decision::make_unsolvable();
    return decision::make_solvable({best->first, best->second});
}

// ---- multi-norm machinery for E = Q(sqrt5, sqrt34) ----

// Field element (w + x sqrt5 + y sqrt34 + z sqrt170) / den.
struct field_element {
    i128 w = 0, x = 0, y = 0, z = 0;
    i128 den = 1;

    static field_element half(i64 w, i64 x, i64 y, i64 z) { return {w, x, y, z, 2}; }

    void reduce() {
        if (den < 0) { den = -den; w = -w; x = -x; y = -y; z = -z; }
        i128 g = den;
        for (i128 v : {w, x, y, z}) {
            v = v < 0 ? -v : v;
            while (v) { i128 t = g % v; g = v; v = t; }
        }
        if (g > 1) { w /= g; x /= g; y /= g; z /= g; den /= g; }
    }

    friend field_element operator*(const field_element& a, const field_element& b) {
        field_element r;
        r.w = a.w * b.w + 5 * a.x * b.x + 34 * a.y * b.y + 170 * a.z * b.z;
        r.x = a.w * b.x + a.x * b.w + 34 * (a.y * b.z + a.z * b.y);
        r.y = a.w * b.y + a.y * b.w + 5 * (a.x * b.z + a.z * b.x);
        r.z = a.w * b.z + a.z * b.w + a.x * b.y + a.y * b.x;
        r.den = a.den * b.den;
        r.reduce();
        return r;
    }

    friend field_element operator+(const field_element& a, const field_element& b) {
        field_element r{a.w * b.den + b.w * a.den, a.x * b.den + b.x * a.den,
                        a.y * b.den + b.y * a.den, a.z * b.den + b.z * a.den, a.den * b.den};
        r.reduce();
        return r;
    }

    field_element conj(bool flip5, bool flip34) const {
        field_element r = *this;
        if (flip5) { r.x = -r.x; r.z = -r.z; }
        if (flip34) { r.y = -r.y; r.z = -r.z; }
        return r;
    }

    bool is_rational() const { return x == 0 && y == 0 && z == 0; }
    bool is_rational_integer() const { return is_rational() && w % den == 0; }
};

using field_basis = std::array<field_element, 4>;

// {1, (1+sqrt5)/2, sqrt34, sqrt34 (1+sqrt5)/2}
inline field_basis default_basis() {
    return {field_element::half(2, 0, 0, 0), field_element::half(1, 1, 0, 0),
            field_element::half(0, 0, 2, 0), field_element::half(0, 0, 1, 1)};
}

// Characteristic polynomial coefficients of alpha over Q (degree 4, monic),
// exact symmetric-function expansion over the four real embeddings.
inline std::array<field_element, 5> char_poly(const field_element& alpha) {
    std::array<field_element, 4> sigma = {
        alpha.conj(false, false), alpha.conj(true, false),
        alpha.conj(false, true), alpha.conj(true, true)};
    // expand prod (T - sigma_i)
    std::vector<field_element> poly{field_element{1, 0, 0, 0, 1}};
    for (const auto& s : sigma) {
        std::vector<field_element> next(poly.size() + 1);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] = next[i + 1] + poly[i];
            field_element neg = s;
            neg.w = -neg.w; neg.x = -neg.x; neg.y = -neg.y; neg.z = -neg.z;
            next[i] = next[i] + poly[i] * neg;
        }
        poly = std::move(next);
    }
    std::array<field_element, 5> out;
    for (std::size_t i = 0; i < 5; ++i) out[i] = poly[i];
    return out;
}

inline void validate_basis(const field_basis& basis) {
    for (const auto& b : basis) {
        auto cp = char_poly(b);
        for (const auto& coeff : cp) {
            if (!coeff.is_rational())
                fail(errc::bad_basis, "characteristic polynomial not rational");
            if (!coeff.is_rational_integer())
                fail(errc::bad_basis, "basis element is not an algebraic integer");
        }
    }
}

// Exact norm of (W + X sqrt5 + Y sqrt34 + Z sqrt170)/2 as a product of the
// four real embeddings, computed rationally.
inline std::optional<i64> norm_of_half_coords(i64 W, i64 X, i64 Y, i64 Z) {
    i128 S = i128(W) * W + 5 * i128(X) * X - 34 * i128(Y) * Y - 170 * i128(Z) * Z;
    i128 T = 2 * i128(W) * X - 68 * i128(Y) * Z;
    i128 N16 = S * S - 5 * T * T;
    if (N16 % 16 != 0) return std::nullopt; // not an algebraic integer
    i128 N = N16 / 16;
    if (N > INT64_MAX || N < INT64_MIN) return std::nullopt;
    return static_cast<i64>(N);
}

struct norm_search_options {
    i64 coef_bound = 10;
};

// One-sided bounded search for n = N(x1 e1 + ... + x4 e4); a hit is exact,
// a miss is only UnknownWitness.
inline decision norm_form_search(const field_basis& basis, i64 n,
                                 const norm_search_options& opts = {}) {
    validate_basis(basis);
    if (n == 0) fail(errc::zero_input, "norm_form_search(basis, 0)");
    const i64 B = opts.coef_bound;
    // half-integer coordinates of the basis (denominator 2, from validate)
    std::array<std::array<i64, 4>, 4> hb{};
    for (int i = 0; i < 4; ++i) {
        field_element e = basis[i];
        // scale to denominator exactly 2
        if (e.den != 1 && e.den != 2) fail(errc::bad_basis, "descriptor denominator must be 1 or 2");
        i128 scale = 2 / e.den;
        hb[i] = {static_cast<i64>(e.w * scale), static_cast<i64>(e.x * scale),
                 static_cast<i64>(e.y * scale), static_cast<i64>(e.z * scale)};
    }
    for (i64 c1 = -B; c1 <= B; ++c1)
        for (i64 c2 = -B; c2 <= B; ++c2)
            for (i64 c3 = -B; c3 <= B; ++c3)
                for (i64 c4 = -B; c4 <= B; ++c4) {
                    i64 W = c1 * hb[0][0] + c2 * hb[1][0] + c3 * hb[2][0] + c4 * hb[3][0];
                    i64 X = c1 * hb[0][1] + c2 * hb[1][1] + c3 * hb[2][1] + c4 * hb[3][1];
                    i64 Y = c1 * hb[0][2] + c2 * hb[1][2] + c3 * hb[2][2] + c4 * hb[3][2];
                    i64 Z = c1 * hb[0][3] + c2 * hb[1][3] + c3 * hb[2][3] + c4 * hb[3][3];
                    auto N = norm_of_half_coords(W, X, Y, Z);
                    if (N && *N == n) return decision::make_solvable({c1, c2, c3, c4});
                }
    return decision::make_unknown();
}

// Single pass over the coefficient box, bucketing every |norm| <= n_cap hit.
inline std::map<i64, std::array<i64, 4>> norm_form_sweep(const field_basis& basis, i64 n_cap,
                                                         i64 coef_bound) {
    validate_basis(basis);
    std::map<i64, std::array<i64, 4>> out;
    const i64 B = coef_bound;
    std::array<std::array<i64, 4>, 4> hb{};
    for (int i = 0; i < 4; ++i) {
        field_element e = basis[i];
        i128 scale = 2 / e.den;
        hb[i] = {static_cast<i64>(e.w * scale), static_cast<i64>(e.x * scale),
                 static_cast<i64>(e.y * scale), static_cast<i64>(e.z * scale)};
    }
    // group as (u-part from c1,c2) x (v-part from c3,c4) for the default-shaped basis
    for (i64 c1 = -B; c1 <= B; ++c1)
        for (i64 c2 = -B; c2 <= B; ++c2) {
            i64 W12 = c1 * hb[0][0] + c2 * hb[1][0];
            i64 X12 = c1 * hb[0][1] + c2 * hb[1][1];
            i64 Y12 = c1 * hb[0][2] + c2 * hb[1][2];
            i64 Z12 = c1 * hb[0][3] + c2 * hb[1][3];
            for (i64 c3 = -B; c3 <= B; ++c3)
                for (i64 c4 = -B; c4 <= B; ++c4) {
                    i64 W = W12 + c3 * hb[2][0] + c4 * hb[3][0];
                    i64 X = X12 + c3 * hb[2][1] + c4 * hb[3][1];
                    i64 Y = Y12 + c3 * hb[2][2] + c4 * hb[3][2];
                    i64 Z = Z12 + c3 * hb[2][3] + c4 * hb[3][3];
                    i128 S = i128(W) * W + 5 * i128(X) * X - 34 * i128(Y) * Y - 170 * i128(Z) * Z;
                    i128 T = 2 * i128(W) * X - 68 * i128(Y) * Z;
                    i128 N16 = S * S - 5 * T * T;
                    i128 N = N16 / 16;
                    if (N16 % 16 != 0) continue;
                    if (N == 0 || N > n_cap || N < -n_cap) continue;
                    i64 key = static_cast<i64>(N);
                    if (!out.count(key)) out[key] = {c1, c2, c3, c4};
                }
        }
    return out;
}

} // namespace diophantus::oracle
