#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "arith.hpp"
#include "decision.hpp"
#include "error.hpp"

namespace diophantus::localsolve {

using arith::i128;
using arith::i64;
using arith::u128;
using arith::u64;

// ax^2 + bxy + cy^2 + ex + fy + g = n over Z, with disc = b^2 - 4ac != 0.
struct quad_equation {
    i64 a = 0, b = 0, c = 0, e = 0, f = 0, g = 0;
    i64 n = 0;
    i64 disc = 0;

    static quad_equation make(i64 a, i64 b, i64 c, i64 e, i64 f, i64 g, i64 n) {
        quad_equation q{a, b, c, e, f, g, n, 0};
        i128 d = i128(b) * b - i128(4) * a * c;
        if (d == 0) fail(errc::degenerate_discriminant, "b^2 - 4ac = 0");
        if (d > INT64_MAX || d < INT64_MIN) fail(errc::overflow, "discriminant overflows");
        q.disc = static_cast<i64>(d);
        return q;
    }
};

struct local_report {
    place v;
    bool solvable = false;
    std::uint32_t witness_precision = 0; // solution exhibited mod p^k; 0 at infinity
    std::optional<std::pair<i64, i64>> witness;            // finite places
    std::optional<std::pair<double, double>> real_witness; // infinite place
};

struct rational {
    i64 num = 0;
    i64 den = 1;
    rational() = default;
    rational(i64 n) : num(n) {} // NOLINT
    rational(i64 n, i64 d) : num(n), den(d) {}
};

namespace detail {

inline int epsilon_odd(i64 u) { // (u-1)/2 mod 2 for odd u
    return static_cast<int>((arith::mod_positive(u, 8) - 1) / 2) & 1;
}

inline int omega_odd(i64 u) { // (u^2-1)/8 mod 2 for odd u
    u64 r = arith::mod_positive(u, 8);
    return (r == 3 || r == 5) ? 1 : 0;
}

inline std::pair<u64, i64> split_valuation(i64 v, u64 p) {
    u64 k = 0;
    while (v % static_cast<i64>(p) == 0) { v /= static_cast<i64>(p); ++k; }
    return {k, v};
}

} // namespace detail

// Hilbert symbol (A, B)_v for nonzero integers A, B.
inline int hilbert_symbol_int(i64 A, i64 B, place v) {
    if (A == 0 || B == 0) fail(errc::zero_argument, "hilbert symbol of zero");
    if (v.infinite) return (A < 0 && B < 0) ? -1 : 1;
    u64 p = v.p;
    if (p == 2) {
        auto [alpha, u] = detail::split_valuation(A, 2);
        auto [beta, w] = detail::split_valuation(B, 2);
        int exp = detail::epsilon_odd(u) * detail::epsilon_odd(w) +
                  static_cast<int>(alpha) * detail::omega_odd(w) +
                  static_cast<int>(beta) * detail::omega_odd(u);
        return (exp & 1) ? -1 : 1;
    }
    auto [alpha, u] = detail::split_valuation(A, p);
    auto [beta, w] = detail::split_valuation(B, p);
    int eps = static_cast<int>(((p - 1) / 2) & 1);
    int sign = 1;
    if ((alpha & 1) && (beta & 1) && eps) sign = -sign;
    if (beta & 1) sign *= arith::jacobi(u, p);
    if (alpha & 1) sign *= arith::jacobi(w, p);
    return sign;
}

inline int hilbert_symbol(rational a, rational b, place v) {
    if (a.num == 0 || b.num == 0) fail(errc::zero_argument, "hilbert symbol of zero");
    if (a.den == 0 || b.den == 0) fail(errc::bad_input, "zero denominator");
    i128 A = i128(a.num) * a.den;
    i128 B = i128(b.num) * b.den;
    if (A > INT64_MAX || A < INT64_MIN || B > INT64_MAX || B < INT64_MIN)
        fail(errc::overflow, "hilbert argument too large");
    return hilbert_symbol_int(static_cast<i64>(A), static_cast<i64>(B), v);
}

// Product of (a,b)_v over the infinite place, 2, and the odd primes dividing ab.
// Always +1 by reciprocity; returned (not asserted) so it can be used as a self-test.
inline int hilbert_product(rational a, rational b) {
    if (a.num == 0 || b.num == 0) fail(errc::zero_argument, "hilbert product of zero");
    i128 A128 = i128(a.num) * a.den;
    i128 B128 = i128(b.num) * b.den;
    if (A128 > INT64_MAX || A128 < INT64_MIN || B128 > INT64_MAX || B128 < INT64_MIN)
        fail(errc::overflow, "hilbert argument too large");
    i64 A = static_cast<i64>(A128), B = static_cast<i64>(B128);
    std::set<u64> odd_primes;
    for (i64 v : {A, B}) {
        auto fp = arith::factorize(v);
        for (auto& [p, e] : fp.odd_primes) odd_primes.insert(p);
    }
    int prod = hilbert_symbol_int(A, B, place::at_infinity());
    prod *= hilbert_symbol_int(A, B, place::at(2));
    for (u64 p : odd_primes) prod *= hilbert_symbol_int(A, B, place::at(p));
    return prod;
}

namespace detail {

// Conic working form over Z/p^k: A X^2 + B XY + C Y^2 + E X + F Y + G = 0.
// Coefficients are kept reduced mod p^k (k = remaining precision budget),
// plus as exact 128-bit integers while they fit; the exact constant is what
// distinguishes a base point that solves outright from one that merely
// solves to the working precision.
struct conic_mod {
    u64 a, b, c, e, f, g;
    i128 ea, eb, ec, ee, ef, eg;
    bool exact = true;
};

inline bool checked_mul(i128 a, i128 b, i128& out) {
    return !__builtin_mul_overflow(a, b, &out);
}

inline bool checked_add(i128 a, i128 b, i128& out) {
    return !__builtin_add_overflow(a, b, &out);
}

struct zp_solution {
    u64 x = 0, y = 0;
    std::uint32_t prec = 0;
};

// solved: witness found; empty: certified no Z_p solutions in the class;
// exhausted: the precision budget ran out before either certificate.
struct zp_outcome {
    enum class kind { solved, empty, exhausted } k = kind::empty;
    zp_solution sol;

    static zp_outcome solved(zp_solution s) { return {kind::solved, s}; }
    static zp_outcome empty() { return {kind::empty, {}}; }
    static zp_outcome exhausted() { return {kind::exhausted, {}}; }
};

struct zp_context {
    u64 p;
    u64 node_budget = 4'000'000;
    u64 nodes = 0;
};

inline u64 pw(u64 p, std::uint32_t k) {
    u64 r = 1;
    while (k--) r *= p;
    return r;
}

inline std::uint32_t val_mod(u64 v, u64 p, std::uint32_t cap) {
    if (v == 0) return cap + 1; // "at least the full budget"
    std::uint32_t k = 0;
    while (v % p == 0) { v /= p; ++k; }
    return k;
}

inline u64 addm(u64 x, u64 y, u64 m) { return (x + y) % m; }
inline u64 mulm(u64 x, u64 y, u64 m) { return static_cast<u64>(u128(x) * y % m); }

inline u64 eval_conic(const conic_mod& q, u64 x, u64 y, u64 m) {
    u64 v = mulm(q.a, mulm(x, x, m), m);
    v = addm(v, mulm(q.b, mulm(x, y, m), m), m);
    v = addm(v, mulm(q.c, mulm(y, y, m), m), m);
    v = addm(v, mulm(q.e, x, m), m);
    v = addm(v, mulm(q.f, y, m), m);
    v = addm(v, q.g, m);
    return v;
}

inline u64 grad_x(const conic_mod& q, u64 x, u64 y, u64 m) {
    return addm(addm(mulm(2 % m, mulm(q.a, x, m), m), mulm(q.b, y, m), m), q.e, m);
}

inline u64 grad_y(const conic_mod& q, u64 x, u64 y, u64 m) {
    return addm(addm(mulm(q.b, x, m), mulm(2 % m, mulm(q.c, y, m), m), m), q.f, m);
}

inline u64 inv_mod_pk(u64 a, u64 m, u64 p) {
    // unit mod p^k; extended Euclid on u64
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    (void)p;
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

// Newton-lift a smooth mod-p solution to full precision k (modulus m = p^k).
// `in_x` selects the variable with unit partial derivative.
inline zp_solution newton_lift(const conic_mod& q, u64 x0, u64 y0, bool in_x,
                               u64 p, std::uint32_t k, u64 m) {
    u64 x = x0 % m, y = y0 % m;
    for (std::uint32_t it = 0; it < 2 * k + 4; ++it) {
        u64 fv = eval_conic(q, x, y, m);
        if (fv == 0) break;
        if (in_x) {
            u64 d = grad_x(q, x, y, m);
            x = (x + m - mulm(fv, inv_mod_pk(d, m, p), m)) % m;
        } else {
            u64 d = grad_y(q, x, y, m);
            y = (y + m - mulm(fv, inv_mod_pk(d, m, p), m)) % m;
        }
    }
    return {x, y, k};
}

// All solutions of q = 0 mod p, stopping early if a smooth one appears.
struct modp_scan {
    bool found_smooth = false;
    u64 sx = 0, sy = 0;
    bool smooth_in_x = false;
    std::vector<std::pair<u64, u64>> singular;
};

inline void scan_consider(modp_scan& out, const conic_mod& q, u64 x, u64 y, u64 p) {
    if (eval_conic(q, x, y, p) != 0) return;
    u64 gx = grad_x(q, x, y, p);
    u64 gy = grad_y(q, x, y, p);
    if (gx != 0 || gy != 0) {
        out.found_smooth = true;
        out.sx = x;
        out.sy = y;
        out.smooth_in_x = gx != 0;
    } else {
        out.singular.emplace_back(x, y);
    }
}

inline modp_scan solutions_mod_p(const conic_mod& q, u64 p) {
    modp_scan out;
    if (p <= 47) {
        for (u64 x = 0; x < p && !out.found_smooth; ++x)
            for (u64 y = 0; y < p; ++y) {
                scan_consider(out, q, x, y, p);
                if (out.found_smooth) break;
            }
        return out;
    }
    u64 cq = q.c % p;
    for (u64 x = 0; x < p && !out.found_smooth; ++x) {
        u64 lin = addm(mulm(q.b, x, p), q.f, p);
        u64 cons = addm(addm(mulm(q.a, mulm(x, x, p), p), mulm(q.e, x, p), p), q.g, p);
        if (cq != 0) {
            // c y^2 + lin y + cons = 0 mod p
            u64 disc = addm(mulm(lin, lin, p), p - mulm(4 % p, mulm(cq, cons, p), p), p);
            auto r = arith::detail::sqrt_mod_unchecked(disc, p);
            if (!r) continue;
            u64 inv2c = inv_mod_pk(mulm(2, cq, p), p, p);
            for (u64 root : {*r, p - *r}) {
                u64 y = mulm(addm(p - lin, root, p), inv2c, p);
                scan_consider(out, q, x, y, p);
                if (out.found_smooth) break;
                if (root == 0) break; // single root
            }
        } else if (lin != 0) {
            u64 y = mulm(p - cons, inv_mod_pk(lin, p, p), p);
            scan_consider(out, q, x, y, p);
        } else if (cons == 0) {
            for (u64 y = 0; y < p; ++y) {
                scan_consider(out, q, x, y, p);
                if (out.found_smooth) break;
            }
        }
    }
    return out;
}

// Exact Z_p decision by singular descent: smooth points certify via Hensel,
// singular ones recurse into the p-rescaled conic; empty levels certify
// unsolvability. Running out of precision yields `exhausted`, never a guess.
//
// `q` is known mod p^budget. The returned precision is relative to `q`:
// eval(q, x, y) = 0 mod p^prec, with prec <= budget.
inline zp_outcome solve_zp(conic_mod q, std::uint32_t budget, zp_context& ctx) {
    if (++ctx.nodes > ctx.node_budget)
        fail(errc::degenerate_discriminant, "node budget exhausted at p=" + std::to_string(ctx.p));
    u64 p = ctx.p;

    // strip content p^v
    std::uint32_t v = budget + 1;
    for (u64 coeff : {q.a, q.b, q.c, q.e, q.f, q.g}) v = std::min(v, val_mod(coeff, p, budget));
    if (v > budget) return zp_outcome::exhausted();
    if (v > 0) {
        u64 dv = pw(p, v);
        q.a /= dv; q.b /= dv; q.c /= dv; q.e /= dv; q.f /= dv; q.g /= dv;
        if (q.exact) {
            i128 d = static_cast<i128>(dv);
            q.ea /= d; q.eb /= d; q.ec /= d; q.ee /= d; q.ef /= d; q.eg /= d;
        }
    }
    std::uint32_t inner = budget - v;
    if (q.exact && q.eg == 0)
        return zp_outcome::solved({0, 0, budget}); // base point solves exactly
    if (inner == 0) return zp_outcome::exhausted();

    u64 m = pw(p, inner);
    q.a %= m; q.b %= m; q.c %= m; q.e %= m; q.f %= m; q.g %= m;

    modp_scan scan = solutions_mod_p(q, p);
    if (scan.found_smooth) {
        zp_solution s = newton_lift(q, scan.sx, scan.sy, scan.smooth_in_x, p, inner, m);
        s.prec = budget; // stripped content restores v extra digits
        return zp_outcome::solved(s);
    }

    bool any_exhausted = false;
    for (auto& [x0, y0] : scan.singular) {
        // substitute (x, y) = (x0 + pX, y0 + pY); the child inherits precision `inner`
        u64 p2 = mulm(p % m, p % m, m);
        conic_mod child;
        child.a = mulm(q.a, p2, m);
        child.b = mulm(q.b, p2, m);
        child.c = mulm(q.c, p2, m);
        child.e = mulm(p % m, grad_x(q, x0, y0, m), m);
        child.f = mulm(p % m, grad_y(q, x0, y0, m), m);
        child.g = eval_conic(q, x0, y0, m);
        child.exact = false;
        if (q.exact) {
            i128 pp = static_cast<i128>(p), xx = static_cast<i128>(x0), yy = static_cast<i128>(y0);
            bool ok = true;
            auto mul = [&](i128 a, i128 b) {
                i128 r = 0;
                ok = ok && checked_mul(a, b, r);
                return r;
            };
            auto add = [&](i128 a, i128 b) {
                i128 r = 0;
                ok = ok && checked_add(a, b, r);
                return r;
            };
            i128 p2e = mul(pp, pp);
            i128 gx = add(add(mul(mul(2, q.ea), xx), mul(q.eb, yy)), q.ee);
            i128 gy = add(add(mul(q.eb, xx), mul(mul(2, q.ec), yy)), q.ef);
            i128 ge = add(add(mul(mul(q.ea, xx), xx), mul(mul(q.eb, xx), yy)),
                          mul(mul(q.ec, yy), yy));
            ge = add(add(add(ge, mul(q.ee, xx)), mul(q.ef, yy)), q.eg);
            i128 ea2 = mul(q.ea, p2e), eb2 = mul(q.eb, p2e), ec2 = mul(q.ec, p2e);
            i128 ee2 = mul(gx, pp), ef2 = mul(gy, pp);
            if (ok) {
                child.exact = true;
                child.ea = ea2; child.eb = eb2; child.ec = ec2;
                child.ee = ee2; child.ef = ef2; child.eg = ge;
            }
        }
        zp_outcome sub = solve_zp(child, inner, ctx);
        if (sub.k == zp_outcome::kind::solved) {
            // F_parent(x0 + p X, y0 + p Y) = F_child(X, Y) identically
            std::uint32_t prec = sub.sol.prec + v; // <= inner + v = budget
            u64 mm = pw(p, prec);
            u128 x = u128(x0) + u128(p) * sub.sol.x;
            u128 y = u128(y0) + u128(p) * sub.sol.y;
            return zp_outcome::solved(
                {static_cast<u64>(x % mm), static_cast<u64>(y % mm), prec});
        }
        if (sub.k == zp_outcome::kind::exhausted) any_exhausted = true;
    }
    return any_exhausted ? zp_outcome::exhausted() : zp_outcome::empty();
}

// clamp the witness precision to what actually verifies against the
// original equation; a witness that fails even mod p signals a logic error
inline void clamp_verify(const quad_equation& eq, u64 p, local_report& rep) {
    if (!rep.solvable || !rep.witness) return;
    std::uint32_t prec = std::max<std::uint32_t>(rep.witness_precision, 1);
    while (prec > 0) {
        u64 mm = pw(p, prec);
        conic_mod check;
        check.a = arith::mod_positive(eq.a, mm);
        check.b = arith::mod_positive(eq.b, mm);
        check.c = arith::mod_positive(eq.c, mm);
        check.e = arith::mod_positive(eq.e, mm);
        check.f = arith::mod_positive(eq.f, mm);
        i128 gg = (i128(eq.g) - eq.n) % static_cast<i128>(mm);
        if (gg < 0) gg += mm;
        check.g = static_cast<u64>(gg);
        u64 xv = static_cast<u64>(rep.witness->first) % mm;
        u64 yv = static_cast<u64>(rep.witness->second) % mm;
        if (eval_conic(check, xv, yv, mm) == 0) {
            rep.witness = std::make_pair(static_cast<i64>(xv), static_cast<i64>(yv));
            rep.witness_precision = prec;
            return;
        }
        --prec;
    }
    fail(errc::degenerate_discriminant, "internal witness verification failed");
}

inline unsigned val_or(i128 v, u64 p, unsigned infinite) {
    if (v == 0) return infinite;
    if (v < 0) v = -v;
    unsigned k = 0;
    while (v % p == 0) { v /= p; ++k; }
    return k;
}

// p-adic square root of a unit square, to modulus m = p^k
inline u64 unit_sqrt_mod_pk(u64 u, u64 p, u64 m) {
    if (p == 2) {
        u64 r = 1, pk = 8;
        while (pk < m) {
            u64 next = pk * 2;
            if (arith::mulmod(r, r, next) != u % next) r += pk / 2;
            pk = next;
        }
        return r % m;
    }
    u64 r = *arith::detail::sqrt_mod_unchecked(u % p, p);
    u64 pk = p;
    while (pk < m) {
        u64 next = pk * p;
        u64 fr = (arith::mulmod(r, r, next) + next - u % next) % next;
        u64 dr = arith::mulmod(2, r, next);
        u64 corr = arith::mulmod(fr / pk % p, arith::inv_mod(dr % p, p), p);
        r = (r + (pk % next) * ((p - corr) % p)) % next;
        pk = next;
    }
    return r % m;
}

inline bool square_in_qp(i64 v, u64 p) {
    unsigned w = val_or(v, p, 0);
    if (w % 2 == 1) return false;
    i64 u = v;
    for (unsigned i = 0; i < w; ++i) u /= static_cast<i64>(p);
    if (p == 2) return arith::mod_positive(u, 8) == 1;
    return arith::jacobi(u, p) == 1;
}

// Closed-form Z_p decision for the degenerate conics (completed constant 0):
// the zero set is two lines over Q_p(sqrt disc), or the center alone.
// The singular descent cannot terminate on these, so they are split off.
inline local_report degenerate_zp(const quad_equation& eq, u64 p) {
    local_report rep;
    rep.v = place::at(p);
    const unsigned INF = 400;

    if (eq.a == 0 && eq.c == 0) {
        // b x y + e x + f y + g0 = 0 with ef = b g0: lines (bx + f)(by + e) = 0
        unsigned vb = val_or(eq.b, p, INF);
        unsigned vf = val_or(eq.f, p, INF);
        unsigned ve = val_or(eq.e, p, INF);
        if (vf >= vb) {
            rep.solvable = true;
            // x = -f / b, y = 0 exhibited to a modest precision
            std::uint32_t k = 8;
            u64 m = pw(p, k);
            i64 bu = eq.b, fu = eq.f;
            for (unsigned i = 0; i < vb && i < 60; ++i) { bu /= static_cast<i64>(p); fu /= static_cast<i64>(p); }
            u64 x = mulm(arith::mod_positive(-fu, m), arith::inv_mod(arith::mod_positive(bu, m), m), m);
            rep.witness = std::make_pair(static_cast<i64>(x), 0);
            rep.witness_precision = k;
        } else if (ve >= vb) {
            rep.solvable = true;
            std::uint32_t k = 8;
            u64 m = pw(p, k);
            i64 bu = eq.b, eu = eq.e;
            for (unsigned i = 0; i < vb && i < 60; ++i) { bu /= static_cast<i64>(p); eu /= static_cast<i64>(p); }
            u64 y = mulm(arith::mod_positive(-eu, m), arith::inv_mod(arith::mod_positive(bu, m), m), m);
            rep.witness = std::make_pair(0, static_cast<i64>(y));
            rep.witness_precision = k;
        } else {
            rep.solvable = false;
        }
        return rep;
    }
    if (eq.a == 0) { // complete through c instead: swap the variables
        auto swapped = quad_equation::make(eq.c, eq.b, eq.a, eq.f, eq.e, eq.g, eq.n);
        local_report sub = degenerate_zp(swapped, p);
        if (sub.witness) sub.witness = std::make_pair(sub.witness->second, sub.witness->first);
        return sub;
    }

    if (!square_in_qp(eq.disc, p)) {
        // anisotropic: the center is the only candidate point
        i128 D = i128(4) * eq.a * eq.c - i128(eq.b) * eq.b;
        i128 xc_num = i128(eq.b) * eq.f - i128(2) * eq.c * eq.e;
        i128 yc_num = i128(eq.b) * eq.e - i128(2) * eq.a * eq.f;
        unsigned vd = val_or(D, p, INF);
        if (val_or(xc_num, p, INF) >= vd && val_or(yc_num, p, INF) >= vd) {
            rep.solvable = true;
            std::uint32_t k = 8;
            u64 m = pw(p, k);
            i128 dd = D, xn = xc_num, yn = yc_num;
            for (unsigned i = 0; i < vd; ++i) { dd /= p; xn /= p; yn /= p; }
            u64 dinv = arith::inv_mod(arith::mod_positive(static_cast<i64>(dd % static_cast<i128>(m)), m), m);
            u64 x = mulm(arith::mod_positive(static_cast<i64>(xn % static_cast<i128>(m)), m), dinv, m);
            u64 y = mulm(arith::mod_positive(static_cast<i64>(yn % static_cast<i128>(m)), m), dinv, m);
            rep.witness = std::make_pair(static_cast<i64>(x), static_cast<i64>(y));
            rep.witness_precision = k;
        } else {
            rep.solvable = false;
        }
        return rep;
    }

    // two rational lines: sigma X = +-Y, i.e.
    // 2a sigma x + (b sigma -+ disc) y + (e sigma +- (2af - be)) = 0
    unsigned w = val_or(eq.disc, p, 0);
    i64 unit = eq.disc;
    for (unsigned i = 0; i < w; ++i) unit /= static_cast<i64>(p);
    u64 m = 1;
    unsigned prec = 0;
    while (m < (u64(1) << 58) / p) { m *= p; ++prec; }
    u64 sigma = unit_sqrt_mod_pk(arith::mod_positive(unit, m), p, m);
    for (unsigned i = 0; i < w / 2; ++i) sigma = arith::mulmod(sigma, p, m);
    auto vm = [&](u64 v) { return v == 0 ? prec : static_cast<unsigned>(val_mod(v, p, prec)); };
    bool indeterminate = false;
    for (int sign : {1, -1}) {
        u64 A = arith::mulmod(arith::mod_positive(2 * eq.a, m), sigma, m);
        u64 B = (arith::mulmod(arith::mod_positive(eq.b, m), sigma, m) +
                 arith::mod_positive(-sign * eq.disc, m)) % m;
        u64 C = (arith::mulmod(arith::mod_positive(eq.e, m), sigma, m) +
                 arith::mod_positive(sign * (2 * eq.a * eq.f - eq.b * eq.e), m)) % m;
        unsigned va = vm(A), vb2 = vm(B), vc = vm(C);
        unsigned vmin = std::min(va, vb2);
        if (vmin >= prec && vc >= prec) { indeterminate = true; continue; }
        if (vmin <= vc) {
            rep.solvable = true;
            // solve along the lower-valuation variable, the other set to 0
            std::uint32_t k = std::min<unsigned>(8, prec - vmin);
            u64 mm = pw(p, k);
            u64 dv = pw(p, vmin);
            u64 lead = (va <= vb2 ? A : B) / dv % mm;
            u64 val = (mm - mulm(C / dv % mm, arith::inv_mod(lead, mm), mm)) % mm;
            if (va <= vb2)
                rep.witness = std::make_pair(static_cast<i64>(val), 0);
            else
                rep.witness = std::make_pair(0, static_cast<i64>(val));
            rep.witness_precision = k;
            return rep;
        }
    }
    if (indeterminate)
        fail(errc::degenerate_discriminant,
             "valuations beyond working precision at p=" + std::to_string(p));
    rep.solvable = false;
    return rep;
}

} // namespace detail

// Decide existence of (x, y) in Z_p^2 with ax^2+bxy+cy^2+ex+fy+g = n.
// Search depth K = v_p(4 disc) + v_p(n - g) + 3, capped so p^K fits in 64
// bits and deepened adaptively; degenerate conics go through a closed form.
inline local_report zp_solvable(const quad_equation& eq, u64 p) {
    if (p < 2) fail(errc::bad_input, "zp_solvable needs a prime");
    {
        i128 D = i128(4) * eq.a * eq.c - i128(eq.b) * eq.b;
        i128 beta_num = i128(eq.a) * eq.f * eq.f - i128(eq.b) * eq.e * eq.f +
                        i128(eq.c) * eq.e * eq.e - D * (i128(eq.g) - eq.n);
        if (beta_num == 0) {
            local_report rep = detail::degenerate_zp(eq, p);
            detail::clamp_verify(eq, p, rep);
            return rep;
        }
    }
    i128 ng = i128(eq.n) - eq.g;
    std::uint32_t v4d = (p == 2 ? 2 : 0);
    {
        i64 d = eq.disc;
        while (d % static_cast<i64>(p) == 0) { d /= static_cast<i64>(p); ++v4d; }
    }
    std::uint32_t vng = 0;
    if (ng != 0) {
        i128 t = ng < 0 ? -ng : ng;
        while (t % p == 0) { t /= p; ++vng; }
    }
    std::uint32_t want = v4d + vng + 3;
    std::uint32_t cap = 1;
    {
        u128 m = p;
        while (m * p < (u128(1) << 62) && cap < 62) { m *= p; ++cap; }
    }

    // deepen adaptively: the e,f != 0 shapes can need depth beyond the
    // v_p(4 disc (n-g)) estimate; certification stays exact either way
    detail::zp_context ctx{p};
    std::optional<detail::zp_solution> sol;
    bool decided = false;
    for (std::uint32_t budget = std::min(want, cap);; budget = std::min(2 * budget + 4, cap)) {
        detail::conic_mod root;
        u64 m = detail::pw(p, budget);
        root.a = arith::mod_positive(eq.a, m);
        root.b = arith::mod_positive(eq.b, m);
        root.c = arith::mod_positive(eq.c, m);
        root.e = arith::mod_positive(eq.e, m);
        root.f = arith::mod_positive(eq.f, m);
        i128 g0 = (i128(eq.g) - eq.n) % static_cast<i128>(m);
        if (g0 < 0) g0 += m;
        root.g = static_cast<u64>(g0);
        root.exact = true;
        root.ea = eq.a;
        root.eb = eq.b;
        root.ec = eq.c;
        root.ee = eq.e;
        root.ef = eq.f;
        root.eg = i128(eq.g) - eq.n;

        detail::zp_outcome out = detail::solve_zp(root, budget, ctx);
        if (out.k == detail::zp_outcome::kind::solved) {
            sol = out.sol;
            decided = true;
        } else if (out.k == detail::zp_outcome::kind::empty) {
            decided = true;
        }
        if (decided || budget == cap) {
            if (!decided)
                fail(errc::degenerate_discriminant,
                     "precision budget exhausted at p=" + std::to_string(p));
            break;
        }
    }

    local_report rep;
    rep.v = place::at(p);
    if (!sol) {
        rep.solvable = false;
        return rep;
    }
    rep.solvable = true;
    rep.witness_precision = std::max<std::uint32_t>(sol->prec, 1);
    rep.witness = std::make_pair(static_cast<i64>(sol->x), static_cast<i64>(sol->y));
    detail::clamp_verify(eq, p, rep);
    return rep;
}

// Solvability over R by sign analysis of the completed form.
inline local_report real_solvable(const quad_equation& eq) {
    local_report rep;
    rep.v = place::at_infinity();
    if (eq.disc > 0) {
        rep.solvable = true;
        // walk y until the x-discriminant goes positive
        for (i64 y = 0;; y = y >= 0 ? -(y + 1) : -y) {
            i128 dx = i128(eq.b) * y + eq.e;
            dx = dx * dx - i128(4) * eq.a * (i128(eq.c) * y * y + i128(eq.f) * y + eq.g - eq.n);
            if (eq.a == 0) {
                i128 lin = i128(eq.b) * y + eq.e;
                if (lin != 0) {
                    double x = -static_cast<double>(i128(eq.c) * y * y + i128(eq.f) * y + eq.g - eq.n) /
                               static_cast<double>(lin);
                    rep.real_witness = std::make_pair(x, static_cast<double>(y));
                    break;
                }
            } else if (dx >= 0) {
                double x = (-static_cast<double>(i128(eq.b) * y + eq.e) +
                            std::sqrt(static_cast<double>(dx))) /
                           (2.0 * static_cast<double>(eq.a));
                rep.real_witness = std::make_pair(x, static_cast<double>(y));
                break;
            }
            if (y < -(1 << 20)) break; // cannot happen for disc > 0
        }
        return rep;
    }
    // definite: compare the extremal value against zero
    i128 D = i128(4) * eq.a * eq.c - i128(eq.b) * eq.b; // = -disc > 0
    i128 xc_num = i128(eq.b) * eq.f - i128(2) * eq.c * eq.e;
    i128 yc_num = i128(eq.b) * eq.e - i128(2) * eq.a * eq.f;
    // 2 D V = 2 D (g - n) + e * xc_num + f * yc_num
    i128 two_dv = i128(2) * D * (i128(eq.g) - eq.n) + i128(eq.e) * xc_num + i128(eq.f) * yc_num;
    bool ok = eq.a > 0 ? two_dv <= 0 : two_dv >= 0;
    rep.solvable = ok;
    if (ok) {
        double xc = static_cast<double>(xc_num) / static_cast<double>(D);
        double yc = static_cast<double>(yc_num) / static_cast<double>(D);
        double vmin = static_cast<double>(two_dv) / (2.0 * static_cast<double>(D));
        double off = eq.a != 0 ? std::sqrt(std::max(0.0, -vmin / static_cast<double>(eq.a))) : 0.0;
        rep.real_witness = std::make_pair(xc + off, yc);
    }
    return rep;
}

// The finite set of possibly-bad places: infinity, 2, primes dividing the
// discriminant, and primes carried by the completed-form invariants
// Q(u0) and Q(u0) - (g - n).
inline std::vector<place> bad_places(const quad_equation& eq) {
    std::set<u64> primes{2};
    auto absorb = [&](i128 value) {
        if (value == 0) return;
        if (value < 0) value = -value;
        if (value > INT64_MAX) fail(errc::overflow, "bad_places invariant too large");
        auto fp = arith::factorize(static_cast<i64>(value));
        for (auto& [p, e] : fp.odd_primes) primes.insert(p);
    };
    absorb(eq.disc);
    i128 D = -i128(eq.disc); // 4ac - b^2, sign irrelevant for prime support
    i128 alpha_num = i128(eq.a) * eq.f * eq.f - i128(eq.b) * eq.e * eq.f + i128(eq.c) * eq.e * eq.e;
    i128 beta_num = alpha_num - D * (i128(eq.g) - eq.n);
    // reduce by gcd with the denominator D before collecting support
    auto reduced = [&](i128 num) -> std::pair<i128, i128> {
        if (num == 0) return {0, 1};
        i128 a = num < 0 ? -num : num, b = D < 0 ? -D : D;
        while (b) { i128 t = a % b; a = b; b = t; }
        return {num / a, D / a};
    };
    auto [an, ad] = reduced(alpha_num);
    absorb(an);
    absorb(ad);
    auto [bn, bd] = reduced(beta_num);
    absorb(bn);
    absorb(bd);

    std::vector<place> out{place::at_infinity()};
    for (u64 p : primes) out.push_back(place::at(p));
    return out;
}

// Reports for infinity and every bad finite place; all other primes are
// certified by smoothness of the conic over Z_p.
inline std::vector<local_report> everywhere_locally_solvable(const quad_equation& eq) {
    std::vector<local_report> out;
    out.push_back(real_solvable(eq));
    for (const place& v : bad_places(eq)) {
        if (v.infinite) continue;
        out.push_back(zp_solvable(eq, v.p));
    }
    return out;
}

inline bool all_solvable(const std::vector<local_report>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const local_report& r) { return r.solvable; });
}

} // namespace diophantus::localsolve
