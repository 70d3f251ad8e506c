#pragma once

// Independent reference decision for Z_p points on affine conics, shared by
// the localsolve tests and the acceptance harness.
//
// Core fact: with X = F_x, Y = disc*y - (2af - be) one has the identity
//   4a*disc*F = disc*X^2 - Y^2 + C,  C = (2af - be)^2 + disc*(4a*(g-n) - e^2),
// so at any residue solution mod p^k, min(k, 2*min(v(F_x), v(F_y))) <= v_p(C).
// Hence for C != 0 a residue solution mod p^(v_p(C)+1) Hensel-lifts, and the
// plain residue search at that depth decides Z_p solvability exactly. The
// degenerate shapes (C = 0 for both completions) reduce to lines, a lattice
// point, or a bilinear splitting, each decided in closed form.

#include <algorithm>
#include <optional>

#include "diophantus/arith.hpp"
#include "diophantus/localsolve.hpp"

namespace zpref {

using diophantus::arith::i128;
using diophantus::arith::i64;
using diophantus::arith::u128;
using diophantus::arith::u64;
using diophantus::localsolve::quad_equation;
namespace arith = diophantus::arith;

struct residue_searcher {
    const quad_equation& eq;
    u64 p;
    unsigned depth;

    u64 value(u64 x, u64 y, u64 m) const {
        auto mm = [&](i64 c) { return arith::mod_positive(c, m); };
        u64 v = arith::mulmod(mm(eq.a), arith::mulmod(x, x, m), m);
        v = (v + arith::mulmod(mm(eq.b), arith::mulmod(x, y, m), m)) % m;
        v = (v + arith::mulmod(mm(eq.c), arith::mulmod(y, y, m), m)) % m;
        v = (v + arith::mulmod(mm(eq.e), x, m)) % m;
        v = (v + arith::mulmod(mm(eq.f), y, m)) % m;
        v = (v + mm(eq.g) + (m - mm(eq.n))) % m;
        return v;
    }
    bool extend(u64 x, u64 y, unsigned j, u64 m) const {
        if (j == depth) return true;
        u64 next_m = m * p;
        for (u64 s = 0; s < p; ++s)
            for (u64 t = 0; t < p; ++t) {
                u64 nx = x + s * m, ny = y + t * m;
                if (value(nx, ny, next_m) == 0 && extend(nx, ny, j + 1, next_m)) return true;
            }
        return false;
    }
    bool exists() const {
        for (u64 x = 0; x < p; ++x)
            for (u64 y = 0; y < p; ++y)
                if (value(x, y, p) == 0 && extend(x, y, 1, p)) return true;
        return false;
    }
};

inline unsigned val_or(i128 v, u64 p, unsigned infinite) {
    if (v == 0) return infinite;
    if (v < 0) v = -v;
    unsigned k = 0;
    while (v % p == 0) { v /= p; ++k; }
    return k;
}

// p-adic unit square root to precision m = p^k (input u a unit square mod p,
// and = 1 mod 8 when p = 2)
inline u64 unit_sqrt_mod_pk(u64 u, u64 p, u64 m) {
    if (p == 2) {
        u64 r = 1, pk = 8;
        while (pk < m) {
            u64 next = pk * 2;
            u64 rr = arith::mulmod(r, r, next * 2);
            if ((rr % next) != (u % next)) r += pk / 2;
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

// is v a square in Q_p? (v != 0)
inline bool square_in_qp(i64 v, u64 p) {
    unsigned w = val_or(v, p, 0);
    if (w % 2 == 1) return false;
    i64 u = v;
    for (unsigned i = 0; i < w; ++i) u /= static_cast<i64>(p);
    if (p == 2) return arith::mod_positive(u, 8) == 1;
    return arith::jacobi(u, p) == 1;
}

// exact Z_p decision; valid for coefficient sizes where the involved
// valuations stay below the u64 precision window (ample for |coeff| <= 10^6)
inline bool zp_solvable_reference(const quad_equation& eq, u64 p) {
    i128 g0 = i128(eq.g) - eq.n;
    i128 ca = (i128(2) * eq.a * eq.f - i128(eq.b) * eq.e) *
                  (i128(2) * eq.a * eq.f - i128(eq.b) * eq.e) +
              i128(eq.disc) * (i128(4) * eq.a * g0 - i128(eq.e) * eq.e);
    i128 cc = (i128(2) * eq.c * eq.e - i128(eq.b) * eq.f) *
                  (i128(2) * eq.c * eq.e - i128(eq.b) * eq.f) +
              i128(eq.disc) * (i128(4) * eq.c * g0 - i128(eq.f) * eq.f);
    if (ca != 0 || cc != 0) {
        unsigned K = 200;
        if (ca != 0) K = std::min(K, val_or(ca, p, 200) + 1);
        if (cc != 0) K = std::min(K, val_or(cc, p, 200) + 1);
        K = std::max(K, 6u); // never search shallower than the stated mod p^6
        return residue_searcher{eq, p, K}.exists();
    }
    if (eq.a == 0 && eq.c == 0) {
        // bilinear: b F = (bx + f)(by + e) - (ef - b(g-n))
        unsigned vb = val_or(eq.b, p, 200);
        i128 M = i128(eq.e) * eq.f - i128(eq.b) * g0;
        if (M == 0) return val_or(eq.f, p, 200) >= vb || val_or(eq.e, p, 200) >= vb;
        unsigned K = val_or(M, p, 200) + 2 * vb + 1;
        return residue_searcher{eq, p, std::max(K, 6u)}.exists();
    }
    if (eq.a == 0) {
        // symmetric completion: swap the roles of x and y
        auto swapped = quad_equation::make(eq.c, eq.b, eq.a, eq.f, eq.e, eq.g, eq.n);
        return zp_solvable_reference(swapped, p);
    }
    // degenerate conic (C = 0, a != 0): disc X^2 = Y^2
    if (!square_in_qp(eq.disc, p)) {
        // only the center; solvable iff it is p-integral
        i128 D = i128(4) * eq.a * eq.c - i128(eq.b) * eq.b;
        i128 xc_num = i128(eq.b) * eq.f - i128(2) * eq.c * eq.e;
        i128 yc_num = i128(eq.b) * eq.e - i128(2) * eq.a * eq.f;
        unsigned vd = val_or(D, p, 200);
        return val_or(xc_num, p, 200) >= vd && val_or(yc_num, p, 200) >= vd;
    }
    // two lines sigma X = +- Y with sigma = sqrt(disc) in Z_p
    unsigned w = val_or(eq.disc, p, 0);
    i64 unit = eq.disc;
    for (unsigned i = 0; i < w; ++i) unit /= static_cast<i64>(p);
    u64 m = 1;
    unsigned prec = 0;
    while (m < (u64(1) << 58) / p) { m *= p; ++prec; }
    u64 sigma = unit_sqrt_mod_pk(arith::mod_positive(unit, m), p, m);
    for (unsigned i = 0; i < w / 2; ++i) sigma = arith::mulmod(sigma, p, m);
    auto vm = [&](u64 v) { return val_or(static_cast<i128>(v), p, prec); };
    for (int sign : {1, -1}) {
        // 2a sigma x + (b sigma - sign*disc) y + (e sigma + sign*(2af - be)) = 0
        u64 A = arith::mulmod(arith::mod_positive(2 * eq.a, m), sigma, m);
        u64 B = (arith::mulmod(arith::mod_positive(eq.b, m), sigma, m) +
                 arith::mod_positive(-sign * eq.disc, m)) % m;
        u64 C = (arith::mulmod(arith::mod_positive(eq.e, m), sigma, m) +
                 arith::mod_positive(sign * (2 * eq.a * eq.f - eq.b * eq.e), m)) % m;
        if (std::min(vm(A), vm(B)) <= vm(C)) return true;
    }
    return false;
}

} // namespace zpref
