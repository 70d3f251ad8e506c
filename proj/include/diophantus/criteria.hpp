#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "decision.hpp"
#include "error.hpp"
#include "localsolve.hpp"
#include "oracle.hpp"
#include "pell.hpp"

namespace diophantus::criteria {

using arith::i64;
using arith::u64;

// ---------------------------------------------------------------------------
// Ring class table: d -> monic splitting polynomial of the ring class field.
// ---------------------------------------------------------------------------

struct ring_class_entry {
    u64 d = 0;
    std::vector<i64> poly; // c0 c1 ... ck, monic, degree >= 2
    std::string note;
};

class ring_class_table {
public:
    // Only d = 64 ships by default; other discriminants load from a table file.
    static ring_class_table shipped() {
        ring_class_table t;
        t.insert({64, {-2, 0, 0, 0, 1}, "x^4 - 2"});
        return t;
    }

    // Plain text rows "d c0 c1 ... ck"; '#' starts a comment.
    static ring_class_table parse(std::istream& in) {
        ring_class_table t = shipped();
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream row(line);
            u64 d;
            if (!(row >> d)) continue;
            ring_class_entry entry;
            entry.d = d;
            i64 c;
            while (row >> c) entry.poly.push_back(c);
            t.insert(std::move(entry));
        }
        return t;
    }

    void insert(ring_class_entry entry) {
        if (entry.poly.size() < 3 || entry.poly.back() != 1)
            fail(errc::bad_input, "ring class polynomial must be monic of degree >= 2");
        entries_[entry.d] = std::move(entry);
    }

    const ring_class_entry* find(u64 d) const {
        auto it = entries_.find(d);
        return it == entries_.end() ? nullptr : &it->second;
    }

private:
    std::map<u64, ring_class_entry> entries_;
};

// ---------------------------------------------------------------------------
// x^2 + d y^2 = l for odd primes l
// ---------------------------------------------------------------------------

// Local conditions: l splits in Q(sqrt(-d)), (l/q) = 1 for odd q | d, and the
// 2-adic case list on l mod 4 / mod 8 according to the 2-part of d.
inline bool local_conditions_x2_plus_dy2_prime(u64 d, u64 l) {
    if (d == 0) fail(errc::bad_input, "d must be positive");
    if (!arith::is_prime(l) || l == 2) fail(errc::bad_input, "l must be an odd prime");
    if ((2 * d) % l == 0) fail(errc::bad_input, "l must not divide 2d");
    if (arith::jacobi(-static_cast<i64>(d), l) != 1) return false;
    u64 rest = d;
    while (rest % 2 == 0) rest /= 2;
    auto odd_part = arith::factorize(static_cast<i64>(rest));
    for (auto& [q, e] : odd_part.odd_primes)
        if (arith::jacobi(static_cast<i64>(l), q) != 1) return false;
    if (d % 2 == 1) return l % 4 == 1 || l % 4 == d % 4;
    if (d % 4 == 2) return l % 8 == 1 || l % 8 == (d + 1) % 8;
    if (d % 8 == 4) return l % 4 == 1;
    return l % 8 == 1; // 8 | d
}

// Solvable iff the local conditions hold and l splits completely in the ring
// class field, tested through a root of the tabulated polynomial mod l.
inline decision decide_x2_plus_dy2_prime(u64 d, u64 l, const ring_class_table& table) {
    const ring_class_entry* entry = table.find(d);
    if (!entry) fail(errc::unsupported_discriminant, "no ring class entry for d=" + std::to_string(d));
    if (!local_conditions_x2_plus_dy2_prime(d, l)) {
        // pin the failing place: l itself when l is inert in Q(sqrt(-d)), else 2 or an odd q | d
        if (arith::jacobi(-static_cast<i64>(d), l) != 1)
            return decision::make_locally_unsolvable(place::at(l));
        u64 rest = d;
        while (rest % 2 == 0) rest /= 2;
        auto odd_part = arith::factorize(static_cast<i64>(rest));
        for (auto& [q, e] : odd_part.odd_primes)
            if (arith::jacobi(static_cast<i64>(l), q) != 1)
                return decision::make_locally_unsolvable(place::at(q));
        return decision::make_locally_unsolvable(place::at(2));
    }
    if (!arith::poly_has_root_mod(entry->poly, l))
        return decision::make_unsolvable(certificate{"K_L", -1});
    auto eq = localsolve::quad_equation::make(1, 0, static_cast<i64>(d), 0, 0, 0,
                                              static_cast<i64>(l));
    decision wit = oracle::definite_search(eq);
    if (!wit.solvable()) fail(errc::search_exhausted, "splitting criterion held but no witness found");
    return wit;
}

// ---------------------------------------------------------------------------
// x^2 + 64y^2 + 64y + 16 = n
// ---------------------------------------------------------------------------

inline localsolve::quad_equation gauss64_equation(i64 n) {
    return localsolve::quad_equation::make(1, 0, 64, 0, 64, 16, n);
}

// The closed-form local precondition: p_j = 1 mod 4 for odd e_j, and the
// 2-adic case list on s = v_2(n).
inline std::pair<bool, place> gauss64_local_closed_form_detail(const arith::factor_profile& fp) {
    for (auto& [p, e] : fp.odd_primes)
        if (e % 2 == 1 && p % 4 != 1) return {false, place::at(p)};
    u64 s = fp.s1;
    i64 n = fp.n;
    if (s == 0 && arith::mod_positive(n, 8) == 1) return {true, {}};
    if (s == 2 && arith::mod_positive(n / 4, 8) == 5) return {true, {}};
    if (s == 4 || s == 5) return {true, {}};
    return {false, place::at(2)};
}

inline bool gauss64_local_closed_form(i64 n) {
    if (n <= 0) fail(errc::non_positive, "gauss64 needs n >= 1");
    auto fp = arith::factorize(n);
    return gauss64_local_closed_form_detail(fp).first;
}

inline decision decide_gauss64(i64 n) {
    if (n <= 0) fail(errc::non_positive, "gauss64 needs n >= 1");
    auto fp = arith::classify(arith::factorize(n), arith::family::gauss64);
    auto [local_ok, bad] = gauss64_local_closed_form_detail(fp);
    if (!local_ok) return decision::make_locally_unsolvable(bad);
    if (fp.s1 == 0) {
        bool d1_nonempty = !fp.dset(arith::dclass::d1).empty();
        bool d2_odd = fp.exponent_sum(arith::dclass::d2) % 2 == 1;
        if (!d1_nonempty && !d2_odd) return decision::make_unsolvable(certificate{"K_L", -1});
    }
    decision wit = oracle::definite_search(gauss64_equation(n));
    if (!wit.solvable()) fail(errc::search_exhausted, "gauss64 criterion held but no witness found");
    return wit;
}

// ---------------------------------------------------------------------------
// Epstein-Redei and the d = 2l machinery
// ---------------------------------------------------------------------------

enum class er_verdict { unsolvable, inapplicable };

// l = 1 mod 8 with 2l = r^2 + s^2, s = +-3 mod 8  =>  x^2 - 2l y^2 = -1 has
// no integer solutions. Otherwise no claim.
inline er_verdict epstein_redei(u64 l) {
    if (!arith::is_prime(l)) fail(errc::not_prime, "epstein_redei needs a prime");
    if (l % 8 != 1) return er_verdict::inapplicable;
    auto rs = arith::cornacchia_two_squares(2 * l);
    if (!rs) return er_verdict::inapplicable;
    u64 s8 = rs->second % 8;
    return (s8 == 3 || s8 == 5) ? er_verdict::unsolvable : er_verdict::inapplicable;
}

// Auxiliary data for the quartic extension attached to x^2 - 2l y^2 = n.
struct theta_data_t {
    u64 l = 0;
    std::pair<u64, u64> cornacchia; // 2l = r^2 + s^2
    i64 x0 = 0, y0 = 0, z0 = 0;     // x0^2 - 2l y0^2 = 2 z0^2, positive primitive
    std::array<i64, 5> theta_poly;  // x^4 - 2 x0 x^2 + 2 z0^2
};

struct theta_search_options {
    i64 y_cap = 64;
    i64 x_span = 2'000'000;
};

// Minimal positive primitive solution in the (y0, then x0) search order.
inline theta_data_t theta_data(u64 l, const theta_search_options& opts = {}) {
    if (!arith::is_prime(l)) fail(errc::not_prime, "theta_data needs a prime");
    if (l % 8 != 1) fail(errc::bad_input, "theta_data needs l = 1 mod 8");
    auto rs = arith::cornacchia_two_squares(2 * l);
    if (!rs) fail(errc::search_exhausted, "no two-squares decomposition of 2l");
    theta_data_t out;
    out.l = l;
    out.cornacchia = *rs;
    for (i64 y0 = 1; y0 <= opts.y_cap; ++y0) {
        i64 base = static_cast<i64>(arith::isqrt(2 * l * static_cast<u64>(y0) * y0)) + 1;
        for (i64 x0 = base; x0 <= base + opts.x_span; ++x0) {
            i64 w = x0 * x0 - 2 * static_cast<i64>(l) * y0 * y0;
            if (w <= 0 || w % 2 != 0) continue;
            auto z = arith::square_root_exact(static_cast<u64>(w / 2));
            if (!z || *z == 0) continue;
            i64 z0 = static_cast<i64>(*z);
            if (std::gcd(std::gcd(x0, y0), z0) != 1) continue;
            out.x0 = x0;
            out.y0 = y0;
            out.z0 = z0;
            out.theta_poly = {2 * z0 * z0, 0, -2 * x0, 0, 1};
            return out;
        }
    }
    fail(errc::search_exhausted, "no primitive solution of x^2 - 2l y^2 = 2 z^2 in bounds");
}

// ---------------------------------------------------------------------------
// x^2 - 34 y^2 = n
// ---------------------------------------------------------------------------

struct d34_analysis {
    arith::factor_profile fp; // classified for the d34 family
    bool locally_solvable = false;
    place failing_place;
    bool character_condition = false;
};

namespace detail {

inline u64 s17_exponent(const arith::factor_profile& fp) {
    auto it = fp.special.find(17);
    return it == fp.special.end() ? 0 : it->second;
}

// condition (2): D1 nonempty, or the D4 exponent-sum parity matching the
// n1 mod 16 case table against `target_base` (s2 for d34, 0 for the multinorm).
inline bool parity_condition(const arith::factor_profile& fp, u64 target_base) {
    if (!fp.dset(arith::dclass::d1).empty()) return true;
    u64 sum4 = fp.exponent_sum(arith::dclass::d4);
    u64 n1m = arith::mod_positive(fp.n1, 16);
    u64 want;
    if (n1m == 1 || n1m == 7) want = target_base % 2;        // n1 = 1, -9 mod 16
    else if (n1m == 15 || n1m == 9) want = (target_base + 1) % 2; // n1 = -1, 9 mod 16
    else fail(errc::bad_input, "parity table needs n1 = +-1 mod 8");
    return sum4 % 2 == want;
}

} // namespace detail

inline d34_analysis analyze_d34(i64 n) {
    if (n == 0) fail(errc::zero_input, "decide_d34(0)");
    d34_analysis out;
    out.fp = arith::classify(arith::factorize(n), arith::family::d34);
    const auto& fp = out.fp;
    u64 n1m8 = arith::mod_positive(fp.n1, 8);
    if (n1m8 != 1 && n1m8 != 7) {
        out.failing_place = place::at(2);
        return out;
    }
    if (arith::jacobi(fp.n1, 17) != 1) {
        out.failing_place = place::at(17);
        return out;
    }
    for (auto& [p, e] : fp.odd_primes) {
        if (e % 2 == 1 && arith::jacobi(34, p) != 1) {
            out.failing_place = place::at(p);
            return out;
        }
    }
    out.locally_solvable = true;
    out.character_condition = detail::parity_condition(fp, detail::s17_exponent(fp));
    return out;
}

inline decision decide_d34(i64 n) {
    d34_analysis an = analyze_d34(n);
    if (!an.locally_solvable) return decision::make_locally_unsolvable(an.failing_place);
    if (!an.character_condition) return decision::make_unsolvable(certificate{"Theta", -1});
    decision wit = pell::represent(34, n);
    if (!wit.solvable()) fail(errc::search_exhausted, "d34 criterion held but no witness found");
    return wit;
}

// ---------------------------------------------------------------------------
// Character profile for x^2 - 34 y^2 = n (proof tables of the d34 criterion)
// ---------------------------------------------------------------------------

struct character_entry {
    place v;
    std::string character; // "H" or "Theta"
    int value = 1;
    bool free_sign = false;
    std::optional<u64> exponent; // the a_i on D1 entries
};

struct character_profile {
    std::vector<character_entry> entries;
    bool combinable = false;
};

// Local contributions of psi_{H/E} and psi_{Theta/E} per place. D1 places get
// a free sign (two Hensel branches); combinable asks whether some assignment
// trivializes both characters.
inline character_profile character_profile_d34(i64 n,
                                               const std::map<u64, u64>& local_choice = {}) {
    d34_analysis an = analyze_d34(n);
    if (!an.locally_solvable)
        fail(errc::locally_unsolvable,
             "no local points at place " + an.failing_place.str());
    const auto& fp = an.fp;
    character_profile out;

    int h_product = 1;
    int theta_fixed = 1;
    u64 free_count = 0;

    for (auto& [p, e] : fp.odd_primes) {
        switch (fp.classes.at(p)) {
        case arith::dclass::d1: {
            int hv = e % 2 == 1 ? -1 : 1;
            out.entries.push_back({place::at(p), "H", hv, false, std::nullopt});
            h_product *= hv;
            u64 a = 0;
            if (auto it = local_choice.find(p); it != local_choice.end()) a = it->second % 2;
            out.entries.push_back({place::at(p), "Theta", a ? -1 : 1, true, a});
            ++free_count;
            break;
        }
        case arith::dclass::d2: {
            int tv = (e / 2) % 2 == 1 ? arith::jacobi(2, p) : 1;
            out.entries.push_back({place::at(p), "Theta", tv, false, std::nullopt});
            theta_fixed *= tv;
            break;
        }
        case arith::dclass::d3:
            out.entries.push_back({place::at(p), "Theta", 1, false, std::nullopt});
            break;
        case arith::dclass::d4: {
            int tv = e % 2 == 1 ? -1 : 1;
            out.entries.push_back({place::at(p), "Theta", tv, false, std::nullopt});
            theta_fixed *= tv;
            break;
        }
        case arith::dclass::unclassified:
            break;
        }
    }
    u64 s2 = detail::s17_exponent(fp);
    if (s2 > 0) {
        int tv = s2 % 2 == 1 ? -1 : 1;
        out.entries.push_back({place::at(17), "Theta", tv, false, std::nullopt});
        theta_fixed *= tv;
    }
    // dyadic entry: sign from the n1 mod 16 case, times the D2 product
    {
        int tv = 1;
        for (auto& [p, e] : fp.odd_primes)
            if (fp.classes.at(p) == arith::dclass::d2 && (e / 2) % 2 == 1)
                tv *= arith::jacobi(2, p);
        u64 n1m = arith::mod_positive(fp.n1, 16);
        if (n1m == 15 || n1m == 9) tv = -tv; // n1 = -1, 9 mod 16
        out.entries.push_back({place::at(2), "Theta", tv, false, std::nullopt});
        theta_fixed *= tv;
    }

    // exhaustive sign assignment over the free (D1) entries
    if (free_count > 30) fail(errc::bad_input, "too many free signs");
    out.combinable = false;
    for (u64 mask = 0; mask < (u64(1) << free_count); ++mask) {
        int theta = theta_fixed;
        for (u64 bit = 0; bit < free_count; ++bit)
            if ((mask >> bit) & 1) theta = -theta;
        if (h_product == 1 && theta == 1) {
            out.combinable = true;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// n = N_{E/Q}(o_E) for E = Q(sqrt5, sqrt34)
// ---------------------------------------------------------------------------

struct multinorm_options {
    i64 witness_bound = 0; // 0 = decide only, no witness search
};

inline decision decide_multinorm_5_34(i64 n, const multinorm_options& opts = {}) {
    if (n == 0) fail(errc::zero_input, "decide_multinorm_5_34(0)");
    auto fp = arith::classify(arith::factorize(n), arith::family::multinorm534);
    if (auto it = fp.odd_primes.find(5); it != fp.odd_primes.end() && it->second % 2 == 1)
        fail(errc::bad_input, "5 | n with odd exponent: the ramified case is undecided");

    u64 s2 = detail::s17_exponent(fp);
    if (fp.s1 % 2 != 0) return decision::make_locally_unsolvable(place::at(2));
    if (s2 % 2 != 0) return decision::make_locally_unsolvable(place::at(17));
    u64 n1m8 = arith::mod_positive(fp.n1, 8);
    if (n1m8 != 1 && n1m8 != 7) return decision::make_locally_unsolvable(place::at(2));
    if (arith::jacobi(fp.n1, 17) != 1) return decision::make_locally_unsolvable(place::at(17));
    for (auto& [p, e] : fp.odd_primes) {
        if (e % 2 == 1 && (arith::jacobi(34, p) != 1 || arith::jacobi(5, p) != 1))
            return decision::make_locally_unsolvable(place::at(p));
    }
    if (!detail::parity_condition(fp, 0)) return decision::make_unsolvable(certificate{"Theta", -1});
    if (opts.witness_bound > 0) {
        decision search = oracle::norm_form_search(oracle::default_basis(), n,
                                                   {opts.witness_bound});
        if (search.solvable()) return search;
    }
    return decision::make_solvable();
}

// ---------------------------------------------------------------------------
// Applicability of the plain ring-class (Gauss) route for x^2 - d y^2
// ---------------------------------------------------------------------------

enum class gauss_route { via_negative_pell, via_local_failure, not_applicable };

struct gauss_applicability {
    gauss_route route = gauss_route::not_applicable;
    std::optional<place> failure;
};

inline gauss_applicability gauss_method_applicable(u64 d) {
    if (d < 2 || arith::square_root_exact(d)) fail(errc::square_input, "d must be a nonsquare >= 2");
    if (pell::negative_pell_solvable(d)) return {gauss_route::via_negative_pell, std::nullopt};
    auto eq = localsolve::quad_equation::make(1, 0, -static_cast<i64>(d), 0, 0, 0, -1);
    for (const place& v : localsolve::bad_places(eq)) {
        if (v.infinite) continue; // indefinite form, fine at infinity
        if (!localsolve::zp_solvable(eq, v.p).solvable)
            return {gauss_route::via_local_failure, v};
    }
    return {gauss_route::not_applicable, std::nullopt};
}

} // namespace diophantus::criteria
