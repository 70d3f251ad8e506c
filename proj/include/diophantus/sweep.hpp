#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "criteria.hpp"
#include "oracle.hpp"
#include "pell.hpp"

namespace diophantus::oracle {

struct sweep_report {
    std::uint64_t tested = 0;
    std::uint64_t skipped = 0; // per-element rejections (excluded inputs)
    std::uint64_t mismatches = 0;
    std::string first_mismatch; // empty on success
};

struct sweep_options {
    u64 d = 64;       // auxiliary parameter (x2dy2prime discriminant, split k)
    i64 oracle_bound = 10'000; // bounded-search oracles
    unsigned jobs = 1;
    criteria::ring_class_table table = criteria::ring_class_table::shipped();
};

enum class sweep_family { gauss64, d34, multinorm534, x2dy2prime, negpell, split };

inline std::optional<sweep_family> sweep_family_from_name(std::string_view s) {
    if (s == "gauss64") return sweep_family::gauss64;
    if (s == "d34") return sweep_family::d34;
    if (s == "multinorm534") return sweep_family::multinorm534;
    if (s == "x2dy2prime") return sweep_family::x2dy2prime;
    if (s == "negpell") return sweep_family::negpell;
    if (s == "split") return sweep_family::split;
    return std::nullopt;
}

namespace detail {

// one item; returns 0 = agree, 1 = mismatch (description set), 2 = skipped
inline int sweep_item(sweep_family fam, i64 n, const sweep_options& opts, std::string& desc) {
    switch (fam) {
    case sweep_family::gauss64: {
        if (n < 1) return 2;
        bool lhs = criteria::decide_gauss64(n).solvable();
        bool rhs = definite_search(criteria::gauss64_equation(n)).solvable();
        if (lhs == rhs) return 0;
        desc = "gauss64 n=" + std::to_string(n) + " criterion=" + (lhs ? "solvable" : "unsolvable");
        return 1;
    }
    case sweep_family::d34: {
        if (n == 0) return 2;
        bool lhs = criteria::decide_d34(n).solvable();
        bool rhs = pell::represent(34, n).solvable();
        if (lhs == rhs) return 0;
        desc = "d34 n=" + std::to_string(n) + " criterion=" + (lhs ? "solvable" : "unsolvable");
        return 1;
    }
    case sweep_family::multinorm534: {
        if (n == 0) return 2;
        decision lhs;
        try {
            lhs = criteria::decide_multinorm_5_34(n);
        } catch (const error& err) {
            if (err.code() == errc::bad_input) return 2; // 5 | n with odd exponent
            throw;
        }
        // one-sided: a found witness must be matched by a solvable verdict
        decision rhs = norm_form_search(default_basis(), n, {std::min<i64>(opts.oracle_bound, 12)});
        if (rhs.solvable() && !lhs.solvable()) {
            desc = "multinorm n=" + std::to_string(n) + " witness found but criterion unsolvable";
            return 1;
        }
        return 0;
    }
    case sweep_family::x2dy2prime: {
        if (n < 3 || !arith::is_prime(static_cast<u64>(n))) return 2;
        u64 l = static_cast<u64>(n);
        if ((2 * opts.d) % l == 0) return 2;
        bool lhs = criteria::decide_x2_plus_dy2_prime(opts.d, l, opts.table).solvable();
        auto eq = localsolve::quad_equation::make(1, 0, static_cast<i64>(opts.d), 0, 0, 0, n);
        bool rhs = definite_search(eq).solvable();
        if (lhs == rhs) return 0;
        desc = "x2dy2prime d=" + std::to_string(opts.d) + " l=" + std::to_string(n) +
               " criterion=" + (lhs ? "solvable" : "unsolvable");
        return 1;
    }
    case sweep_family::negpell: {
        if (n < 2 || arith::square_root_exact(static_cast<u64>(n))) return 2;
        u64 d = static_cast<u64>(n);
        bool lhs = pell::negative_pell_solvable(d);
        if (lhs) {
            auto wit = pell::negative_pell_witness(d);
            if (!wit) { desc = "negpell d=" + std::to_string(n) + " missing witness"; return 1; }
            return 0; // witness already verified exactly inside analyze()
        }
        // bounded converse check: no small witness may exist
        for (i64 y = 1; y <= opts.oracle_bound; ++y) {
            arith::i128 r = arith::i128(d) * y * y - 1;
            if (r < 0) continue;
            u64 x = arith::isqrt(static_cast<u64>(r > INT64_MAX ? 0 : r));
            if (r <= INT64_MAX && arith::i128(x) * x == r) {
                desc = "negpell d=" + std::to_string(n) + " criterion says unsolvable, witness y=" +
                       std::to_string(y);
                return 1;
            }
        }
        return 0;
    }
    case sweep_family::split: {
        if (n == 0) return 2;
        bool lhs = split_form_decide(opts.d, n).solvable();
        if (opts.d == 1) { // closed form: solvable iff n != 2 mod 4
            bool rhs = arith::mod_positive(n, 4) != 2;
            if (lhs == rhs) return 0;
            desc = "split k=1 n=" + std::to_string(n);
            return 1;
        }
        for (i64 y = 0; y <= opts.oracle_bound; ++y) { // bounded one-sided converse
            arith::i128 r = arith::i128(n) + arith::i128(opts.d) * opts.d * y * y;
            if (r < 0 || r > INT64_MAX) continue;
            u64 x = arith::isqrt(static_cast<u64>(r));
            if (arith::i128(x) * x == r && !lhs) {
                desc = "split k=" + std::to_string(opts.d) + " n=" + std::to_string(n);
                return 1;
            }
        }
        return 0;
    }
    }
    return 2;
}

} // namespace detail

// Run criterion vs oracle over [lo, hi]; deterministic aggregation (first
// mismatch = smallest n) regardless of the worker count.
inline sweep_report consistency_sweep(sweep_family fam, i64 lo, i64 hi,
                                      const sweep_options& opts = {}) {
    sweep_report rep;
    if (lo > hi) return rep;
    unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        for (i64 n = lo; n <= hi; ++n) {
            std::string desc;
            int r = detail::sweep_item(fam, n, opts, desc);
            if (r == 2) { ++rep.skipped; continue; }
            ++rep.tested;
            if (r == 1) {
                ++rep.mismatches;
                if (rep.first_mismatch.empty()) rep.first_mismatch = desc;
            }
        }
        return rep;
    }
    std::vector<sweep_report> parts(jobs);
    std::vector<i64> first_bad(jobs, INT64_MAX);
    std::vector<std::string> first_desc(jobs);
    std::vector<std::thread> threads;
    std::atomic<i64> cursor{lo};
    constexpr i64 chunk = 256;
    for (unsigned w = 0; w < jobs; ++w) {
        threads.emplace_back([&, w] {
            for (;;) {
                i64 start = cursor.fetch_add(chunk);
                if (start > hi) break;
                i64 end = std::min(hi, start + chunk - 1);
                for (i64 n = start; n <= end; ++n) {
                    std::string desc;
                    int r = detail::sweep_item(fam, n, opts, desc);
                    if (r == 2) { ++parts[w].skipped; continue; }
                    ++parts[w].tested;
                    if (r == 1) {
                        ++parts[w].mismatches;
                        if (n < first_bad[w]) { first_bad[w] = n; first_desc[w] = desc; }
                    }
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    i64 best = INT64_MAX;
    for (unsigned w = 0; w < jobs; ++w) {
        rep.tested += parts[w].tested;
        rep.skipped += parts[w].skipped;
        rep.mismatches += parts[w].mismatches;
        if (first_bad[w] < best) { best = first_bad[w]; rep.first_mismatch = first_desc[w]; }
    }
    return rep;
}

} // namespace diophantus::oracle
