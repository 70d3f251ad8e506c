#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace diophantus {

// A place of Q: a finite prime or the archimedean place.
struct place {
    bool infinite = false;
    std::uint64_t p = 0;

    static place at_infinity() { return {true, 0}; }
    static place at(std::uint64_t prime) { return {false, prime}; }

    friend bool operator==(const place& a, const place& b) {
        return a.infinite == b.infinite && (a.infinite || a.p == b.p);
    }
    friend bool operator<(const place& a, const place& b) {
        if (a.infinite != b.infinite) return b.infinite; // finite places first
        return a.p < b.p;
    }
    std::string str() const { return infinite ? "inf" : std::to_string(p); }
};

enum class status {
    solvable,
    unsolvable,
    locally_unsolvable,
    unknown_witness,
};

inline const char* status_name(status s) {
    switch (s) {
    case status::solvable: return "solvable";
    case status::unsolvable: return "unsolvable";
    case status::locally_unsolvable: return "locally_unsolvable";
    case status::unknown_witness: return "unknown_witness";
    }
    return "?";
}

// Obstruction record: which character rules the equation out, and its value.
struct certificate {
    std::string character; // "H", "Theta" or "K_L"
    int value = 1;
};

struct decision {
    status verdict = status::unsolvable;
    std::optional<std::vector<std::int64_t>> witness;
    std::optional<certificate> obstruction;
    std::optional<place> failing_place; // set for locally_unsolvable

    bool solvable() const { return verdict == status::solvable; }

    static decision make_solvable(std::vector<std::int64_t> w) {
        decision d;
        d.verdict = status::solvable;
        d.witness = std::move(w);
        return d;
    }
    static decision make_solvable() {
        decision d;
        d.verdict = status::solvable;
        return d;
    }
    static decision make_unsolvable() { return decision{}; }
    static decision make_unsolvable(certificate c) {
        decision d;
        d.obstruction = std::move(c);
        return d;
    }
    static decision make_locally_unsolvable(place v) {
        decision d;
        d.verdict = status::locally_unsolvable;
        d.failing_place = v;
        return d;
    }
    static decision make_unknown() {
        decision d;
        d.verdict = status::unknown_witness;
        return d;
    }
};

} // namespace diophantus
