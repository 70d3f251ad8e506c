#pragma once

#include <stdexcept>
#include <string>

namespace diophantus {

enum class errc {
    zero_input,
    non_positive,
    factorization_incomplete,
    even_modulus,
    composite_modulus,
    bad_input,
    unknown_family,
    square_input,
    no_witness,
    zero_argument,
    degenerate_discriminant,
    not_prime,
    search_exhausted,
    locally_unsolvable,
    unsupported_discriminant,
    indefinite_form,
    bad_basis,
    overflow,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::zero_input: return "ZeroInput";
    case errc::non_positive: return "NonPositive";
    case errc::factorization_incomplete: return "FactorizationIncomplete";
    case errc::even_modulus: return "EvenModulus";
    case errc::composite_modulus: return "CompositeModulus";
    case errc::bad_input: return "BadInput";
    case errc::unknown_family: return "UnknownFamily";
    case errc::square_input: return "SquareInput";
    case errc::no_witness: return "NoWitness";
    case errc::zero_argument: return "ZeroArgument";
    case errc::degenerate_discriminant: return "DegenerateDiscriminant";
    case errc::not_prime: return "NotPrime";
    case errc::search_exhausted: return "SearchExhausted";
    case errc::locally_unsolvable: return "LocallyUnsolvable";
    case errc::unsupported_discriminant: return "UnsupportedDiscriminant";
    case errc::indefinite_form: return "IndefiniteForm";
    case errc::bad_basis: return "BadBasis";
    case errc::overflow: return "Overflow";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace diophantus
