// diophantus: decide integral solvability of binary quadratic and multi-norm
// Diophantine equations; verify the criteria against independent oracles.
//
// Output is one JSON record per line; exit codes: 0 solvable, 1 unsolvable,
// 2 unknown witness, 64 usage, 65 precision exhaustion, 70 other error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "diophantus/arith.hpp"
#include "diophantus/criteria.hpp"
#include "diophantus/decision.hpp"
#include "diophantus/localsolve.hpp"
#include "diophantus/pell.hpp"
#include "diophantus/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace diophantus;
using arith::i64;
using arith::u64;

namespace {

class stopwatch {
public:
    stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

int exit_code_for(status s) {
    switch (s) {
    case status::solvable: return 0;
    case status::unsolvable:
    case status::locally_unsolvable: return 1;
    case status::unknown_witness: return 2;
    }
    return 70;
}

json decision_fields(const decision& dec) {
    json j;
    j["status"] = status_name(dec.verdict);
    if (dec.witness) j["witness"] = *dec.witness;
    if (dec.obstruction)
        j["certificate"] = {{"character", dec.obstruction->character},
                            {"value", dec.obstruction->value}};
    if (dec.failing_place) j["place"] = dec.failing_place->str();
    return j;
}

criteria::ring_class_table load_table(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("DIOPHANTUS_TABLE")) path = env;
    }
    if (path.empty()) return criteria::ring_class_table::shipped();
    std::ifstream in(path);
    if (!in) fail(errc::bad_input, "cannot open ring class table: " + path);
    return criteria::ring_class_table::parse(in);
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

struct decide_args {
    std::string family;
    i64 n = 0;
    bool n_set = false;
    i64 d = 0;
    bool d_set = false;
    std::string table_path;
    i64 witness_bound = 10;
};

int run_decide(const decide_args& args) {
    stopwatch timer;
    std::ostringstream cmd;
    cmd << "decide --family " << args.family;
    if (args.n_set) cmd << " --n " << args.n;
    if (args.d_set) cmd << " --d " << args.d;

    decision dec;
    json extra = json::object();
    if (args.family == "gauss64") {
        dec = criteria::decide_gauss64(args.n);
    } else if (args.family == "d34") {
        dec = criteria::decide_d34(args.n);
    } else if (args.family == "multinorm534") {
        dec = criteria::decide_multinorm_5_34(args.n, {args.witness_bound});
    } else if (args.family == "x2dy2prime") {
        if (!args.d_set) fail(errc::bad_input, "x2dy2prime needs --d");
        dec = criteria::decide_x2_plus_dy2_prime(static_cast<u64>(args.d),
                                                 static_cast<u64>(args.n),
                                                 load_table(args.table_path));
    } else if (args.family == "negpell") {
        if (!args.d_set) fail(errc::bad_input, "negpell needs --d");
        u64 d = static_cast<u64>(args.d);
        auto wit = pell::negative_pell_witness(d);
        if (wit) {
            dec.verdict = status::solvable;
            if (wit->first.fits_int64() && wit->second.fits_int64())
                dec.witness = {{wit->first.to_int64(), wit->second.to_int64()}};
            else
                extra["witness_big"] = {wit->first.to_string(), wit->second.to_string()};
        } else {
            dec = decision::make_unsolvable();
            if (d % 2 == 0 && arith::is_prime(d / 2) &&
                criteria::epstein_redei(d / 2) == criteria::er_verdict::unsolvable)
                dec.obstruction = certificate{"Theta", -1};
        }
    } else if (args.family == "split") {
        if (!args.d_set) fail(errc::bad_input, "split needs --d (the k of x^2 - k^2 y^2)");
        dec = oracle::split_form_decide(static_cast<u64>(args.d), args.n);
    } else {
        fail(errc::unknown_family, args.family);
    }

    json j;
    j["cmd"] = cmd.str();
    j["family"] = args.family;
    if (args.n_set) j["n"] = args.n;
    if (args.d_set) j["d"] = args.d;
    j.update(decision_fields(dec));
    j.update(extra);
    j["elapsed_ms"] = timer.ms();
    emit(j);
    return exit_code_for(dec.verdict);
}

struct verify_args {
    std::string family;
    std::string range;
    std::string oracle = "auto";
    i64 d = 64;
    bool d_set = false;
    unsigned jobs = 1;
    std::string table_path;
};

int run_verify(const verify_args& args) {
    stopwatch timer;
    auto fam = oracle::sweep_family_from_name(args.family);
    if (!fam) fail(errc::unknown_family, args.family);
    i64 lo = 0, hi = 0;
    {
        auto colon = args.range.find(':');
        if (colon == std::string::npos) fail(errc::bad_input, "range must be lo:hi");
        lo = std::stoll(args.range.substr(0, colon));
        hi = std::stoll(args.range.substr(colon + 1));
    }
    oracle::sweep_options opts;
    opts.jobs = args.jobs;
    if (args.d_set) opts.d = static_cast<u64>(args.d);
    if (fam == oracle::sweep_family::split && !args.d_set) opts.d = 1;
    if (!args.table_path.empty() || std::getenv("DIOPHANTUS_TABLE"))
        opts.table = load_table(args.table_path);
    auto rep = oracle::consistency_sweep(*fam, lo, hi, opts);

    std::ostringstream cmd;
    cmd << "verify --family " << args.family << " --range " << args.range;
    if (args.d_set) cmd << " --d " << args.d;
    json j;
    j["cmd"] = cmd.str();
    j["family"] = args.family;
    j["range"] = {lo, hi};
    j["oracle"] = args.oracle;
    j["tested"] = rep.tested;
    j["skipped"] = rep.skipped;
    j["mismatches"] = rep.mismatches;
    if (!rep.first_mismatch.empty()) j["first_mismatch"] = rep.first_mismatch;
    j["elapsed_ms"] = timer.ms();
    emit(j);
    return rep.mismatches == 0 ? 0 : 1;
}

struct profile_args {
    std::string family = "d34";
    i64 n = 0;
};

int run_profile(const profile_args& args) {
    stopwatch timer;
    if (args.family != "d34") fail(errc::unknown_family, "profile supports family d34");
    std::ostringstream cmd;
    cmd << "profile --family d34 --n " << args.n;
    try {
        auto prof = criteria::character_profile_d34(args.n);
        for (const auto& entry : prof.entries) {
            json j;
            j["cmd"] = cmd.str();
            j["family"] = "d34";
            j["n"] = args.n;
            j["record"] = "entry";
            j["place"] = entry.v.str();
            j["character"] = entry.character;
            j["value"] = entry.value;
            j["free_sign"] = entry.free_sign;
            if (entry.exponent) j["a"] = *entry.exponent;
            emit(j);
        }
        json j;
        j["cmd"] = cmd.str();
        j["family"] = "d34";
        j["n"] = args.n;
        j["record"] = "summary";
        j["combinable"] = prof.combinable;
        j["status"] = prof.combinable ? "solvable" : "unsolvable";
        j["elapsed_ms"] = timer.ms();
        emit(j);
        return prof.combinable ? 0 : 1;
    } catch (const error& err) {
        if (err.code() != errc::locally_unsolvable) throw;
        json j;
        j["cmd"] = cmd.str();
        j["family"] = "d34";
        j["n"] = args.n;
        j["record"] = "summary";
        j["status"] = "locally_unsolvable";
        j["elapsed_ms"] = timer.ms();
        emit(j);
        return 1;
    }
}

struct local_args {
    std::string eq;
    i64 n = 0;
};

int run_local(const local_args& args) {
    stopwatch timer;
    i64 c[6] = {0, 0, 0, 0, 0, 0};
    {
        std::istringstream in(args.eq);
        std::string tok;
        int i = 0;
        while (std::getline(in, tok, ',') && i < 6) c[i++] = std::stoll(tok);
        if (i != 6) fail(errc::bad_input, "--eq needs 6 comma-separated coefficients a,b,c,e,f,g");
    }
    auto eq = localsolve::quad_equation::make(c[0], c[1], c[2], c[3], c[4], c[5], args.n);
    auto reports = localsolve::everywhere_locally_solvable(eq);
    std::ostringstream cmd;
    cmd << "local --eq " << args.eq << " --n " << args.n;
    bool all = true;
    for (const auto& rep : reports) {
        json j;
        j["cmd"] = cmd.str();
        j["family"] = "local";
        j["n"] = args.n;
        j["place"] = rep.v.str();
        j["solvable"] = rep.solvable;
        j["witness_precision"] = rep.witness_precision;
        if (rep.witness) j["witness"] = {rep.witness->first, rep.witness->second};
        if (rep.real_witness) j["real_witness"] = {rep.real_witness->first, rep.real_witness->second};
        emit(j);
        all = all && rep.solvable;
    }
    json j;
    j["cmd"] = cmd.str();
    j["family"] = "local";
    j["n"] = args.n;
    j["record"] = "summary";
    j["status"] = all ? "solvable" : "locally_unsolvable";
    j["elapsed_ms"] = timer.ms();
    emit(j);
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solvers for binary quadratic and multi-norm Diophantine equations"};
    app.require_subcommand(1);

    decide_args dargs;
    auto* decide = app.add_subcommand("decide", "decide one equation");
    decide->add_option("--family", dargs.family, "gauss64|d34|multinorm534|x2dy2prime|negpell|split")
        ->required();
    auto* dn = decide->add_option("--n", dargs.n, "right-hand side");
    auto* dd = decide->add_option("--d", dargs.d, "family parameter (d or k)");
    decide->add_option("--table", dargs.table_path, "ring class table path");
    decide->add_option("--witness-bound", dargs.witness_bound, "multinorm witness search bound");

    verify_args vargs;
    auto* verify = app.add_subcommand("verify", "sweep criterion against oracle");
    verify->add_option("--family", vargs.family)->required();
    verify->add_option("--range", vargs.range, "lo:hi")->required();
    verify->add_option("--oracle", vargs.oracle, "oracle choice (default auto)");
    auto* vd = verify->add_option("--d", vargs.d);
    verify->add_option("--jobs", vargs.jobs, "worker pool size");
    verify->add_option("--table", vargs.table_path);

    profile_args pargs;
    auto* profile = app.add_subcommand("profile", "character profile (d34)");
    profile->add_option("--family", pargs.family);
    profile->add_option("--n", pargs.n)->required();

    local_args largs;
    auto* local = app.add_subcommand("local", "per-place solvability of a conic");
    local->add_option("--eq", largs.eq, "a,b,c,e,f,g")->required();
    local->add_option("--n", largs.n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    }

    try {
        if (*decide) {
            dargs.n_set = dn->count() > 0;
            dargs.d_set = dd->count() > 0;
            return run_decide(dargs);
        }
        if (*verify) {
            vargs.d_set = vd->count() > 0;
            return run_verify(vargs);
        }
        if (*profile) return run_profile(pargs);
        if (*local) return run_local(largs);
    } catch (const error& err) {
        std::cerr << err.what() << "\n";
        return err.code() == errc::degenerate_discriminant ? 65 : 70;
    } catch (const std::exception& ex) {
        std::cerr << ex.what() << "\n";
        return 70;
    }
    return 64;
}
