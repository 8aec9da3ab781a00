// logtrace command line front end. Talks to the engine exclusively through
// the shared-library C API.

#include "logtrace.h"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

// exit codes: 0 success, 1 validation/runtime failure, 2 consistency
// violation, 3 parse/usage error
int exit_code_for(logtrace_status st) {
    switch (st) {
        case LOGTRACE_OK:
            return 0;
        case LOGTRACE_ERR_CONSISTENCY:
            return 2;
        case LOGTRACE_ERR_PARSE:
        case LOGTRACE_ERR_PRECONDITION:
            return 3;
        default:
            return 1;
    }
}

int fail(logtrace_status st) {
    std::cerr << "error: " << logtrace_last_error() << "\n";
    return exit_code_for(st);
}

struct ModelGuard {
    logtrace_model* m = nullptr;
    ~ModelGuard() { logtrace_model_free(m); }
};

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { logtrace_string_free(s); }
};

std::vector<int64_t> parse_csv_ints(const std::string& text, const std::string& what) {
    std::vector<int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what + ": '" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw CLI::ValidationError(what + ": empty list");
    return out;
}

bool write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return true;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return false;
    }
    f << text;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logtrace: monodromy traces, rational volume and zeta factorization\n"
                 "of decorated log-model fans, with log blow-ups as verifier"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    int rank_bound = 0;
    app.add_option("--rank-bound", rank_bound, "override the enumeration rank bound");

    std::string model_path, out_path, format = "text", chart, point_csv, vector_csv;
    int max_d = 0;
    std::uint64_t seed = 1;
    int cases = 100;
    int oracle_max_d = 4;

    auto* validate = app.add_subcommand("validate", "check a model file");
    validate->add_option("model", model_path, "model JSON file")->required();
    validate->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* analyze = app.add_subcommand("analyze", "compute traces, volume, zeta and error term");
    analyze->add_option("model", model_path, "model JSON file")->required();
    analyze->add_option("--max-d", max_d, "trace horizon (default: lcm of s' values, capped)");
    analyze->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    analyze->add_option("--out", out_path, "write the report to a file");

    auto* subdivide = app.add_subcommand("subdivide", "apply one log blow-up (fan subdivision)");
    subdivide->add_option("model", model_path, "model JSON file")->required();
    subdivide->add_option("--chart", chart, "chart id")->required();
    subdivide->add_option("--point", point_csv,
                          "expected carrier face as sorted ray indices, e.g. \"0,1\"");
    subdivide->add_option("--vector", vector_csv, "subdivision center, e.g. \"1,1\"")->required();
    subdivide->add_option("--out", out_path, "write the subdivided model to a file");

    auto* resolve = app.add_subcommand("resolve", "refine until the model is SNC");
    resolve->add_option("model", model_path, "model JSON file")->required();
    resolve->add_option("--out", out_path, "write the resolved model to a file");

    auto* oracle = app.add_subcommand("oracle", "randomized saturation-structure oracle");
    oracle->add_option("--seed", seed, "RNG seed");
    oracle->add_option("--cases", cases, "number of random instances");
    oracle->add_option("--max-d", oracle_max_d, "largest root order d");

    auto* selftest = app.add_subcommand("selftest", "built-in fixtures and property suites");
    (void)selftest;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 3;
    }

    if (const char* env = std::getenv("LOGTRACE_RANK_BOUND"); env && rank_bound == 0)
        rank_bound = std::atoi(env);
    if (rank_bound > 0) logtrace_set_rank_bound(rank_bound);

    if (app.got_subcommand(validate)) {
        ModelGuard m;
        logtrace_status st = logtrace_model_load(model_path.c_str(), &m.m);
        if (st != LOGTRACE_OK) return fail(st);
        StringGuard report;
        st = logtrace_model_validate(m.m, &report.s);
        if (format == "json") {
            std::cout << "{\"ok\": " << (st == LOGTRACE_OK ? "true" : "false") << "}\n";
        } else if (report.s) {
            std::cout << report.s;
        }
        return exit_code_for(st);
    }

    if (app.got_subcommand(analyze)) {
        ModelGuard m;
        logtrace_status st = logtrace_model_load(model_path.c_str(), &m.m);
        if (st != LOGTRACE_OK) return fail(st);
        StringGuard report;
        st = logtrace_model_analyze(m.m, max_d, format == "json" ? 1 : 0, &report.s);
        if (st != LOGTRACE_OK) return fail(st);
        return write_or_print(report.s, out_path) ? 0 : 1;
    }

    if (app.got_subcommand(subdivide)) {
        std::vector<int64_t> center, face;
        try {
            center = parse_csv_ints(vector_csv, "--vector");
            if (!point_csv.empty()) face = parse_csv_ints(point_csv, "--point");
        } catch (const CLI::ValidationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 3;
        }
        ModelGuard m;
        logtrace_status st = logtrace_model_load(model_path.c_str(), &m.m);
        if (st != LOGTRACE_OK) return fail(st);
        ModelGuard next;
        st = logtrace_model_subdivide(m.m, chart.c_str(), center.data(), center.size(),
                                      face.data(), face.size(), &next.m);
        if (st != LOGTRACE_OK) return fail(st);
        StringGuard json;
        st = logtrace_model_to_json(next.m, &json.s);
        if (st != LOGTRACE_OK) return fail(st);
        return write_or_print(json.s, out_path) ? 0 : 1;
    }

    if (app.got_subcommand(resolve)) {
        ModelGuard m;
        logtrace_status st = logtrace_model_load(model_path.c_str(), &m.m);
        if (st != LOGTRACE_OK) return fail(st);
        ModelGuard next;
        StringGuard trail;
        st = logtrace_model_resolve(m.m, &next.m, &trail.s);
        if (st != LOGTRACE_OK) return fail(st);
        if (trail.s && trail.s[0]) std::cerr << "subdivision centers:\n" << trail.s;
        StringGuard json;
        st = logtrace_model_to_json(next.m, &json.s);
        if (st != LOGTRACE_OK) return fail(st);
        return write_or_print(json.s, out_path) ? 0 : 1;
    }

    if (app.got_subcommand(oracle)) {
        StringGuard report;
        logtrace_status st = logtrace_oracle_run(seed, cases, oracle_max_d, &report.s);
        if (report.s) std::cout << report.s;
        if (st != LOGTRACE_OK) {
            std::cerr << "error: " << logtrace_last_error() << "\n";
            return 1;  // a failing oracle is a build-blocking failure
        }
        return 0;
    }

    StringGuard report;
    logtrace_status st = logtrace_selftest(&report.s);
    if (report.s) std::cout << report.s;
    return st == LOGTRACE_OK ? 0 : 1;
}
