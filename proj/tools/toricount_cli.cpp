// toricount: count rational points of bounded height on smooth complete
// toric varieties over imaginary quadratic fields, and evaluate the
// predicted leading constant.  Verbs: count, constant, check, convergence.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toricount/fan_json.hpp"
#include "toricount/library.hpp"
#include "toricount/peyre.hpp"
#include "toricount/reports.hpp"
#include "toricount/torsor.hpp"

using namespace toricount;

namespace {

struct Options {
    std::string fan_name;
    std::string fan_file;
    long field_D = 0;
    std::string B_spec;
    long prime_bound = 10000;
    int shards = 1;
    std::uint64_t seed = kValidationSeed;
    std::string out_path;
    bool moebius = false;
    bool timings = false;
};

Fan resolve_fan(const Options& o) {
    if (o.fan_name.empty() == o.fan_file.empty())
        throw ConfigError("give exactly one of --fan (library name) or --fan-file (JSON path)");
    return o.fan_name.empty() ? fan_from_file(o.fan_file) : fan_by_name(o.fan_name);
}

std::vector<Int> parse_bounds(const std::string& spec, bool ladder) {
    if (spec.empty()) throw ConfigError("--B is required for this mode");
    std::vector<Int> Bs;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("--B expects comma-separated positive integers, got '" + tok + "'");
        Bs.push_back(Int(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    for (std::size_t i = 0; i < Bs.size(); ++i) {
        if (Bs[i] < 1) throw ConfigError("height bounds must be >= 1");
        if (i && Bs[i] <= Bs[i - 1]) throw ConfigError("height bounds must be increasing");
    }
    // convergence mode: a single value is the top of a geometric x10 ladder
    if (ladder && Bs.size() == 1 && Bs[0] >= 10) {
        Int top = Bs[0];
        Bs.clear();
        for (Int b = 10; b <= top; b *= 10) Bs.push_back(b);
        if (Bs.back() != top) Bs.push_back(top);
    }
    return Bs;
}

// reports are built fully in memory first so a failure never leaves a
// truncated file behind
void write_output(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out_path);
    if (!f) throw ConfigError("cannot open output file '" + o.out_path + "'");
    f << text;
    if (!f) throw ConfigError("failed writing output file '" + o.out_path + "'");
}

void require_valid(const Fan& fan, std::uint64_t seed) {
    FanCheckReport rep = validate_fan(fan, seed);
    if (!rep.ok())
        throw HypothesisError("fan '" + fan.name + "' rejected: " + rep.reason_summary());
}

int run_check(const Options& o) {
    Fan fan = resolve_fan(o);
    FanCheckReport rep = validate_fan(fan, o.seed);
    write_output(o, check_report_json(fan, rep).dump(2) + "\n");
    if (!rep.ok()) {
        std::cerr << "error: hypothesis: fan '" << fan.name
                  << "' rejected: " << rep.reason_summary() << "\n";
        return 3;
    }
    return 0;
}

int run_constant(const Options& o) {
    Fan fan = resolve_fan(o);
    require_valid(fan, o.seed);
    QuadField K = make_field(o.field_D);
    LeadingConstant C = leading_constant(fan, K, o.prime_bound);
    write_output(o, constant_report_json(C).dump(2) + "\n");
    return 0;
}

int run_count(const Options& o, bool ladder) {
    Fan fan = resolve_fan(o);
    require_valid(fan, o.seed);
    QuadField K = make_field(o.field_D);
    LeadingConstant C = leading_constant(fan, K, o.prime_bound);
    std::vector<Int> Bs = parse_bounds(o.B_spec, ladder);
    CountOptions copts;
    copts.shards = o.shards;
    copts.moebius = o.moebius;
    copts.timings = o.timings;
    CountReport rep = count_points(fan, K, Bs, copts);
    write_output(o, count_report_csv(rep, &C));
    return 0;
}

void add_fan_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--fan", o.fan_name, "built-in fan name (P1, P2, P3, P1xP1, P1xP1xP1, F1, F2)");
    cmd->add_option("--fan-file", o.fan_file, "path to a JSON fan description");
    cmd->add_option("--seed", o.seed, "seed for the randomized completeness check");
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"point counts and leading constants for toric varieties over "
                 "imaginary quadratic fields"};
    app.require_subcommand(1);
    Options o;

    CLI::App* c_count = app.add_subcommand("count", "enumerate points up to height bounds");
    add_fan_flags(c_count, o);
    c_count->add_option("--field-D", o.field_D, "field is Q(sqrt(-D)), D squarefree >= 1")
        ->required();
    c_count->add_option("--B", o.B_spec, "comma-separated increasing height bounds")->required();
    c_count->add_option("--prime-bound", o.prime_bound, "Euler product truncation (default 10000)");
    c_count->add_option("--shards", o.shards, "parallel enumeration shards (default 1)");
    c_count->add_flag("--moebius", o.moebius, "also run the inclusion-exclusion counting route");
    c_count->add_flag("--timings", o.timings, "record wall time (breaks byte reproducibility)");

    CLI::App* c_const = app.add_subcommand("constant", "evaluate the predicted leading constant");
    add_fan_flags(c_const, o);
    c_const->add_option("--field-D", o.field_D, "field is Q(sqrt(-D)), D squarefree >= 1")
        ->required();
    c_const->add_option("--prime-bound", o.prime_bound, "Euler product truncation (default 10000)");

    CLI::App* c_check = app.add_subcommand("check", "validate a fan and report its invariants");
    add_fan_flags(c_check, o);

    CLI::App* c_conv = app.add_subcommand("convergence",
                                          "count along a geometric B ladder and report ratios");
    add_fan_flags(c_conv, o);
    c_conv->add_option("--field-D", o.field_D, "field is Q(sqrt(-D)), D squarefree >= 1")
        ->required();
    c_conv->add_option("--B", o.B_spec, "top of the x10 ladder, or an explicit list")->required();
    c_conv->add_option("--prime-bound", o.prime_bound, "Euler product truncation (default 10000)");
    c_conv->add_option("--shards", o.shards, "parallel enumeration shards (default 1)");
    c_conv->add_flag("--timings", o.timings, "record wall time (breaks byte reproducibility)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(c_count)) return run_count(o, false);
        if (app.got_subcommand(c_const)) return run_constant(o);
        if (app.got_subcommand(c_check)) return run_check(o);
        if (app.got_subcommand(c_conv)) return run_count(o, true);
        throw ConfigError("no mode selected");
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "error: hypothesis: " << e.what() << "\n";
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "error: budget: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
