#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bounds.hpp"
#include "compare.hpp"
#include "fuzz.hpp"
#include "workload.hpp"

namespace {

using namespace bitstree;
using namespace bitstree::bench;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_violation = 2;

std::optional<std::ofstream> open_out(const std::string& path, int& rc) {
    if (path.empty()) return std::nullopt;
    std::ofstream f(path);
    if (!f) {
        std::cerr << "cannot open `" << path << "` for writing\n";
        rc = exit_usage;
    }
    return f;
}

bool load_segments(const std::string& path, id_table& table,
                   std::vector<segment>& out) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open segments file `" << path << "`\n";
        return false;
    }
    if (auto e = parse_segments(f, table, out)) {
        std::cerr << path << ':' << e->line << ": " << e->message << '\n';
        return false;
    }
    return true;
}

bool load_script(const std::string& path, id_table& table,
                 std::vector<workload_op>& out) {
    std::ifstream f(path);
    if (!f) {
        std::cerr << "cannot open script file `" << path << "`\n";
        return false;
    }
    if (auto e = parse_script(f, table, out)) {
        std::cerr << path << ':' << e->line << ": " << e->message << '\n';
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bitstree: segment storage and query benchmark driver"};
    app.require_subcommand(1);

    // run
    auto* run_cmd =
        app.add_subcommand("run", "replay a script file against the trees");
    std::string run_segments, run_script, run_structure = "bits", run_out;
    std::vector<coord> run_dst_range;
    bool run_check = false;
    run_cmd->add_option("segments", run_segments, "segment file to preload")
        ->required();
    run_cmd->add_option("script", run_script, "script file to execute")
        ->required();
    run_cmd->add_option("--structure", run_structure, "bits|sst|dst|all")
        ->check(CLI::IsMember({"bits", "sst", "dst", "all"}));
    run_cmd->add_option("--dst-range", run_dst_range,
                        "fixed range for the dynamic tree")
        ->expected(2);
    run_cmd->add_flag("--check", run_check,
                      "run the invariant checker after every mutation");
    run_cmd->add_option("--out", run_out, "write the report to this file");

    // compare
    auto* cmp_cmd = app.add_subcommand(
        "compare", "build all three structures and report their metrics");
    std::string cmp_segments, cmp_out;
    std::vector<coord> cmp_dst_range;
    cmp_cmd->add_option("segments", cmp_segments, "segment file")->required();
    cmp_cmd->add_option("--dst-range", cmp_dst_range,
                        "fixed range for the dynamic tree")
        ->expected(2);
    cmp_cmd->add_option("--out", cmp_out, "write the report to this file");

    // fuzz
    auto* fuzz_cmd = app.add_subcommand(
        "fuzz", "differential random workload against the brute-force bag");
    fuzz_options fopt;
    std::string fuzz_out;
    fuzz_cmd->add_option("--ops", fopt.ops, "number of operations");
    fuzz_cmd->add_option("--seed", fopt.seed, "workload seed");
    fuzz_cmd->add_option("--window-lo", fopt.window_lo, "coordinate window low");
    fuzz_cmd->add_option("--window-hi", fopt.window_hi, "coordinate window high");
    fuzz_cmd
        ->add_option("--repro", fopt.reproducer_path,
                     "path for the minimized reproducer script")
        ->capture_default_str();
    fuzz_cmd->add_option("--out", fuzz_out, "write the report to this file");
    fopt.reproducer_path = "fuzz_reproducer.script";

    // bounds
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "sweep random segment sets against the size/height bounds");
    bounds_options bopt;
    std::string bounds_out;
    bounds_cmd->add_option("--n-max", bopt.n_max, "largest segment-set size");
    bounds_cmd->add_option("--trials", bopt.trials, "random sets per size");
    bounds_cmd->add_option("--seed", bopt.seed, "sweep seed");
    bounds_cmd->add_option("--out", bounds_out, "write the report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            int rc = exit_ok;
            auto file = open_out(run_out, rc);
            if (rc != exit_ok) return rc;
            id_table table;
            std::vector<segment> preload;
            std::vector<workload_op> ops;
            if (!load_segments(run_segments, table, preload)) return exit_usage;
            if (!load_script(run_script, table, ops)) return exit_usage;
            run_options opt;
            opt.check = run_check;
            if (run_structure == "sst") opt.structure = structure_sel::sst;
            else if (run_structure == "dst") opt.structure = structure_sel::dst;
            else if (run_structure == "all") opt.structure = structure_sel::all;
            if (!run_dst_range.empty())
                opt.dst_range = {run_dst_range[0], run_dst_range[1]};
            return run_workload(preload, ops, table, opt,
                                file ? *file : std::cout);
        }
        if (*cmp_cmd) {
            int rc = exit_ok;
            auto file = open_out(cmp_out, rc);
            if (rc != exit_ok) return rc;
            id_table table;
            std::vector<segment> segs;
            if (!load_segments(cmp_segments, table, segs)) return exit_usage;
            compare_options opt;
            if (!cmp_dst_range.empty())
                opt.dst_range = {cmp_dst_range[0], cmp_dst_range[1]};
            return run_compare(segs, table, opt, file ? *file : std::cout);
        }
        if (*fuzz_cmd) {
            int rc = exit_ok;
            auto file = open_out(fuzz_out, rc);
            if (rc != exit_ok) return rc;
            if (fopt.window_hi - fopt.window_lo < 4) {
                std::cerr << "fuzz window must span at least 4 units\n";
                return exit_usage;
            }
            const auto result = run_fuzz(fopt, file ? &*file : &std::cout);
            std::cerr << "fuzz: " << result.divergences << " divergences, "
                      << result.invariant_failures << " invariant failures, "
                      << result.rotation_violations +
                             result.stab_bound_violations +
                             result.range_bound_violations +
                             result.size_bound_violations
                      << " property violations over " << result.executed
                      << " ops\n";
            if (!result.ok() && !fopt.reproducer_path.empty())
                std::cerr << "reproducer written to " << fopt.reproducer_path
                          << '\n';
            return result.ok() ? exit_ok : exit_violation;
        }
        if (*bounds_cmd) {
            int rc = exit_ok;
            auto file = open_out(bounds_out, rc);
            if (rc != exit_ok) return rc;
            const auto result = run_bounds(bopt, file ? &*file : &std::cout);
            std::cerr << "bounds: " << result.violations << " violations over "
                      << result.trials_run << " trials\n";
            return result.violations == 0 ? exit_ok : exit_violation;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
