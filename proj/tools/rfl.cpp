// rfl: scenario runner for the Ricci flow laboratory.
//
//   rfl run <file> --out <dir>
//   rfl ladder <file> --grids 32,64,128
//   rfl list-checks
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 parse/validation/runtime error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfl/errors.hpp"
#include "rfl/reports.hpp"
#include "rfl/runner.hpp"
#include "rfl/scenario.hpp"

namespace {

std::string output_dir(const std::string& flag) {
    const char* env = std::getenv("RFL_OUT");
    return env && *env ? std::string(env) : flag;
}

std::string show(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void print_run(const rfl::RunResult& r, const std::string& dir) {
    std::printf("scenario %s (%s)\n", r.scenario.c_str(), r.target.c_str());
    for (const auto& c : r.checks) {
        std::string what = c.expect.empty() ? show(c.value) + " <= " + show(c.tolerance) : c.label + " (expect " + c.expect + ")";
        std::printf("  %-7s %-26s %s%s%s\n", c.verdict.c_str(), c.name.c_str(), what.c_str(), c.detail.empty() ? "" : "  ",
                    c.detail.c_str());
    }
    std::printf("%s -> %s\n", r.pass() ? "PASS" : "FAIL", dir.c_str());
}

void print_ladder(const rfl::LadderResult& r, const std::string& dir) {
    std::printf("ladder %s over", r.scenario.c_str());
    for (int g : r.grids) std::printf(" %d", g);
    std::printf("\n");
    for (const auto& e : r.entries) {
        std::printf("  %-7s %-26s slope %s (min %.2f), finest %s", e.verdict.c_str(), e.name.c_str(),
                    std::isfinite(e.slope) ? show(e.slope).c_str() : "n/a", e.min_order, show(e.finest).c_str());
        if (!e.tag.empty()) std::printf(" [%s]", e.tag.c_str());
        std::printf("\n");
    }
    std::printf("%s -> %s\n", r.pass() ? "PASS" : "FAIL", dir.c_str());
}

void list_checks() {
    for (const auto& c : rfl::check_registry()) {
        std::string targets;
        auto add = [&](unsigned bit, const char* name) {
            if (c.targets & bit) targets += (targets.empty() ? "" : ",") + std::string(name);
        };
        add(rfl::target_grid_flow, "grid_flow");
        add(rfl::target_sphere_flow, "sphere_flow");
        add(rfl::target_grid_soliton, "grid_soliton");
        add(rfl::target_sphere_soliton, "sphere_soliton");
        std::string tol = c.labelled ? std::string("expect ") + (*c.default_expect ? c.default_expect : "<required>")
                                     : (c.default_tolerance > 0.0 ? "tol " + show(c.default_tolerance) : "tol from certificate");
        std::printf("%-26s %-44s %-22s %s\n", c.name, targets.c_str(), tol.c_str(), c.description);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci flow and soliton verification scenarios"};
    app.require_subcommand(1);
    double scale = 1.0;
    app.add_option("--tolerance-scale", scale, "global multiplier on every tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string run_file, run_out = "rfl_out";
    auto* run = app.add_subcommand("run", "run a scenario and write its reports");
    run->add_option("file", run_file, "scenario JSON")->required();
    run->add_option("--out", run_out, "output directory (RFL_OUT overrides)")->capture_default_str();
    run->fallthrough();

    std::string ladder_file, ladder_out = "rfl_out";
    std::vector<int> grids;
    auto* ladder = app.add_subcommand("ladder", "fit convergence orders over a grid ladder");
    ladder->add_option("file", ladder_file, "scenario JSON")->required();
    ladder->add_option("--grids", grids, "node counts per axis, e.g. 32,64,128")->delimiter(',');
    ladder->add_option("--out", ladder_out, "output directory (RFL_OUT overrides)")->capture_default_str();
    ladder->fallthrough();

    app.add_subcommand("list-checks", "list registered checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const rfl::RunOptions opt{scale};
    try {
        if (app.got_subcommand("list-checks")) {
            list_checks();
            return 0;
        }
        if (run->parsed()) {
            const rfl::Scenario sc = rfl::load_scenario(run_file);
            const rfl::RunResult r = rfl::run_scenario(sc, opt);
            const std::string dir = rfl::write_run_reports(r, opt, output_dir(run_out));
            print_run(r, dir);
            return r.exit_code();
        }
        const rfl::Scenario sc = rfl::load_scenario(ladder_file);
        if (grids.empty()) grids = sc.ladder.grids;
        if (grids.empty()) throw rfl::ConfigError("no grids: pass --grids or add ladder.grids to the scenario");
        const rfl::LadderResult r = rfl::convergence_ladder(sc, grids, opt);
        const std::string dir = rfl::write_ladder_reports(r, opt, output_dir(ladder_out));
        print_ladder(r, dir);
        return r.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
