// symspace: batch runner for the verification suites.
//
//   symspace run   --config <path> [--out <dir>] [--jobs N] [--verbose]
//   symspace sweep --config <path> --axis <p|lambda-scale|translate> [--out <dir>] [--jobs N] [--verbose]
//
// Exit status: 0 all hard metrics pass, 1 an assertion failed, 2 configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "suites.hpp"
#include "symspace/errors.hpp"
#include "symspace/io.hpp"
#include "symspace/numerics.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
    using namespace symspace::cli;

    CLI::App app{"Harmonic analysis and pseudo-differential operators on rank-one symmetric spaces"};
    app.require_subcommand(1);
    std::string config_path, out_dir, axis;
    int jobs = 0;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--verbose", verbose, "progress on stderr");
    };
    CLI::App* run = app.add_subcommand("run", "execute one suite");
    add_common(run);
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate norm-lab metrics along one axis");
    add_common(sweep);
    sweep->add_option("--axis", axis, "p, lambda-scale or translate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitConfig;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Logger log = [&](const std::string& msg) {
        if (!verbose) return;
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "[%7.1f s] %s\n", dt, msg.c_str());
    };

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (jobs > 0) symspace::set_default_jobs(jobs);

        if (run->parsed()) {
            log("suite " + cfg.suite + " on " + cfg.space.label());
            const SuiteResult r = run_suite(cfg, log);
            write_outputs(r, cfg.output_dir);
            for (const auto& m : r.metrics)
                std::printf("%-4s %-34s %.6e (tolerance %.1e%s)\n", m.pass ? "ok" : (m.hard ? "FAIL" : "note"),
                            m.name.c_str(), m.value, m.tolerance, m.hard ? "" : ", diagnostic");
            std::printf("%s: %s -> %s/summary.json\n", r.suite.c_str(), r.pass() ? "PASS" : "FAIL",
                        cfg.output_dir.c_str());
            return r.pass() ? kExitPass : kExitFail;
        }

        if (axis != "p" && axis != "lambda-scale" && axis != "translate")
            throw ConfigError("--axis", "expected p, lambda-scale or translate");
        const Table t = sweep_norm_lab(cfg, axis, log);
        std::filesystem::create_directories(cfg.output_dir);
        const std::string path = cfg.output_dir + "/sweep-" + axis + ".csv";
        symspace::write_csv(path, t.header, t.columns);
        std::printf("sweep over %s (%zu values) -> %s\n", axis.c_str(), t.columns[0].size(), path.c_str());
        return kExitPass;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const symspace::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
}
