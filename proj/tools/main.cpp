// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "socsim/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBandViolation = 3;

int cmd_validate(const std::string& path) {
    socsim::bench::ScenarioConfig cfg = socsim::bench::load_scenario(path);
    auto violations = socsim::bench::validate_scenario(cfg);
    if (violations.empty()) {
        std::cout << "ok: " << cfg.name << " (" << cfg.partitions.size() << " partitions, "
                  << cfg.schedule.windows.size() << " windows)\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return kExitValidation;
}

int cmd_run(const std::string& path, const std::string& mode, const std::string& trace_path,
            const std::string& report_format, int seed_override) {
    socsim::bench::ScenarioConfig cfg = socsim::bench::load_scenario(path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint32_t>(seed_override);
    if (mode == "fast") cfg.mode = socsim::bench::RunMode::fast;
    else if (mode == "detailed") cfg.mode = socsim::bench::RunMode::detailed;

    auto violations = socsim::bench::validate_scenario(cfg);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
        return kExitValidation;
    }

    socsim::bench::RunReport report = socsim::bench::run_scenario(cfg);
    std::cout << socsim::bench::emit_report(report,
                                            report_format == "records"
                                                ? socsim::bench::ReportFormat::records
                                                : socsim::bench::ReportFormat::table);

    if (!trace_path.empty()) {
        auto result = socsim::bench::execute(cfg, socsim::bench::RunMode::detailed);
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write trace to " << trace_path << "\n";
            return kExitError;
        }
        out << socsim::bench::format_trace(result.trace);
        std::cout << "trace (" << result.trace.size() << " events) written to " << trace_path
                  << "\n";
    }
    return kExitOk;
}

int cmd_bench(const std::string& dir, const std::string& records_path) {
    socsim::bench::BenchResult result = socsim::bench::bench_suite(dir);
    std::cout << result.summary;
    if (!records_path.empty()) {
        std::ofstream out(records_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write records to " << records_path << "\n";
            return kExitError;
        }
        out << result.records;
        std::cout << "records written to " << records_path << "\n";
    }
    return result.all_pass ? kExitOk : kExitBandViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"socsim - discrete-event simulator of a partitioned heterogeneous SoC"};
    app.require_subcommand(1);

    std::string scenario_path;
    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", scenario_path, "scenario file")->required();

    std::string run_path, mode = "detailed", trace_path, report_format = "table";
    int seed_override = -1;
    auto* run = app.add_subcommand("run", "run one scenario and print its report");
    run->add_option("scenario", run_path, "scenario file")->required();
    run->add_option("--mode", mode, "detailed|fast")->check(CLI::IsMember({"detailed", "fast"}));
    run->add_option("--trace", trace_path, "write the event trace to this file");
    run->add_option("--report", report_format, "table|records")
        ->check(CLI::IsMember({"table", "records"}));
    run->add_option("--seed", seed_override, "override the scenario weight seed");

    std::string bench_dir = "scenarios", records_path;
    auto* bench = app.add_subcommand("bench-suite",
                                     "run every shipped scenario and check the ratio bands");
    bench->add_option("--dir", bench_dir, "scenario directory");
    bench->add_option("--records", records_path, "write canonical records to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (run->parsed())
            return cmd_run(run_path, mode, trace_path, report_format, seed_override);
        if (bench->parsed()) return cmd_bench(bench_dir, records_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
