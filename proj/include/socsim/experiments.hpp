// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socsim/backends.hpp"
#include "socsim/hypervisor.hpp"
#include "socsim/workloads.hpp"

namespace socsim::bench {

enum class RunMode { detailed, fast };

struct PartitionConfig {
    std::string id;
    sched::PartitionKind kind = sched::PartitionKind::workload;
    std::string workload;  // cloud_unet | ship_detector
    backends::Backend backend = backends::Backend::cpu;
    std::string image;     // embedded fixture name
};

/// Parsed scenario: hardware constants, cyclic plan, partitions, run knobs.
struct ScenarioConfig {
    std::string name;
    backends::CostParams costs;
    double clock_hz = 1e8;
    sched::Schedule schedule;
    std::vector<PartitionConfig> partitions;
    std::uint32_t seed = 25;
    sched::Tick until = 50'000'000;
    RunMode mode = RunMode::detailed;

    std::vector<const PartitionConfig*> workload_partitions() const;
};

/// Parse the line-based scenario format. Sections: [hardware],
/// [schedule], [partition <id>], [run]. Unknown sections or keys are
/// errors. `base_dir` resolves relative costs_file references.
ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir,
                              const std::string& name);
ScenarioConfig load_scenario(const std::string& path);

/// Schedule + program validation; empty result means runnable.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

struct PartitionReport {
    std::string id;
    std::string workload;
    std::string backend;
    std::uint64_t cycles = 0;  // completion tick of the partition program
    double seconds = 0.0;      // cycles / clock_hz
    backends::ExecStats stats; // functional pipeline accounting
    std::string output;        // functional result summary
    std::optional<std::uint64_t> isolation_cycles;
    std::optional<double> slowdown;
};

struct RunReport {
    std::string scenario;
    double clock_hz = 1e8;
    bool concurrent = false;
    std::vector<PartitionReport> partitions;  // declaration order
    std::uint64_t wall_clock_ns = 0;          // not part of emitted reports
};

/// Build engine inputs (partition programs + schedule) and run them.
sched::EngineResult execute(const ScenarioConfig& config, RunMode mode);

/// The scenario restricted to one workload partition: the other
/// workload partitions and their windows are removed, the manager and
/// everything else stays.
ScenarioConfig isolate(const ScenarioConfig& config, const std::string& workload_id);

/// Single-workload measurement (plus manager when the backend is gpu).
RunReport run_isolation(const ScenarioConfig& config);

/// Two workloads on distinct cores; isolation baselines for both are
/// run internally and slowdowns derived from them.
RunReport run_concurrent(const ScenarioConfig& config);

/// Dispatch on the number of workload partitions.
RunReport run_scenario(const ScenarioConfig& config);

struct TwinPartition {
    std::string id;
    std::uint64_t detailed_cycles = 0;
    std::uint64_t fast_cycles = 0;
    std::string detailed_output;
    std::string fast_output;
};

/// Detailed-vs-fast comparison of one scenario. `timing_reps` repeats
/// each mode to get a usable wall-clock reading.
struct TwinReport {
    std::string scenario;
    std::vector<TwinPartition> partitions;
    bool functional_equal = false;
    std::uint64_t max_cycle_discrepancy = 0;
    std::uint64_t detailed_wall_ns = 0;
    std::uint64_t fast_wall_ns = 0;

    std::string str() const;
};

TwinReport twin_compare(const ScenarioConfig& config, int timing_reps = 1);

enum class ReportFormat { table, records };

/// `table` renders an aligned per-partition table; `records` emits one
/// stable `key=value` line per measurement. Pure function of the report;
/// wall-clock is deliberately excluded.
std::string emit_report(const RunReport& report, ReportFormat format);

/// Parse `records` output back into key/value pairs.
std::map<std::string, std::string> parse_records(const std::string& text);

/// Write the trace of a detailed run as one line per event.
std::string format_trace(const std::vector<sched::TraceEvent>& trace);

struct BandCheck {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
};

struct BenchResult {
    std::vector<BandCheck> checks;
    std::string records;  // canonical records blob of every scenario + ratios
    std::string summary;  // human-readable pass/fail text
    bool all_pass = false;
};

/// Names of the shipped scenario files, in canonical order.
const std::vector<std::string>& shipped_scenarios();

/// Run every shipped scenario from `scenario_dir`, derive the ratio and
/// slowdown checks, and compare twin modes on the cloud scenarios.
BenchResult bench_suite(const std::string& scenario_dir);

}  // namespace socsim::bench
