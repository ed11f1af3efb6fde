// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "socsim/experiments.hpp"

using namespace socsim;
using namespace socsim::bench;

namespace {

const std::string kDir = SOCSIM_SCENARIO_DIR;

ScenarioConfig shipped(const std::string& name) {
    return load_scenario(kDir + "/" + name + ".scn");
}

const char* kMinimalScenario = R"(
[hardware]
clock_hz = 1000000
[schedule]
major_frame = 4000000
context_switch_cycles = 10
window = 0, 0, 4000000, solo
[partition solo]
kind = workload
workload = cloud_unet
backend = cpu
image = cloud_demo_32
[run]
seed = 3
until = 10000000
)";

}  // namespace

TEST_CASE("scenario parsing") {
    SUBCASE("minimal scenario parses") {
        ScenarioConfig cfg = parse_scenario(kMinimalScenario, kDir, "mini");
        CHECK(cfg.clock_hz == 1000000.0);
        CHECK(cfg.schedule.major_frame == 4000000);
        CHECK(cfg.schedule.context_switch_cycles == 10);
        REQUIRE(cfg.schedule.windows.size() == 1);
        CHECK(cfg.schedule.windows[0].partition == "solo");
        REQUIRE(cfg.partitions.size() == 1);
        CHECK(cfg.partitions[0].workload == "cloud_unet");
        CHECK(cfg.seed == 3);
        CHECK(cfg.mode == RunMode::detailed);
        CHECK(validate_scenario(cfg).empty());
    }
    SUBCASE("unknown keys fail closed") {
        CHECK_THROWS_WITH_AS(parse_scenario("[schedule]\nmajor_frames = 10\n", kDir, "x"),
                             doctest::Contains("unknown schedule key"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(parse_scenario("[run]\nspeed = 9\n", kDir, "x"),
                             doctest::Contains("unknown run key"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(parse_scenario("[partition p]\ncolour = red\n", kDir, "x"),
                             doctest::Contains("unknown partition key"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(parse_scenario("[engine]\nx = 1\n", kDir, "x"),
                             doctest::Contains("unknown section"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(parse_scenario("[hardware]\nwarp_speed = 1\n", kDir, "x"),
                             doctest::Contains("unknown key"), std::invalid_argument);
    }
    SUBCASE("malformed lines are rejected") {
        CHECK_THROWS_AS(parse_scenario("[schedule]\nwindow = 1, 2, 3\n", kDir, "x"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario("[schedule]\nmajor_frame ten\n", kDir, "x"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario("stray = 1\n", kDir, "x"), std::invalid_argument);
        // negative integers must not wrap through the unsigned parser
        CHECK_THROWS_AS(parse_scenario("[schedule]\nwindow = -1, 0, 10, p\n", kDir, "x"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario("[run]\nuntil = -5\n", kDir, "x"),
                        std::invalid_argument);
    }
    SUBCASE("hardware cost overrides stack on the costs file") {
        std::string text = std::string("[hardware]\ncosts_file = default_costs.cfg\n") +
                           "simd_lanes = 16\n[schedule]\nmajor_frame = 10\n" +
                           "window = 0, 0, 10, p\n[partition p]\nkind = workload\n" +
                           "workload = cloud_unet\nbackend = cpu\nimage = cloud_demo_32\n";
        ScenarioConfig cfg = parse_scenario(text, kDir, "x");
        CHECK(cfg.costs.simd_lanes == 16);
        CHECK(cfg.costs.gpu_clock_ratio == doctest::Approx(5.5));  // from the file
    }
}

TEST_CASE("shipped scenarios all validate") {
    for (const auto& name : shipped_scenarios()) {
        CAPTURE(name);
        ScenarioConfig cfg = shipped(name);
        CHECK(validate_scenario(cfg).empty());
    }
}

TEST_CASE("isolation runs reproduce the documented backend ordering") {
    // simd < cpu < gpu for both use cases
    std::uint64_t cloud_cpu = run_isolation(shipped("iso_cloud_cpu")).partitions[0].cycles;
    std::uint64_t cloud_simd = run_isolation(shipped("iso_cloud_simd")).partitions[0].cycles;
    std::uint64_t cloud_gpu = run_isolation(shipped("iso_cloud_gpu")).partitions[0].cycles;
    CHECK(cloud_simd < cloud_cpu);
    CHECK(cloud_cpu < cloud_gpu);

    std::uint64_t ship_cpu = run_isolation(shipped("iso_ship_cpu")).partitions[0].cycles;
    std::uint64_t ship_simd = run_isolation(shipped("iso_ship_simd")).partitions[0].cycles;
    std::uint64_t ship_gpu = run_isolation(shipped("iso_ship_gpu")).partitions[0].cycles;
    CHECK(ship_simd < ship_cpu);
    CHECK(ship_cpu < ship_gpu);
}

TEST_CASE("isolation runs are deterministic") {
    ScenarioConfig cfg = shipped("iso_cloud_cpu");
    RunReport a = run_isolation(cfg);
    RunReport b = run_isolation(cfg);
    CHECK(emit_report(a, ReportFormat::records) == emit_report(b, ReportFormat::records));
    CHECK(format_trace(execute(cfg, RunMode::detailed).trace) ==
          format_trace(execute(cfg, RunMode::detailed).trace));
}

TEST_CASE("a too-small tick cap surfaces as an error, not a bogus report") {
    ScenarioConfig cfg = shipped("iso_cloud_cpu");
    cfg.until = 1000;  // far below the ~872k cycles the program needs
    CHECK_THROWS_WITH_AS(run_isolation(cfg), doctest::Contains("did not complete"),
                         std::runtime_error);
}

TEST_CASE("run_isolation rejects multi-workload configs") {
    CHECK_THROWS_WITH_AS(run_isolation(shipped("conc_gpu_gpu")),
                         doctest::Contains("need exactly 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_concurrent(shipped("iso_cloud_cpu")),
                         doctest::Contains("need exactly 2"), std::invalid_argument);
}

TEST_CASE("concurrent runs derive slowdowns against embedded baselines") {
    ScenarioConfig cfg = shipped("conc_gpu_gpu");
    RunReport rep = run_concurrent(cfg);
    REQUIRE(rep.partitions.size() == 2);

    for (const auto& p : rep.partitions) {
        REQUIRE(p.isolation_cycles.has_value());
        REQUIRE(p.slowdown.has_value());
        // contention never speeds a partition up
        CHECK(*p.slowdown >= 1.0 - 1e-9);
        // baseline consistency: embedded baselines equal standalone runs
        RunReport iso = run_isolation(isolate(cfg, p.id));
        CHECK(iso.partitions[0].cycles == *p.isolation_cycles);
    }
    // the queued cloud partition pays more than 5x
    CHECK(rep.partitions[0].id == "cloud");
    CHECK(*rep.partitions[0].slowdown > 5.0);
}

TEST_CASE("uncontended concurrent scenarios stay within the small band") {
    for (const char* name : {"conc_simd_simd", "conc_simd_gpu", "conc_gpu_simd"}) {
        CAPTURE(name);
        RunReport rep = run_concurrent(shipped(name));
        for (const auto& p : rep.partitions) {
            CHECK(*p.slowdown >= 1.0 - 1e-9);
            CHECK(*p.slowdown <= 1.25);
        }
    }
}

TEST_CASE("report emission") {
    SUBCASE("empty report renders a header-only table") {
        RunReport empty;
        empty.scenario = "none";
        std::string table = emit_report(empty, ReportFormat::table);
        CHECK(table.find("Partition") != std::string::npos);
        CHECK(table.find("Cycles") != std::string::npos);
        std::string records = emit_report(empty, ReportFormat::records);
        CHECK(records.find("scenario=none") != std::string::npos);
    }
    SUBCASE("records round-trip to the same numbers") {
        RunReport rep = run_isolation(shipped("iso_cloud_gpu"));
        std::string records = emit_report(rep, ReportFormat::records);
        auto kv = parse_records(records);
        CHECK(kv.at("scenario") == "iso_cloud_gpu");
        CHECK(kv.at("part.cloud.cycles") == std::to_string(rep.partitions[0].cycles));
        CHECK(std::stod(kv.at("part.cloud.seconds")) == rep.partitions[0].seconds);
        CHECK(std::stod(kv.at("clock_hz")) == rep.clock_hz);
        CHECK(kv.at("part.cloud.kernel_launches") == "6");
        // slowdown keys appear only in concurrent reports
        CHECK(kv.count("part.cloud.slowdown") == 0);
        CHECK(kv.at("concurrent") == "0");
    }
    SUBCASE("concurrent reports carry slowdown columns") {
        RunReport rep = run_concurrent(shipped("conc_simd_simd"));
        auto kv = parse_records(emit_report(rep, ReportFormat::records));
        CHECK(kv.count("part.cloud.slowdown") == 1);
        CHECK(kv.count("part.ship.isolation_cycles") == 1);
        std::string table = emit_report(rep, ReportFormat::table);
        CHECK(table.find("Slowdown") != std::string::npos);
    }
}

TEST_CASE("twin comparison: fast mode matches detailed on isolation runs") {
    for (const char* name : {"iso_cloud_cpu", "iso_cloud_simd", "iso_cloud_gpu"}) {
        CAPTURE(name);
        TwinReport twin = twin_compare(shipped(name));
        CHECK(twin.functional_equal);
        CHECK(twin.max_cycle_discrepancy == 0);
        for (const auto& p : twin.partitions) CHECK(p.detailed_cycles == p.fast_cycles);
    }
}

TEST_CASE("twin comparison: fast mode does not exceed detailed wall clock") {
    // detailed mode builds the full trace; give the timer enough
    // repetitions to separate the two, and allow a couple of retries
    // against scheduler noise
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
        TwinReport twin = twin_compare(shipped("conc_gpu_gpu"), 40);
        ok = twin.fast_wall_ns <= twin.detailed_wall_ns;
    }
    CHECK(ok);
}

TEST_CASE("the engine trace matches the frozen golden trace") {
    // Any change to engine semantics (message timing, context-switch
    // charging, kernel completion observation) shows up here first.
    ScenarioConfig cfg = shipped("iso_cloud_gpu");
    std::string trace = format_trace(execute(cfg, RunMode::detailed).trace);
    std::ifstream golden_file(kDir + "/golden_iso_cloud_gpu.trace", std::ios::binary);
    REQUIRE_MESSAGE(golden_file.good(), "golden_iso_cloud_gpu.trace missing");
    std::stringstream golden;
    golden << golden_file.rdbuf();
    CHECK(trace == golden.str());
}

TEST_CASE("bench suite checks every band and freezes the calibration") {
    BenchResult result = bench_suite(kDir);
    REQUIRE(result.checks.size() == 8);
    for (const auto& c : result.checks) {
        CAPTURE(c.name);
        CAPTURE(c.value);
        CHECK(c.pass);
    }
    CHECK(result.all_pass);

    // calibration lock: canonical records must match the golden file
    std::ifstream golden_file(kDir + "/golden_bench.records", std::ios::binary);
    REQUIRE_MESSAGE(golden_file.good(), "golden_bench.records missing");
    std::stringstream golden;
    golden << golden_file.rdbuf();
    CHECK(result.records == golden.str());
}
