// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "socsim/backends.hpp"
#include "socsim/kernel_blob.hpp"

using namespace socsim;
using namespace socsim::backends;

namespace {

CostParams unit_costs() {
    CostParams c;
    c.cpu_cycles_per_mac = 1.0;
    c.cpu_issue_width = 2;
    c.simd_lanes = 8;
    c.simd_cycles_per_op = 1.0;
    c.simd_setup_cycles_per_layer = 10;
    c.gpu_warps = 4;
    c.gpu_threads_per_warp = 4;
    c.gpu_cycles_per_item = 1.0;
    c.gpu_launch_overhead_cycles = 100;
    c.gpu_clock_ratio = 1.0;
    c.link_latency_cycles = 200;
    c.link_bytes_per_cycle = 4.0;
    return c;
}

nn::Tensor random_q8(std::mt19937& rng, const nn::Shape& s, const nn::QuantParams& q) {
    std::uniform_int_distribution<int> dist(-128, 127);
    std::vector<int8_t> data(static_cast<size_t>(s.elems()));
    for (auto& v : data) v = static_cast<int8_t>(dist(rng));
    return nn::Tensor::q8(s, q, std::move(data));
}

// 3x3 valid conv on a 3x3 single-channel input: 1 output, 9 MACs.
LayerSpec nine_mac_conv(std::mt19937& rng) {
    nn::Tensor w = random_q8(rng, nn::Shape{1, 3, 3, 1}, nn::QuantParams{1.0 / 32.0, 0});
    return LayerSpec::conv("conv9", std::move(w), {0}, 1, nn::Padding::valid,
                           nn::QuantParams{0.5, 0});
}

}  // namespace

TEST_CASE("cost formulas on the documented examples") {
    CostParams c = unit_costs();
    std::mt19937 rng(3);
    nn::Tensor input = random_q8(rng, nn::Shape{1, 3, 3, 1}, nn::QuantParams{0.25, 0});
    LayerSpec conv = nine_mac_conv(rng);

    // cpu: ceil(9 * 1.0 / 2) = 5
    CHECK(layer_compute_cycles(Backend::cpu, conv, input.shape(), c) == 5);
    // simd: 10 + ceil(9/8) * 1.0 = 12
    CHECK(layer_compute_cycles(Backend::simd, conv, input.shape(), c) == 12);

    // gpu: 64 work items of one unit each -> 100 + ceil(64/16)*1 = 104
    LayerSpec act = LayerSpec::activation_layer("act64", nn::Activation::relu);
    nn::Shape s64{1, 4, 4, 4};
    CHECK(gpu_layer_device_cycles(act, s64, c) == 104);
    CHECK(layer_compute_cycles(Backend::gpu, act, s64, c) == 104);  // clock ratio 1.0

    // clock ratio scales host cycles, rounded up
    c.gpu_clock_ratio = 2.5;
    CHECK(layer_compute_cycles(Backend::gpu, act, s64, c) == 260);
}

TEST_CASE("transfer cost model") {
    CostParams c = unit_costs();
    SUBCASE("zero bytes still pay the latency") {
        ExecStats s = transfer(0, Direction::to_device, c);
        CHECK(s.cycles == 200);
        CHECK(s.bytes_to_device == 0);
    }
    SUBCASE("1024 bytes at 4 bytes/cycle") {
        ExecStats s = transfer(1024, Direction::to_device, c);
        CHECK(s.cycles == 456);
        CHECK(s.bytes_to_device == 1024);
        CHECK(s.bytes_from_device == 0);
    }
    SUBCASE("direction picks the byte counter") {
        ExecStats s = transfer(64, Direction::from_device, c);
        CHECK(s.bytes_from_device == 64);
        CHECK(s.bytes_to_device == 0);
    }
    SUBCASE("two transfers of b cost strictly more than one of 2b") {
        for (std::uint64_t b : {1ull, 17ull, 1024ull, 99999ull}) {
            std::uint64_t two = transfer(b, Direction::to_device, c).cycles * 2;
            std::uint64_t one = transfer(2 * b, Direction::to_device, c).cycles;
            CHECK(two > one);
        }
    }
}

TEST_CASE("ExecStats additivity") {
    ExecStats a{10, 5, 0, 1};
    ExecStats b{7, 0, 3, 2};
    ExecStats sum = a + b;
    CHECK(sum.cycles == 17);
    CHECK(sum.bytes_to_device == 5);
    CHECK(sum.bytes_from_device == 3);
    CHECK(sum.kernel_launches == 3);

    // standalone gpu layer = transfer_in + device + transfer_out, field-wise
    CostParams c = unit_costs();
    std::mt19937 rng(11);
    nn::Tensor input = random_q8(rng, nn::Shape{1, 3, 3, 1}, nn::QuantParams{0.25, 0});
    LayerSpec conv = nine_mac_conv(rng);
    auto [out, stats] = exec_layer(Backend::gpu, conv, input, c);
    auto [out2, device] = exec_layer_device(Backend::gpu, conv, input, c);
    ExecStats manual = transfer(static_cast<std::uint64_t>(input.byte_size()),
                                Direction::to_device, c);
    manual += device;
    manual += transfer(static_cast<std::uint64_t>(out2.byte_size()), Direction::from_device, c);
    CHECK(stats == manual);
    CHECK(out == out2);
}

TEST_CASE("gpu layer stats carry a launch and the full byte traffic") {
    CostParams c = unit_costs();
    std::mt19937 rng(21);
    nn::Tensor input = random_q8(rng, nn::Shape{1, 6, 6, 3}, nn::QuantParams{0.25, 0});
    nn::Tensor w = random_q8(rng, nn::Shape{4, 3, 3, 3}, nn::QuantParams{1.0 / 32.0, 0});
    LayerSpec conv = LayerSpec::conv("c", std::move(w), {0, 0, 0, 0}, 1, nn::Padding::same,
                                     nn::QuantParams{0.5, 0});
    auto [out, stats] = exec_layer(Backend::gpu, conv, input, c);
    CHECK(stats.kernel_launches >= 1);
    CHECK(stats.bytes_to_device == static_cast<std::uint64_t>(input.byte_size()));
    CHECK(stats.bytes_from_device == static_cast<std::uint64_t>(out.byte_size()));
}

TEST_CASE("backends produce bit-identical tensors across 100+ random layers") {
    CostParams c = unit_costs();
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> dim(3, 8);
    std::uniform_int_distribution<int> ch(1, 5);
    std::uniform_int_distribution<int> pick(0, 3);

    for (int trial = 0; trial < 110; ++trial) {
        nn::Shape is{1, dim(rng), dim(rng), ch(rng)};
        nn::Tensor input = random_q8(rng, is, nn::QuantParams{0.25, 0});
        LayerSpec layer;
        switch (pick(rng)) {
            case 0: {
                int k = 1 + static_cast<int>(rng() % 3);
                nn::Tensor w =
                    random_q8(rng, nn::Shape{ch(rng), k, k, is.c}, nn::QuantParams{1.0 / 32.0, 0});
                std::vector<int32_t> bias(static_cast<size_t>(w.shape().n), 3);
                bool fuse = rng() % 2;
                layer = LayerSpec::conv("c", std::move(w), std::move(bias), 1, nn::Padding::same,
                                        nn::QuantParams{0.5, 0},
                                        fuse ? std::optional(nn::Activation::relu) : std::nullopt);
                break;
            }
            case 1: layer = LayerSpec::pool("p", 2, 2); break;
            case 2: layer = LayerSpec::upsample("u", 2); break;
            default:
                layer = LayerSpec::activation_layer(
                    "a", rng() % 2 ? nn::Activation::relu : nn::Activation::sigmoid);
                break;
        }
        auto [cpu_out, cpu_stats] = exec_layer_device(Backend::cpu, layer, input, c);
        auto [simd_out, simd_stats] = exec_layer_device(Backend::simd, layer, input, c);
        auto [gpu_out, gpu_stats] = exec_layer_device(Backend::gpu, layer, input, c);
        REQUIRE(cpu_out == simd_out);
        REQUIRE(cpu_out == gpu_out);
        // cycle accounting differs between backends even though the math agrees
        CHECK(cpu_stats.kernel_launches == 0);
        CHECK(gpu_stats.kernel_launches == 1);
    }
}

TEST_CASE("cost is monotone in the amount of work") {
    CostParams c = unit_costs();
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        WorkTerm small{1 + rng() % 1000, 1 + rng() % 64};
        WorkTerm big{small.items + rng() % 1000, small.per_item + rng() % 64};
        CHECK(cpu_term_cycles(small, c) <= cpu_term_cycles(big, c));
        CHECK(simd_term_cycles(small, c) <= simd_term_cycles(big, c));
        CHECK(gpu_term_cycles(small, c) <= gpu_term_cycles(big, c));
    }
}

TEST_CASE("kernel blob round trip") {
    KernelBlob blob;
    blob.name = "conv2d";
    blob.kind = LayerKind::conv2d;
    auto bytes = embed_blob(blob);
    CHECK(load_blob(bytes) == blob);

    blob.payload = {1, 2, 3, 4, 5};
    blob.name = "maxpool2d";
    blob.kind = LayerKind::maxpool2d;
    CHECK(load_blob(embed_blob(blob)) == blob);
}

TEST_CASE("kernel blob load errors") {
    KernelBlob blob;
    blob.name = "k";
    blob.payload = {9, 9};
    auto good = embed_blob(blob);

    SUBCASE("bad magic") {
        auto bad = good;
        bad[0] = 'X';
        bad[1] = 'X';
        bad[2] = 'X';
        bad[3] = 'X';
        CHECK_THROWS_WITH_AS(load_blob(bad), doctest::Contains("not a kernel blob"),
                             std::runtime_error);
    }
    SUBCASE("unsupported version") {
        auto bad = good;
        bad[4] = 42;
        CHECK_THROWS_WITH_AS(load_blob(bad), doctest::Contains("version"), std::runtime_error);
    }
    SUBCASE("payload length past the end") {
        auto bad = good;
        // payload_len sits after magic(4) + version(4) + name_len(2) + name + kind(1)
        bad[4 + 4 + 2 + blob.name.size() + 1] = 0xff;
        CHECK_THROWS_WITH_AS(load_blob(bad), doctest::Contains("truncated"), std::runtime_error);
    }
    SUBCASE("truncated buffer") {
        auto bad = good;
        bad.resize(bad.size() - 1);
        CHECK_THROWS_AS(load_blob(bad), std::runtime_error);
    }
    SUBCASE("unknown layer kind") {
        auto bad = good;
        bad[4 + 4 + 2 + blob.name.size()] = 99;  // kind byte follows the name
        CHECK_THROWS_WITH_AS(load_blob(bad), doctest::Contains("layer kind"), std::runtime_error);
    }
}

TEST_CASE("gpu execution requires an embedded kernel for the layer kind") {
    CostParams c = unit_costs();
    std::mt19937 rng(5);
    nn::Tensor input = random_q8(rng, nn::Shape{1, 4, 4, 1}, nn::QuantParams{0.25, 0});
    LayerSpec pool = LayerSpec::pool("p", 2, 2);

    KernelRegistry empty;
    CHECK_THROWS_WITH_AS(exec_layer_device(Backend::gpu, pool, input, c, empty),
                         doctest::Contains("no embedded kernel"), std::runtime_error);
    // the default registry carries one blob per layer kind
    CHECK_NOTHROW(exec_layer_device(Backend::gpu, pool, input, c));
    // cpu/simd paths never consult the registry
    CHECK_NOTHROW(exec_layer_device(Backend::cpu, pool, input, c, empty));
}

TEST_CASE("cost params parsing") {
    SUBCASE("defaults match the shipped calibration file") {
        CostParams from_file = load_cost_params(std::string(SOCSIM_SCENARIO_DIR) +
                                                "/default_costs.cfg");
        CostParams defaults;
        CHECK(from_file.cpu_cycles_per_mac == defaults.cpu_cycles_per_mac);
        CHECK(from_file.cpu_issue_width == defaults.cpu_issue_width);
        CHECK(from_file.simd_lanes == defaults.simd_lanes);
        CHECK(from_file.simd_cycles_per_op == defaults.simd_cycles_per_op);
        CHECK(from_file.simd_setup_cycles_per_layer == defaults.simd_setup_cycles_per_layer);
        CHECK(from_file.gpu_warps == defaults.gpu_warps);
        CHECK(from_file.gpu_threads_per_warp == defaults.gpu_threads_per_warp);
        CHECK(from_file.gpu_cycles_per_item == defaults.gpu_cycles_per_item);
        CHECK(from_file.gpu_launch_overhead_cycles == defaults.gpu_launch_overhead_cycles);
        CHECK(from_file.gpu_clock_ratio == defaults.gpu_clock_ratio);
        CHECK(from_file.link_latency_cycles == defaults.link_latency_cycles);
        CHECK(from_file.link_bytes_per_cycle == defaults.link_bytes_per_cycle);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(parse_cost_params("bogus_key = 1\n"),
                             doctest::Contains("unknown key"), std::invalid_argument);
    }
    SUBCASE("bad numbers are rejected") {
        CHECK_THROWS_AS(parse_cost_params("simd_lanes = eight\n"), std::invalid_argument);
    }
    SUBCASE("invalid values fail validation") {
        CHECK_THROWS_AS(parse_cost_params("gpu_clock_ratio = 0\n"), std::invalid_argument);
    }
}
