// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socsim/kernel_blob.hpp"
#include "socsim/tensor.hpp"

namespace socsim::backends {

enum class Backend { cpu, simd, gpu };

const char* backend_name(Backend b);
std::optional<Backend> backend_from_name(const std::string& name);

/// Cycle-cost constants for the three execution models and the
/// host<->device link. Defaults are the shipped calibration.
struct CostParams {
    double cpu_cycles_per_mac = 1.0;
    int cpu_issue_width = 2;
    int simd_lanes = 8;
    double simd_cycles_per_op = 1.875;
    std::uint64_t simd_setup_cycles_per_layer = 100;
    int gpu_warps = 4;
    int gpu_threads_per_warp = 4;
    double gpu_cycles_per_item = 1.0;
    std::uint64_t gpu_launch_overhead_cycles = 500;
    double gpu_clock_ratio = 5.5;  // GPU cycles per CPU cycle
    std::uint64_t link_latency_cycles = 200;
    double link_bytes_per_cycle = 4.0;

    int gpu_lane_count() const { return gpu_warps * gpu_threads_per_warp; }
    void validate() const;
};

/// Parse a `key = value` calibration file body. Keys must match
/// CostParams field names; unknown keys are errors. Missing keys keep
/// their defaults. Lines starting with '#' are comments.
CostParams parse_cost_params(const std::string& text);
CostParams load_cost_params(const std::string& path);

/// Simulated-cycle accounting. Additive over sequences of operations.
struct ExecStats {
    std::uint64_t cycles = 0;  // host-clock
    std::uint64_t bytes_to_device = 0;
    std::uint64_t bytes_from_device = 0;
    std::uint32_t kernel_launches = 0;

    ExecStats& operator+=(const ExecStats& o);
    friend ExecStats operator+(ExecStats a, const ExecStats& b) { return a += b; }
    bool operator==(const ExecStats&) const = default;
};

/// One executable layer. Conv layers may carry a fused activation,
/// which shares the layer's setup/launch for cost purposes.
struct LayerSpec {
    LayerKind kind = LayerKind::conv2d;
    std::string name;

    // conv2d
    nn::Tensor weights;  // (out_c, kh, kw, in_c)
    std::vector<std::int32_t> bias;
    int stride = 1;
    nn::Padding padding = nn::Padding::same;
    nn::QuantParams out_quant;
    std::optional<nn::Activation> fused_act;

    // maxpool2d
    int window = 2;

    // upsample2d
    int factor = 2;

    // standalone activation
    nn::Activation act = nn::Activation::relu;

    static LayerSpec conv(std::string name, nn::Tensor weights, std::vector<std::int32_t> bias,
                          int stride, nn::Padding padding, nn::QuantParams out_quant,
                          std::optional<nn::Activation> fused = std::nullopt);
    static LayerSpec pool(std::string name, int window, int stride);
    static LayerSpec upsample(std::string name, int factor);
    static LayerSpec activation_layer(std::string name, nn::Activation kind);
};

/// One parallelizable term of a layer's work: `items` independent
/// outputs, each needing `per_item` unit operations (MACs for conv,
/// 1 otherwise).
struct WorkTerm {
    std::uint64_t items = 0;
    std::uint64_t per_item = 1;
};

nn::Shape layer_out_shape(const LayerSpec& layer, const nn::Shape& in);
std::vector<WorkTerm> layer_work(const LayerSpec& layer, const nn::Shape& in);
std::uint64_t layer_macs(const LayerSpec& layer, const nn::Shape& in);

// Cost formulas. Layer cost is the sum of its work terms plus the
// backend's per-layer constant (SIMD setup, GPU launch).
std::uint64_t cpu_term_cycles(const WorkTerm& t, const CostParams& cost);
std::uint64_t simd_term_cycles(const WorkTerm& t, const CostParams& cost);
std::uint64_t gpu_term_cycles(const WorkTerm& t, const CostParams& cost);
/// GPU-clock cycles for a whole layer (launch overhead included).
std::uint64_t gpu_layer_device_cycles(const LayerSpec& layer, const nn::Shape& in,
                                      const CostParams& cost);
/// Host-clock cycles for a layer on the given backend (GPU converts by
/// gpu_clock_ratio; transfers are not included).
std::uint64_t layer_compute_cycles(Backend b, const LayerSpec& layer, const nn::Shape& in,
                                   const CostParams& cost);

/// Embedded device kernels, keyed by layer kind.
class KernelRegistry {
public:
    void add(KernelBlob blob);
    const KernelBlob& require(LayerKind kind) const;
    bool has(LayerKind kind) const;

private:
    std::map<LayerKind, KernelBlob> blobs_;
};

/// Registry built from the byte blobs compiled into this library.
const KernelRegistry& default_kernel_registry();

/// Modeled host<->device transfer: link_latency + ceil(bytes/rate) cycles.
enum class Direction { to_device, from_device };
ExecStats transfer(std::uint64_t bytes, Direction dir, const CostParams& cost);

/// Execute one layer functionally and account its cost. Output tensors
/// are bit-identical across backends; only ExecStats differ. The GPU
/// path assumes operands are already device-resident (one kernel
/// launch, no transfers) — use exec_layer for the standalone form.
std::pair<nn::Tensor, ExecStats> exec_layer_device(Backend b, const LayerSpec& layer,
                                                   const nn::Tensor& input,
                                                   const CostParams& cost,
                                                   const KernelRegistry& registry =
                                                       default_kernel_registry());

/// Standalone layer execution. On the GPU backend this transfers the
/// input to the device and the output back, on top of the kernel launch.
std::pair<nn::Tensor, ExecStats> exec_layer(Backend b, const LayerSpec& layer,
                                            const nn::Tensor& input, const CostParams& cost,
                                            const KernelRegistry& registry =
                                                default_kernel_registry());

}  // namespace socsim::backends
