// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socsim/backends.hpp"
#include "socsim/hypervisor.hpp"
#include "socsim/metrics.hpp"
#include "socsim/tensor.hpp"

namespace socsim::workloads {

enum class OutputKind { coverage_map, detections };

/// Deterministic toy network. Weights are a pure function of the seed;
/// biases are zero by construction.
struct NetworkSpec {
    std::string name;
    OutputKind output = OutputKind::coverage_map;
    nn::Shape input_shape;
    nn::QuantParams input_quant{1.0 / 128.0, 0};
    std::vector<backends::LayerSpec> layers;
    std::uint32_t weight_seed = 0;
    double cell_size = 16.0;        // detector decode granularity
    double score_threshold = 0.7;   // detector
    double iou_threshold = 0.45;    // detector NMS

    /// Canonical byte image of the network (architecture + weights).
    std::vector<std::uint8_t> serialize() const;
};

/// Multiplicative LCG (Lehmer, modulus 2^31-1, multiplier 48271) used
/// for every seeded byte in the artifact.
class Lcg {
public:
    explicit Lcg(std::uint32_t seed);
    std::uint32_t next();
    /// Weight code in [-127, 127].
    std::int8_t next_weight();
    /// Byte in [0, 255].
    std::uint8_t next_byte();

private:
    std::uint64_t state_;
};

/// Encoder/decoder segmentation net: 1x32x32x3 q8 in, 32x32 coverage
/// map out. Seven layers, six program steps (the head sigmoid shares
/// the head conv's step).
NetworkSpec build_cloud_unet(std::uint32_t seed);

/// Four conv/pool stages plus a 5-channel detection head on a 4x4 grid:
/// 1x64x64x3 q8 in, box list out. Strictly more MACs than the cloud net.
NetworkSpec build_ship_detector(std::uint32_t seed);

NetworkSpec build_network(const std::string& name, std::uint32_t seed);

std::uint64_t total_macs(const NetworkSpec& net);
/// Input shape of every layer (element i feeds layers[i]).
std::vector<nn::Shape> layer_input_shapes(const NetworkSpec& net);

struct ImageFixture {
    std::string name;
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;  // row-major, channel-minor
    std::optional<nn::Tensor> truth_mask;
    std::vector<nn::BoundingBox> truth_boxes;

    std::uint64_t byte_size() const {
        return static_cast<std::uint64_t>(width) * height * channels;
    }
};

/// Load an embedded fixture by name ("cloud_demo_32", "ship_demo_64")
/// or parse binary PGM (P5) / PPM (P6) bytes with max value 255.
ImageFixture load_image(const std::string& embedded_name);
ImageFixture load_image(const std::vector<std::uint8_t>& netpbm_bytes);

/// Centered q8 input: code = pixel - 128, scale 1/128, zero_point 0.
nn::Tensor image_to_tensor(const ImageFixture& img);

/// Pipeline step tags, in mandatory order. GPU-only steps appear iff
/// the backend is gpu.
enum class StepTag {
    load_image,
    acquire_gpu,
    transfer_in,
    infer_layer,
    transfer_out,
    release_gpu,
    emit_output,
};

struct ProgramStep {
    StepTag tag = StepTag::load_image;
    int group = -1;  // infer_layer: index into layer_groups()
};

struct WorkloadProgram {
    backends::Backend backend = backends::Backend::cpu;
    std::vector<ProgramStep> steps;
};

WorkloadProgram build_program(const NetworkSpec& net, backends::Backend backend);

/// Layers grouped into program steps: a standalone activation joins the
/// preceding conv, everything else stands alone. One group = one GPU
/// kernel launch = one SIMD setup.
std::vector<std::vector<std::size_t>> layer_groups(const NetworkSpec& net);

/// Host-clock cycles of one group on one backend (GPU launch overhead
/// and clock ratio applied; transfers not included).
std::uint64_t group_cycles(const NetworkSpec& net, const std::vector<std::size_t>& group,
                           backends::Backend backend, const backends::CostParams& cost);

struct InferenceOutput {
    nn::Tensor raw;
    std::optional<double> coverage;            // coverage_map nets
    std::optional<nn::Tensor> mask;
    std::vector<nn::BoundingBox> boxes;        // detection nets
    std::string summary;

    bool operator==(const InferenceOutput& o) const {
        return raw == o.raw && coverage == o.coverage && boxes == o.boxes &&
               summary == o.summary;
    }
};

/// Run the loader/inference/output pipeline functionally and account
/// its cost. Output tensors are bit-identical across backends.
std::pair<InferenceOutput, backends::ExecStats> run_inference(const NetworkSpec& net,
                                                              const ImageFixture& image,
                                                              backends::Backend backend,
                                                              const backends::CostParams& cost);

/// Compile the pipeline into engine steps with precomputed cycle costs.
std::vector<sched::Step> compile_program(const NetworkSpec& net, const ImageFixture& image,
                                         backends::Backend backend,
                                         const backends::CostParams& cost);

}  // namespace socsim::workloads
