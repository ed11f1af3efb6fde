// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/workloads.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace socsim::workloads {

using backends::Backend;
using backends::CostParams;
using backends::LayerKind;
using backends::LayerSpec;

Lcg::Lcg(std::uint32_t seed) : state_(seed % 2147483647ull) {
    if (state_ == 0) state_ = 1;
}

std::uint32_t Lcg::next() {
    state_ = (state_ * 48271ull) % 2147483647ull;
    return static_cast<std::uint32_t>(state_);
}

std::int8_t Lcg::next_weight() {
    return static_cast<std::int8_t>(static_cast<int>(next() % 255u) - 127);
}

std::uint8_t Lcg::next_byte() { return static_cast<std::uint8_t>(next() % 256u); }

namespace {

nn::Tensor seeded_weights(Lcg& rng, int out_c, int kh, int kw, int in_c) {
    nn::Shape s{out_c, kh, kw, in_c};
    std::vector<std::int8_t> data(static_cast<size_t>(s.elems()));
    for (auto& v : data) v = rng.next_weight();
    return nn::Tensor::q8(s, nn::QuantParams{1.0 / 64.0, 0}, std::move(data));
}

LayerSpec seeded_conv(Lcg& rng, const std::string& name, int out_c, int k, int in_c,
                      double out_scale, std::optional<nn::Activation> fused) {
    return LayerSpec::conv(name, seeded_weights(rng, out_c, k, k, in_c),
                           std::vector<std::int32_t>(out_c, 0), 1, nn::Padding::same,
                           nn::QuantParams{out_scale, 0}, fused);
}

}  // namespace

NetworkSpec build_cloud_unet(std::uint32_t seed) {
    NetworkSpec net;
    net.name = "cloud_unet";
    net.output = OutputKind::coverage_map;
    net.input_shape = nn::Shape{1, 32, 32, 3};
    net.weight_seed = seed;
    Lcg rng(seed);
    net.layers.push_back(seeded_conv(rng, "enc_conv", 8, 3, 3, 1.0 / 16.0, nn::Activation::relu));
    net.layers.push_back(LayerSpec::pool("enc_pool", 2, 2));
    net.layers.push_back(seeded_conv(rng, "mid_conv", 16, 3, 8, 1.0 / 8.0, nn::Activation::relu));
    net.layers.push_back(LayerSpec::upsample("dec_upsample", 2));
    net.layers.push_back(seeded_conv(rng, "dec_conv", 8, 3, 16, 1.0 / 8.0, nn::Activation::relu));
    net.layers.push_back(seeded_conv(rng, "head_conv", 1, 1, 8, 1.0 / 8.0, std::nullopt));
    net.layers.push_back(LayerSpec::activation_layer("head_sigmoid", nn::Activation::sigmoid));
    return net;
}

NetworkSpec build_ship_detector(std::uint32_t seed) {
    NetworkSpec net;
    net.name = "ship_detector";
    net.output = OutputKind::detections;
    net.input_shape = nn::Shape{1, 64, 64, 3};
    net.weight_seed = seed;
    net.cell_size = 16.0;  // 64 px / 4 grid cells
    Lcg rng(seed);
    const int channels[4] = {8, 16, 32, 32};
    int in_c = 3;
    for (int stage = 0; stage < 4; ++stage) {
        std::string tag = "stage" + std::to_string(stage + 1);
        net.layers.push_back(seeded_conv(rng, tag + "_conv", channels[stage], 3, in_c,
                                         stage == 0 ? 1.0 / 16.0 : 1.0 / 8.0,
                                         nn::Activation::relu));
        net.layers.push_back(LayerSpec::pool(tag + "_pool", 2, 2));
        in_c = channels[stage];
    }
    net.layers.push_back(seeded_conv(rng, "det_head", 5, 1, in_c, 1.0 / 8.0, std::nullopt));
    return net;
}

NetworkSpec build_network(const std::string& name, std::uint32_t seed) {
    if (name == "cloud_unet") return build_cloud_unet(seed);
    if (name == "ship_detector") return build_ship_detector(seed);
    throw std::invalid_argument("unknown workload '" + name + "'");
}

std::vector<nn::Shape> layer_input_shapes(const NetworkSpec& net) {
    std::vector<nn::Shape> shapes;
    nn::Shape cur = net.input_shape;
    for (const auto& layer : net.layers) {
        shapes.push_back(cur);
        cur = backends::layer_out_shape(layer, cur);
    }
    return shapes;
}

std::uint64_t total_macs(const NetworkSpec& net) {
    std::uint64_t macs = 0;
    auto shapes = layer_input_shapes(net);
    for (size_t i = 0; i < net.layers.size(); ++i) {
        macs += backends::layer_macs(net.layers[i], shapes[i]);
    }
    return macs;
}

std::vector<std::uint8_t> NetworkSpec::serialize() const {
    std::vector<std::uint8_t> out;
    auto put_str = [&](const std::string& s) {
        out.push_back(static_cast<std::uint8_t>(s.size()));
        out.insert(out.end(), s.begin(), s.end());
    };
    auto put_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    };
    put_str(name);
    put_u32(weight_seed);
    put_u32(static_cast<std::uint32_t>(layers.size()));
    for (const auto& l : layers) {
        out.push_back(static_cast<std::uint8_t>(l.kind));
        put_str(l.name);
        if (l.kind == LayerKind::conv2d) {
            const auto& ws = l.weights.shape();
            put_u32(static_cast<std::uint32_t>(ws.n));
            put_u32(static_cast<std::uint32_t>(ws.h));
            put_u32(static_cast<std::uint32_t>(ws.w));
            put_u32(static_cast<std::uint32_t>(ws.c));
            for (std::int8_t w : l.weights.q_data())
                out.push_back(static_cast<std::uint8_t>(w));
        }
    }
    return out;
}

namespace {

ImageFixture make_cloud_demo() {
    // 32x32 RGB scene: dim gradient background with two bright blobs.
    // The truth mask marks the blob pixels.
    ImageFixture img;
    img.name = "cloud_demo_32";
    img.width = 32;
    img.height = 32;
    img.channels = 3;
    img.pixels.resize(32 * 32 * 3);
    std::vector<std::int8_t> mask(32 * 32, 0);
    auto blob = [](int y, int x, int cy, int cx, int r) {
        return (y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r;
    };
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            bool cloud = blob(y, x, 9, 10, 5) || blob(y, x, 22, 23, 6);
            int base = cloud ? 230 : 40 + 2 * y;
            for (int c = 0; c < 3; ++c) {
                img.pixels[(y * 32 + x) * 3 + c] =
                    static_cast<std::uint8_t>(std::min(base + 8 * c, 255));
            }
            mask[y * 32 + x] = cloud ? 1 : 0;
        }
    }
    img.truth_mask = nn::Tensor::q8(nn::Shape{1, 32, 32, 1}, nn::QuantParams{1.0, 0}, mask);
    return img;
}

ImageFixture make_ship_demo() {
    // 64x64 RGB sea with two bright hulls; truth boxes bound the hulls.
    ImageFixture img;
    img.name = "ship_demo_64";
    img.width = 64;
    img.height = 64;
    img.channels = 3;
    img.pixels.resize(64 * 64 * 3);
    Lcg noise(99);
    auto in_rect = [](int y, int x, int y0, int x0, int y1, int x1) {
        return y >= y0 && y < y1 && x >= x0 && x < x1;
    };
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            bool ship = in_rect(y, x, 12, 8, 18, 30) || in_rect(y, x, 40, 36, 50, 52);
            int base = ship ? 220 : 25 + (noise.next_byte() % 20);
            for (int c = 0; c < 3; ++c) {
                img.pixels[(y * 64 + x) * 3 + c] =
                    static_cast<std::uint8_t>(std::min(base + 5 * c, 255));
            }
        }
    }
    img.truth_boxes.push_back(nn::BoundingBox{8, 12, 30, 18, 1.0});
    img.truth_boxes.push_back(nn::BoundingBox{36, 40, 52, 50, 1.0});
    return img;
}

int parse_pnm_int(const std::vector<std::uint8_t>& bytes, size_t& pos, const char* what) {
    // skip whitespace and '#' comments
    while (pos < bytes.size()) {
        char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !isdigit(bytes[pos])) {
        throw std::invalid_argument(std::string("image parse: expected ") + what);
    }
    long v = 0;
    while (pos < bytes.size() && isdigit(bytes[pos])) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1 << 20) throw std::invalid_argument(std::string("image parse: huge ") + what);
        ++pos;
    }
    return static_cast<int>(v);
}

}  // namespace

ImageFixture load_image(const std::string& embedded_name) {
    if (embedded_name == "cloud_demo_32") {
        static const ImageFixture img = make_cloud_demo();
        return img;
    }
    if (embedded_name == "ship_demo_64") {
        static const ImageFixture img = make_ship_demo();
        return img;
    }
    throw std::invalid_argument("unknown embedded fixture '" + embedded_name + "'");
}

ImageFixture load_image(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw std::invalid_argument("image parse: not a netpbm file");
    }
    char kind = static_cast<char>(bytes[1]);
    if (kind != '5' && kind != '6') {
        throw std::invalid_argument(std::string("image parse: unsupported magic 'P") + kind +
                                    "' (only binary P5/P6)");
    }
    size_t pos = 2;
    int width = parse_pnm_int(bytes, pos, "width");
    int height = parse_pnm_int(bytes, pos, "height");
    int maxval = parse_pnm_int(bytes, pos, "max value");
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("image parse: non-positive dimensions " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    if (maxval != 255) {
        throw std::invalid_argument("image parse: unsupported max value " +
                                    std::to_string(maxval));
    }
    ++pos;  // single whitespace after maxval
    int channels = kind == '5' ? 1 : 3;
    size_t need = static_cast<size_t>(width) * height * channels;
    if (bytes.size() - pos < need) {
        throw std::invalid_argument("image parse: payload shorter than dimensions (" +
                                    std::to_string(bytes.size() - pos) + " < " +
                                    std::to_string(need) + " bytes)");
    }
    ImageFixture img;
    img.name = "inline";
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + need);
    return img;
}

nn::Tensor image_to_tensor(const ImageFixture& img) {
    nn::Shape s{1, img.height, img.width, img.channels};
    std::vector<std::int8_t> data(static_cast<size_t>(s.elems()));
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        data[i] = static_cast<std::int8_t>(static_cast<int>(img.pixels[i]) - 128);
    }
    return nn::Tensor::q8(s, nn::QuantParams{1.0 / 128.0, 0}, std::move(data));
}

std::vector<std::vector<std::size_t>> layer_groups(const NetworkSpec& net) {
    std::vector<std::vector<std::size_t>> groups;
    for (size_t i = 0; i < net.layers.size(); ++i) {
        if (net.layers[i].kind == LayerKind::activation && !groups.empty() &&
            net.layers[groups.back().back()].kind == LayerKind::conv2d) {
            groups.back().push_back(i);
        } else {
            groups.push_back({i});
        }
    }
    return groups;
}

WorkloadProgram build_program(const NetworkSpec& net, Backend backend) {
    WorkloadProgram prog;
    prog.backend = backend;
    prog.steps.push_back({StepTag::load_image, -1});
    bool gpu = backend == Backend::gpu;
    if (gpu) {
        prog.steps.push_back({StepTag::acquire_gpu, -1});
        prog.steps.push_back({StepTag::transfer_in, -1});
    }
    int n_groups = static_cast<int>(layer_groups(net).size());
    for (int g = 0; g < n_groups; ++g) prog.steps.push_back({StepTag::infer_layer, g});
    if (gpu) {
        prog.steps.push_back({StepTag::transfer_out, -1});
        prog.steps.push_back({StepTag::release_gpu, -1});
    }
    prog.steps.push_back({StepTag::emit_output, -1});
    return prog;
}

std::uint64_t group_cycles(const NetworkSpec& net, const std::vector<std::size_t>& group,
                           Backend backend, const CostParams& cost) {
    auto shapes = layer_input_shapes(net);
    switch (backend) {
        case Backend::cpu: {
            std::uint64_t cycles = 0;
            for (size_t li : group)
                for (const auto& t : backends::layer_work(net.layers[li], shapes[li]))
                    cycles += backends::cpu_term_cycles(t, cost);
            return cycles;
        }
        case Backend::simd: {
            std::uint64_t cycles = cost.simd_setup_cycles_per_layer;
            for (size_t li : group)
                for (const auto& t : backends::layer_work(net.layers[li], shapes[li]))
                    cycles += backends::simd_term_cycles(t, cost);
            return cycles;
        }
        case Backend::gpu: {
            std::uint64_t device = cost.gpu_launch_overhead_cycles;
            for (size_t li : group)
                for (const auto& t : backends::layer_work(net.layers[li], shapes[li]))
                    device += backends::gpu_term_cycles(t, cost);
            return static_cast<std::uint64_t>(
                std::ceil(static_cast<double>(device) * cost.gpu_clock_ratio));
        }
    }
    throw std::logic_error("unreachable backend");
}

namespace {

std::uint64_t memcpy_cycles(std::uint64_t bytes) { return (bytes + 7) / 8; }

std::string group_label(const NetworkSpec& net, const std::vector<std::size_t>& group) {
    return "infer " + net.layers[group.front()].name;
}

}  // namespace

std::pair<InferenceOutput, backends::ExecStats> run_inference(const NetworkSpec& net,
                                                              const ImageFixture& image,
                                                              Backend backend,
                                                              const CostParams& cost) {
    if (image.height != net.input_shape.h || image.width != net.input_shape.w ||
        image.channels != net.input_shape.c) {
        throw std::invalid_argument(
            "run_inference: image " + std::to_string(image.width) + "x" +
            std::to_string(image.height) + "x" + std::to_string(image.channels) +
            " does not match network input " + net.input_shape.str());
    }
    nn::Tensor cur = image_to_tensor(image);
    std::uint64_t in_bytes = static_cast<std::uint64_t>(cur.byte_size());

    backends::ExecStats stats;
    auto groups = layer_groups(net);
    for (const auto& group : groups) {
        for (size_t li : group) {
            auto [out, layer_stats] = backends::exec_layer_device(backend, net.layers[li], cur, cost);
            (void)layer_stats;  // cost is accounted per group below
            cur = std::move(out);
        }
        stats.cycles += group_cycles(net, group, backend, cost);
        if (backend == Backend::gpu) stats.kernel_launches += 1;
    }
    if (backend == Backend::gpu) {
        stats += backends::transfer(in_bytes, backends::Direction::to_device, cost);
        stats += backends::transfer(static_cast<std::uint64_t>(cur.byte_size()),
                                    backends::Direction::from_device, cost);
    }

    InferenceOutput out;
    out.raw = cur;
    std::ostringstream summary;
    if (net.output == OutputKind::coverage_map) {
        nn::Tensor mask = nn::binarize(cur, 0.5);
        double pct = nn::cloud_coverage(mask);
        out.mask = std::move(mask);
        out.coverage = pct;
        summary << "coverage=" << pct << "%";
    } else {
        out.boxes = nn::decode_and_nms(cur, net.score_threshold, net.iou_threshold, net.cell_size);
        summary << "boxes=" << out.boxes.size();
    }
    out.summary = summary.str();
    return {std::move(out), stats};
}

std::vector<sched::Step> compile_program(const NetworkSpec& net, const ImageFixture& image,
                                         Backend backend, const CostParams& cost) {
    auto groups = layer_groups(net);
    auto shapes = layer_input_shapes(net);
    nn::Shape out_shape = shapes.back();
    out_shape = backends::layer_out_shape(net.layers.back(), out_shape);
    std::uint64_t in_bytes = static_cast<std::uint64_t>(image.byte_size());
    std::uint64_t out_bytes = static_cast<std::uint64_t>(out_shape.elems());

    std::vector<sched::Step> steps;
    for (const auto& ps : build_program(net, backend).steps) {
        switch (ps.tag) {
            case StepTag::load_image:
                steps.push_back(sched::Step::burst("load_image", memcpy_cycles(in_bytes)));
                break;
            case StepTag::acquire_gpu:
                steps.push_back(sched::Step::acquire());
                break;
            case StepTag::transfer_in:
                steps.push_back(sched::Step::burst(
                    "transfer_in",
                    backends::transfer(in_bytes, backends::Direction::to_device, cost).cycles));
                break;
            case StepTag::infer_layer: {
                const auto& group = groups[static_cast<size_t>(ps.group)];
                std::uint64_t cycles = group_cycles(net, group, backend, cost);
                if (backend == Backend::gpu) {
                    steps.push_back(sched::Step::launch(group_label(net, group), cycles));
                } else {
                    steps.push_back(sched::Step::burst(group_label(net, group), cycles));
                }
                break;
            }
            case StepTag::transfer_out:
                steps.push_back(sched::Step::burst(
                    "transfer_out",
                    backends::transfer(out_bytes, backends::Direction::from_device, cost).cycles));
                break;
            case StepTag::release_gpu:
                steps.push_back(sched::Step::release());
                break;
            case StepTag::emit_output:
                steps.push_back(sched::Step::burst("emit_output", memcpy_cycles(out_bytes)));
                break;
        }
    }
    return steps;
}

}  // namespace socsim::workloads
