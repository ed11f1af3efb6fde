// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/backends.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace socsim::backends {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::cpu: return "cpu";
        case Backend::simd: return "simd";
        case Backend::gpu: return "gpu";
    }
    return "?";
}

std::optional<Backend> backend_from_name(const std::string& name) {
    if (name == "cpu") return Backend::cpu;
    if (name == "simd") return Backend::simd;
    if (name == "gpu") return Backend::gpu;
    return std::nullopt;
}

void CostParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    positive(cpu_cycles_per_mac, "cpu_cycles_per_mac");
    positive(static_cast<double>(cpu_issue_width), "cpu_issue_width");
    positive(static_cast<double>(simd_lanes), "simd_lanes");
    positive(simd_cycles_per_op, "simd_cycles_per_op");
    positive(static_cast<double>(gpu_warps), "gpu_warps");
    positive(static_cast<double>(gpu_threads_per_warp), "gpu_threads_per_warp");
    positive(gpu_cycles_per_item, "gpu_cycles_per_item");
    positive(gpu_clock_ratio, "gpu_clock_ratio");
    positive(link_bytes_per_cycle, "link_bytes_per_cycle");
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

CostParams parse_cost_params(const std::string& text) {
    CostParams p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("cost params line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        double num;
        try {
            size_t used = 0;
            num = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw std::invalid_argument("cost params line " + std::to_string(lineno) +
                                        ": bad numeric value '" + val + "'");
        }
        if (key == "cpu_cycles_per_mac") p.cpu_cycles_per_mac = num;
        else if (key == "cpu_issue_width") p.cpu_issue_width = static_cast<int>(num);
        else if (key == "simd_lanes") p.simd_lanes = static_cast<int>(num);
        else if (key == "simd_cycles_per_op") p.simd_cycles_per_op = num;
        else if (key == "simd_setup_cycles_per_layer")
            p.simd_setup_cycles_per_layer = static_cast<std::uint64_t>(num);
        else if (key == "gpu_warps") p.gpu_warps = static_cast<int>(num);
        else if (key == "gpu_threads_per_warp") p.gpu_threads_per_warp = static_cast<int>(num);
        else if (key == "gpu_cycles_per_item") p.gpu_cycles_per_item = num;
        else if (key == "gpu_launch_overhead_cycles")
            p.gpu_launch_overhead_cycles = static_cast<std::uint64_t>(num);
        else if (key == "gpu_clock_ratio") p.gpu_clock_ratio = num;
        else if (key == "link_latency_cycles")
            p.link_latency_cycles = static_cast<std::uint64_t>(num);
        else if (key == "link_bytes_per_cycle") p.link_bytes_per_cycle = num;
        else
            throw std::invalid_argument("cost params line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    p.validate();
    return p;
}

CostParams load_cost_params(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open cost params file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_cost_params(ss.str());
}

ExecStats& ExecStats::operator+=(const ExecStats& o) {
    cycles += o.cycles;
    bytes_to_device += o.bytes_to_device;
    bytes_from_device += o.bytes_from_device;
    kernel_launches += o.kernel_launches;
    return *this;
}

LayerSpec LayerSpec::conv(std::string name, nn::Tensor weights, std::vector<std::int32_t> bias,
                          int stride, nn::Padding padding, nn::QuantParams out_quant,
                          std::optional<nn::Activation> fused) {
    LayerSpec l;
    l.kind = LayerKind::conv2d;
    l.name = std::move(name);
    l.weights = std::move(weights);
    l.bias = std::move(bias);
    l.stride = stride;
    l.padding = padding;
    l.out_quant = out_quant;
    l.fused_act = fused;
    return l;
}

LayerSpec LayerSpec::pool(std::string name, int window, int stride) {
    LayerSpec l;
    l.kind = LayerKind::maxpool2d;
    l.name = std::move(name);
    l.window = window;
    l.stride = stride;
    return l;
}

LayerSpec LayerSpec::upsample(std::string name, int factor) {
    LayerSpec l;
    l.kind = LayerKind::upsample2d;
    l.name = std::move(name);
    l.factor = factor;
    return l;
}

LayerSpec LayerSpec::activation_layer(std::string name, nn::Activation kind) {
    LayerSpec l;
    l.kind = LayerKind::activation;
    l.name = std::move(name);
    l.act = kind;
    return l;
}

nn::Shape layer_out_shape(const LayerSpec& layer, const nn::Shape& in) {
    switch (layer.kind) {
        case LayerKind::conv2d: {
            const nn::Shape& ws = layer.weights.shape();
            return nn::Shape{in.n, nn::conv_out_dim(in.h, ws.h, layer.stride, layer.padding),
                             nn::conv_out_dim(in.w, ws.w, layer.stride, layer.padding), ws.n};
        }
        case LayerKind::maxpool2d:
            return nn::Shape{in.n, (in.h - layer.window) / layer.stride + 1,
                             (in.w - layer.window) / layer.stride + 1, in.c};
        case LayerKind::upsample2d:
            return nn::Shape{in.n, in.h * layer.factor, in.w * layer.factor, in.c};
        case LayerKind::activation:
            return in;
    }
    throw std::logic_error("unreachable layer kind");
}

std::vector<WorkTerm> layer_work(const LayerSpec& layer, const nn::Shape& in) {
    nn::Shape out = layer_out_shape(layer, in);
    std::uint64_t out_elems = static_cast<std::uint64_t>(out.elems());
    std::vector<WorkTerm> terms;
    if (layer.kind == LayerKind::conv2d) {
        const nn::Shape& ws = layer.weights.shape();
        std::uint64_t macs_per_out =
            static_cast<std::uint64_t>(ws.h) * ws.w * ws.c;
        terms.push_back(WorkTerm{out_elems, macs_per_out});
        if (layer.fused_act) terms.push_back(WorkTerm{out_elems, 1});
    } else {
        terms.push_back(WorkTerm{out_elems, 1});
    }
    return terms;
}

std::uint64_t layer_macs(const LayerSpec& layer, const nn::Shape& in) {
    if (layer.kind != LayerKind::conv2d) return 0;
    return layer_work(layer, in)[0].items * layer_work(layer, in)[0].per_item;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

std::uint64_t ceil_to_u64(double v) {
    return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

std::uint64_t cpu_term_cycles(const WorkTerm& t, const CostParams& cost) {
    double units = static_cast<double>(t.items) * static_cast<double>(t.per_item);
    return ceil_to_u64(units * cost.cpu_cycles_per_mac / cost.cpu_issue_width);
}

std::uint64_t simd_term_cycles(const WorkTerm& t, const CostParams& cost) {
    std::uint64_t units = t.items * t.per_item;
    std::uint64_t groups = ceil_div(units, static_cast<std::uint64_t>(cost.simd_lanes));
    return ceil_to_u64(static_cast<double>(groups) * cost.simd_cycles_per_op);
}

std::uint64_t gpu_term_cycles(const WorkTerm& t, const CostParams& cost) {
    std::uint64_t rounds = ceil_div(t.items, static_cast<std::uint64_t>(cost.gpu_lane_count()));
    std::uint64_t per_round =
        ceil_to_u64(cost.gpu_cycles_per_item * static_cast<double>(t.per_item));
    return rounds * per_round;
}

std::uint64_t gpu_layer_device_cycles(const LayerSpec& layer, const nn::Shape& in,
                                      const CostParams& cost) {
    std::uint64_t cycles = cost.gpu_launch_overhead_cycles;
    for (const auto& t : layer_work(layer, in)) cycles += gpu_term_cycles(t, cost);
    return cycles;
}

std::uint64_t layer_compute_cycles(Backend b, const LayerSpec& layer, const nn::Shape& in,
                                   const CostParams& cost) {
    switch (b) {
        case Backend::cpu: {
            std::uint64_t cycles = 0;
            for (const auto& t : layer_work(layer, in)) cycles += cpu_term_cycles(t, cost);
            return cycles;
        }
        case Backend::simd: {
            std::uint64_t cycles = cost.simd_setup_cycles_per_layer;
            for (const auto& t : layer_work(layer, in)) cycles += simd_term_cycles(t, cost);
            return cycles;
        }
        case Backend::gpu:
            return ceil_to_u64(static_cast<double>(gpu_layer_device_cycles(layer, in, cost)) *
                               cost.gpu_clock_ratio);
    }
    throw std::logic_error("unreachable backend");
}

void KernelRegistry::add(KernelBlob blob) { blobs_[blob.kind] = std::move(blob); }

bool KernelRegistry::has(LayerKind kind) const { return blobs_.count(kind) != 0; }

const KernelBlob& KernelRegistry::require(LayerKind kind) const {
    auto it = blobs_.find(kind);
    if (it == blobs_.end()) {
        throw std::runtime_error(std::string("no embedded kernel for layer kind ") +
                                 layer_kind_name(kind));
    }
    return it->second;
}

const KernelRegistry& default_kernel_registry() {
    // The blobs are carried as serialized byte images, the same way a
    // precompiled kernel binary would be linked into host code, and are
    // decoded through the loader on first use.
    static const KernelRegistry registry = [] {
        KernelRegistry r;
        for (auto kind : {LayerKind::conv2d, LayerKind::maxpool2d, LayerKind::upsample2d,
                          LayerKind::activation}) {
            KernelBlob b;
            b.name = layer_kind_name(kind);
            b.kind = kind;
            b.payload = {0x13, 0x37, static_cast<std::uint8_t>(kind)};
            r.add(load_blob(embed_blob(b)));
        }
        return r;
    }();
    return registry;
}

ExecStats transfer(std::uint64_t bytes, Direction dir, const CostParams& cost) {
    ExecStats s;
    s.cycles = cost.link_latency_cycles +
               ceil_to_u64(static_cast<double>(bytes) / cost.link_bytes_per_cycle);
    if (dir == Direction::to_device)
        s.bytes_to_device = bytes;
    else
        s.bytes_from_device = bytes;
    return s;
}

namespace {

using ElementFn = std::function<void(int n, int y, int x, int c)>;

// The three backends traverse the output in different orders (scalar
// row-major, lane-blocked channels, flat warp-sized chunks). Results are
// integer math per element, so every order yields identical tensors.
void traverse_cpu(const nn::Shape& os, const ElementFn& fn) {
    for (int n = 0; n < os.n; ++n)
        for (int y = 0; y < os.h; ++y)
            for (int x = 0; x < os.w; ++x)
                for (int c = 0; c < os.c; ++c) fn(n, y, x, c);
}

void traverse_simd(const nn::Shape& os, int lanes, const ElementFn& fn) {
    for (int n = 0; n < os.n; ++n)
        for (int y = 0; y < os.h; ++y)
            for (int x = 0; x < os.w; ++x)
                for (int cb = 0; cb < os.c; cb += lanes)
                    for (int lane = 0; lane < lanes && cb + lane < os.c; ++lane)
                        fn(n, y, x, cb + lane);
}

void traverse_gpu(const nn::Shape& os, int lane_count, const ElementFn& fn) {
    std::int64_t total = os.elems();
    for (std::int64_t chunk = 0; chunk < total; chunk += lane_count)
        for (int lane = 0; lane < lane_count && chunk + lane < total; ++lane) {
            std::int64_t i = chunk + lane;
            int c = static_cast<int>(i % os.c);
            std::int64_t rest = i / os.c;
            int x = static_cast<int>(rest % os.w);
            rest /= os.w;
            int y = static_cast<int>(rest % os.h);
            int n = static_cast<int>(rest / os.h);
            fn(n, y, x, c);
        }
}

void traverse(Backend b, const nn::Shape& os, const CostParams& cost, const ElementFn& fn) {
    switch (b) {
        case Backend::cpu: traverse_cpu(os, fn); return;
        case Backend::simd: traverse_simd(os, cost.simd_lanes, fn); return;
        case Backend::gpu: traverse_gpu(os, cost.gpu_lane_count(), fn); return;
    }
}

nn::Tensor run_layer_math(Backend b, const LayerSpec& layer, const nn::Tensor& input,
                          const CostParams& cost) {
    nn::Shape os = layer_out_shape(layer, input.shape());
    switch (layer.kind) {
        case LayerKind::conv2d: {
            if (!input.is_q8()) {
                nn::Tensor out = nn::conv2d(input, layer.weights, layer.bias, layer.stride,
                                            layer.padding);
                if (layer.fused_act) out = nn::activation(out, *layer.fused_act);
                return out;
            }
            nn::Tensor out = nn::Tensor::q8(os, layer.out_quant);
            const nn::QuantParams& in_q = input.quant();
            const nn::QuantParams& w_q = layer.weights.quant();
            traverse(b, os, cost, [&](int n, int y, int x, int c) {
                std::int32_t acc = nn::conv2d_acc_q8(input, layer.weights, layer.bias,
                                                     layer.stride, layer.padding, n, y, x, c);
                out.q_data()[out.index(n, y, x, c)] =
                    nn::requantize_acc(acc, in_q, w_q, layer.out_quant);
            });
            if (layer.fused_act) return nn::activation(out, *layer.fused_act);
            return out;
        }
        case LayerKind::maxpool2d: {
            nn::Tensor out =
                input.is_q8() ? nn::Tensor::q8(os, input.quant()) : nn::Tensor::real(os);
            traverse(b, os, cost, [&](int n, int y, int x, int c) {
                if (input.is_q8()) {
                    std::int8_t m = -128;
                    for (int ky = 0; ky < layer.window; ++ky)
                        for (int kx = 0; kx < layer.window; ++kx)
                            m = std::max(m, input.q_at(n, y * layer.stride + ky,
                                                       x * layer.stride + kx, c));
                    out.q_data()[out.index(n, y, x, c)] = m;
                } else {
                    double m = input.r_at(n, y * layer.stride, x * layer.stride, c);
                    for (int ky = 0; ky < layer.window; ++ky)
                        for (int kx = 0; kx < layer.window; ++kx)
                            m = std::max(m, input.r_at(n, y * layer.stride + ky,
                                                       x * layer.stride + kx, c));
                    out.r_data()[out.index(n, y, x, c)] = m;
                }
            });
            return out;
        }
        case LayerKind::upsample2d: {
            nn::Tensor out =
                input.is_q8() ? nn::Tensor::q8(os, input.quant()) : nn::Tensor::real(os);
            traverse(b, os, cost, [&](int n, int y, int x, int c) {
                if (input.is_q8())
                    out.q_data()[out.index(n, y, x, c)] =
                        input.q_at(n, y / layer.factor, x / layer.factor, c);
                else
                    out.r_data()[out.index(n, y, x, c)] =
                        input.r_at(n, y / layer.factor, x / layer.factor, c);
            });
            return out;
        }
        case LayerKind::activation: {
            if (!input.is_q8()) return nn::activation(input, layer.act);
            if (layer.act == nn::Activation::relu) {
                nn::Tensor out = nn::Tensor::q8(os, input.quant());
                std::int8_t zp = static_cast<std::int8_t>(input.quant().zero_point);
                traverse(b, os, cost, [&](int n, int y, int x, int c) {
                    out.q_data()[out.index(n, y, x, c)] = std::max(input.q_at(n, y, x, c), zp);
                });
                return out;
            }
            auto table = nn::sigmoid_table_q8(input.quant());
            nn::Tensor out = nn::Tensor::q8(os, nn::sigmoid_out_quant());
            traverse(b, os, cost, [&](int n, int y, int x, int c) {
                out.q_data()[out.index(n, y, x, c)] =
                    table[static_cast<int>(input.q_at(n, y, x, c)) + 128];
            });
            return out;
        }
    }
    throw std::logic_error("unreachable layer kind");
}

}  // namespace

std::pair<nn::Tensor, ExecStats> exec_layer_device(Backend b, const LayerSpec& layer,
                                                   const nn::Tensor& input,
                                                   const CostParams& cost,
                                                   const KernelRegistry& registry) {
    cost.validate();
    if (b == Backend::gpu) registry.require(layer.kind);
    nn::Tensor out = run_layer_math(b, layer, input, cost);
    ExecStats stats;
    stats.cycles = layer_compute_cycles(b, layer, input.shape(), cost);
    if (b == Backend::gpu) stats.kernel_launches = 1;
    return {std::move(out), stats};
}

std::pair<nn::Tensor, ExecStats> exec_layer(Backend b, const LayerSpec& layer,
                                            const nn::Tensor& input, const CostParams& cost,
                                            const KernelRegistry& registry) {
    auto [out, stats] = exec_layer_device(b, layer, input, cost, registry);
    if (b == Backend::gpu) {
        ExecStats total = transfer(static_cast<std::uint64_t>(input.byte_size()),
                                   Direction::to_device, cost);
        total += stats;
        total += transfer(static_cast<std::uint64_t>(out.byte_size()), Direction::from_device,
                          cost);
        return {std::move(out), total};
    }
    return {std::move(out), stats};
}

}  // namespace socsim::backends
