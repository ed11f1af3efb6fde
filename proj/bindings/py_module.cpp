// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "socsim/backends.hpp"
#include "socsim/experiments.hpp"
#include "socsim/kernel_blob.hpp"
#include "socsim/metrics.hpp"
#include "socsim/tensor.hpp"
#include "socsim/workloads.hpp"

namespace py = pybind11;
using namespace socsim;

namespace {

backends::Backend to_backend(const std::string& name) {
    auto b = backends::backend_from_name(name);
    if (!b) throw std::invalid_argument("unknown backend '" + name + "'");
    return *b;
}

nn::Tensor make_q8(std::tuple<int, int, int, int> shape, double scale, int zero_point,
                   const std::vector<int>& data) {
    auto [n, h, w, c] = shape;
    std::vector<std::int8_t> q;
    q.reserve(data.size());
    for (int v : data) {
        if (v < -128 || v > 127) throw std::invalid_argument("q8 code out of range");
        q.push_back(static_cast<std::int8_t>(v));
    }
    return nn::Tensor::q8(nn::Shape{n, h, w, c}, nn::QuantParams{scale, zero_point},
                          std::move(q));
}

std::vector<int> tensor_codes(const nn::Tensor& t) {
    if (!t.is_q8()) throw std::invalid_argument("tensor is not q8");
    return {t.q_data().begin(), t.q_data().end()};
}

py::dict stats_dict(const backends::ExecStats& s) {
    py::dict d;
    d["cycles"] = s.cycles;
    d["bytes_to_device"] = s.bytes_to_device;
    d["bytes_from_device"] = s.bytes_from_device;
    d["kernel_launches"] = s.kernel_launches;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "socsim: partitioned heterogeneous SoC simulator";

    py::class_<nn::Tensor>(m, "Tensor")
        .def_static("q8", &make_q8, py::arg("shape"), py::arg("scale") = 1.0,
                    py::arg("zero_point") = 0, py::arg("data") = std::vector<int>{})
        .def_property_readonly("shape",
                               [](const nn::Tensor& t) {
                                   const auto& s = t.shape();
                                   return py::make_tuple(s.n, s.h, s.w, s.c);
                               })
        .def_property_readonly("codes", &tensor_codes)
        .def("__eq__", [](const nn::Tensor& a, const nn::Tensor& b) { return a == b; });

    py::class_<nn::BoundingBox>(m, "BoundingBox")
        .def(py::init([](double x_min, double y_min, double x_max, double y_max, double score) {
                 return nn::BoundingBox{x_min, y_min, x_max, y_max, score};
             }),
             py::arg("x_min"), py::arg("y_min"), py::arg("x_max"), py::arg("y_max"),
             py::arg("score") = 1.0)
        .def_readonly("x_min", &nn::BoundingBox::x_min)
        .def_readonly("y_min", &nn::BoundingBox::y_min)
        .def_readonly("x_max", &nn::BoundingBox::x_max)
        .def_readonly("y_max", &nn::BoundingBox::y_max)
        .def_readonly("score", &nn::BoundingBox::score)
        .def("__repr__", [](const nn::BoundingBox& b) {
            return "BoundingBox(" + std::to_string(b.x_min) + ", " + std::to_string(b.y_min) +
                   ", " + std::to_string(b.x_max) + ", " + std::to_string(b.y_max) +
                   ", score=" + std::to_string(b.score) + ")";
        });

    m.def("iou", &nn::iou, py::arg("a"), py::arg("b"));
    m.def("cloud_coverage", &nn::cloud_coverage, py::arg("mask"));
    m.def(
        "quantize",
        [](const std::vector<double>& xs, double scale, int zero_point) {
            auto q = nn::quantize(xs, nn::QuantParams{scale, zero_point});
            return std::vector<int>(q.begin(), q.end());
        },
        py::arg("values"), py::arg("scale"), py::arg("zero_point") = 0);
    m.def(
        "dequantize",
        [](const std::vector<int>& codes, double scale, int zero_point) {
            std::vector<std::int8_t> q;
            for (int v : codes) q.push_back(static_cast<std::int8_t>(v));
            return nn::dequantize(q, nn::QuantParams{scale, zero_point});
        },
        py::arg("codes"), py::arg("scale"), py::arg("zero_point") = 0);

    m.def(
        "conv2d",
        [](const nn::Tensor& input, const nn::Tensor& weights, const std::vector<int>& bias,
           int stride, const std::string& padding, double out_scale, int out_zero_point) {
            std::vector<std::int32_t> b(bias.begin(), bias.end());
            return nn::conv2d(input, weights, b, stride,
                              padding == "same" ? nn::Padding::same : nn::Padding::valid,
                              nn::QuantParams{out_scale, out_zero_point});
        },
        py::arg("input"), py::arg("weights"), py::arg("bias"), py::arg("stride") = 1,
        py::arg("padding") = "same", py::arg("out_scale") = 1.0, py::arg("out_zero_point") = 0);
    m.def("maxpool2d", &nn::maxpool2d, py::arg("input"), py::arg("window"), py::arg("stride"));
    m.def("upsample2d_nearest", &nn::upsample2d_nearest, py::arg("input"), py::arg("factor"));
    m.def(
        "decode_and_nms",
        [](const nn::Tensor& head, double score_threshold, double iou_threshold,
           double cell_size) {
            return nn::decode_and_nms(head, score_threshold, iou_threshold, cell_size);
        },
        py::arg("head"), py::arg("score_threshold"), py::arg("iou_threshold"),
        py::arg("cell_size") = 16.0);

    m.def(
        "embed_blob",
        [](const std::string& name, int kind, py::bytes payload) {
            backends::KernelBlob blob;
            blob.name = name;
            blob.kind = static_cast<backends::LayerKind>(kind);
            std::string p = payload;
            blob.payload.assign(p.begin(), p.end());
            auto bytes = backends::embed_blob(blob);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("name"), py::arg("kind") = 0, py::arg("payload") = py::bytes());
    m.def(
        "load_blob",
        [](py::bytes data) {
            std::string s = data;
            auto blob = backends::load_blob({s.begin(), s.end()});
            py::dict d;
            d["name"] = blob.name;
            d["kind"] = static_cast<int>(blob.kind);
            d["payload"] = py::bytes(reinterpret_cast<const char*>(blob.payload.data()),
                                     blob.payload.size());
            return d;
        },
        py::arg("data"));

    m.def(
        "run_inference",
        [](const std::string& workload, const std::string& image, const std::string& backend,
           std::uint32_t seed) {
            auto net = workloads::build_network(workload, seed);
            auto img = workloads::load_image(image);
            auto [out, stats] = workloads::run_inference(net, img, to_backend(backend),
                                                         backends::CostParams{});
            py::dict d;
            d["summary"] = out.summary;
            d["stats"] = stats_dict(stats);
            if (out.coverage) d["coverage"] = *out.coverage;
            d["boxes"] = out.boxes;
            return d;
        },
        py::arg("workload"), py::arg("image"), py::arg("backend") = "cpu", py::arg("seed") = 25);

    m.def(
        "validate_scenario",
        [](const std::string& path) {
            return bench::validate_scenario(bench::load_scenario(path));
        },
        py::arg("path"));
    m.def(
        "run_scenario",
        [](const std::string& path, const std::string& mode) {
            auto cfg = bench::load_scenario(path);
            cfg.mode = mode == "fast" ? bench::RunMode::fast : bench::RunMode::detailed;
            return bench::emit_report(bench::run_scenario(cfg), bench::ReportFormat::records);
        },
        py::arg("path"), py::arg("mode") = "detailed");
    m.def(
        "run_trace",
        [](const std::string& path) {
            auto cfg = bench::load_scenario(path);
            return bench::format_trace(bench::execute(cfg, bench::RunMode::detailed).trace);
        },
        py::arg("path"));
    m.def(
        "bench_suite",
        [](const std::string& dir) {
            auto result = bench::bench_suite(dir);
            py::dict d;
            d["all_pass"] = result.all_pass;
            d["records"] = result.records;
            py::list checks;
            for (const auto& c : result.checks) {
                py::dict cd;
                cd["name"] = c.name;
                cd["value"] = c.value;
                cd["lo"] = c.lo;
                cd["hi"] = c.hi;
                cd["pass"] = c.pass;
                checks.append(cd);
            }
            d["checks"] = checks;
            return d;
        },
        py::arg("dir"));

    m.attr("__version__") = "0.1.0";
}
