// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace socsim::nn {

namespace {

void check_shape(const Shape& s) {
    if (s.n < 1 || s.h < 1 || s.w < 1 || s.c < 1) {
        throw std::invalid_argument("tensor shape must be >= 1 in every dimension, got " + s.str());
    }
}

void check_quant(const QuantParams& q) {
    if (!(q.scale > 0.0)) {
        throw std::invalid_argument("quant scale must be > 0, got " + std::to_string(q.scale));
    }
    if (q.zero_point < -128 || q.zero_point > 127) {
        throw std::invalid_argument("quant zero_point out of [-128, 127]: " +
                                    std::to_string(q.zero_point));
    }
}

int8_t saturate_i8(long long v) {
    return static_cast<int8_t>(std::clamp<long long>(v, -128, 127));
}

}  // namespace

std::string Shape::str() const {
    std::ostringstream os;
    os << "(" << n << "," << h << "," << w << "," << c << ")";
    return os.str();
}

Tensor Tensor::q8(const Shape& shape, const QuantParams& quant, std::vector<std::int8_t> data) {
    check_shape(shape);
    check_quant(quant);
    Tensor t;
    t.shape_ = shape;
    t.dtype_ = DType::q8;
    t.quant_ = quant;
    if (data.empty()) data.assign(static_cast<size_t>(shape.elems()), 0);
    if (static_cast<std::int64_t>(data.size()) != shape.elems()) {
        throw std::invalid_argument("q8 data length " + std::to_string(data.size()) +
                                    " does not match shape " + shape.str());
    }
    t.q_ = std::move(data);
    return t;
}

Tensor Tensor::real(const Shape& shape, std::vector<double> data) {
    check_shape(shape);
    Tensor t;
    t.shape_ = shape;
    t.dtype_ = DType::real;
    if (data.empty()) data.assign(static_cast<size_t>(shape.elems()), 0.0);
    if (static_cast<std::int64_t>(data.size()) != shape.elems()) {
        throw std::invalid_argument("real data length " + std::to_string(data.size()) +
                                    " does not match shape " + shape.str());
    }
    t.r_ = std::move(data);
    return t;
}

const QuantParams& Tensor::quant() const {
    if (!quant_) throw std::logic_error("tensor has no quant params (dtype real)");
    return *quant_;
}

std::int64_t Tensor::byte_size() const {
    return dtype_ == DType::q8 ? elems() : elems() * static_cast<std::int64_t>(sizeof(double));
}

double Tensor::value_at(std::int64_t i) const {
    if (dtype_ == DType::q8) return dequantize_one(q_[i], *quant_);
    return r_[i];
}

bool Tensor::operator==(const Tensor& other) const {
    if (shape_ != other.shape_ || dtype_ != other.dtype_) return false;
    if (dtype_ == DType::q8) {
        return q_ == other.q_ && quant_->scale == other.quant_->scale &&
               quant_->zero_point == other.quant_->zero_point;
    }
    return r_ == other.r_;
}

std::int8_t quantize_one(double x, const QuantParams& q) {
    check_quant(q);
    long long v = std::llround(x / q.scale) + q.zero_point;
    return saturate_i8(v);
}

std::vector<std::int8_t> quantize(const std::vector<double>& xs, const QuantParams& q) {
    std::vector<std::int8_t> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(quantize_one(x, q));
    return out;
}

double dequantize_one(std::int8_t v, const QuantParams& q) {
    return (static_cast<int>(v) - q.zero_point) * q.scale;
}

std::vector<double> dequantize(const std::vector<std::int8_t>& vs, const QuantParams& q) {
    std::vector<double> out;
    out.reserve(vs.size());
    for (std::int8_t v : vs) out.push_back(dequantize_one(v, q));
    return out;
}

int conv_out_dim(int in, int kernel, int stride, Padding padding) {
    if (padding == Padding::same) return (in + stride - 1) / stride;
    return (in - kernel) / stride + 1;
}

int conv_pad_before(int in, int kernel, int stride, Padding padding) {
    if (padding == Padding::valid) return 0;
    int out = conv_out_dim(in, kernel, stride, padding);
    int pad_total = std::max((out - 1) * stride + kernel - in, 0);
    return pad_total / 2;
}

namespace {

struct ConvGeom {
    int kh, kw, in_c, out_c;
    int out_h, out_w;
    int pad_h, pad_w;
};

ConvGeom conv_geometry(const Tensor& input, const Tensor& weights,
                       const std::vector<std::int32_t>& bias, int stride, Padding padding) {
    const Shape& is = input.shape();
    const Shape& ws = weights.shape();  // (out_c, kh, kw, in_c)
    if (ws.c != is.c) {
        throw std::invalid_argument("conv2d: input channels (" + std::to_string(is.c) +
                                    ") != weight input channels (" + std::to_string(ws.c) + ")");
    }
    if (static_cast<int>(bias.size()) != ws.n) {
        throw std::invalid_argument("conv2d: bias length (" + std::to_string(bias.size()) +
                                    ") != output channels (" + std::to_string(ws.n) + ")");
    }
    if (stride < 1) throw std::invalid_argument("conv2d: stride must be >= 1");
    if (padding == Padding::valid && (ws.h > is.h || ws.w > is.w)) {
        throw std::invalid_argument("conv2d: kernel " + std::to_string(ws.h) + "x" +
                                    std::to_string(ws.w) + " larger than input " +
                                    std::to_string(is.h) + "x" + std::to_string(is.w));
    }
    if (input.dtype() != weights.dtype()) {
        throw std::invalid_argument("conv2d: input and weight dtypes differ");
    }
    ConvGeom g;
    g.kh = ws.h;
    g.kw = ws.w;
    g.in_c = ws.c;
    g.out_c = ws.n;
    g.out_h = conv_out_dim(is.h, ws.h, stride, padding);
    g.out_w = conv_out_dim(is.w, ws.w, stride, padding);
    g.pad_h = conv_pad_before(is.h, ws.h, stride, padding);
    g.pad_w = conv_pad_before(is.w, ws.w, stride, padding);
    return g;
}

}  // namespace

std::int32_t conv2d_acc_q8(const Tensor& input, const Tensor& weights,
                           const std::vector<std::int32_t>& bias, int stride,
                           Padding padding, int on, int oy, int ox, int oc) {
    ConvGeom g = conv_geometry(input, weights, bias, stride, padding);
    const Shape& is = input.shape();
    const int in_zp = input.quant().zero_point;
    const int w_zp = weights.quant().zero_point;
    std::int32_t acc = bias[oc];
    for (int ky = 0; ky < g.kh; ++ky) {
        for (int kx = 0; kx < g.kw; ++kx) {
            int iy = oy * stride + ky - g.pad_h;
            int ix = ox * stride + kx - g.pad_w;
            if (iy < 0 || iy >= is.h || ix < 0 || ix >= is.w) continue;  // zero padding
            for (int ic = 0; ic < g.in_c; ++ic) {
                int iv = input.q_at(on, iy, ix, ic) - in_zp;
                int wv = weights.q_at(oc, ky, kx, ic) - w_zp;
                acc += iv * wv;
            }
        }
    }
    return acc;
}

std::int8_t requantize_acc(std::int32_t acc, const QuantParams& in_q, const QuantParams& w_q,
                           const QuantParams& out_q) {
    double real = static_cast<double>(acc) * in_q.scale * w_q.scale;
    return quantize_one(real, out_q);
}

Tensor conv2d(const Tensor& input, const Tensor& weights, const std::vector<std::int32_t>& bias,
              int stride, Padding padding, const QuantParams& out_quant) {
    ConvGeom g = conv_geometry(input, weights, bias, stride, padding);
    const Shape& is = input.shape();
    Shape os{is.n, g.out_h, g.out_w, g.out_c};

    if (input.is_q8()) {
        Tensor out = Tensor::q8(os, out_quant);
        const QuantParams& in_q = input.quant();
        const QuantParams& w_q = weights.quant();
        for (int n = 0; n < os.n; ++n)
            for (int y = 0; y < os.h; ++y)
                for (int x = 0; x < os.w; ++x)
                    for (int oc = 0; oc < os.c; ++oc) {
                        std::int32_t acc =
                            conv2d_acc_q8(input, weights, bias, stride, padding, n, y, x, oc);
                        out.q_data()[out.index(n, y, x, oc)] =
                            requantize_acc(acc, in_q, w_q, out_quant);
                    }
        return out;
    }

    Tensor out = Tensor::real(os);
    for (int n = 0; n < os.n; ++n)
        for (int y = 0; y < os.h; ++y)
            for (int x = 0; x < os.w; ++x)
                for (int oc = 0; oc < os.c; ++oc) {
                    double acc = bias[oc];
                    for (int ky = 0; ky < g.kh; ++ky)
                        for (int kx = 0; kx < g.kw; ++kx) {
                            int iy = y * stride + ky - g.pad_h;
                            int ix = x * stride + kx - g.pad_w;
                            if (iy < 0 || iy >= is.h || ix < 0 || ix >= is.w) continue;
                            for (int ic = 0; ic < g.in_c; ++ic)
                                acc += input.r_at(n, iy, ix, ic) * weights.r_at(oc, ky, kx, ic);
                        }
                    out.r_data()[out.index(n, y, x, oc)] = acc;
                }
    return out;
}

Tensor maxpool2d(const Tensor& input, int window, int stride) {
    const Shape& is = input.shape();
    if (window < 1 || stride < 1) throw std::invalid_argument("maxpool2d: window/stride must be >= 1");
    if (window > is.h || window > is.w) {
        throw std::invalid_argument("maxpool2d: window " + std::to_string(window) +
                                    " exceeds spatial dims " + std::to_string(is.h) + "x" +
                                    std::to_string(is.w));
    }
    Shape os{is.n, (is.h - window) / stride + 1, (is.w - window) / stride + 1, is.c};
    Tensor out = input.is_q8() ? Tensor::q8(os, input.quant()) : Tensor::real(os);
    for (int n = 0; n < os.n; ++n)
        for (int y = 0; y < os.h; ++y)
            for (int x = 0; x < os.w; ++x)
                for (int c = 0; c < os.c; ++c) {
                    if (input.is_q8()) {
                        std::int8_t m = -128;
                        for (int ky = 0; ky < window; ++ky)
                            for (int kx = 0; kx < window; ++kx)
                                m = std::max(m, input.q_at(n, y * stride + ky, x * stride + kx, c));
                        out.q_data()[out.index(n, y, x, c)] = m;
                    } else {
                        double m = input.r_at(n, y * stride, x * stride, c);
                        for (int ky = 0; ky < window; ++ky)
                            for (int kx = 0; kx < window; ++kx)
                                m = std::max(m, input.r_at(n, y * stride + ky, x * stride + kx, c));
                        out.r_data()[out.index(n, y, x, c)] = m;
                    }
                }
    return out;
}

Tensor upsample2d_nearest(const Tensor& input, int factor) {
    if (factor < 1) throw std::invalid_argument("upsample2d: factor must be >= 1");
    const Shape& is = input.shape();
    Shape os{is.n, is.h * factor, is.w * factor, is.c};
    Tensor out = input.is_q8() ? Tensor::q8(os, input.quant()) : Tensor::real(os);
    for (int n = 0; n < os.n; ++n)
        for (int y = 0; y < os.h; ++y)
            for (int x = 0; x < os.w; ++x)
                for (int c = 0; c < os.c; ++c) {
                    if (input.is_q8())
                        out.q_data()[out.index(n, y, x, c)] =
                            input.q_at(n, y / factor, x / factor, c);
                    else
                        out.r_data()[out.index(n, y, x, c)] =
                            input.r_at(n, y / factor, x / factor, c);
                }
    return out;
}

double sigmoid_real(double x) { return 1.0 / (1.0 + std::exp(-x)); }

QuantParams sigmoid_out_quant() { return QuantParams{1.0 / 256.0, -128}; }

std::vector<std::int8_t> sigmoid_table_q8(const QuantParams& in_q) {
    std::vector<std::int8_t> table(256);
    for (int code = -128; code <= 127; ++code) {
        double x = dequantize_one(static_cast<std::int8_t>(code), in_q);
        table[code + 128] = quantize_one(sigmoid_real(x), sigmoid_out_quant());
    }
    return table;
}

Tensor activation(const Tensor& input, Activation kind) {
    if (kind == Activation::relu) {
        if (input.is_q8()) {
            Tensor out = input;
            std::int8_t zp = static_cast<std::int8_t>(input.quant().zero_point);
            for (auto& v : out.q_data()) v = std::max(v, zp);
            return out;
        }
        Tensor out = input;
        for (auto& v : out.r_data()) v = std::max(v, 0.0);
        return out;
    }
    // sigmoid
    if (input.is_q8()) {
        auto table = sigmoid_table_q8(input.quant());
        Tensor out = Tensor::q8(input.shape(), sigmoid_out_quant());
        for (std::int64_t i = 0; i < input.elems(); ++i)
            out.q_data()[i] = table[static_cast<int>(input.q_data()[i]) + 128];
        return out;
    }
    Tensor out = input;
    for (auto& v : out.r_data()) v = sigmoid_real(v);
    return out;
}

}  // namespace socsim::nn
