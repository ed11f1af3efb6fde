// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace socsim::nn {

enum class DType { q8, real };

/// Per-tensor affine quantization: value = (code - zero_point) * scale.
struct QuantParams {
    double scale = 1.0;
    int zero_point = 0;  // must lie in [-128, 127]
};

/// (batch, height, width, channels), all >= 1.
struct Shape {
    int n = 1;
    int h = 1;
    int w = 1;
    int c = 1;

    std::int64_t elems() const {
        return static_cast<std::int64_t>(n) * h * w * c;
    }
    bool operator==(const Shape&) const = default;
    std::string str() const;
};

/// Dense 4-d array in batch-major / row-major / channel-minor order.
/// q8 tensors carry QuantParams; real tensors store doubles.
class Tensor {
public:
    Tensor() = default;

    static Tensor q8(const Shape& shape, const QuantParams& quant,
                     std::vector<std::int8_t> data = {});
    static Tensor real(const Shape& shape, std::vector<double> data = {});

    const Shape& shape() const { return shape_; }
    DType dtype() const { return dtype_; }
    const QuantParams& quant() const;

    bool is_q8() const { return dtype_ == DType::q8; }
    std::int64_t elems() const { return shape_.elems(); }
    std::int64_t byte_size() const;

    std::int64_t index(int n, int h, int w, int c) const {
        return ((static_cast<std::int64_t>(n) * shape_.h + h) * shape_.w + w) * shape_.c + c;
    }

    std::int8_t q_at(int n, int h, int w, int c) const { return q_[index(n, h, w, c)]; }
    double r_at(int n, int h, int w, int c) const { return r_[index(n, h, w, c)]; }

    const std::vector<std::int8_t>& q_data() const { return q_; }
    std::vector<std::int8_t>& q_data() { return q_; }
    const std::vector<double>& r_data() const { return r_; }
    std::vector<double>& r_data() { return r_; }

    /// Real value of element i regardless of dtype (dequantizes q8).
    double value_at(std::int64_t i) const;

    bool operator==(const Tensor& other) const;

private:
    Shape shape_;
    DType dtype_ = DType::real;
    std::optional<QuantParams> quant_;
    std::vector<std::int8_t> q_;
    std::vector<double> r_;
};

enum class Padding { valid, same };
enum class Activation { relu, sigmoid };

/// Quantization scheme: saturate(round-half-away(x / scale) + zero_point).
std::int8_t quantize_one(double x, const QuantParams& q);
std::vector<std::int8_t> quantize(const std::vector<double>& xs, const QuantParams& q);
double dequantize_one(std::int8_t v, const QuantParams& q);
std::vector<double> dequantize(const std::vector<std::int8_t>& vs, const QuantParams& q);

/// Output spatial size for a convolution along one axis.
int conv_out_dim(int in, int kernel, int stride, Padding padding);
/// Leading pad for `same` padding (zero for `valid`).
int conv_pad_before(int in, int kernel, int stride, Padding padding);

/// 2-d convolution. Weights shape is (out_channels, kh, kw, in_channels);
/// bias has one entry per output channel. The q8 path accumulates in
/// int32 and requantizes to `out_quant`; the real path ignores it.
Tensor conv2d(const Tensor& input, const Tensor& weights,
              const std::vector<std::int32_t>& bias, int stride, Padding padding,
              const QuantParams& out_quant = {});

/// Single int32 accumulator for one q8 output element, bias included,
/// before requantization. Shared by every backend so results stay
/// bit-identical regardless of traversal order.
std::int32_t conv2d_acc_q8(const Tensor& input, const Tensor& weights,
                           const std::vector<std::int32_t>& bias, int stride,
                           Padding padding, int on, int oy, int ox, int oc);
/// Requantize one accumulator to the output code.
std::int8_t requantize_acc(std::int32_t acc, const QuantParams& in_q,
                           const QuantParams& w_q, const QuantParams& out_q);

Tensor maxpool2d(const Tensor& input, int window, int stride);
Tensor upsample2d_nearest(const Tensor& input, int factor);
Tensor activation(const Tensor& input, Activation kind);

/// The fixed output quantization of the q8 sigmoid (scale 1/256, zp -128).
QuantParams sigmoid_out_quant();
/// 256-entry table mapping input code (index = code + 128) to output code.
std::vector<std::int8_t> sigmoid_table_q8(const QuantParams& in_q);

double sigmoid_real(double x);

}  // namespace socsim::nn
