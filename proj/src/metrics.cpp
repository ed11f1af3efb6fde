// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socsim::nn {

namespace {

void check_box(const BoundingBox& b, const char* which) {
    if (b.x_min > b.x_max || b.y_min > b.y_max) {
        throw std::invalid_argument(std::string("iou: degenerate box (") + which +
                                    "): min exceeds max");
    }
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double iou_or_zero(const BoundingBox& a, const BoundingBox& b) {
    double inter = intersection_area(a, b);
    double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
    check_box(a, "a");
    check_box(b, "b");
    double inter = intersection_area(a, b);
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) throw std::invalid_argument("iou: union has zero area");
    return inter / uni;
}

Tensor binarize(const Tensor& t, double thr) {
    Tensor out = Tensor::q8(t.shape(), QuantParams{1.0, 0});
    for (std::int64_t i = 0; i < t.elems(); ++i)
        out.q_data()[i] = t.value_at(i) >= thr ? 1 : 0;
    return out;
}

double cloud_coverage(const Tensor& mask) {
    if (mask.elems() == 0 || (mask.is_q8() ? mask.q_data().empty() : mask.r_data().empty())) {
        throw std::invalid_argument("cloud_coverage: empty mask");
    }
    if (mask.shape().c != 1) {
        throw std::invalid_argument("cloud_coverage: mask must be single-channel, got " +
                                    std::to_string(mask.shape().c) + " channels");
    }
    std::int64_t ones = 0;
    for (std::int64_t i = 0; i < mask.elems(); ++i) {
        double v = mask.is_q8() ? static_cast<double>(mask.q_data()[i]) : mask.r_data()[i];
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument("cloud_coverage: mask is not binary");
        if (v == 1.0) ++ones;
    }
    return 100.0 * static_cast<double>(ones) / static_cast<double>(mask.elems());
}

std::vector<BoundingBox> decode_and_nms(const Tensor& head, double score_threshold,
                                        double iou_threshold, double cell_size) {
    const Shape& s = head.shape();
    if (s.c != 5) {
        throw std::invalid_argument("decode_and_nms: head must have 5 channels, got " +
                                    std::to_string(s.c));
    }
    double img_w = s.w * cell_size;
    double img_h = s.h * cell_size;

    std::vector<BoundingBox> candidates;
    for (int n = 0; n < s.n; ++n)
        for (int cy = 0; cy < s.h; ++cy)
            for (int cx = 0; cx < s.w; ++cx) {
                double tx = head.value_at(head.index(n, cy, cx, 0));
                double ty = head.value_at(head.index(n, cy, cx, 1));
                double tw = head.value_at(head.index(n, cy, cx, 2));
                double th = head.value_at(head.index(n, cy, cx, 3));
                double obj = head.value_at(head.index(n, cy, cx, 4));
                double score = sigmoid_real(obj);
                if (score <= score_threshold) continue;

                double center_x = (cx + sigmoid_real(tx)) * cell_size;
                double center_y = (cy + sigmoid_real(ty)) * cell_size;
                double bw = std::max(tw, 0.0) * cell_size;
                double bh = std::max(th, 0.0) * cell_size;
                BoundingBox box;
                box.x_min = std::clamp(center_x - bw / 2.0, 0.0, img_w);
                box.x_max = std::clamp(center_x + bw / 2.0, 0.0, img_w);
                box.y_min = std::clamp(center_y - bh / 2.0, 0.0, img_h);
                box.y_max = std::clamp(center_y + bh / 2.0, 0.0, img_h);
                box.score = score;
                candidates.push_back(box);
            }

    // stable sort keeps cell-scan order on ties, so the result is deterministic
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const BoundingBox& a, const BoundingBox& b) { return a.score > b.score; });

    std::vector<BoundingBox> kept;
    for (const auto& c : candidates) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (iou_or_zero(k, c) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(c);
    }
    return kept;
}

}  // namespace socsim::nn
