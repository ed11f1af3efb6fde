// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "socsim/tensor.hpp"

namespace socsim::nn {

struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    double score = 0.0;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool operator==(const BoundingBox&) const = default;
};

/// Intersection over union of two boxes. Throws when the union has zero area.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Threshold a tensor against `thr` (on real values), producing a q8
/// mask of 0/1 codes with scale 1 and zero_point 0.
Tensor binarize(const Tensor& t, double thr = 0.5);

/// Percentage of 1-elements in a single-channel binary mask.
double cloud_coverage(const Tensor& mask);

/// Decode a (grid_h, grid_w, 5) detection head into boxes and apply
/// greedy NMS. Channels per cell: tx, ty, w, h, objectness. Box center is
/// (cell + sigmoid(tx,ty)) * cell_size; width/height are linear
/// (w,h) * cell_size; everything clamps to the image rectangle.
/// Result is sorted by descending score.
std::vector<BoundingBox> decode_and_nms(const Tensor& head, double score_threshold,
                                        double iou_threshold, double cell_size = 16.0);

}  // namespace socsim::nn
