#pragma once

#include <span>
#include <vector>

#include "posekit/image.hpp"

namespace posekit {

// Instance segmentation AP/AR in the COCO convention: greedy confidence-descending
// matching per IoU threshold in {0.50, 0.55, ..., 0.95}, 101-point interpolated PR
// curves, size strata by ground-truth pixel area (small < 32^2, 32^2 <= medium <= 96^2,
// large > 96^2). Predictions matched to an out-of-stratum GT are ignored, as are
// unmatched predictions whose own area falls outside the stratum. A stratum with no
// ground-truth instances reports AP 0.
//
// Determinism: predictions are processed in (confidence desc, frame asc, index asc)
// order; IoU ties during matching resolve to the lowest GT index, with in-stratum GTs
// always preferred over out-of-stratum ones.

struct SegPrediction {
  BinaryMask mask;
  double confidence = 0.0;  // [0, 1]
};

// One image: its predicted instances and ground-truth instance masks.
struct SegFrame {
  std::vector<SegPrediction> predictions;
  std::vector<BinaryMask> gts;
};

struct SegMetricSummary {
  double ap_5095 = 0.0;
  double ap_small = 0.0;
  double ap_medium = 0.0;
  double ap_large = 0.0;
  double ar_5095 = 0.0;
};

inline constexpr std::int64_t kSmallAreaMax = 32 * 32;    // small: area < this
inline constexpr std::int64_t kMediumAreaMax = 96 * 96;   // medium: up to and including this

// |a .and. b| / |a .or. b|; 0 when both masks are empty. Throws on dimension mismatch.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

// Throws ValidationError on confidences outside [0, 1] or mask size mismatches
// within a frame.
SegMetricSummary seg_ap_ar(std::span<const SegFrame> frames);

}  // namespace posekit
