#include "posekit/seg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posekit/error.hpp"

namespace posekit {

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a.width, a.height, b.width, b.height, "mask_iou");
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  const std::size_t n = a.bits.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool pa = a.bits[i] != 0;
    const bool pb = b.bits[i] != 0;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

enum class Stratum { kAll, kSmall, kMedium, kLarge };

Stratum stratum_of(std::int64_t area) {
  if (area < kSmallAreaMax) return Stratum::kSmall;
  if (area <= kMediumAreaMax) return Stratum::kMedium;
  return Stratum::kLarge;
}

bool in_stratum(Stratum s, std::int64_t area) {
  return s == Stratum::kAll || stratum_of(area) == s;
}

struct PredRef {
  int frame = 0;
  int index = 0;
  double conf = 0.0;
  std::int64_t area = 0;
};

// Per frame, ious[p * n_gt + g] for prediction p against ground truth g.
struct FrameIous {
  int n_pred = 0;
  int n_gt = 0;
  std::vector<double> iou;
  std::vector<std::int64_t> gt_area;

  double at(int p, int g) const { return iou[static_cast<std::size_t>(p) * n_gt + g]; }
};

struct ThresholdOutcome {
  double ap = 0.0;
  double recall = 0.0;
};

// One pass of greedy matching + interpolated AP at a single IoU threshold,
// restricted to one size stratum (kAll = every instance counts, nothing ignored).
ThresholdOutcome evaluate_threshold(const std::vector<FrameIous>& ious,
                                    const std::vector<PredRef>& order, double t,
                                    Stratum s) {
  std::int64_t n_gt = 0;
  for (const auto& f : ious) {
    for (int g = 0; g < f.n_gt; ++g) {
      if (in_stratum(s, f.gt_area[g])) ++n_gt;
    }
  }
  if (n_gt == 0) return {};

  std::vector<std::vector<char>> matched(ious.size());
  for (std::size_t f = 0; f < ious.size(); ++f) {
    matched[f].assign(static_cast<std::size_t>(ious[f].n_gt), 0);
  }

  std::vector<char> is_tp;  // per counted (non-ignored) prediction, in order
  is_tp.reserve(order.size());
  std::int64_t tp_total = 0;

  for (const PredRef& p : order) {
    const FrameIous& f = ious[static_cast<std::size_t>(p.frame)];
    auto& fm = matched[static_cast<std::size_t>(p.frame)];

    int best = -1;
    double best_iou = -1.0;
    for (int g = 0; g < f.n_gt; ++g) {
      if (fm[static_cast<std::size_t>(g)]) continue;
      if (!in_stratum(s, f.gt_area[g])) continue;
      const double v = f.at(p.index, g);
      if (v >= t && v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    bool ignored_match = false;
    if (best < 0 && s != Stratum::kAll) {
      for (int g = 0; g < f.n_gt; ++g) {
        if (fm[static_cast<std::size_t>(g)]) continue;
        if (in_stratum(s, f.gt_area[g])) continue;
        const double v = f.at(p.index, g);
        if (v >= t && v > best_iou) {
          best = g;
          best_iou = v;
        }
      }
      ignored_match = best >= 0;
    }

    if (best >= 0) {
      fm[static_cast<std::size_t>(best)] = 1;
      if (ignored_match) continue;
      is_tp.push_back(1);
      ++tp_total;
    } else {
      if (!in_stratum(s, p.area)) continue;
      is_tp.push_back(0);
    }
  }

  // Precision/recall after each counted prediction, then the COCO envelope:
  // precision made non-increasing from the right, sampled at 101 recall points.
  const std::size_t n = is_tp.size();
  std::vector<double> prec(n), rec(n);
  std::int64_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += is_tp[k];
    prec[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    rec[k] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  for (std::size_t k = n; k-- > 1;) {
    prec[k - 1] = std::max(prec[k - 1], prec[k]);
  }

  double ap_sum = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double r = static_cast<double>(i) / 100.0;
    const auto it = std::lower_bound(rec.begin(), rec.end(), r);
    if (it != rec.end()) {
      ap_sum += prec[static_cast<std::size_t>(it - rec.begin())];
    }
  }

  ThresholdOutcome out;
  out.ap = ap_sum / 101.0;
  out.recall = static_cast<double>(tp_total) / static_cast<double>(n_gt);
  return out;
}

}  // namespace

SegMetricSummary seg_ap_ar(std::span<const SegFrame> frames) {
  std::vector<FrameIous> ious(frames.size());
  std::vector<PredRef> order;

  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const SegFrame& frame = frames[fi];
    FrameIous& f = ious[fi];
    f.n_pred = static_cast<int>(frame.predictions.size());
    f.n_gt = static_cast<int>(frame.gts.size());

    const BinaryMask* ref = nullptr;
    if (!frame.gts.empty()) {
      ref = &frame.gts.front();
    } else if (!frame.predictions.empty()) {
      ref = &frame.predictions.front().mask;
    }

    f.gt_area.resize(frame.gts.size());
    for (std::size_t g = 0; g < frame.gts.size(); ++g) {
      require_same_size(ref->width, ref->height, frame.gts[g].width, frame.gts[g].height,
                        "seg_ap_ar frame " + std::to_string(fi));
      f.gt_area[g] = frame.gts[g].count();
    }

    for (std::size_t p = 0; p < frame.predictions.size(); ++p) {
      const SegPrediction& pred = frame.predictions[p];
      if (!std::isfinite(pred.confidence) || pred.confidence < 0.0 ||
          pred.confidence > 1.0) {
        throw ValidationError("seg_ap_ar: frame " + std::to_string(fi) + " prediction " +
                              std::to_string(p) + ": malformed confidence " +
                              std::to_string(pred.confidence) + " (want [0, 1])");
      }
      require_same_size(ref->width, ref->height, pred.mask.width, pred.mask.height,
                        "seg_ap_ar frame " + std::to_string(fi));
      order.push_back({static_cast<int>(fi), static_cast<int>(p), pred.confidence,
                       static_cast<std::int64_t>(pred.mask.count())});
    }

    f.iou.resize(static_cast<std::size_t>(f.n_pred) * static_cast<std::size_t>(f.n_gt));
    for (int p = 0; p < f.n_pred; ++p) {
      for (int g = 0; g < f.n_gt; ++g) {
        f.iou[static_cast<std::size_t>(p) * f.n_gt + g] =
            mask_iou(frame.predictions[static_cast<std::size_t>(p)].mask,
                     frame.gts[static_cast<std::size_t>(g)]);
      }
    }
  }

  std::sort(order.begin(), order.end(), [](const PredRef& a, const PredRef& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.index < b.index;
  });

  SegMetricSummary out;
  for (int k = 0; k < 10; ++k) {
    const double t = static_cast<double>(50 + 5 * k) / 100.0;
    const auto all = evaluate_threshold(ious, order, t, Stratum::kAll);
    out.ap_5095 += all.ap;
    out.ar_5095 += all.recall;
    out.ap_small += evaluate_threshold(ious, order, t, Stratum::kSmall).ap;
    out.ap_medium += evaluate_threshold(ious, order, t, Stratum::kMedium).ap;
    out.ap_large += evaluate_threshold(ious, order, t, Stratum::kLarge).ap;
  }
  out.ap_5095 /= 10.0;
  out.ap_small /= 10.0;
  out.ap_medium /= 10.0;
  out.ap_large /= 10.0;
  out.ar_5095 /= 10.0;
  return out;
}

}  // namespace posekit
