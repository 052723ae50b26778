#include "posekit/pseudo_label.hpp"

#include <cmath>
#include <string>

namespace posekit {

void PseudoLabelParams::validate() const {
  if (!(epsilon_mm > 0.0)) {
    throw ValidationError("pseudo-label: epsilon must be > 0 mm, got " +
                          std::to_string(epsilon_mm));
  }
}

PseudoLabelResult generate_pseudo_mask(const TriangleMesh& mesh, const RigidTransform& gt_pose,
                                       const CameraIntrinsics& intr,
                                       const DepthMap& observed_depth,
                                       const PseudoLabelParams& params) {
  params.validate();
  require_same_size(observed_depth.width, observed_depth.height, intr.width, intr.height,
                    "pseudo-label observed depth");

  const RenderOutput rendered = render_depth(mesh, gt_pose, intr);

  PseudoLabelResult out;
  out.mask = BinaryMask(intr.width, intr.height);
  for (std::size_t i = 0; i < rendered.mask.bits.size(); ++i) {
    if (!rendered.mask.bits[i]) continue;
    ++out.report.projected_pixels;
    if (!observed_depth.valid[i]) {
      ++out.report.rejected_no_depth;
      continue;
    }
    if (std::abs(rendered.depth.value[i] - observed_depth.value[i]) < params.epsilon_mm) {
      out.mask.bits[i] = 1;
      ++out.report.retained_pixels;
    } else {
      ++out.report.rejected_occluded;
    }
  }
  return out;
}

}  // namespace posekit
