#include "posekit/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "posekit/error.hpp"

namespace posekit {

KdTree3::KdTree3(std::span<const Vec3> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) {
    throw ValidationError("KdTree3: empty point set");
  }
  std::vector<int> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()));
}

int KdTree3::build(std::vector<int>& idx, int first, int last) {
  if (first >= last) return -1;

  Vec3 lo = points_[static_cast<std::size_t>(idx[static_cast<std::size_t>(first)])];
  Vec3 hi = lo;
  for (int i = first + 1; i < last; ++i) {
    const Vec3& p = points_[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;

  const int mid = first + (last - first) / 2;
  std::nth_element(idx.begin() + first, idx.begin() + mid, idx.begin() + last,
                   [&](int a, int b) {
                     const double ca = points_[static_cast<std::size_t>(a)][axis];
                     const double cb = points_[static_cast<std::size_t>(b)][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });

  const int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[static_cast<std::size_t>(mid)], axis, -1, -1});
  const int left = build(idx, first, mid);
  const int right = build(idx, mid + 1, last);
  nodes_[static_cast<std::size_t>(node_id)].left = left;
  nodes_[static_cast<std::size_t>(node_id)].right = right;
  return node_id;
}

void KdTree3::search(int node, const Vec3& q, Hit& best) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const Vec3& p = points_[static_cast<std::size_t>(n.point)];
  const double d2 = (q - p).squaredNorm();
  if (d2 < best.dist2 || (d2 == best.dist2 && n.point < best.index)) {
    best.dist2 = d2;
    best.index = n.point;
  }
  const double delta = q[n.axis] - p[n.axis];
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search(near, q, best);
  if (delta * delta <= best.dist2) {
    search(far, q, best);
  }
}

KdTree3::Hit KdTree3::nearest(const Vec3& query) const {
  Hit best;
  best.dist2 = std::numeric_limits<double>::infinity();
  best.index = std::numeric_limits<int>::max();
  search(root_, query, best);
  return best;
}

}  // namespace posekit
