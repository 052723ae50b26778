#pragma once

#include <span>
#include <vector>

#include "posekit/types.hpp"

namespace posekit {

// Static 3D kd-tree for nearest-neighbor queries. Fully deterministic:
// splits use the widest-extent axis (lowest axis on ties), the median point
// under a (coordinate, index) order, and queries break exact distance ties
// toward the lowest original point index.
class KdTree3 {
 public:
  explicit KdTree3(std::span<const Vec3> points);  // throws ValidationError when empty

  struct Hit {
    int index = -1;     // index into the construction span
    double dist2 = 0.0; // squared distance, mm^2
  };

  Hit nearest(const Vec3& query) const;

  std::size_t size() const { return points_.size(); }
  const Vec3& point(int index) const { return points_[static_cast<std::size_t>(index)]; }

 private:
  struct Node {
    int point = -1;  // original index of the split point
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<int>& idx, int first, int last);
  void search(int node, const Vec3& q, Hit& best) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace posekit
