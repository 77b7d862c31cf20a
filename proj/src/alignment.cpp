#include "isoflat/alignment.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace isoflat {

AlignmentResult align_points(const std::vector<Eigen::Vector3d>& source, const std::vector<Eigen::Vector3d>& target,
                             AlignmentKind kind) {
  if (source.size() != target.size() || source.empty()) {
    throw InputError("align_points: point sets must be non-empty and of equal size");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(source.size());
  Eigen::Matrix3Xd src(3, n), dst(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    src.col(k) = source[k];
    dst.col(k) = target[k];
  }

  AlignmentResult r;
  if (kind == AlignmentKind::Translation) {
    r.transform.topRightCorner<3, 1>() = dst.rowwise().mean() - src.rowwise().mean();
  } else {
    r.transform = Eigen::umeyama(src, dst, kind == AlignmentKind::Similarity);
  }
  const Eigen::Matrix3Xd moved = (r.transform.topLeftCorner<3, 3>() * src).colwise() + r.transform.topRightCorner<3, 1>();
  r.rms = std::sqrt((moved - dst).colwise().squaredNorm().mean());
  return r;
}

}  // namespace isoflat
