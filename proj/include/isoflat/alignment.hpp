#pragma once
// Least-squares alignment of corresponding point sets, used to compare
// surfaces that are only defined up to rigid motion or similarity.
#include <vector>

#include <Eigen/Dense>

#include "isoflat/grid.hpp"

namespace isoflat {

struct AlignmentResult {
  Eigen::Matrix4d transform = Eigen::Matrix4d::Identity();  // homogeneous, maps source onto target
  double rms = 0.0;
};

enum class AlignmentKind { Translation, Rigid, Similarity };

/// Best transform of the given kind taking source[k] to target[k]; rigid and
/// similarity fits use proper rotations only.
AlignmentResult align_points(const std::vector<Eigen::Vector3d>& source, const std::vector<Eigen::Vector3d>& target,
                             AlignmentKind kind);

inline AlignmentResult align_points(const Field<Eigen::Vector3d>& source, const Field<Eigen::Vector3d>& target,
                                    AlignmentKind kind) {
  return align_points(source.values(), target.values(), kind);
}

}  // namespace isoflat
