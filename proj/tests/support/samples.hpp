#pragma once
// Random samples and small comparison helpers shared by the unit tests.
#include <random>

#include "isoflat/minkowski.hpp"

namespace samples {

/// Uniform entries in [-scale, scale] with a fixed seed per call site.
inline isoflat::Mat5 random_matrix(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  isoflat::Mat5 m;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) m(r, c) = d(rng);
  return m;
}

/// E5 A with A antisymmetric, i.e. a generic element of o1(5).
inline isoflat::AlgebraElement random_algebra(std::mt19937& rng, double scale = 1.0) {
  const isoflat::Mat5 m = random_matrix(rng, scale);
  return isoflat::AlgebraElement(isoflat::gram() * (m - m.transpose()) * 0.5);
}

inline isoflat::MinkowskiVector random_vector(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  isoflat::Vec5 v;
  for (int k = 0; k < 5; ++k) v[k] = d(rng);
  return isoflat::MinkowskiVector(v);
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace samples
