#include "isoflat/minkowski.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "isoflat/errors.hpp"
#include "isoflat/matrix_exp.hpp"

namespace isoflat {

Error::Error(const std::string& what, std::optional<GridPoint> where)
    : std::runtime_error(where ? what + " at grid point (" + std::to_string(where->i) + ", " +
                                     std::to_string(where->j) + ")"
                               : what),
      where_(where) {}

const Mat5& gram() {
  static const Mat5 e5 = [] {
    Mat5 m = Mat5::Zero();
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    m(3, 4) = m(4, 3) = 1.0;
    return m;
  }();
  return e5;
}

const Mat5& involution() {
  static const Mat5 q = [] {
    Mat5 m = Mat5::Identity();
    m(0, 0) = m(1, 1) = m(2, 2) = -1.0;
    return m;
  }();
  return q;
}

MinkowskiVector MinkowskiVector::unit(int index) {
  Vec5 c = Vec5::Zero();
  c[index] = 1.0;
  return MinkowskiVector(c);
}

double minkowski_inner(const MinkowskiVector& a, const MinkowskiVector& b) {
  const Vec5& x = a.coords();
  const Vec5& y = b.coords();
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[4] + x[4] * y[3];
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  return AlgebraElement(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double algebra_defect(const Mat5& x) {
  const Mat5 ex = gram() * x;
  return (ex + ex.transpose()).cwiseAbs().maxCoeff();
}

double orthogonality_defect(const Mat5& a) {
  return (a.transpose() * gram() * a - gram()).cwiseAbs().maxCoeff();
}

KPSplit kp_split(const AlgebraElement& x) {
  const Mat5& q = involution();
  const Mat5 conj = q * x.matrix() * q;
  return {AlgebraElement(0.5 * (x.matrix() + conj)), AlgebraElement(0.5 * (x.matrix() - conj))};
}

AlgebraElement make_p_element(const Eigen::Matrix<double, 3, 2>& eta) {
  Mat5 m = Mat5::Zero();
  m.topRightCorner<3, 2>() = eta;
  // -E2 eta^t swaps the two rows of eta^t.
  m.row(3).head<3>() = -eta.col(1).transpose();
  m.row(4).head<3>() = -eta.col(0).transpose();
  return AlgebraElement(m);
}

GroupElement GroupElement::inverse() const {
  return GroupElement(gram() * m_.transpose() * gram());
}

GroupElement group_exp(const AlgebraElement& x) {
  return GroupElement(detail::expm<5>(x.matrix()));
}

namespace {

// Defect level below which G^t E5 G cannot be resolved in double precision.
double rounding_floor(const Mat5& m, double factor) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return factor * std::numeric_limits<double>::epsilon() * scale * scale;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

ReorthonormalizeResult reorthonormalize_counted(const GroupElement& g,
                                                const ReorthonormalizeOptions& options) {
  if (g.defect() >= options.max_input_defect) {
    throw NumericalError("reorthonormalize: orthogonality defect " + sci(g.defect()) +
                         " too large for the averaging iteration");
  }
  GroupElement current = g;
  int iterations = 0;
  // A defect already at the rounding floor carries no usable direction; a
  // correction would only add noise of that size times |G|.
  while (current.defect() >= options.target_defect &&
         current.defect() > rounding_floor(current.matrix(), options.rounding_factor)) {
    if (iterations == options.max_iterations) {
      throw NumericalError("reorthonormalize: no convergence after " + std::to_string(iterations) + " iterations");
    }
    // E5 G^{-t} E5 = G M^{-1} with M = E5 G^t E5 G close to I, so the
    // average is G (I + M^{-1}) / 2 without inverting G itself.
    const Mat5& m = current.matrix();
    const Mat5 metric = gram() * m.transpose() * gram() * m;
    GroupElement next(0.5 * m * (Mat5::Identity() + metric.partialPivLu().inverse()));
    ++iterations;
    if (!(next.defect() < current.defect())) {
      if (current.defect() <= rounding_floor(m, options.rounding_factor)) break;
      throw NumericalError("reorthonormalize: defect stopped decreasing at " + sci(current.defect()));
    }
    current = next;
  }
  return {current, iterations};
}

}  // namespace isoflat
