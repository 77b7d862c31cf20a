#pragma once

// Linear algebra of R^5 with the signature (4,1) inner product written in the
// light-cone basis e1..e5: <ei,ej> = delta_ij on e1..e3, <e4,e4> = <e5,e5> = 0,
// <e4,e5> = 1. Indices are 0-based throughout (e1 is index 0).

#include <Eigen/Dense>

namespace isoflat {

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

/// Gram matrix E5 of the light-cone basis.
const Mat5& gram();

/// Q = diag(-1,-1,-1,1,1); Ad(Q) is the involution splitting o1(5) = k + p.
const Mat5& involution();

class MinkowskiVector {
 public:
  MinkowskiVector() : c_(Vec5::Zero()) {}
  explicit MinkowskiVector(const Vec5& c) : c_(c) {}

  /// Basis vector e_{index+1}.
  static MinkowskiVector unit(int index);

  const Vec5& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }

  MinkowskiVector& operator+=(const MinkowskiVector& o) {
    c_ += o.c_;
    return *this;
  }
  MinkowskiVector& operator-=(const MinkowskiVector& o) {
    c_ -= o.c_;
    return *this;
  }
  friend MinkowskiVector operator+(MinkowskiVector a, const MinkowskiVector& b) { return a += b; }
  friend MinkowskiVector operator-(MinkowskiVector a, const MinkowskiVector& b) { return a -= b; }
  friend MinkowskiVector operator-(const MinkowskiVector& a) { return MinkowskiVector(-a.c_); }
  friend MinkowskiVector operator*(const MinkowskiVector& a, double s) { return MinkowskiVector(a.c_ * s); }
  friend MinkowskiVector operator*(double s, const MinkowskiVector& a) { return MinkowskiVector(a.c_ * s); }
  friend MinkowskiVector operator/(const MinkowskiVector& a, double s) { return MinkowskiVector(a.c_ / s); }

 private:
  Vec5 c_;
};

/// a^t E5 b.
double minkowski_inner(const MinkowskiVector& a, const MinkowskiVector& b);

/// Element of the Lie algebra o1(5) = {X : E5 X + (E5 X)^t = 0}.
///
/// Membership is not enforced on construction: builders produce exact
/// members, computed quantities (differences, derivatives) are checked with
/// algebra_defect where it matters.
class AlgebraElement {
 public:
  AlgebraElement() : m_(Mat5::Zero()) {}
  explicit AlgebraElement(const Mat5& m) : m_(m) {}

  static AlgebraElement zero() { return AlgebraElement(); }

  const Mat5& matrix() const { return m_; }
  Mat5& matrix() { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    m_ += o.m_;
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    m_ -= o.m_;
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator-(const AlgebraElement& a) { return AlgebraElement(-a.m_); }
  friend AlgebraElement operator*(const AlgebraElement& a, double s) { return AlgebraElement(a.m_ * s); }
  friend AlgebraElement operator*(double s, const AlgebraElement& a) { return AlgebraElement(a.m_ * s); }
  friend AlgebraElement operator/(const AlgebraElement& a, double s) { return AlgebraElement(a.m_ / s); }

 private:
  Mat5 m_;
};

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// max-norm of (E5 X) + (E5 X)^t; zero iff X lies in o1(5).
double algebra_defect(const Mat5& x);
inline double algebra_defect(const AlgebraElement& x) { return algebra_defect(x.matrix()); }

/// max-norm of A^t E5 A - E5; zero iff A lies in O1(5).
double orthogonality_defect(const Mat5& a);

struct KPSplit {
  AlgebraElement k;  // block diagonal: o(3) x o1(2)
  AlgebraElement p;  // off-diagonal blocks only
};

/// Eigenspace decomposition under Ad(Q): k = (X + QXQ)/2, p = (X - QXQ)/2.
KPSplit kp_split(const AlgebraElement& x);

/// The p-element with upper right block eta and lower left block -E2 eta^t.
AlgebraElement make_p_element(const Eigen::Matrix<double, 3, 2>& eta);

/// Element of O1(5) with its orthogonality defect cached at construction.
class GroupElement {
 public:
  GroupElement() : m_(Mat5::Identity()), defect_(0.0) {}
  explicit GroupElement(const Mat5& m) : m_(m), defect_(orthogonality_defect(m)) {}

  static GroupElement identity() { return GroupElement(); }

  const Mat5& matrix() const { return m_; }
  double defect() const { return defect_; }
  double operator()(int r, int c) const { return m_(r, c); }

  /// E5 A^t E5, the inverse for members of the group.
  GroupElement inverse() const;

  MinkowskiVector column(int index) const { return MinkowskiVector(m_.col(index)); }
  MinkowskiVector operator*(const MinkowskiVector& v) const { return MinkowskiVector(m_ * v.coords()); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.m_ * b.m_);
  }

 private:
  Mat5 m_;
  double defect_;
};

GroupElement group_exp(const AlgebraElement& x);

struct ReorthonormalizeOptions {
  double target_defect = 1e-13;
  double max_input_defect = 0.1;
  /// A stall is accepted once the defect is below this multiple of
  /// eps * max(1, |G|_max^2), the rounding level of G^t E5 G itself.
  double rounding_factor = 256.0;
  int max_iterations = 50;
};

struct ReorthonormalizeResult {
  GroupElement element;
  int iterations = 0;
};

/// Projects a near-member back onto O1(5) with the averaging iteration
/// G <- (G + E5 G^{-t} E5) / 2. Throws NumericalError when the input is too
/// far from the group or the defect stops decreasing above the rounding
/// level of the matrix.
ReorthonormalizeResult reorthonormalize_counted(const GroupElement& g,
                                                const ReorthonormalizeOptions& options = {});

inline GroupElement reorthonormalize(const GroupElement& g, const ReorthonormalizeOptions& options = {}) {
  return reorthonormalize_counted(g, options).element;
}

}  // namespace isoflat
