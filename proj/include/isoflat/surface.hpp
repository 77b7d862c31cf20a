#pragma once

#include <Eigen/Dense>

#include "isoflat/frame.hpp"
#include "isoflat/grid.hpp"
#include "isoflat/isothermic.hpp"
#include "isoflat/minkowski.hpp"

namespace isoflat {

using Vec3 = Eigen::Vector3d;

/// Sphere congruence n = Fe3 and its two envelopes f = Fe4, fhat = Fe5.
struct SurfaceTriple {
  Grid grid;
  Field<MinkowskiVector> n;
  Field<MinkowskiVector> f;
  Field<MinkowskiVector> fhat;

  /// Largest deviation from <n,n> = 1, <f,f> = <fhat,fhat> = <f,n> =
  /// <fhat,n> = 0, <f,fhat> = 1. `relative` divides each deviation by
  /// max(1, |a|_max |b|_max), the level at which <a,b> is resolvable in
  /// double precision; `worst` is where the relative value peaks.
  struct InvariantReport {
    double defect = 0.0;
    double relative = 0.0;
    GridPoint worst;
  };
  InvariantReport invariant_defect() const;
};

/// Columns 3, 4, 5 of every frame. Throws NumericalError naming the worst
/// grid point if the relative pairing defect exceeds `tolerance`.
SurfaceTriple extract_triple(const FrameField& frames, double tolerance = 1e-10);

struct EnvelopeDefect {
  double f = 0.0;     // max|<f,n>| + max(|<f_x,n>|, |<f_y,n>|)
  double fhat = 0.0;  // same for fhat
};

/// The derivative terms use central differences, so f_x is sampled on
/// interior columns and f_y on interior rows only.
EnvelopeDefect envelope_defect(const SurfaceTriple& triple);

/// Symmetrized second forms <df, dn>, <dfhat, dn> and the induced metric of f,
/// all from central differences.
struct SecondFormReport {
  double off_diagonal_f = 0.0;     // max |<f_x,n_y> + <f_y,n_x>| / 2
  double off_diagonal_fhat = 0.0;
  ScalarField f_xx, f_yy;          // <f_x,n_x>, <f_y,n_y>
  ScalarField fhat_xx, fhat_yy;
  ScalarField metric_xx, metric_yy;  // <f_x,f_x>, <f_y,f_y>
  double metric_off_diagonal = 0.0;  // max |<f_x,f_y>|
};

SecondFormReport second_form_diagonality(const SurfaceTriple& triple);

/// Coefficients of a quadratic form a dx^2 + 2b dx dy + c dy^2.
struct QuadraticForm {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Immersion into Euclidean 3-space sampled on the grid. The unit normal is
/// orientation * (f_x x f_y) / |f_x x f_y|; II is measured against it.
struct EuclideanSurface {
  Grid grid;
  Field<Vec3> points;
  Field<Vec3> normals;
  Field<QuadraticForm> first;
  Field<QuadraticForm> second;
  double orientation = 1.0;
};

/// Computes normals and fundamental forms by second-order differences.
/// Throws NumericalError where the tangents are degenerate.
EuclideanSurface measure_surface(Field<Vec3> points, double orientation = 1.0);

struct SymOptions {
  /// Largest admissible plaquette mismatch of the Sym increments per unit area.
  double closedness_threshold = 0.1;
};

struct SymSurfaces {
  EuclideanSurface f;     // oriented by f_x x f_y
  EuclideanSurface fhat;  // oriented so its normal agrees with that of f
  double closedness_defect = 0.0;
};

/// The lambda-derivative of the associated family at lambda = 0, S = F'F^{-1},
/// integrated edge by edge from the grid origin. Across an edge with
/// midpoint coefficients A_k + lambda A_p the increment is
///   F_n * dexp * exp(-h A_k) * F_n^{-1},
/// where dexp is the exact derivative of exp(h(A_k + lambda A_p)) in lambda,
/// read off the upper right block of exp([[hA_k, hA_p], [0, hA_k]]). The two
/// columns of the upper right block of S are f and fhat.
SymSurfaces sym_surfaces(const IsothermicPatch& patch, const FrameField& frames_at_zero,
                         const SymOptions& options = {});

struct DualOptions {
  /// Relative tolerance for I = e^{2u}(dx^2 + dy^2) on the input.
  double metric_tolerance = 0.05;
  /// Largest admissible plaquette loop sum of the 1-form per unit area.
  double closedness_threshold = 0.1;
};

struct DualSurface {
  EuclideanSurface surface;
  double closedness_defect = 0.0;
};

/// Christoffel dual: integrates dfhat = e^{-2u}(-f_x dx + f_y dy) from the
/// grid origin with fhat(0,0) = 0. Edge increments use the product of the
/// endpoint factors, dfhat = -+ e^{-(u_a + u_b)} (f_b - f_a), which makes the
/// discrete transform an exact involution. The output's orientation is
/// reversed so both surfaces share the normal.
DualSurface euclidean_dual(const EuclideanSurface& surface, const ScalarField& u, const DualOptions& options = {});

/// f_t = sin(t)/sqrt(2) n + (1 + cos t)/2 f - (1 - cos t)/2 fhat, a light-like
/// field tracing the circle through f and fhat orthogonal to n.
Field<MinkowskiVector> circle_congruence_point(const SurfaceTriple& triple, double t);

/// Euclidean chart of the projective light cone with `infinity` removed.
/// Each point v is normalized to v / <v, infinity> and expressed in an
/// orthonormal basis of the complement of span{origin, infinity}.
struct AffineChart {
  MinkowskiVector infinity;
  MinkowskiVector origin;  // null, <origin, infinity> = 1
  MinkowskiVector basis[3];

  static AffineChart make(const MinkowskiVector& infinity);
  /// Throws NumericalError if |<v, infinity>| < cutoff |v|.
  Vec3 project(const MinkowskiVector& v, double cutoff = 1e-8) const;
};

Field<Vec3> project_to_affine_chart(const Field<MinkowskiVector>& field, const MinkowskiVector& infinity,
                                    double cutoff = 1e-8);

}  // namespace isoflat
