#pragma once

#include <string>
#include <vector>

#include "isoflat/connection.hpp"
#include "isoflat/grid.hpp"
#include "isoflat/minkowski.hpp"

namespace isoflat {

/// One-step rules for F(next) = F(current) * step.
enum class StepScheme {
  /// exp(h (A0 + A1) / 2): second-order, one exponential per edge.
  MidpointExponential,
};

struct IntegratorOptions {
  StepScheme scheme = StepScheme::MidpointExponential;
  int reorthonormalize_every = 16;
  /// Frames whose defect exceeds this are corrected immediately.
  double defect_trigger = 1e-8;
  /// Zero-curvature residual above this only produces a warning.
  double curvature_warning = 1e-3;
  /// 1-norm bound on a single step exponent; larger means the grid is too coarse.
  double max_step_norm = 10.0;
};

struct FrameField {
  Grid grid;
  Field<GroupElement> frames;
  GroupElement base;
  std::vector<std::string> warnings;

  double max_defect() const;
  /// Defect of each frame divided by max(1, |F|_max^2), the level at which
  /// F^t E5 F can be resolved in double precision.
  double max_relative_defect() const;
  const GroupElement& operator()(int i, int j) const { return frames(i, j); }
};

/// Propagator across one grid edge of length h with coefficients a0, a1 at
/// its endpoints.
GroupElement step_propagator(const AlgebraElement& a0, const AlgebraElement& a1, double h,
                             StepScheme scheme = StepScheme::MidpointExponential);

/// Integrates F^{-1} dF = A from F(0,0) = base along row 0 and then up each
/// column, reorthonormalizing on a fixed cadence. Throws NumericalError when
/// a step exponent exceeds options.max_step_norm.
FrameField integrate_frame(const ConnectionForm& form, const GroupElement& base,
                           const IntegratorOptions& options = {});

/// max over plaquettes of |hol - I|_max / (hx hy), where hol is the product
/// of the four edge propagators around the plaquette. Second order in h for
/// flat forms; tends to the curvature for non-flat ones.
double path_independence_defect(const ConnectionForm& form, const FrameField& frames);

/// Pointwise right factors K with exact O(3) x O1(2) block structure.
class GaugeField {
 public:
  /// Throws InputError if any K has nonzero off-diagonal blocks.
  explicit GaugeField(Field<GroupElement> k);

  static GaugeField constant(const Grid& grid, const GroupElement& k);
  /// diag(I3, e^u, e^-u), the gauge that removes the nu-block.
  static GaugeField light_cone_scaling(const ScalarField& u);

  const Grid& grid() const { return k_.grid(); }
  const Field<GroupElement>& field() const { return k_; }

 private:
  Field<GroupElement> k_;
};

/// F' = F K.
FrameField apply_gauge(const FrameField& frames, const GaugeField& gauge);

/// F' = F T for an arbitrary O1(5)-valued change of frame.
FrameField apply_frame_change(const FrameField& frames, const Field<GroupElement>& change);

/// Connection of the changed frame: T^{-1} A T + T^{-1} dT, with dT from
/// second-order finite differences of the change field.
ConnectionForm transform_form(const ConnectionForm& form, const Field<GroupElement>& change);

enum class RescaleDirection {
  ShrinkF,  // f -> f / lambda, fhat -> lambda fhat
  GrowF,    // f -> lambda f,   fhat -> fhat / lambda
};

/// Constant o1(2) gauge diag(I3, s, 1/s) realizing a conformal change of
/// the two envelopes. lambda = 0 is rejected.
FrameField conformal_rescale(const FrameField& frames, double lambda, RescaleDirection direction);

/// Change of frame replacing the sphere congruence n by n + k f, followed by
/// f -> lambda f, fhat -> fhat / lambda. Maps the Moebius frame of a surface
/// of revolution to the degenerate curved flat.
Field<GroupElement> sphere_shift_change(const ScalarField& k, double lambda);

/// How far F_a^{-1} F_b is from a K-valued gauge and from the identity.
struct FrameComparison {
  double block_defect = 0.0;        // max off-diagonal-block entry of F_a^{-1} F_b
  double identity_deviation = 0.0;  // max |F_a^{-1} F_b - I|
};

FrameComparison compare_frames(const FrameField& a, const FrameField& b);

}  // namespace isoflat
