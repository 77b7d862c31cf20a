#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "isoflat/grid.hpp"

namespace isoflat {

/// Isothermic surface data in curvature-line coordinates:
///   I  = e^{2u} (dx^2 + dy^2),   II = e^{2u} (k1 dx^2 + k2 dy^2).
struct IsothermicPatch {
  Grid grid;
  ScalarField u;
  ScalarField k1;
  ScalarField k2;

  /// Throws InputError on grid mismatch or non-finite values.
  void validate() const;
};

/// Residuals of the Gauss and Codazzi equations
///   du_xx + u_yy + e^{2u} k1 k2,  k1_y + (k1 - k2) u_y,  k2_x - (k1 - k2) u_x.
struct GaussCodazziResidual {
  ScalarField gauss;
  ScalarField codazzi_y;
  ScalarField codazzi_x;

  double max_abs() const;
  /// Max over nodes at least `margin` away from the boundary.
  double interior_max_abs(int margin = 1) const;
};

GaussCodazziResidual gauss_codazzi_residual(const IsothermicPatch& patch);

/// Round cylinder of the given radius; x is the angle and y the height
/// divided by the radius, so u = log(radius), k1 = 1/radius, k2 = 0.
IsothermicPatch make_cylinder_patch(double radius, const Grid& grid);

/// Turning angle theta(x) of a meridian parametrized by hyperbolic arc
/// length: r' = r cos(theta), z' = r sin(theta).
struct TurningAngle {
  std::function<double(double)> theta;
  std::function<double(double)> dtheta;

  static TurningAngle constant(double value);
  /// theta(x) = base + amplitude * sin(frequency * x + phase).
  static TurningAngle sinusoidal(double base, double amplitude, double frequency, double phase = 0.0);
};

/// Samples of the profile curve (r(x), z(x)) of a surface of revolution
/// f(x, y) = (r cos y, r sin y, z), with r^2 = r'^2 + z'^2.
struct MeridianCurve {
  std::vector<double> x;
  std::vector<double> r, dr, ddr;
  std::vector<double> z, dz, ddz;
  std::optional<double> lambda_hint;

  std::size_t size() const { return x.size(); }
  /// max |r^2 - r'^2 - z'^2| / r^2.
  double constraint_residual() const;
  void validate() const;
};

struct MeridianOptions {
  double z_init = 0.0;
  /// Per-interval step-doubling tolerance for the internal RK4 substeps.
  double substep_tolerance = 1e-13;
  int max_substeps = 4096;
  double constraint_tolerance = 1e-10;
};

/// Integrates r' = r cos(theta), z' = r sin(theta) with classical RK4 over
/// the grid's x-samples, refining substeps per interval until step doubling
/// agrees. Throws NumericalError when theta varies too fast for the cap.
MeridianCurve solve_meridian(const TurningAngle& angle, double r_init, const Grid& grid,
                             const MeridianOptions& options = {});

/// k = (r z' - r' z'' + r'' z') / (2 r^2), the conformal factor of the
/// central sphere congruence of the surface of revolution.
std::vector<double> conformal_factor_k(const MeridianCurve& meridian);

/// Broadcasts values indexed by i along y.
ScalarField x_only_field(const Grid& grid, const std::vector<double>& values);

/// (u, k1, k2) of the surface of revolution in the coordinates (x, y):
/// u = log r, k1 = (r' z'' - r'' z') / r^3, k2 = z' / r^2.
IsothermicPatch revolution_patch(const MeridianCurve& meridian, const Grid& grid);

}  // namespace isoflat
