#pragma once

#include <optional>

#include "isoflat/connection.hpp"
#include "isoflat/frame.hpp"
#include "isoflat/grid.hpp"
#include "isoflat/surface.hpp"

namespace isoflat {

/// Conformal factor k of the central sphere congruence: its induced metric
/// is k^2 times the isometric one.
struct CalapsoField {
  Grid grid;
  ScalarField k;
  double k_floor = 1e-6;

  /// Throws InputError on grid mismatch, non-finite values, or |k| < k_floor
  /// (reporting the first offending node).
  void validate() const;
};

/// Discrete  Delta(k_xy / k) + 2 (k^2)_xy  by nested second-order differences.
/// Nodes closer than kCalapsoMargin to the boundary hold zero.
ScalarField calapso_residual(const CalapsoField& field);
inline constexpr int kCalapsoMargin = 2;

/// Max |calapso_residual| over the interior.
double max_calapso_residual(const CalapsoField& field);

struct IntegratedU {
  ScalarField u;
  /// Max plaquette loop sum of the du 1-form per unit area; approximates
  /// max |Delta(k_xy/k) + 2 (k^2)_xy|.
  double compatibility_defect = 0.0;
};

/// Integrates
///   du = -((k_xy/k)_y + (k^2)_x) dx + ((k_xy/k)_x + (k^2)_y) dy
/// from u(origin) = u0 along row 0 and then up each column. The (k^2) terms
/// are integrated exactly by differencing k^2 at the edge endpoints, the
/// quotient terms by the trapezoid rule.
IntegratedU integrate_u(const CalapsoField& field, double u0);

/// u0 reproducing u = lambda^2 - k^2 for k = k(x).
double revolution_u0(const CalapsoField& field, double lambda);

/// Coefficients of tau, chi1, chi2 (dx and dy parts).
struct MoebiusFormData {
  Grid grid;
  ScalarField tau_x, tau_y;
  ScalarField chi1_x, chi1_y;
  ScalarField chi2_x, chi2_y;
  ScalarField u;
};

/// tau = k_x dx - k_y dy, chi1 = (k^2/2 - u) dx - (k_xy/k) dy,
/// chi2 = -(k_xy/k) dx + (k^2/2 + u) dy.
MoebiusFormData moebius_form_data(const CalapsoField& field, const ScalarField& u);

/// Maurer-Cartan form of the adapted Moebius frame (f = Fe4, n = Fe3,
/// Fe1 = f_x, Fe2 = f_y):
///
///   0      0      k dx    dx   chi1
///   0      0     -k dy    dy   chi2
///  -k dx   k dy   0       0    tau
///  -chi1  -chi2  -tau     0    0
///  -dx    -dy     0       0    0
///
/// `lambda` is recorded on the form when u came from the revolution preset.
ConnectionForm build_moebius_frame_form(const CalapsoField& field, const ScalarField& u,
                                        std::optional<double> lambda = std::nullopt);

/// The same frame after f -> f / k with n fixed: rotation omega in the
/// (1,2) slot, (1/k) dx, (1/k) dy in the f column, zero tau slot, and
///   omega = -(k_y/k) dx + (k_x/k) dy,
///   chi1 = k (k_xx/k - (k_x^2 + k_y^2)/(2k^2) + k^2/2 - u) dx,
///   chi2 = k (k_yy/k - (k_x^2 + k_y^2)/(2k^2) + k^2/2 + u) dy.
ConnectionForm build_conformal_change_form(const CalapsoField& field, const ScalarField& u,
                                           std::optional<double> lambda = std::nullopt);

struct CalapsoOptions {
  /// Largest admissible max |calapso_residual|.
  double residual_threshold = 1e-6;
  IntegratorOptions integrator;
};

struct CalapsoSurface {
  ScalarField u;
  double compatibility_defect = 0.0;
  double residual = 0.0;
  ConnectionForm form;
  FrameField frames;
  SurfaceTriple triple;
};

/// integrate_u, build_moebius_frame_form, integrate_frame and extract_triple
/// in sequence. Throws NumericalError when the Calapso residual exceeds the
/// threshold.
CalapsoSurface isothermic_from_calapso(const CalapsoField& field, double u0, const GroupElement& base,
                                       const CalapsoOptions& options = {});

}  // namespace isoflat
