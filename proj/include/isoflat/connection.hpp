#pragma once

#include <optional>
#include <vector>

#include "isoflat/grid.hpp"
#include "isoflat/isothermic.hpp"
#include "isoflat/minkowski.hpp"

namespace isoflat {

/// o1(5)-valued 1-form A_x dx + A_y dy sampled on grid nodes, with the
/// spectral parameter it was built at (absent for forms without one).
struct ConnectionForm {
  Grid grid;
  Field<AlgebraElement> ax;
  Field<AlgebraElement> ay;
  std::optional<double> lambda;

  double max_algebra_defect() const;
};

/// The spectral family of flat connections of an isothermic patch, in the
/// gauge where the o1(2) block vanishes:
///
///   row 1:  0,  u_y dx - u_x dy,  -e^u k1 dx,  l e^u dx,  -l e^-u dx
///   row 2:  .,  0,                -e^u k2 dy,  l e^u dy,   l e^-u dy
///   row 3:  e^u k1 dx,  e^u k2 dy,  0, 0, 0
///   row 4:  l e^-u dx, -l e^-u dy,  0, 0, 0
///   row 5: -l e^u dx,  -l e^u dy,   0, 0, 0
///
/// u_x, u_y come from second-order finite differences of u.
ConnectionForm build_phi_lambda(const IsothermicPatch& patch, double lambda);

/// The same curved flat before the final o1(2) gauge: eta in standard form
/// ((dx, -dx), (dy, dy), (0, 0)) and nu-block diag(-du, du).
ConnectionForm build_pre_gauge_form(const IsothermicPatch& patch, double lambda);

/// Loop of Maurer-Cartan forms of a surface of revolution written directly in
/// terms of the meridian samples. Requires meridian x-samples on grid x.
ConnectionForm build_revolution_form(const MeridianCurve& meridian, double lambda, const Grid& grid);

/// Curved flat obtained from the Moebius frame of a surface of revolution
/// after the sphere-congruence change n -> n + k f and the o1(2) gauge:
/// A_x has 2k at (1,3) and (l, -l) at (1,4), (1,5); A_y has (l, l) at
/// (2,4), (2,5). k must not depend on y.
ConnectionForm build_degenerate_revolution_form(const ScalarField& k, double lambda);
ConnectionForm build_degenerate_revolution_form(const std::vector<double>& k, double lambda, const Grid& grid);

/// Discrete curvature dA + [A ^ A] evaluated with central differences at
/// interior nodes: R = d_x A_y - d_y A_x + [A_x, A_y]. Boundary nodes hold zero.
struct CurvatureField {
  Grid grid;
  Field<Mat5> r;
  double max_norm = 0.0;    // max-entry norm of R over interior nodes
  double k_part_max = 0.0;  // same for the k-part of R
  double p_part_max = 0.0;  // same for the p-part of R
  double curved_flat = 0.0; // max |[A_x_p, A_y_p]|
};

CurvatureField zero_curvature_residual(const ConnectionForm& form);

/// max over nodes of |[p-part(A_x), p-part(A_y)]|_max; zero for curved flats.
double curved_flat_defect(const ConnectionForm& form);

}  // namespace isoflat
