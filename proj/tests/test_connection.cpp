#include <cmath>
#include <numbers>

#include "doctest.h"

#include "isoflat/connection.hpp"
#include "isoflat/errors.hpp"
#include "isoflat/finite_difference.hpp"
#include "isoflat/isothermic.hpp"
#include "support/oracles.hpp"
#include "support/samples.hpp"

using namespace isoflat;
using samples::max_abs;

namespace {

constexpr double kPi = std::numbers::pi;

Grid revolution_grid(int n) { return Grid::spanning(n, n, 0.0, 2.0 * kPi, 0.0, 1.0); }

MeridianCurve sinusoidal_meridian(const Grid& g) {
  return solve_meridian(TurningAngle::sinusoidal(kPi / 2.0, 0.3, 1.0), 1.0, g);
}

double max_p_part(const ConnectionForm& form) {
  double m = 0.0;
  for (std::size_t n = 0; n < form.grid.size(); ++n) {
    m = std::max({m, max_abs(kp_split(form.ax.values()[n]).p.matrix()), max_abs(kp_split(form.ay.values()[n]).p.matrix())});
  }
  return m;
}

// A smooth patch that does not solve the Gauss equation.
IsothermicPatch generic_patch(const Grid& g) {
  auto field = [&](auto fn) { return ScalarField::generate(g, [&](int i, int j) { return fn(g.x(i), g.y(j)); }); };
  return {g, field([](double x, double y) { return 0.2 * std::sin(x) * y; }),
          field([](double x, double y) { return 1.0 + 0.1 * x * y; }), field([](double x, double) { return 0.3 * x; })};
}

}  // namespace

TEST_SUITE("connection") {

TEST_CASE("spectral family at lambda = 0 has no p-part") {
  const Grid g = revolution_grid(17);
  CHECK(max_p_part(build_phi_lambda(revolution_patch(sinusoidal_meridian(g), g), 0.0)) == 0.0);
}

TEST_CASE("entries of the cylinder form") {
  const Grid g = revolution_grid(17);
  const ConnectionForm form = build_phi_lambda(make_cylinder_patch(1.0, g), 1.0);
  for (int j = 0; j < g.ny; j += 4) {
    for (int i = 0; i < g.nx; i += 4) {
      CHECK(form.ax(i, j)(0, 3) == 1.0);
      CHECK(form.ax(i, j)(0, 4) == -1.0);
      CHECK(form.ax(i, j)(0, 2) == -1.0);
      // k2 = 0 for the cylinder with x the angle.
      CHECK(form.ay(i, j)(1, 2) == 0.0);
      CHECK(form.ay(i, j)(1, 3) == 1.0);
      CHECK(form.ay(i, j)(1, 4) == 1.0);
    }
  }
  // The same cylinder with the roles of x and y swapped has k2 = 1.
  const MeridianCurve m = solve_meridian(TurningAngle::constant(kPi / 2.0), 1.0, g);
  const ConnectionForm swapped = build_phi_lambda(revolution_patch(m, g), 1.0);
  CHECK(swapped.ay(5, 5)(1, 2) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("entries against an independently written oracle") {
  const Grid g = revolution_grid(33);
  const IsothermicPatch p = generic_patch(g);
  const ConnectionForm form = build_phi_lambda(p, 0.7);
  const ScalarField ux = fd::d_dx(p.u), uy = fd::d_dy(p.u);
  for (int j = 0; j < g.ny; j += 3) {
    for (int i = 0; i < g.nx; i += 3) {
      CHECK(max_abs(form.ax(i, j).matrix() - oracle::patch_ax(p.u(i, j), uy(i, j), p.k1(i, j), 0.7)) < 1e-14);
      CHECK(max_abs(form.ay(i, j).matrix() - oracle::patch_ay(p.u(i, j), ux(i, j), p.k2(i, j), 0.7)) < 1e-14);
    }
  }
}

TEST_CASE("built forms lie in the algebra and are curved flats for all lambda") {
  const Grid g = revolution_grid(17);
  const MeridianCurve m = sinusoidal_meridian(g);
  const IsothermicPatch p = revolution_patch(m, g);
  for (double l : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}) {
    CAPTURE(l);
    for (const ConnectionForm& f :
         {build_phi_lambda(p, l), build_phi_lambda(generic_patch(g), l), build_pre_gauge_form(p, l),
          build_revolution_form(m, l, g), build_degenerate_revolution_form(conformal_factor_k(m), l, g)}) {
      CHECK(f.max_algebra_defect() <= 1e-15);
      CHECK(curved_flat_defect(f) <= 1e-14);
      REQUIRE(f.lambda.has_value());
      CHECK(*f.lambda == l);
    }
  }
}

TEST_CASE("linearity in lambda") {
  const Grid g = revolution_grid(17);
  const IsothermicPatch p = generic_patch(g);
  const ConnectionForm f0 = build_phi_lambda(p, 0.0), f1 = build_phi_lambda(p, 1.0);
  for (double l : {-1.5, 0.3, 2.0}) {
    const ConnectionForm fl = build_phi_lambda(p, l);
    for (std::size_t n = 0; n < g.size(); ++n) {
      const Mat5 px = kp_split(f1.ax.values()[n]).p.matrix(), py = kp_split(f1.ay.values()[n]).p.matrix();
      CHECK(max_abs(fl.ax.values()[n].matrix() - f0.ax.values()[n].matrix() - l * px) <= 1e-15);
      CHECK(max_abs(fl.ay.values()[n].matrix() - f0.ay.values()[n].matrix() - l * py) <= 1e-15);
    }
  }
}

TEST_CASE("revolution form of the unit cylinder") {
  const Grid g = revolution_grid(17);
  const MeridianCurve m = solve_meridian(TurningAngle::constant(kPi / 2.0), 1.0, g);
  const ConnectionForm f = build_revolution_form(m, 0.0, g);
  CHECK(max_abs(f.ax(5, 5).matrix()) < 1e-15);
  Mat5 expected = Mat5::Zero();
  expected(1, 2) = -1.0;
  expected(2, 1) = 1.0;
  CHECK(max_abs(f.ay(5, 5).matrix() - expected) < 1e-15);

  // k-parts do not depend on lambda.
  const ConnectionForm a = build_revolution_form(sinusoidal_meridian(g), 0.4, g);
  const ConnectionForm b = build_revolution_form(sinusoidal_meridian(g), -1.3, g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(max_abs(kp_split(a.ax.values()[n] - b.ax.values()[n]).k.matrix()) == 0.0);
    CHECK(max_abs(kp_split(a.ay.values()[n] - b.ay.values()[n]).k.matrix()) == 0.0);
  }
}

TEST_CASE("revolution form requires matching x samples") {
  const Grid g = revolution_grid(17);
  const MeridianCurve m = sinusoidal_meridian(g);
  CHECK_THROWS_AS(build_revolution_form(m, 1.0, revolution_grid(33)), InputError);
}

TEST_CASE("degenerate revolution flat") {
  const Grid g = revolution_grid(17);
  const ConnectionForm f = build_degenerate_revolution_form(std::vector<double>(17, 0.5), 1.0, g);
  CHECK(f.ax(3, 3)(0, 2) == 1.0);
  CHECK(max_p_part(build_degenerate_revolution_form(std::vector<double>(17, 0.5), 0.0, g)) == 0.0);
  CHECK(zero_curvature_residual(f).max_norm == 0.0);
  const ScalarField ky = ScalarField::generate(g, [&](int, int j) { return 1.0 + g.y(j); });
  CHECK_THROWS_AS(build_degenerate_revolution_form(ky, 1.0), InputError);
}

TEST_CASE("zero-curvature residual") {
  const Grid g = revolution_grid(17);
  SUBCASE("constant commuting coefficients") {
    Mat5 a = Mat5::Zero();
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    const ConnectionForm f{g, Field<AlgebraElement>(g, AlgebraElement(a)), Field<AlgebraElement>(g, AlgebraElement(2.0 * a)),
                           std::nullopt};
    CHECK(zero_curvature_residual(f).max_norm == 0.0);
  }
  SUBCASE("cylinder form is flat") {
    CHECK(zero_curvature_residual(build_phi_lambda(make_cylinder_patch(1.0, g), 1.0)).max_norm <= 1e-14);
  }
  SUBCASE("a patch violating the Gauss equation is not flat at any resolution") {
    for (int n : {17, 33, 65}) {
      const Grid gn = revolution_grid(n);
      const IsothermicPatch bad{gn, ScalarField(gn, 0.0), ScalarField(gn, 1.0), ScalarField(gn, 1.0)};
      CHECK(zero_curvature_residual(build_phi_lambda(bad, 1.0)).max_norm >= 0.5);
    }
  }
  SUBCASE("valid patches converge at second order") {
    double prev = 0.0;
    for (int n : {33, 65, 129}) {
      const Grid gn = revolution_grid(n);
      const double r = zero_curvature_residual(build_phi_lambda(revolution_patch(sinusoidal_meridian(gn), gn), 1.0)).max_norm;
      if (prev > 0.0) CHECK(prev / r >= 3.5);
      prev = r;
    }
  }
}

TEST_CASE("curved flat defect detects non-commuting p-parts") {
  const Grid g = revolution_grid(9);
  Eigen::Matrix<double, 3, 2> ex = Eigen::Matrix<double, 3, 2>::Zero(), ey = Eigen::Matrix<double, 3, 2>::Zero();
  ex(0, 0) = 1.0;
  ey(1, 0) = 1.0;
  ey(0, 1) = 0.5;
  const ConnectionForm f{g, Field<AlgebraElement>(g, make_p_element(ex)), Field<AlgebraElement>(g, make_p_element(ey)),
                         std::nullopt};
  CHECK(curved_flat_defect(f) > 0.1);
}

}  // TEST_SUITE
