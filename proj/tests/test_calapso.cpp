#include <cmath>
#include <limits>

#include "doctest.h"

#include "isoflat/calapso.hpp"
#include "isoflat/connection.hpp"
#include "isoflat/errors.hpp"
#include "support/oracles.hpp"

using namespace isoflat;

namespace {

Grid unit_grid(int n) { return Grid::spanning(n, n, 0.0, 1.0, 0.0, 1.0); }

CalapsoField field_of(const Grid& g, auto fn) {
  return {g, ScalarField::generate(g, [&](int i, int j) { return fn(g.x(i), g.y(j)); })};
}

// Curvature two nodes away from the boundary, clear of one-sided stencils.
double interior_curvature(const ConnectionForm& form) {
  const CurvatureField c = zero_curvature_residual(form);
  double m = 0.0;
  for (int j = 2; j + 2 < form.grid.ny; ++j)
    for (int i = 2; i + 2 < form.grid.nx; ++i) m = std::max(m, c.r(i, j).cwiseAbs().maxCoeff());
  return m;
}

double max_field(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("calapso") {

TEST_CASE("validation") {
  const Grid g = unit_grid(9);
  CHECK_NOTHROW(field_of(g, [](double, double) { return 0.5; }).validate());
  CalapsoField low = field_of(g, [](double x, double) { return x - 0.5; });
  try {
    low.validate();
    FAIL("expected InputError");
  } catch (const InputError& e) {
    REQUIRE(e.where().has_value());
    CHECK(e.where()->i == 4);
    CHECK(std::string(e.what()).find("k_floor") != std::string::npos);
  }
  CalapsoField nan = field_of(g, [](double, double) { return 1.0; });
  nan.k(2, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nan.validate(), InputError);
  CalapsoField mismatch = field_of(g, [](double, double) { return 1.0; });
  mismatch.grid = unit_grid(17);
  CHECK_THROWS_AS(mismatch.validate(), InputError);
}

TEST_CASE("residual vanishes for k depending on one variable") {
  const Grid g = unit_grid(17);
  CHECK(max_calapso_residual(field_of(g, [](double, double) { return 0.5; })) == 0.0);
  CHECK(max_calapso_residual(field_of(g, [](double x, double) { return 1.0 + 0.3 * std::sin(x); })) < 1e-12);
  CHECK(max_calapso_residual(field_of(g, [](double, double y) { return 2.0 + y * y; })) < 1e-12);
}

TEST_CASE("residual of a bilinear k against the hand-derived value") {
  const Grid g = unit_grid(65);
  const ScalarField r = calapso_residual(field_of(g, [](double x, double y) { return 1.0 + 0.1 * x * y; }));
  for (int j = kCalapsoMargin; j < g.ny - kCalapsoMargin; j += 7) {
    for (int i = kCalapsoMargin; i < g.nx - kCalapsoMargin; i += 7) {
      CHECK(r(i, j) == doctest::Approx(oracle::bilinear_calapso_residual(1.0, 0.1, g.x(i), g.y(j))).epsilon(1e-3));
    }
  }
  CHECK(r(0, 0) == 0.0);
  CHECK(r(1, 5) == 0.0);
}

TEST_CASE("integrate_u") {
  SUBCASE("constant k gives constant u") {
    const IntegratedU u = integrate_u(field_of(unit_grid(17), [](double, double) { return 0.5; }), 0.7);
    for (double v : u.u.values()) CHECK(v == 0.7);
    CHECK(u.compatibility_defect == 0.0);
  }
  SUBCASE("k(x) gives u = lambda^2 - k^2") {
    const Grid g = unit_grid(33);
    const CalapsoField f = field_of(g, [](double x, double) { return 1.0 + 0.3 * std::sin(2.0 * x); });
    const double lambda = 1.5;
    const IntegratedU u = integrate_u(f, revolution_u0(f, lambda));
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) CHECK(u.u(i, j) == doctest::Approx(lambda * lambda - f.k(i, j) * f.k(i, j)).epsilon(1e-12));
    // Loop sums cancel exactly up to rounding, which the 1/h^2 scaling amplifies.
    CHECK(u.compatibility_defect < 1e-8);
  }
  SUBCASE("compatibility defect tracks the Calapso residual") {
    const Grid g = unit_grid(65);
    const CalapsoField f = field_of(g, [](double x, double y) { return 1.0 + 0.1 * x * y; });
    const IntegratedU u = integrate_u(f, 0.0);
    CHECK(u.compatibility_defect == doctest::Approx(max_calapso_residual(f)).epsilon(0.1));
  }
}

TEST_CASE("Moebius frame forms") {
  const Grid g = unit_grid(33);
  const CalapsoField f = field_of(g, [](double x, double) { return 1.0 + 0.3 * std::sin(2.0 * x); });
  const ScalarField u = integrate_u(f, revolution_u0(f, 1.0)).u;
  const MoebiusFormData d = moebius_form_data(f, u);
  CHECK(max_field(d.tau_y) < 1e-13);
  CHECK(d.chi1_x(4, 4) == doctest::Approx(0.5 * f.k(4, 4) * f.k(4, 4) - u(4, 4)));
  for (const ConnectionForm& form : {build_moebius_frame_form(f, u, 1.0), build_conformal_change_form(f, u, 1.0)}) {
    CHECK(form.max_algebra_defect() < 1e-15);
    REQUIRE(form.lambda.has_value());
    CHECK(*form.lambda == 1.0);
  }
  // Flat up to second-order discretization error.
  const Grid fine = unit_grid(65);
  const CalapsoField ff = field_of(fine, [](double x, double) { return 1.0 + 0.3 * std::sin(2.0 * x); });
  const ScalarField uf = integrate_u(ff, revolution_u0(ff, 1.0)).u;
  CHECK(interior_curvature(build_moebius_frame_form(f, u)) / interior_curvature(build_moebius_frame_form(ff, uf)) >= 3.5);
  CHECK(interior_curvature(build_conformal_change_form(f, u)) / interior_curvature(build_conformal_change_form(ff, uf)) >=
        3.5);
  const ConnectionForm m = build_moebius_frame_form(f, u);
  CHECK(m.ax(3, 3)(0, 3) == 1.0);
  CHECK(m.ax(3, 3)(0, 2) == doctest::Approx(f.k(3, 3)));
  CHECK(!m.lambda.has_value());
}

TEST_CASE("isothermic surface from constant k") {
  const Grid g = unit_grid(17);
  const CalapsoSurface s = isothermic_from_calapso(field_of(g, [](double, double) { return 0.5; }), 0.3,
                                                   GroupElement::identity());
  CHECK(s.residual == 0.0);
  CHECK(s.compatibility_defect == 0.0);
  CHECK(zero_curvature_residual(s.form).max_norm < 1e-13);
  CHECK(s.triple.invariant_defect().relative < 1e-12);
  CHECK(s.frames.warnings.empty());
}

TEST_CASE("non-solutions are rejected") {
  const Grid g = unit_grid(33);
  const CalapsoField f = field_of(g, [](double x, double y) { return 1.0 + 0.1 * x * y; });
  CHECK_THROWS_AS(isothermic_from_calapso(f, 0.0, GroupElement::identity()), NumericalError);
  CalapsoOptions loose;
  loose.residual_threshold = 10.0;
  CHECK_NOTHROW(isothermic_from_calapso(f, 0.0, GroupElement::identity(), loose));
}

}  // TEST_SUITE
