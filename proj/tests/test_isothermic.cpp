#include <cmath>
#include <numbers>

#include "doctest.h"

#include "isoflat/finite_difference.hpp"
#include "isoflat/isothermic.hpp"
#include "support/oracles.hpp"

using namespace isoflat;

namespace {

constexpr double kPi = std::numbers::pi;

Grid revolution_grid(int n) { return Grid::spanning(n, n, 0.0, 2.0 * kPi, 0.0, 1.0); }

MeridianCurve sinusoidal_meridian(const Grid& g) {
  return solve_meridian(TurningAngle::sinusoidal(kPi / 2.0, 0.3, 1.0), 1.0, g);
}

double max_field(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("spanning grid and refinement") {
  const Grid g = Grid::spanning(5, 9, -1.0, 1.0, 0.0, 2.0);
  CHECK(g.hx == doctest::Approx(0.5));
  CHECK(g.hy == doctest::Approx(0.25));
  CHECK(g.x(4) == doctest::Approx(1.0));
  CHECK(g.y(8) == doctest::Approx(2.0));
  const Grid r = g.refined();
  CHECK(r.nx == 9);
  CHECK(r.ny == 17);
  CHECK(r.x(8) == doctest::Approx(1.0));
  CHECK(g.index(2, 3) == 3u * 5u + 2u);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(Grid::spanning(4, 9, 0.0, 1.0, 0.0, 1.0).validate(), InputError);
  CHECK_THROWS_AS((Grid{9, 9, 0.0, 0.1, 0.0, 0.0}.validate()), InputError);
  CHECK_THROWS_AS((Grid{9, 9, 0.1, std::nan(""), 0.0, 0.0}.validate()), InputError);
  CHECK_NOTHROW((Grid{5, 5, 0.1, 0.1, 0.0, 0.0}.validate()));
}

}  // TEST_SUITE

TEST_SUITE("finite_difference") {

TEST_CASE("stencils are exact on quadratics, boundary included") {
  const Grid g = Grid::spanning(11, 9, -1.0, 2.0, 0.5, 1.5);
  const ScalarField f = ScalarField::generate(g, [&](int i, int j) {
    const double x = g.x(i), y = g.y(j);
    return x * x + y * y + 3.0 * x * y - x + 2.0;
  });
  const ScalarField fx = fd::d_dx(f), fy = fd::d_dy(f), lap = fd::laplacian(f), fxy = fd::d2_dxdy(f);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      CHECK(fx(i, j) == doctest::Approx(2.0 * g.x(i) + 3.0 * g.y(j) - 1.0).epsilon(1e-12));
      CHECK(fy(i, j) == doctest::Approx(2.0 * g.y(j) + 3.0 * g.x(i)).epsilon(1e-12));
      CHECK(lap(i, j) == doctest::Approx(4.0).epsilon(1e-12));
      CHECK(fxy(i, j) == doctest::Approx(3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("first derivative converges at second order") {
  double prev = 0.0;
  for (int n : {17, 33, 65}) {
    const Grid g = Grid::spanning(n, 5, 0.0, 1.0, 0.0, 1.0);
    const ScalarField f = ScalarField::generate(g, [&](int i, int) { return std::sin(3.0 * g.x(i)); });
    const ScalarField fx = fd::d_dx(f);
    double err = 0.0;
    for (int i = 0; i < g.nx; ++i) err = std::max(err, std::abs(fx(i, 2) - 3.0 * std::cos(3.0 * g.x(i))));
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}

}  // TEST_SUITE

TEST_SUITE("isothermic") {

TEST_CASE("Gauss-Codazzi residual on constant patches") {
  const Grid g = Grid::spanning(9, 9, 0.0, 1.0, 0.0, 1.0);
  const ScalarField zero(g, 0.0), one(g, 1.0);
  CHECK(gauss_codazzi_residual({g, zero, zero, zero}).max_abs() == 0.0);
  CHECK(gauss_codazzi_residual({g, zero, one, zero}).max_abs() == 0.0);
  const GaussCodazziResidual r = gauss_codazzi_residual({g, zero, one, one});
  CHECK(max_field(r.gauss) == 1.0);
  CHECK(max_field(r.codazzi_x) == 0.0);
  CHECK(max_field(r.codazzi_y) == 0.0);
}

TEST_CASE("Gauss-Codazzi residual is invariant under grid translation") {
  const Grid a = Grid::spanning(17, 17, 0.0, 1.0, 0.0, 1.0);
  Grid b = a;
  b.x0 = 3.0;
  b.y0 = -2.0;
  auto patch = [](const Grid& g) {
    auto field = [&](auto fn) { return ScalarField::generate(g, [&](int i, int j) { return fn(i * g.hx, j * g.hy); }); };
    return IsothermicPatch{g, field([](double x, double y) { return 0.1 * x * y; }),
                           field([](double x, double) { return 1.0 + 0.2 * x; }),
                           field([](double, double y) { return 0.3 * y; })};
  };
  const GaussCodazziResidual ra = gauss_codazzi_residual(patch(a)), rb = gauss_codazzi_residual(patch(b));
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(ra.gauss.values()[n] == rb.gauss.values()[n]);
    CHECK(ra.codazzi_x.values()[n] == rb.codazzi_x.values()[n]);
    CHECK(ra.codazzi_y.values()[n] == rb.codazzi_y.values()[n]);
  }
}

TEST_CASE("cylinder patches") {
  const Grid g = Grid::spanning(9, 9, 0.0, 1.0, 0.0, 1.0);
  const IsothermicPatch p1 = make_cylinder_patch(1.0, g);
  CHECK(max_field(p1.u) == 0.0);
  CHECK(p1.k1(3, 4) == 1.0);
  CHECK(max_field(p1.k2) == 0.0);
  const IsothermicPatch p2 = make_cylinder_patch(2.0, g);
  CHECK(p2.u(2, 2) == doctest::Approx(std::log(2.0)));
  CHECK(p2.k1(2, 2) == doctest::Approx(0.5));
  CHECK(gauss_codazzi_residual(p2).max_abs() < 1e-12);
  CHECK_THROWS_AS(make_cylinder_patch(0.0, g), InputError);
}

TEST_CASE("patch validation") {
  const Grid g = Grid::spanning(9, 9, 0.0, 1.0, 0.0, 1.0);
  IsothermicPatch p = make_cylinder_patch(1.0, g);
  p.k2(3, 3) = std::nan("");
  CHECK_THROWS_AS(p.validate(), InputError);
  IsothermicPatch q = make_cylinder_patch(1.0, g);
  q.u = ScalarField(Grid::spanning(9, 10, 0.0, 1.0, 0.0, 1.0), 0.0);
  CHECK_THROWS_AS(q.validate(), InputError);
}

TEST_CASE("meridian of the unit cylinder") {
  const Grid g = revolution_grid(17);
  const MeridianCurve m = solve_meridian(TurningAngle::constant(kPi / 2.0), 1.0, g);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.r[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.z[i] == doctest::Approx(m.x[i]).epsilon(1e-13));
  }
  CHECK(m.constraint_residual() < 1e-10);
  const std::vector<double> k = conformal_factor_k(m);
  for (double v : k) CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("sinusoidal meridian against an adaptive ODE oracle") {
  const Grid g = revolution_grid(65);
  const MeridianCurve m = sinusoidal_meridian(g);
  CHECK(m.constraint_residual() < 1e-10);
  const oracle::Revolution rv{kPi / 2.0, 0.3};
  const auto ref = rv.profile(m.x);
  double err = 0.0, kerr = 0.0;
  const std::vector<double> k = conformal_factor_k(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    err = std::max({err, std::abs(m.r[i] - ref[i].first), std::abs(m.z[i] - ref[i].second)});
    kerr = std::max(kerr, std::abs(k[i] - rv.k(m.x[i])));
  }
  CHECK(err < 1e-8);
  CHECK(kerr < 1e-8);
}

TEST_CASE("conformal factor is invariant under scaling of the meridian") {
  const Grid g = revolution_grid(33);
  const TurningAngle angle = TurningAngle::sinusoidal(kPi / 2.0, 0.3, 1.0);
  const std::vector<double> k1 = conformal_factor_k(solve_meridian(angle, 1.0, g));
  const std::vector<double> k3 = conformal_factor_k(solve_meridian(angle, 3.0, g));
  for (std::size_t i = 0; i < k1.size(); ++i) CHECK(k3[i] == doctest::Approx(k1[i]).epsilon(1e-10));
}

TEST_CASE("x_only_field is constant along y") {
  const Grid g = Grid::spanning(7, 5, 0.0, 1.0, 0.0, 1.0);
  const ScalarField f = x_only_field(g, {1, 2, 3, 4, 5, 6, 7});
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) CHECK(f(i, j) == i + 1.0);
  CHECK_THROWS_AS(x_only_field(g, {1, 2}), InputError);
}

TEST_CASE("revolution patch of the cylinder meridian is the role-swapped cylinder") {
  const Grid g = revolution_grid(17);
  const MeridianCurve m = solve_meridian(TurningAngle::constant(kPi / 2.0), 1.0, g);
  const IsothermicPatch p = revolution_patch(m, g);
  CHECK(max_field(p.u) < 1e-14);
  CHECK(max_field(p.k1) < 1e-13);
  for (double v : p.k2.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("revolution patch matches closed-form coefficients") {
  const Grid g = revolution_grid(65);
  const MeridianCurve m = sinusoidal_meridian(g);
  const IsothermicPatch p = revolution_patch(m, g);
  const oracle::Revolution rv{kPi / 2.0, 0.3};
  const auto ref = rv.profile(m.x);
  double err = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i), r = ref[i].first;
    // With r' = r cos(theta), z' = r sin(theta): k1 = theta' / r, k2 = sin(theta) / r.
    err = std::max({err, std::abs(p.u(i, 3) - std::log(r)), std::abs(p.k1(i, 3) - rv.dtheta(x) / r),
                    std::abs(p.k2(i, 3) - std::sin(rv.theta(x)) / r)});
  }
  CHECK(err < 1e-8);
}

TEST_CASE("revolution patch residual converges at second order") {
  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    const Grid g = revolution_grid(n);
    const double r = gauss_codazzi_residual(revolution_patch(sinusoidal_meridian(g), g)).interior_max_abs(1);
    if (prev > 0.0) CHECK(prev / r >= 3.5);
    prev = r;
  }
}

}  // TEST_SUITE
