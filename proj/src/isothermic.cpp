#include "isoflat/isothermic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "isoflat/finite_difference.hpp"

namespace isoflat {

namespace {

double max_abs_over(const ScalarField& f, int margin) {
  const Grid& g = f.grid();
  double m = 0.0;
  for (int j = margin; j < g.ny - margin; ++j)
    for (int i = margin; i < g.nx - margin; ++i) m = std::max(m, std::abs(f(i, j)));
  return m;
}

void require_finite(const ScalarField& f, const char* name) {
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!std::isfinite(f(i, j))) throw InputError(std::string("patch: non-finite ") + name, GridPoint{i, j});
}

}  // namespace

void IsothermicPatch::validate() const {
  grid.validate();
  require_grid(u, grid, "patch u");
  require_grid(k1, grid, "patch k1");
  require_grid(k2, grid, "patch k2");
  require_finite(u, "u");
  require_finite(k1, "k1");
  require_finite(k2, "k2");
}

double GaussCodazziResidual::max_abs() const {
  return std::max({max_abs_over(gauss, 0), max_abs_over(codazzi_y, 0), max_abs_over(codazzi_x, 0)});
}

double GaussCodazziResidual::interior_max_abs(int margin) const {
  return std::max(
      {max_abs_over(gauss, margin), max_abs_over(codazzi_y, margin), max_abs_over(codazzi_x, margin)});
}

GaussCodazziResidual gauss_codazzi_residual(const IsothermicPatch& patch) {
  patch.validate();
  const Grid& g = patch.grid;
  const ScalarField lap = fd::laplacian(patch.u);
  const ScalarField ux = fd::d_dx(patch.u);
  const ScalarField uy = fd::d_dy(patch.u);
  const ScalarField k1y = fd::d_dy(patch.k1);
  const ScalarField k2x = fd::d_dx(patch.k2);

  GaussCodazziResidual r{ScalarField(g, 0.0), ScalarField(g, 0.0), ScalarField(g, 0.0)};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double u = patch.u(i, j);
      const double k1 = patch.k1(i, j);
      const double k2 = patch.k2(i, j);
      r.gauss(i, j) = lap(i, j) + std::exp(2.0 * u) * k1 * k2;
      r.codazzi_y(i, j) = k1y(i, j) + (k1 - k2) * uy(i, j);
      r.codazzi_x(i, j) = k2x(i, j) - (k1 - k2) * ux(i, j);
    }
  }
  return r;
}

IsothermicPatch make_cylinder_patch(double radius, const Grid& grid) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("cylinder: radius must be positive");
  grid.validate();
  return {grid, ScalarField(grid, std::log(radius)), ScalarField(grid, 1.0 / radius), ScalarField(grid, 0.0)};
}

TurningAngle TurningAngle::constant(double value) {
  return {[value](double) { return value; }, [](double) { return 0.0; }};
}

TurningAngle TurningAngle::sinusoidal(double base, double amplitude, double frequency, double phase) {
  return {[=](double x) { return base + amplitude * std::sin(frequency * x + phase); },
          [=](double x) { return amplitude * frequency * std::cos(frequency * x + phase); }};
}

double MeridianCurve::constraint_residual() const {
  double worst = 0.0;
  for (std::size_t n = 0; n < size(); ++n) {
    const double r2 = r[n] * r[n];
    worst = std::max(worst, std::abs(r2 - dr[n] * dr[n] - dz[n] * dz[n]) / r2);
  }
  return worst;
}

void MeridianCurve::validate() const {
  const std::size_t n = size();
  if (n < static_cast<std::size_t>(kMinGridNodes) || r.size() != n || dr.size() != n || ddr.size() != n ||
      z.size() != n || dz.size() != n || ddz.size() != n) {
    throw InputError("meridian: inconsistent sample arrays");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(r[k] > 0.0)) throw InputError("meridian: r must be positive", GridPoint{static_cast<int>(k), 0});
  }
  if (constraint_residual() > 1e-10) throw InputError("meridian: arc-length constraint r^2 = r'^2 + z'^2 violated");
}

namespace {

using State = std::array<double, 2>;  // (r, z)

State rk4_step(const TurningAngle& angle, double x, const State& s, double h) {
  auto rhs = [&](double xx, const State& st) {
    const double th = angle.theta(xx);
    return State{st[0] * std::cos(th), st[0] * std::sin(th)};
  };
  const State k1 = rhs(x, s);
  const State k2 = rhs(x + 0.5 * h, {s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]});
  const State k3 = rhs(x + 0.5 * h, {s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]});
  const State k4 = rhs(x + h, {s[0] + h * k3[0], s[1] + h * k3[1]});
  return {s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

State advance(const TurningAngle& angle, double x, const State& s, double h, int substeps) {
  State cur = s;
  const double dh = h / substeps;
  for (int m = 0; m < substeps; ++m) cur = rk4_step(angle, x + m * dh, cur, dh);
  return cur;
}

}  // namespace

MeridianCurve solve_meridian(const TurningAngle& angle, double r_init, const Grid& grid,
                             const MeridianOptions& options) {
  grid.validate();
  if (!(r_init > 0.0)) throw InputError("meridian: initial radius must be positive");
  const int n = grid.nx;
  MeridianCurve c;
  c.x.resize(n);
  c.r.resize(n);
  c.z.resize(n);
  State s{r_init, options.z_init};
  c.x[0] = grid.x(0);
  c.r[0] = s[0];
  c.z[0] = s[1];
  int substeps = 1;
  for (int i = 0; i + 1 < n; ++i) {
    const double x = grid.x(i);
    // Start from the previous interval's count; theta usually varies smoothly.
    substeps = std::max(1, substeps / 2);
    State coarse = advance(angle, x, s, grid.hx, substeps);
    for (;;) {
      if (2 * substeps > options.max_substeps) {
        throw NumericalError("meridian: step-size failure, theta varies too fast for the grid", GridPoint{i, 0});
      }
      const State fine = advance(angle, x, s, grid.hx, 2 * substeps);
      const double scale = std::max({1.0, std::abs(fine[0]), std::abs(fine[1])});
      const double diff = std::max(std::abs(fine[0] - coarse[0]), std::abs(fine[1] - coarse[1]));
      substeps *= 2;
      coarse = fine;
      if (diff <= options.substep_tolerance * scale) break;
    }
    s = coarse;
    c.x[i + 1] = grid.x(i + 1);
    c.r[i + 1] = s[0];
    c.z[i + 1] = s[1];
  }

  c.dr.resize(n);
  c.dz.resize(n);
  c.ddr.resize(n);
  c.ddz.resize(n);
  for (int i = 0; i < n; ++i) {
    const double th = angle.theta(c.x[i]);
    const double dth = angle.dtheta(c.x[i]);
    const double ct = std::cos(th);
    const double st = std::sin(th);
    c.dr[i] = c.r[i] * ct;
    c.dz[i] = c.r[i] * st;
    c.ddr[i] = c.dr[i] * ct - c.r[i] * st * dth;
    c.ddz[i] = c.dr[i] * st + c.r[i] * ct * dth;
    if (!(c.r[i] > 0.0)) throw NumericalError("meridian: radius left the half plane", GridPoint{i, 0});
  }
  if (c.constraint_residual() >= options.constraint_tolerance) {
    throw NumericalError("meridian: arc-length constraint residual exceeds tolerance");
  }
  return c;
}

std::vector<double> conformal_factor_k(const MeridianCurve& m) {
  m.validate();
  std::vector<double> k(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    k[i] = (m.r[i] * m.dz[i] - m.dr[i] * m.ddz[i] + m.ddr[i] * m.dz[i]) / (2.0 * m.r[i] * m.r[i]);
  }
  return k;
}

ScalarField x_only_field(const Grid& grid, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(grid.nx)) throw InputError("x-only field: sample count != nx");
  return ScalarField::generate(grid, [&](int i, int) { return values[i]; });
}

IsothermicPatch revolution_patch(const MeridianCurve& m, const Grid& grid) {
  grid.validate();
  m.validate();
  if (m.size() != static_cast<std::size_t>(grid.nx)) throw InputError("revolution patch: meridian samples != nx");
  for (int i = 0; i < grid.nx; ++i) {
    if (std::abs(m.x[i] - grid.x(i)) > 1e-12 * std::max(1.0, std::abs(grid.x(i)))) {
      throw InputError("revolution patch: meridian samples are not aligned with grid x", GridPoint{i, 0});
    }
  }
  std::vector<double> u(grid.nx), k1(grid.nx), k2(grid.nx);
  for (int i = 0; i < grid.nx; ++i) {
    const double r = m.r[i];
    u[i] = std::log(r);
    k1[i] = (m.dr[i] * m.ddz[i] - m.ddr[i] * m.dz[i]) / (r * r * r);
    k2[i] = m.dz[i] / (r * r);
  }
  return {grid, x_only_field(grid, u), x_only_field(grid, k1), x_only_field(grid, k2)};
}

}  // namespace isoflat
