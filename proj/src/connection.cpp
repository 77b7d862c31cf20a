#include "isoflat/connection.hpp"

#include <algorithm>
#include <cmath>

#include "form_entries.hpp"
#include "isoflat/finite_difference.hpp"

namespace isoflat {

using detail::set_boost;
using detail::set_light_cone_scaling;
using detail::set_rotation;

double ConnectionForm::max_algebra_defect() const {
  double worst = 0.0;
  for (std::size_t n = 0; n < ax.values().size(); ++n) {
    worst = std::max({worst, algebra_defect(ax.values()[n]), algebra_defect(ay.values()[n])});
  }
  return worst;
}

ConnectionForm build_phi_lambda(const IsothermicPatch& patch, double lambda) {
  patch.validate();
  const Grid& g = patch.grid;
  const ScalarField ux = fd::d_dx(patch.u);
  const ScalarField uy = fd::d_dy(patch.u);
  ConnectionForm form{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double eu = std::exp(patch.u(i, j));
      const double emu = std::exp(-patch.u(i, j));
      Mat5& x = form.ax(i, j).matrix();
      Mat5& y = form.ay(i, j).matrix();
      set_rotation(x, 0, 1, uy(i, j));
      set_rotation(y, 0, 1, -ux(i, j));
      set_rotation(x, 0, 2, -eu * patch.k1(i, j));
      set_rotation(y, 1, 2, -eu * patch.k2(i, j));
      set_boost(x, 0, 3, lambda * eu);
      set_boost(x, 0, 4, -(lambda * emu));
      set_boost(y, 1, 3, lambda * eu);
      set_boost(y, 1, 4, lambda * emu);
    }
  }
  return form;
}

ConnectionForm build_pre_gauge_form(const IsothermicPatch& patch, double lambda) {
  patch.validate();
  const Grid& g = patch.grid;
  const ScalarField ux = fd::d_dx(patch.u);
  const ScalarField uy = fd::d_dy(patch.u);
  ConnectionForm form{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double eu = std::exp(patch.u(i, j));
      Mat5& x = form.ax(i, j).matrix();
      Mat5& y = form.ay(i, j).matrix();
      set_rotation(x, 0, 1, uy(i, j));
      set_rotation(y, 0, 1, -ux(i, j));
      // psi1 = e^u k1 dx, psi2 = e^u k2 dy
      set_rotation(x, 0, 2, -eu * patch.k1(i, j));
      set_rotation(y, 1, 2, -eu * patch.k2(i, j));
      // nu = -du
      set_light_cone_scaling(x, -ux(i, j));
      set_light_cone_scaling(y, -uy(i, j));
      set_boost(x, 0, 3, lambda);
      set_boost(x, 0, 4, -lambda);
      set_boost(y, 1, 3, lambda);
      set_boost(y, 1, 4, lambda);
    }
  }
  return form;
}

ConnectionForm build_revolution_form(const MeridianCurve& m, double lambda, const Grid& grid) {
  grid.validate();
  m.validate();
  if (m.size() != static_cast<std::size_t>(grid.nx)) throw InputError("revolution form: meridian samples != nx");
  ConnectionForm form{grid, Field<AlgebraElement>(grid, {}), Field<AlgebraElement>(grid, {}), lambda};
  for (int i = 0; i < grid.nx; ++i) {
    const double r = m.r[i];
    const double geodesic = (m.dr[i] * m.ddz[i] - m.ddr[i] * m.dz[i]) / (r * r);
    AlgebraElement ax, ay;
    Mat5& x = ax.matrix();
    Mat5& y = ay.matrix();
    set_rotation(x, 0, 2, -geodesic);
    set_boost(x, 0, 3, lambda * r);
    set_boost(x, 0, 4, -(lambda / r));
    set_rotation(y, 0, 1, -m.dr[i] / r);
    set_rotation(y, 1, 2, -m.dz[i] / r);
    set_boost(y, 1, 3, lambda * r);
    set_boost(y, 1, 4, lambda / r);
    for (int j = 0; j < grid.ny; ++j) {
      form.ax(i, j) = ax;
      form.ay(i, j) = ay;
    }
  }
  return form;
}

ConnectionForm build_degenerate_revolution_form(const ScalarField& k, double lambda) {
  const Grid& g = k.grid();
  g.validate();
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (k(i, j) != k(i, 0)) throw InputError("degenerate revolution form: k must depend on x only", GridPoint{i, j});

  ConnectionForm form{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      Mat5& x = form.ax(i, j).matrix();
      Mat5& y = form.ay(i, j).matrix();
      set_rotation(x, 0, 2, 2.0 * k(i, j));
      set_boost(x, 0, 3, lambda);
      set_boost(x, 0, 4, -lambda);
      set_boost(y, 1, 3, lambda);
      set_boost(y, 1, 4, lambda);
    }
  }
  return form;
}

ConnectionForm build_degenerate_revolution_form(const std::vector<double>& k, double lambda, const Grid& grid) {
  return build_degenerate_revolution_form(x_only_field(grid, k), lambda);
}

CurvatureField zero_curvature_residual(const ConnectionForm& form) {
  const Grid& g = form.grid;
  g.validate();
  const Field<AlgebraElement> day_dx = fd::d_dx(form.ay);
  const Field<AlgebraElement> dax_dy = fd::d_dy(form.ax);
  CurvatureField out{g, Field<Mat5>(g, Mat5::Zero())};
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const AlgebraElement r = day_dx(i, j) - dax_dy(i, j) + bracket(form.ax(i, j), form.ay(i, j));
      out.r(i, j) = r.matrix();
      const KPSplit split = kp_split(r);
      out.max_norm = std::max(out.max_norm, r.matrix().cwiseAbs().maxCoeff());
      out.k_part_max = std::max(out.k_part_max, split.k.matrix().cwiseAbs().maxCoeff());
      out.p_part_max = std::max(out.p_part_max, split.p.matrix().cwiseAbs().maxCoeff());
    }
  }
  out.curved_flat = curved_flat_defect(form);
  return out;
}

double curved_flat_defect(const ConnectionForm& form) {
  double worst = 0.0;
  for (std::size_t n = 0; n < form.ax.values().size(); ++n) {
    const AlgebraElement px = kp_split(form.ax.values()[n]).p;
    const AlgebraElement py = kp_split(form.ay.values()[n]).p;
    worst = std::max(worst, bracket(px, py).matrix().cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace isoflat
