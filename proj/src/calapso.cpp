#include "isoflat/calapso.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "form_entries.hpp"
#include "isoflat/finite_difference.hpp"

namespace isoflat {

using detail::set_boost;
using detail::set_rotation;

void CalapsoField::validate() const {
  grid.validate();
  require_grid(k, grid, "calapso k");
  if (!(k_floor >= 0.0)) throw InputError("calapso: k_floor must be non-negative");
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double v = k(i, j);
      if (!std::isfinite(v)) throw InputError("calapso: non-finite k", GridPoint{i, j});
      if (std::abs(v) < k_floor) {
        std::ostringstream msg;
        msg << "calapso: |k| = " << std::abs(v) << " below k_floor " << k_floor;
        throw InputError(msg.str(), GridPoint{i, j});
      }
    }
  }
}

namespace {

ScalarField quotient(const CalapsoField& field) {
  const ScalarField kxy = fd::d2_dxdy(field.k);
  return ScalarField::generate(field.grid, [&](int i, int j) { return kxy(i, j) / field.k(i, j); });
}

ScalarField squared(const ScalarField& k) {
  return ScalarField::generate(k.grid(), [&](int i, int j) { return k(i, j) * k(i, j); });
}

}  // namespace

ScalarField calapso_residual(const CalapsoField& field) {
  field.validate();
  const Grid& g = field.grid;
  const ScalarField lap = fd::laplacian(quotient(field));
  const ScalarField kk_xy = fd::d2_dxdy(squared(field.k));
  ScalarField r(g, 0.0);
  for (int j = kCalapsoMargin; j < g.ny - kCalapsoMargin; ++j)
    for (int i = kCalapsoMargin; i < g.nx - kCalapsoMargin; ++i) r(i, j) = lap(i, j) + 2.0 * kk_xy(i, j);
  return r;
}

double max_calapso_residual(const CalapsoField& field) {
  double m = 0.0;
  const ScalarField r = calapso_residual(field);
  for (double v : r.values()) m = std::max(m, std::abs(v));
  return m;
}

IntegratedU integrate_u(const CalapsoField& field, double u0) {
  field.validate();
  const Grid& g = field.grid;
  const ScalarField q = quotient(field);
  const ScalarField qx = fd::d_dx(q);
  const ScalarField qy = fd::d_dy(q);
  const ScalarField kk = squared(field.k);

  auto edge_x = [&](int i, int j) {
    return -(kk(i + 1, j) - kk(i, j)) - 0.5 * g.hx * (qy(i, j) + qy(i + 1, j));
  };
  auto edge_y = [&](int i, int j) {
    return (kk(i, j + 1) - kk(i, j)) + 0.5 * g.hy * (qx(i, j) + qx(i, j + 1));
  };

  IntegratedU out{ScalarField(g, u0), 0.0};
  for (int i = 0; i + 1 < g.nx; ++i) out.u(i + 1, 0) = out.u(i, 0) + edge_x(i, 0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j + 1 < g.ny; ++j) out.u(i, j + 1) = out.u(i, j) + edge_y(i, j);

  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double loop = edge_x(i, j) + edge_y(i + 1, j) - edge_x(i, j + 1) - edge_y(i, j);
      out.compatibility_defect = std::max(out.compatibility_defect, std::abs(loop) / (g.hx * g.hy));
    }
  }
  return out;
}

double revolution_u0(const CalapsoField& field, double lambda) {
  field.validate();
  const double k0 = field.k(0, 0);
  return lambda * lambda - k0 * k0;
}

MoebiusFormData moebius_form_data(const CalapsoField& field, const ScalarField& u) {
  field.validate();
  const Grid& g = field.grid;
  require_grid(u, g, "moebius form u");
  const ScalarField kx = fd::d_dx(field.k);
  const ScalarField ky = fd::d_dy(field.k);
  const ScalarField q = quotient(field);
  MoebiusFormData d{g, kx, ScalarField(g, 0.0), ScalarField(g, 0.0), ScalarField(g, 0.0),
                    ScalarField(g, 0.0), ScalarField(g, 0.0), u};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double half_k2 = 0.5 * field.k(i, j) * field.k(i, j);
      d.tau_y(i, j) = -ky(i, j);
      d.chi1_x(i, j) = half_k2 - u(i, j);
      d.chi1_y(i, j) = -q(i, j);
      d.chi2_x(i, j) = -q(i, j);
      d.chi2_y(i, j) = half_k2 + u(i, j);
    }
  }
  return d;
}

ConnectionForm build_moebius_frame_form(const CalapsoField& field, const ScalarField& u,
                                        std::optional<double> lambda) {
  const MoebiusFormData d = moebius_form_data(field, u);
  const Grid& g = field.grid;
  ConnectionForm form{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double k = field.k(i, j);
      Mat5& x = form.ax(i, j).matrix();
      Mat5& y = form.ay(i, j).matrix();
      set_rotation(x, 0, 2, k);
      set_rotation(y, 1, 2, -k);
      set_boost(x, 0, 3, 1.0);
      set_boost(y, 1, 3, 1.0);
      set_boost(x, 0, 4, d.chi1_x(i, j));
      set_boost(y, 0, 4, d.chi1_y(i, j));
      set_boost(x, 1, 4, d.chi2_x(i, j));
      set_boost(y, 1, 4, d.chi2_y(i, j));
      set_boost(x, 2, 4, d.tau_x(i, j));
      set_boost(y, 2, 4, d.tau_y(i, j));
    }
  }
  return form;
}

ConnectionForm build_conformal_change_form(const CalapsoField& field, const ScalarField& u,
                                           std::optional<double> lambda) {
  field.validate();
  const Grid& g = field.grid;
  require_grid(u, g, "conformal change u");
  const ScalarField kx = fd::d_dx(field.k);
  const ScalarField ky = fd::d_dy(field.k);
  const ScalarField kxx = fd::d2_dx2(field.k);
  const ScalarField kyy = fd::d2_dy2(field.k);
  ConnectionForm form{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double k = field.k(i, j);
      const double grad2 = (kx(i, j) * kx(i, j) + ky(i, j) * ky(i, j)) / (2.0 * k * k);
      const double half_k2 = 0.5 * k * k;
      Mat5& x = form.ax(i, j).matrix();
      Mat5& y = form.ay(i, j).matrix();
      set_rotation(x, 0, 1, -ky(i, j) / k);
      set_rotation(y, 0, 1, kx(i, j) / k);
      set_rotation(x, 0, 2, k);
      set_rotation(y, 1, 2, -k);
      set_boost(x, 0, 3, 1.0 / k);
      set_boost(y, 1, 3, 1.0 / k);
      set_boost(x, 0, 4, k * (kxx(i, j) / k - grad2 + half_k2 - u(i, j)));
      set_boost(y, 1, 4, k * (kyy(i, j) / k - grad2 + half_k2 + u(i, j)));
    }
  }
  return form;
}

CalapsoSurface isothermic_from_calapso(const CalapsoField& field, double u0, const GroupElement& base,
                                       const CalapsoOptions& options) {
  const ScalarField residual = calapso_residual(field);
  double worst = 0.0;
  GridPoint where;
  for (int j = 0; j < field.grid.ny; ++j) {
    for (int i = 0; i < field.grid.nx; ++i) {
      if (std::abs(residual(i, j)) > worst) {
        worst = std::abs(residual(i, j));
        where = {i, j};
      }
    }
  }
  if (worst > options.residual_threshold) {
    std::ostringstream msg;
    msg << "calapso: residual " << worst << " exceeds threshold " << options.residual_threshold
        << "; k does not solve the equation";
    throw NumericalError(msg.str(), where);
  }
  IntegratedU iu = integrate_u(field, u0);
  ConnectionForm form = build_moebius_frame_form(field, iu.u);
  FrameField frames = integrate_frame(form, base, options.integrator);
  SurfaceTriple triple = extract_triple(frames);
  return {std::move(iu.u), iu.compatibility_defect, worst, std::move(form), std::move(frames), std::move(triple)};
}

}  // namespace isoflat
