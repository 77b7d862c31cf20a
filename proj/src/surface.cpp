#include "isoflat/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "isoflat/connection.hpp"
#include "isoflat/finite_difference.hpp"
#include "isoflat/matrix_exp.hpp"

namespace isoflat {

namespace {

double ip(const MinkowskiVector& a, const MinkowskiVector& b) { return minkowski_inner(a, b); }

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

SurfaceTriple::InvariantReport SurfaceTriple::invariant_defect() const {
  InvariantReport rep;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const MinkowskiVector& nn = n(i, j);
      const MinkowskiVector& ff = f(i, j);
      const MinkowskiVector& fh = fhat(i, j);
      const double sn = nn.coords().cwiseAbs().maxCoeff();
      const double sf = ff.coords().cwiseAbs().maxCoeff();
      const double sh = fh.coords().cwiseAbs().maxCoeff();
      const std::array<std::array<double, 2>, 6> dev{{{std::abs(ip(nn, nn) - 1.0), sn * sn},
                                                      {std::abs(ip(ff, ff)), sf * sf},
                                                      {std::abs(ip(fh, fh)), sh * sh},
                                                      {std::abs(ip(ff, nn)), sf * sn},
                                                      {std::abs(ip(fh, nn)), sh * sn},
                                                      {std::abs(ip(ff, fh) - 1.0), sf * sh}}};
      for (const auto& [d, scale] : dev) {
        rep.defect = std::max(rep.defect, d);
        const double r = d / std::max(1.0, scale);
        if (r > rep.relative) {
          rep.relative = r;
          rep.worst = {i, j};
        }
      }
    }
  }
  return rep;
}

SurfaceTriple extract_triple(const FrameField& frames, double tolerance) {
  const Grid& g = frames.grid;
  SurfaceTriple t{g, Field<MinkowskiVector>::generate(g, [&](int i, int j) { return frames(i, j).column(2); }),
                  Field<MinkowskiVector>::generate(g, [&](int i, int j) { return frames(i, j).column(3); }),
                  Field<MinkowskiVector>::generate(g, [&](int i, int j) { return frames(i, j).column(4); })};
  const SurfaceTriple::InvariantReport rep = t.invariant_defect();
  if (rep.relative > tolerance) {
    throw NumericalError("extract_triple: pairing invariants violated by " + fmt(rep.relative) + " (relative)",
                         rep.worst);
  }
  return t;
}

EnvelopeDefect envelope_defect(const SurfaceTriple& triple) {
  const Grid& g = triple.grid;
  const Field<MinkowskiVector> fx = fd::d_dx(triple.f);
  const Field<MinkowskiVector> fy = fd::d_dy(triple.f);
  const Field<MinkowskiVector> hx = fd::d_dx(triple.fhat);
  const Field<MinkowskiVector> hy = fd::d_dy(triple.fhat);
  double f0 = 0.0, f1 = 0.0, h0 = 0.0, h1 = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const MinkowskiVector& n = triple.n(i, j);
      f0 = std::max(f0, std::abs(ip(triple.f(i, j), n)));
      h0 = std::max(h0, std::abs(ip(triple.fhat(i, j), n)));
      if (i > 0 && i + 1 < g.nx) {
        f1 = std::max(f1, std::abs(ip(fx(i, j), n)));
        h1 = std::max(h1, std::abs(ip(hx(i, j), n)));
      }
      if (j > 0 && j + 1 < g.ny) {
        f1 = std::max(f1, std::abs(ip(fy(i, j), n)));
        h1 = std::max(h1, std::abs(ip(hy(i, j), n)));
      }
    }
  }
  return {f0 + f1, h0 + h1};
}

SecondFormReport second_form_diagonality(const SurfaceTriple& triple) {
  const Grid& g = triple.grid;
  const Field<MinkowskiVector> fx = fd::d_dx(triple.f);
  const Field<MinkowskiVector> fy = fd::d_dy(triple.f);
  const Field<MinkowskiVector> hx = fd::d_dx(triple.fhat);
  const Field<MinkowskiVector> hy = fd::d_dy(triple.fhat);
  const Field<MinkowskiVector> nx = fd::d_dx(triple.n);
  const Field<MinkowskiVector> ny = fd::d_dy(triple.n);

  SecondFormReport r{0.0,
                     0.0,
                     ScalarField(g, 0.0),
                     ScalarField(g, 0.0),
                     ScalarField(g, 0.0),
                     ScalarField(g, 0.0),
                     ScalarField(g, 0.0),
                     ScalarField(g, 0.0),
                     0.0};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      r.off_diagonal_f = std::max(r.off_diagonal_f, 0.5 * std::abs(ip(fx(i, j), ny(i, j)) + ip(fy(i, j), nx(i, j))));
      r.off_diagonal_fhat =
          std::max(r.off_diagonal_fhat, 0.5 * std::abs(ip(hx(i, j), ny(i, j)) + ip(hy(i, j), nx(i, j))));
      r.f_xx(i, j) = ip(fx(i, j), nx(i, j));
      r.f_yy(i, j) = ip(fy(i, j), ny(i, j));
      r.fhat_xx(i, j) = ip(hx(i, j), nx(i, j));
      r.fhat_yy(i, j) = ip(hy(i, j), ny(i, j));
      r.metric_xx(i, j) = ip(fx(i, j), fx(i, j));
      r.metric_yy(i, j) = ip(fy(i, j), fy(i, j));
      r.metric_off_diagonal = std::max(r.metric_off_diagonal, std::abs(ip(fx(i, j), fy(i, j))));
    }
  }
  return r;
}

EuclideanSurface measure_surface(Field<Vec3> points, double orientation) {
  const Grid& g = points.grid();
  g.validate();
  if (orientation != 1.0 && orientation != -1.0) throw InputError("measure_surface: orientation must be +1 or -1");
  const Field<Vec3> px = fd::d_dx(points);
  const Field<Vec3> py = fd::d_dy(points);
  const Field<Vec3> pxx = fd::d2_dx2(points);
  const Field<Vec3> pyy = fd::d2_dy2(points);
  const Field<Vec3> pxy = fd::d2_dxdy(points);

  EuclideanSurface s{g, std::move(points), Field<Vec3>(g, Vec3::Zero()), Field<QuadraticForm>(g, {}),
                     Field<QuadraticForm>(g, {}), orientation};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 c = px(i, j).cross(py(i, j));
      const double len = c.norm();
      const double scale = px(i, j).norm() * py(i, j).norm();
      if (!(len > 1e-12 * scale) || !(scale > 0.0)) {
        throw NumericalError("measure_surface: degenerate tangent plane", GridPoint{i, j});
      }
      const Vec3 nrm = orientation * c / len;
      s.normals(i, j) = nrm;
      s.first(i, j) = {px(i, j).dot(px(i, j)), px(i, j).dot(py(i, j)), py(i, j).dot(py(i, j))};
      s.second(i, j) = {pxx(i, j).dot(nrm), pxy(i, j).dot(nrm), pyy(i, j).dot(nrm)};
    }
  }
  return s;
}

namespace {

using Mat10 = Eigen::Matrix<double, 10, 10>;

// Change of S = (dF/dlambda) F^{-1} at lambda = 0 across one edge leaving a
// node with frame `frame`.
Mat5 sym_increment(const Mat5& frame, const Mat5& frame_inv, const Mat5& ak, const Mat5& ap, double h) {
  Mat10 big = Mat10::Zero();
  big.topLeftCorner<5, 5>() = h * ak;
  big.topRightCorner<5, 5>() = h * ap;
  big.bottomRightCorner<5, 5>() = h * ak;
  const Mat10 e = detail::expm<10>(big);
  const Mat5 back = detail::expm<5>(Mat5(-h * ak));
  return frame * e.topRightCorner<5, 5>() * back * frame_inv;
}

void require_block_frames(const FrameField& frames) {
  const Grid& g = frames.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat5& m = frames(i, j).matrix();
      const double off = std::max(m.topRightCorner<3, 2>().cwiseAbs().maxCoeff(),
                                  m.bottomLeftCorner<2, 3>().cwiseAbs().maxCoeff());
      const double lower = (m.bottomRightCorner<2, 2>() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
      if (off > 1e-8 || lower > 1e-8) {
        throw InputError("sym_surfaces: frames are not of the form diag(H3, I2); integrate the lambda = 0 form",
                         GridPoint{i, j});
      }
    }
  }
}

Field<Vec3> column_points(const Field<Mat5>& s, int column) {
  return Field<Vec3>::generate(s.grid(), [&](int i, int j) { return Vec3(s(i, j).block<3, 1>(0, column)); });
}

}  // namespace

SymSurfaces sym_surfaces(const IsothermicPatch& patch, const FrameField& frames_at_zero, const SymOptions& options) {
  patch.validate();
  const Grid& g = patch.grid;
  if (!(frames_at_zero.grid == g)) throw InputError("sym_surfaces: frame grid does not match patch");
  require_block_frames(frames_at_zero);

  const ConnectionForm form = build_phi_lambda(patch, 1.0);
  Field<Mat5> kx(g, Mat5::Zero()), px(g, Mat5::Zero()), ky(g, Mat5::Zero()), py(g, Mat5::Zero());
  for (std::size_t n = 0; n < g.size(); ++n) {
    const KPSplit sx = kp_split(form.ax.values()[n]);
    const KPSplit sy = kp_split(form.ay.values()[n]);
    kx.values()[n] = sx.k.matrix();
    px.values()[n] = sx.p.matrix();
    ky.values()[n] = sy.k.matrix();
    py.values()[n] = sy.p.matrix();
  }
  const Field<Mat5> inv = Field<Mat5>::generate(
      g, [&](int i, int j) { return frames_at_zero(i, j).inverse().matrix(); });

  // Increment along the x-edge (i,j)->(i+1,j), stored at (i,j); likewise y.
  Field<Mat5> step_x(g, Mat5::Zero()), step_y(g, Mat5::Zero());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat5& fr = frames_at_zero(i, j).matrix();
      if (i + 1 < g.nx) {
        step_x(i, j) = sym_increment(fr, inv(i, j), 0.5 * (kx(i, j) + kx(i + 1, j)),
                                     0.5 * (px(i, j) + px(i + 1, j)), g.hx);
      }
      if (j + 1 < g.ny) {
        step_y(i, j) = sym_increment(fr, inv(i, j), 0.5 * (ky(i, j) + ky(i, j + 1)),
                                     0.5 * (py(i, j) + py(i, j + 1)), g.hy);
      }
    }
  }

  double defect = 0.0;
  GridPoint worst;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const Mat5 loop = step_x(i, j) + step_y(i + 1, j) - step_x(i, j + 1) - step_y(i, j);
      const double d = loop.cwiseAbs().maxCoeff() / (g.hx * g.hy);
      if (d > defect) {
        defect = d;
        worst = {i, j};
      }
    }
  }
  if (defect > options.closedness_threshold) {
    throw NumericalError("sym_surfaces: Sym differential not closed, defect " + fmt(defect), worst);
  }

  Field<Mat5> s(g, Mat5::Zero());
  for (int i = 0; i + 1 < g.nx; ++i) s(i + 1, 0) = s(i, 0) + step_x(i, 0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j + 1 < g.ny; ++j) s(i, j + 1) = s(i, j) + step_y(i, j);

  return {measure_surface(column_points(s, 3), 1.0), measure_surface(column_points(s, 4), -1.0), defect};
}

DualSurface euclidean_dual(const EuclideanSurface& surface, const ScalarField& u, const DualOptions& options) {
  const Grid& g = surface.grid;
  require_grid(u, g, "euclidean_dual u");
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double e2u = std::exp(2.0 * u(i, j));
      const QuadraticForm& q = surface.first(i, j);
      const double dev = std::max({std::abs(q.xx - e2u), std::abs(q.yy - e2u), std::abs(q.xy)}) / e2u;
      if (!(dev <= options.metric_tolerance)) {
        throw InputError("euclidean_dual: first fundamental form is not e^{2u}(dx^2 + dy^2) (relative deviation " +
                             fmt(dev) + ")",
                         GridPoint{i, j});
      }
    }
  }

  const Field<Vec3>& p = surface.points;
  auto edge_x = [&](int i, int j) -> Vec3 { return -std::exp(-(u(i, j) + u(i + 1, j))) * (p(i + 1, j) - p(i, j)); };
  auto edge_y = [&](int i, int j) -> Vec3 { return std::exp(-(u(i, j) + u(i, j + 1))) * (p(i, j + 1) - p(i, j)); };

  double defect = 0.0;
  GridPoint worst;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const Vec3 loop = edge_x(i, j) + edge_y(i + 1, j) - edge_x(i, j + 1) - edge_y(i, j);
      const double d = loop.cwiseAbs().maxCoeff() / (g.hx * g.hy);
      if (d > defect) {
        defect = d;
        worst = {i, j};
      }
    }
  }
  if (defect > options.closedness_threshold) {
    throw NumericalError("euclidean_dual: dual 1-form not closed (defect " + fmt(defect) +
                             "); the parametrization is not isothermic",
                         worst);
  }

  Field<Vec3> q(g, Vec3::Zero());
  for (int i = 0; i + 1 < g.nx; ++i) q(i + 1, 0) = q(i, 0) + edge_x(i, 0);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j + 1 < g.ny; ++j) q(i, j + 1) = q(i, j) + edge_y(i, j);
  return {measure_surface(std::move(q), -surface.orientation), defect};
}

Field<MinkowskiVector> circle_congruence_point(const SurfaceTriple& triple, double t) {
  const double a = std::sin(t) / std::sqrt(2.0);
  const double b = 0.5 * (1.0 + std::cos(t));
  const double c = 0.5 * (1.0 - std::cos(t));
  return Field<MinkowskiVector>::generate(triple.grid, [&](int i, int j) {
    return a * triple.n(i, j) + b * triple.f(i, j) - c * triple.fhat(i, j);
  });
}

AffineChart AffineChart::make(const MinkowskiVector& infinity) {
  const double scale = infinity.coords().squaredNorm();
  if (!(scale > 0.0)) throw InputError("affine chart: point at infinity must be nonzero");
  if (std::abs(ip(infinity, infinity)) > 1e-10 * scale) {
    throw InputError("affine chart: point at infinity must be light-like");
  }
  AffineChart chart;
  chart.infinity = infinity;

  int best = 0;
  for (int m = 1; m < 5; ++m) {
    if (std::abs(ip(MinkowskiVector::unit(m), infinity)) > std::abs(ip(MinkowskiVector::unit(best), infinity))) {
      best = m;
    }
  }
  const MinkowskiVector w = MinkowskiVector::unit(best);
  const double a = ip(w, infinity);
  chart.origin = w / a - (ip(w, w) / (2.0 * a * a)) * infinity;

  int found = 0;
  for (int m = 0; m < 5 && found < 3; ++m) {
    const MinkowskiVector e = MinkowskiVector::unit(m);
    MinkowskiVector v = e - ip(e, infinity) * chart.origin - ip(e, chart.origin) * infinity;
    for (int b = 0; b < found; ++b) v = v - ip(v, chart.basis[b]) * chart.basis[b];
    const double len2 = ip(v, v);
    if (len2 > 1e-6) chart.basis[found++] = v / std::sqrt(len2);
  }
  if (found < 3) throw NumericalError("affine chart: could not complete an orthonormal basis");
  return chart;
}

Vec3 AffineChart::project(const MinkowskiVector& v, double cutoff) const {
  const double s = ip(v, infinity);
  if (!(std::abs(s) >= cutoff * v.coords().norm())) {
    throw NumericalError("affine chart: point lies at infinity of the chart");
  }
  const MinkowskiVector w = v / s - origin;
  return {ip(w, basis[0]), ip(w, basis[1]), ip(w, basis[2])};
}

Field<Vec3> project_to_affine_chart(const Field<MinkowskiVector>& field, const MinkowskiVector& infinity,
                                    double cutoff) {
  const AffineChart chart = AffineChart::make(infinity);
  return Field<Vec3>::generate(field.grid(), [&](int i, int j) {
    const MinkowskiVector& v = field(i, j);
    if (!(std::abs(ip(v, infinity)) >= cutoff * v.coords().norm())) {
      throw NumericalError("affine chart: point lies at infinity of the chart (|<v, infinity>| below cutoff)",
                           GridPoint{i, j});
    }
    return chart.project(v, cutoff);
  });
}

}  // namespace isoflat
