#include "isoflat/frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoflat/finite_difference.hpp"

namespace isoflat {

double FrameField::max_defect() const {
  double worst = 0.0;
  for (const GroupElement& f : frames.values()) worst = std::max(worst, f.defect());
  return worst;
}

double FrameField::max_relative_defect() const {
  double worst = 0.0;
  for (const GroupElement& f : frames.values()) {
    const double scale = std::max(1.0, f.matrix().cwiseAbs().maxCoeff());
    worst = std::max(worst, f.defect() / (scale * scale));
  }
  return worst;
}

GroupElement step_propagator(const AlgebraElement& a0, const AlgebraElement& a1, double h, StepScheme scheme) {
  switch (scheme) {
    case StepScheme::MidpointExponential:
      return group_exp((a0 + a1) * (0.5 * h));
  }
  throw InputError("unknown step scheme");
}

namespace {

double norm1(const Mat5& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

FrameField integrate_frame(const ConnectionForm& form, const GroupElement& base, const IntegratorOptions& options) {
  const Grid& g = form.grid;
  g.validate();
  require_grid(form.ax, g, "integrate_frame A_x");
  require_grid(form.ay, g, "integrate_frame A_y");
  if (options.reorthonormalize_every < 1) throw InputError("integrate_frame: cadence must be positive");

  FrameField out{g, Field<GroupElement>(g, base), base, {}};

  const double curvature = zero_curvature_residual(form).max_norm;
  if (curvature > options.curvature_warning) {
    std::ostringstream msg;
    msg << "zero-curvature residual " << curvature << " exceeds " << options.curvature_warning
        << "; frames depend on the integration path";
    out.warnings.push_back(msg.str());
  }

  auto advance = [&](const GroupElement& from, const AlgebraElement& a0, const AlgebraElement& a1, double h,
                     int path_length, GridPoint where) {
    if (norm1(((a0 + a1) * (0.5 * h)).matrix()) > options.max_step_norm) {
      throw NumericalError("integrate_frame: step exponent norm exceeds " + std::to_string(options.max_step_norm) +
                               " (grid too coarse for the data)",
                           where);
    }
    GroupElement next = from * step_propagator(a0, a1, h, options.scheme);
    if (path_length % options.reorthonormalize_every == 0 || next.defect() > options.defect_trigger) {
      next = reorthonormalize(next);
    }
    return next;
  };

  for (int i = 0; i + 1 < g.nx; ++i) {
    out.frames(i + 1, 0) = advance(out.frames(i, 0), form.ax(i, 0), form.ax(i + 1, 0), g.hx, i + 1, {i + 1, 0});
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j + 1 < g.ny; ++j) {
      out.frames(i, j + 1) =
          advance(out.frames(i, j), form.ay(i, j), form.ay(i, j + 1), g.hy, i + j + 1, {i, j + 1});
    }
  }
  return out;
}

double path_independence_defect(const ConnectionForm& form, const FrameField& frames) {
  const Grid& g = form.grid;
  if (!(frames.grid == g)) throw InputError("path_independence_defect: frame grid does not match form");
  double worst = 0.0;
  const Mat5 ident = Mat5::Identity();
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const GroupElement bottom = step_propagator(form.ax(i, j), form.ax(i + 1, j), g.hx);
      const GroupElement right = step_propagator(form.ay(i + 1, j), form.ay(i + 1, j + 1), g.hy);
      const GroupElement top = step_propagator(form.ax(i, j + 1), form.ax(i + 1, j + 1), g.hx);
      const GroupElement left = step_propagator(form.ay(i, j), form.ay(i, j + 1), g.hy);
      const Mat5 hol = bottom.matrix() * right.matrix() * top.inverse().matrix() * left.inverse().matrix();
      worst = std::max(worst, (hol - ident).cwiseAbs().maxCoeff() / (g.hx * g.hy));
    }
  }
  return worst;
}

GaugeField::GaugeField(Field<GroupElement> k) : k_(std::move(k)) {
  const Grid& g = k_.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat5& m = k_(i, j).matrix();
      if (!m.topRightCorner<3, 2>().isZero(0.0) || !m.bottomLeftCorner<2, 3>().isZero(0.0)) {
        throw InputError("gauge: K must be block diagonal in O(3) x O1(2)", GridPoint{i, j});
      }
    }
  }
}

GaugeField GaugeField::constant(const Grid& grid, const GroupElement& k) {
  return GaugeField(Field<GroupElement>(grid, k));
}

GaugeField GaugeField::light_cone_scaling(const ScalarField& u) {
  return GaugeField(Field<GroupElement>::generate(u.grid(), [&](int i, int j) {
    Mat5 m = Mat5::Identity();
    m(3, 3) = std::exp(u(i, j));
    m(4, 4) = std::exp(-u(i, j));
    return GroupElement(m);
  }));
}

FrameField apply_frame_change(const FrameField& frames, const Field<GroupElement>& change) {
  if (!(change.grid() == frames.grid)) throw InputError("frame change: grid does not match frames");
  FrameField out = frames;
  for (std::size_t n = 0; n < out.frames.values().size(); ++n) {
    out.frames.values()[n] = frames.frames.values()[n] * change.values()[n];
  }
  out.base = frames.base * change(0, 0);
  return out;
}

FrameField apply_gauge(const FrameField& frames, const GaugeField& gauge) {
  return apply_frame_change(frames, gauge.field());
}

ConnectionForm transform_form(const ConnectionForm& form, const Field<GroupElement>& change) {
  const Grid& g = form.grid;
  if (!(change.grid() == g)) throw InputError("transform_form: grid does not match form");
  const Field<Mat5> t = Field<Mat5>::generate(g, [&](int i, int j) { return change(i, j).matrix(); });
  const Field<Mat5> tx = fd::d_dx(t);
  const Field<Mat5> ty = fd::d_dy(t);
  ConnectionForm out{g, Field<AlgebraElement>(g, {}), Field<AlgebraElement>(g, {}), form.lambda};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Mat5 inv = change(i, j).inverse().matrix();
      const Mat5& m = t(i, j);
      out.ax(i, j) = AlgebraElement(inv * form.ax(i, j).matrix() * m + inv * tx(i, j));
      out.ay(i, j) = AlgebraElement(inv * form.ay(i, j).matrix() * m + inv * ty(i, j));
    }
  }
  return out;
}

FrameField conformal_rescale(const FrameField& frames, double lambda, RescaleDirection direction) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw InputError("conformal_rescale: lambda must be finite and nonzero");
  }
  Mat5 m = Mat5::Identity();
  const double s = direction == RescaleDirection::ShrinkF ? 1.0 / lambda : lambda;
  m(3, 3) = s;
  m(4, 4) = 1.0 / s;
  return apply_gauge(frames, GaugeField::constant(frames.grid, GroupElement(m)));
}

Field<GroupElement> sphere_shift_change(const ScalarField& k, double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw InputError("sphere_shift_change: lambda must be finite and nonzero");
  }
  return Field<GroupElement>::generate(k.grid(), [&](int i, int j) {
    const double kk = k(i, j);
    Mat5 shift = Mat5::Identity();
    shift(3, 2) = kk;               // e3 -> e3 + k e4
    shift(2, 4) = -kk;              // e5 -> e5 - k e3 - k^2/2 e4
    shift(3, 4) = -0.5 * kk * kk;
    Mat5 scale = Mat5::Identity();
    scale(3, 3) = lambda;
    scale(4, 4) = 1.0 / lambda;
    return GroupElement(shift * scale);
  });
}

FrameComparison compare_frames(const FrameField& a, const FrameField& b) {
  if (!(a.grid == b.grid)) throw InputError("compare_frames: grids differ");
  FrameComparison c;
  for (std::size_t n = 0; n < a.frames.values().size(); ++n) {
    const Mat5 m = a.frames.values()[n].inverse().matrix() * b.frames.values()[n].matrix();
    c.block_defect = std::max({c.block_defect, m.topRightCorner<3, 2>().cwiseAbs().maxCoeff(),
                               m.bottomLeftCorner<2, 3>().cwiseAbs().maxCoeff()});
    c.identity_deviation = std::max(c.identity_deviation, (m - Mat5::Identity()).cwiseAbs().maxCoeff());
  }
  return c;
}

}  // namespace isoflat
