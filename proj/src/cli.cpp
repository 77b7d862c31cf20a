#include "isoflat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "isoflat/alignment.hpp"
#include "isoflat/calapso.hpp"
#include "isoflat/connection.hpp"
#include "isoflat/frame.hpp"
#include "isoflat/io.hpp"
#include "isoflat/isothermic.hpp"
#include "isoflat/surface.hpp"

namespace isoflat::cli {

using nlohmann::json;

namespace {

const char* source_name(SourceKind k) {
  switch (k) {
    case SourceKind::Cylinder: return "cylinder";
    case SourceKind::Meridian: return "meridian";
    case SourceKind::PatchFile: return "patch_file";
    case SourceKind::KFile: return "k_file";
    case SourceKind::KConstant: return "k_constant";
    case SourceKind::KBilinear: return "k_bilinear";
    case SourceKind::KRevolution: return "k_revolution";
  }
  return "?";
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw InputError(where + ": field '" + key + "' must be a finite number");
  }
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) throw InputError(where + ": field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return item.key() == k; })) {
      throw InputError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

ThetaSpec parse_theta(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": must be an object");
  reject_unknown(j, {"base", "amplitude", "frequency", "phase"}, where);
  return {get_number(j, "base", where), number_or(j, "amplitude", 0.0, where), number_or(j, "frequency", 1.0, where),
          number_or(j, "phase", 0.0, where)};
}

std::vector<double> parse_number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": must be an array of numbers");
  std::vector<double> out;
  for (std::size_t n = 0; n < j.size(); ++n) {
    if (!j[n].is_number() || !std::isfinite(j[n].get<double>())) {
      throw InputError(where + "[" + std::to_string(n) + "]: not a finite number");
    }
    out.push_back(j[n].get<double>());
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_token(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) throw InputError(where + ": not a finite number: '" + t + "'");
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_lambda(double l) {
  std::ostringstream s;
  s << l;
  return s.str();
}

// Everything the commands need from a data source.
struct Inputs {
  std::optional<IsothermicPatch> patch;
  std::optional<MeridianCurve> meridian;
  std::optional<CalapsoField> k;
};

const Grid& require_config_grid(const RunConfig& c) {
  if (!c.grid) throw InputError("config: missing field 'grid' (or --grid)");
  return *c.grid;
}

Inputs resolve(const RunConfig& c) {
  Inputs in;
  switch (c.source) {
    case SourceKind::Cylinder:
      in.patch = make_cylinder_patch(c.radius, require_config_grid(c));
      break;
    case SourceKind::Meridian: {
      const Grid& g = require_config_grid(c);
      const TurningAngle angle = TurningAngle::sinusoidal(c.theta.base, c.theta.amplitude, c.theta.frequency, c.theta.phase);
      in.meridian = solve_meridian(angle, c.r0, g);
      in.patch = revolution_patch(*in.meridian, g);
      break;
    }
    case SourceKind::PatchFile: {
      in.patch = io::patch_from_json(json::parse(io::read_file(c.path), nullptr, true), c.path);
      if (c.grid && !(*c.grid == in.patch->grid)) throw InputError("--grid does not match the grid of " + c.path);
      break;
    }
    case SourceKind::KFile: {
      std::ifstream f(c.path);
      if (!f) throw InputError("cannot open '" + c.path + "'");
      ScalarField k = io::read_scalar_csv(f, c.path);
      if (c.grid && !(*c.grid == k.grid())) throw InputError("--grid does not match the grid of " + c.path);
      in.k = CalapsoField{k.grid(), std::move(k), c.k_floor};
      break;
    }
    case SourceKind::KConstant: {
      const Grid& g = require_config_grid(c);
      in.k = CalapsoField{g, ScalarField(g, c.k_value), c.k_floor};
      break;
    }
    case SourceKind::KBilinear: {
      const Grid& g = require_config_grid(c);
      in.k = CalapsoField{
          g, ScalarField::generate(g, [&](int i, int j) { return c.k_value + c.k_slope * g.x(i) * g.y(j); }), c.k_floor};
      break;
    }
    case SourceKind::KRevolution: {
      const Grid& g = require_config_grid(c);
      const TurningAngle angle = TurningAngle::sinusoidal(c.theta.base, c.theta.amplitude, c.theta.frequency, c.theta.phase);
      in.meridian = solve_meridian(angle, c.r0, g);
      in.k = CalapsoField{g, x_only_field(g, conformal_factor_k(*in.meridian)), c.k_floor};
      break;
    }
  }
  if (in.k) in.k->validate();
  return in;
}

const IsothermicPatch& require_patch(const Inputs& in, const char* command) {
  if (!in.patch) throw InputError(std::string("command '") + command + "' needs a patch source (cylinder, meridian, patch_file)");
  return *in.patch;
}

const CalapsoField& require_k(const Inputs& in, const char* command) {
  if (!in.k) {
    throw InputError(std::string("command '") + command +
                     "' needs a k-field source (k_file, k_constant, k_bilinear, k_revolution)");
  }
  return *in.k;
}

// Records checks with defaults of the form 1e-10 + c h^2, overridable by name.
class Checker {
 public:
  Checker(const RunConfig& config, Report& report) : config_(config), report_(report) {
    const double h = std::max(report.grid.hx, report.grid.hy);
    h2_ = h * h;
  }
  double fd(double c) const { return 1e-10 + c * h2_; }
  void add(const std::string& name, double value, double default_tolerance) {
    const auto it = config_.tolerances.find(name);
    const double tol = (it != config_.tolerances.end() ? it->second : default_tolerance) * config_.tol_scale;
    report_.checks.push_back({name, value, tol, std::isfinite(value) && value <= tol});
  }

 private:
  const RunConfig& config_;
  Report& report_;
  double h2_ = 0.0;
};

void write_json(const RunConfig& c, Report& r, const std::string& name, const json& j) {
  io::write_file_atomic(c.out_dir / name, j.dump(1) + "\n");
  r.files.push_back(name);
}

template <class Writer>
void write_text(const RunConfig& c, Report& r, const std::string& name, Writer&& writer) {
  std::ostringstream s;
  writer(s);
  io::write_file_atomic(c.out_dir / name, s.str());
  r.files.push_back(name);
}

Report start(const RunConfig& c, const char* command, const Grid& grid) {
  Report r;
  r.command = command;
  r.source = source_name(c.source);
  r.grid = grid;
  return r;
}

void prepare_out_dir(const RunConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec || !std::filesystem::is_directory(c.out_dir)) {
    throw InputError("--out: cannot create directory '" + c.out_dir.string() + "'");
  }
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("config: top level must be an object");
  reject_unknown(j, {"grid", "lambda", "source", "k_floor", "calapso_threshold", "u0", "infinity", "tol_scale",
                     "tolerances", "out", "timing"},
                 "config");
  RunConfig c;
  if (j.contains("grid")) c.grid = io::grid_from_json(j.at("grid"), "config grid");
  if (j.contains("lambda")) {
    c.lambdas = parse_number_list(j.at("lambda"), "config lambda");
    if (c.lambdas.empty()) throw InputError("config lambda: list must not be empty");
  }
  if (!j.contains("source")) throw InputError("config: missing field 'source'");
  const json& s = j.at("source");
  if (!s.is_object()) throw InputError("config source: must be an object");
  const std::string kind = get_string(s, "kind", "config source");
  const std::string where = "config source (" + kind + ")";
  auto resolve_path = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return (path.is_absolute() || base_dir.empty() ? path : base_dir / path).string();
  };
  if (kind == "cylinder") {
    reject_unknown(s, {"kind", "radius"}, where);
    c.source = SourceKind::Cylinder;
    c.radius = number_or(s, "radius", 1.0, where);
  } else if (kind == "meridian" || kind == "k_revolution") {
    reject_unknown(s, {"kind", "theta", "r0"}, where);
    c.source = kind == "meridian" ? SourceKind::Meridian : SourceKind::KRevolution;
    if (!s.contains("theta")) throw InputError(where + ": missing field 'theta'");
    c.theta = parse_theta(s.at("theta"), where + " theta");
    c.r0 = number_or(s, "r0", 1.0, where);
  } else if (kind == "patch_file" || kind == "k_file") {
    reject_unknown(s, {"kind", "path"}, where);
    c.source = kind == "patch_file" ? SourceKind::PatchFile : SourceKind::KFile;
    c.path = resolve_path(get_string(s, "path", where));
  } else if (kind == "k_constant") {
    reject_unknown(s, {"kind", "value"}, where);
    c.source = SourceKind::KConstant;
    c.k_value = get_number(s, "value", where);
  } else if (kind == "k_bilinear") {
    reject_unknown(s, {"kind", "a", "b"}, where);
    c.source = SourceKind::KBilinear;
    c.k_value = get_number(s, "a", where);
    c.k_slope = get_number(s, "b", where);
  } else {
    throw InputError("config source: unknown kind '" + kind + "'");
  }
  c.k_floor = number_or(j, "k_floor", c.k_floor, "config");
  c.calapso_threshold = number_or(j, "calapso_threshold", c.calapso_threshold, "config");
  if (j.contains("u0")) c.u0 = get_number(j, "u0", "config");
  if (j.contains("infinity")) {
    c.infinity = parse_number_list(j.at("infinity"), "config infinity");
    if (c.infinity.size() != 5) throw InputError("config infinity: expected 5 coordinates");
  }
  c.tol_scale = number_or(j, "tol_scale", 1.0, "config");
  if (!(c.tol_scale > 0.0)) throw InputError("config tol_scale: must be positive");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw InputError("config tolerances: must be an object");
    for (const auto& item : t.items()) c.tolerances[item.key()] = get_number(t, item.key(), "config tolerances");
  }
  if (j.contains("out")) c.out_dir = resolve_path(get_string(j, "out", "config"));
  if (j.contains("timing")) {
    if (!j.at("timing").is_boolean()) throw InputError("config: field 'timing' must be a boolean");
    c.timing = j.at("timing").get<bool>();
  }
  return c;
}

Grid parse_grid_spec(const std::string& spec) {
  const std::vector<std::string> parts = split_commas(spec);
  if (parts.size() != 4 && parts.size() != 6) throw InputError("--grid: expected nx,ny,hx,hy[,x0,y0]");
  auto as_int = [&](const std::string& t, const char* name) {
    const double v = parse_token(t, std::string("--grid ") + name);
    if (v != std::floor(v) || std::abs(v) > 1e8) throw InputError(std::string("--grid ") + name + ": not an integer");
    return static_cast<int>(v);
  };
  Grid g{as_int(parts[0], "nx"), as_int(parts[1], "ny"), parse_token(parts[2], "--grid hx"),
         parse_token(parts[3], "--grid hy"), 0.0, 0.0};
  if (parts.size() == 6) {
    g.x0 = parse_token(parts[4], "--grid x0");
    g.y0 = parse_token(parts[5], "--grid y0");
  }
  g.validate();
  return g;
}

std::vector<double> parse_lambda_list(const std::string& spec) {
  if (trim(spec).empty()) throw InputError("--lambda: list must not be empty");
  std::vector<double> out;
  for (const std::string& t : split_commas(spec)) out.push_back(parse_token(t, "--lambda"));
  return out;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json Report::to_json(std::optional<double> runtime_seconds) const {
  json cs = json::array();
  for (const Check& c : checks) {
    cs.push_back({{"name", c.name}, {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  json j = {{"command", command}, {"source", source},     {"grid", io::grid_to_json(grid)}, {"checks", cs},
            {"pass", pass()},     {"warnings", warnings}, {"files", files},                {"details", details}};
  if (runtime_seconds) j["runtime_seconds"] = *runtime_seconds;
  return j;
}

Report cmd_check(const RunConfig& c) {
  const Inputs in = resolve(c);
  if (in.patch) {
    const IsothermicPatch& p = *in.patch;
    Report r = start(c, "check", p.grid);
    Checker ck(c, r);
    ck.add("gauss_codazzi", gauss_codazzi_residual(p).max_abs(), ck.fd(1.0));
    for (double l : c.lambdas) {
      const ConnectionForm form = build_phi_lambda(p, l);
      const CurvatureField curv = zero_curvature_residual(form);
      ck.add("zero_curvature(lambda=" + fmt_lambda(l) + ")", curv.max_norm, ck.fd(1.0));
      ck.add("curved_flat(lambda=" + fmt_lambda(l) + ")", curv.curved_flat, 1e-12);
      ck.add("algebra(lambda=" + fmt_lambda(l) + ")", form.max_algebra_defect(), 1e-14);
    }
    return r;
  }
  const CalapsoField& k = require_k(in, "check");
  Report r = start(c, "check", k.grid);
  Checker ck(c, r);
  ck.add("calapso_residual", max_calapso_residual(k), c.calapso_threshold);
  ck.add("compatibility_defect", integrate_u(k, 0.0).compatibility_defect, c.calapso_threshold);
  return r;
}

Report cmd_build(const RunConfig& c) {
  const Inputs in = resolve(c);
  const IsothermicPatch& p = require_patch(in, "build");
  Report r = start(c, "build", p.grid);
  Checker ck(c, r);
  prepare_out_dir(c);
  for (std::size_t n = 0; n < c.lambdas.size(); ++n) {
    const double l = c.lambdas[n];
    const std::string tag = "(lambda=" + fmt_lambda(l) + ")";
    const ConnectionForm form = build_phi_lambda(p, l);
    const FrameField frames = integrate_frame(form, GroupElement::identity());
    for (const std::string& w : frames.warnings) r.warnings.push_back(tag + " " + w);
    const SurfaceTriple triple = extract_triple(frames, std::numeric_limits<double>::infinity());
    const EnvelopeDefect env = envelope_defect(triple);

    ck.add("path_independence" + tag, path_independence_defect(form, frames), ck.fd(1.0));
    ck.add("frame_defect" + tag, frames.max_relative_defect(), 1e-12);
    ck.add("triple_invariants" + tag, triple.invariant_defect().relative, 1e-10);
    ck.add("envelope_f" + tag, env.f, ck.fd(1.0));
    ck.add("envelope_fhat" + tag, env.fhat, ck.fd(1.0));
    r.details["max_frame_defect"].push_back(frames.max_defect());
    if (in.meridian) {
      // The two routes differ by a gauge and a Moebius motion, so compare the
      // chart images of f up to similarity.
      const FrameField direct = integrate_frame(build_revolution_form(*in.meridian, l, p.grid), GroupElement::identity());
      const MinkowskiVector infinity(Vec5(c.infinity.data()));
      const Field<Vec3> a = project_to_affine_chart(triple.f, infinity);
      const Field<Vec3> b = project_to_affine_chart(extract_triple(direct, std::numeric_limits<double>::infinity()).f, infinity);
      ck.add("cross_route" + tag, align_points(a, b, AlignmentKind::Similarity).rms, ck.fd(1.0));
    }
    const std::string stem = "lambda_" + std::to_string(n);
    write_json(c, r, "frames_" + stem + ".json", io::frames_to_json(frames));
    write_text(c, r, "triple_" + stem + ".csv", [&](std::ostream& o) { io::write_triple_csv(o, triple); });
    r.details["lambda"].push_back(l);
  }
  return r;
}

Report cmd_surfaces(const RunConfig& c) {
  const Inputs in = resolve(c);
  const IsothermicPatch& p = require_patch(in, "surfaces");
  const Grid& g = p.grid;
  Report r = start(c, "surfaces", g);
  Checker ck(c, r);
  prepare_out_dir(c);

  const FrameField frames0 = integrate_frame(build_phi_lambda(p, 0.0), GroupElement::identity());
  const SymSurfaces sym = sym_surfaces(p, frames0);
  const DualSurface dual = euclidean_dual(sym.f, p.u);
  const ScalarField minus_u = ScalarField::generate(g, [&](int i, int j) { return -p.u(i, j); });
  const DualSurface dual2 = euclidean_dual(dual.surface, minus_u);

  double first_f = 0.0, second_f = 0.0, first_h = 0.0, second_h = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double e2u = std::exp(2.0 * p.u(i, j));
      const double k1 = p.k1(i, j), k2 = p.k2(i, j);
      const QuadraticForm& a = sym.f.first(i, j);
      const QuadraticForm& b = sym.f.second(i, j);
      const QuadraticForm& ah = sym.fhat.first(i, j);
      const QuadraticForm& bh = sym.fhat.second(i, j);
      first_f = std::max({first_f, std::abs(a.xx / e2u - 1.0), std::abs(a.yy / e2u - 1.0), std::abs(a.xy / e2u)});
      second_f = std::max({second_f, std::abs(b.xx - e2u * k1), std::abs(b.yy - e2u * k2), std::abs(b.xy)});
      first_h = std::max({first_h, std::abs(ah.xx * e2u - 1.0), std::abs(ah.yy * e2u - 1.0), std::abs(ah.xy * e2u)});
      second_h = std::max({second_h, std::abs(bh.xx + k1), std::abs(bh.yy - k2), std::abs(bh.xy)});
    }
  }
  ck.add("sym_closedness", sym.closedness_defect, ck.fd(1.0));
  ck.add("first_form_f", first_f, ck.fd(1.0));
  ck.add("second_form_f", second_f, ck.fd(1.0));
  ck.add("first_form_fhat", first_h, ck.fd(1.0));
  ck.add("second_form_fhat", second_h, ck.fd(1.0));
  ck.add("dual_closedness", dual.closedness_defect, ck.fd(1.0));
  ck.add("dual_matches_sym",
         align_points(dual.surface.points, sym.fhat.points, AlignmentKind::Translation).rms, ck.fd(1.0));
  ck.add("dual_involution", align_points(dual2.surface.points, sym.f.points, AlignmentKind::Translation).rms, 1e-8);

  write_text(c, r, "f.obj", [&](std::ostream& o) { io::write_obj(o, sym.f.points, &sym.f.normals); });
  write_text(c, r, "fhat.obj", [&](std::ostream& o) { io::write_obj(o, sym.fhat.points, &sym.fhat.normals); });
  write_text(c, r, "f.csv", [&](std::ostream& o) { io::write_surface_csv(o, sym.f); });
  write_text(c, r, "fhat.csv", [&](std::ostream& o) { io::write_surface_csv(o, sym.fhat); });
  return r;
}

Report cmd_calapso(const RunConfig& c) {
  const Inputs in = resolve(c);
  const CalapsoField& k = require_k(in, "calapso");
  const Grid& g = k.grid;
  Report r = start(c, "calapso", g);
  Checker ck(c, r);
  prepare_out_dir(c);

  const double lambda = c.lambdas.front();
  const double u0 = c.u0 ? *c.u0 : revolution_u0(k, lambda);
  r.details["lambda"] = lambda;
  const double residual = max_calapso_residual(k);
  if (!(residual <= c.calapso_threshold * c.tol_scale)) {
    ck.add("calapso_residual", residual, c.calapso_threshold);
    r.warnings.push_back("k does not solve the Calapso equation; no surface was built");
    return r;
  }
  CalapsoOptions opts;
  opts.residual_threshold = c.calapso_threshold * c.tol_scale;
  const CalapsoSurface s = isothermic_from_calapso(k, u0, GroupElement::identity(), opts);
  for (const std::string& w : s.frames.warnings) r.warnings.push_back(w);
  r.details["u0"] = u0;

  ck.add("calapso_residual", s.residual, c.calapso_threshold);
  ck.add("compatibility_defect", s.compatibility_defect, c.calapso_threshold);
  ck.add("triple_invariants", s.triple.invariant_defect().relative, 1e-10);

  bool x_only = true;
  for (int j = 1; j < g.ny && x_only; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (k.k(i, j) != k.k(i, 0)) x_only = false;
  if (x_only && !c.u0) {
    const ScalarField expected =
        ScalarField::generate(g, [&](int i, int j) { return lambda * lambda - k.k(i, j) * k.k(i, j); });
    double dev = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) dev = std::max(dev, std::abs(s.u.values()[n] - expected.values()[n]));
    ck.add("u_equals_lambda2_minus_k2", dev, 1e-10);
  }

  const MinkowskiVector infinity(Vec5(c.infinity.data()));
  const EuclideanSurface mesh = measure_surface(project_to_affine_chart(s.triple.f, infinity));
  double conformal = 0.0;
  for (const QuadraticForm& q : mesh.first.values()) {
    conformal = std::max(conformal, (std::abs(q.xx - q.yy) + 2.0 * std::abs(q.xy)) / (q.xx + q.yy));
  }
  ck.add("isothermic_metric", conformal, ck.fd(4.0));

  write_text(c, r, "triple.csv", [&](std::ostream& o) { io::write_triple_csv(o, s.triple); });
  write_text(c, r, "u.csv", [&](std::ostream& o) { io::write_scalar_csv(o, s.u); });
  write_text(c, r, "surface.obj", [&](std::ostream& o) { io::write_obj(o, mesh.points, &mesh.normals); });
  write_text(c, r, "surface.csv", [&](std::ostream& o) { io::write_surface_csv(o, mesh); });
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curved flats and isothermic surfaces: residual checks, frame integration, surface extraction"};
  app.require_subcommand(1);
  std::string config_path, out_dir, grid_spec, lambda_spec;
  double tol_scale = 0.0;
  bool timing = false;
  struct Sub {
    const char* name;
    const char* help;
    Report (*fn)(const RunConfig&);
  };
  const Sub subs[] = {
      {"check", "run the residual suite for a patch or k-field", cmd_check},
      {"build", "integrate frames for each lambda and export snapshots", cmd_build},
      {"surfaces", "reconstruct f and its dual and export meshes", cmd_surfaces},
      {"calapso", "build an isothermic surface from a Calapso solution", cmd_calapso},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor");
    sub->add_option("--lambda", lambda_spec, "comma-separated spectral parameters");
    sub->add_option("--grid", grid_spec, "nx,ny,hx,hy[,x0,y0]");
    sub->add_flag("--timing", timing, "record the runtime in the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Sub* chosen = nullptr;
  for (const Sub& s : subs)
    if (app.got_subcommand(s.name)) chosen = &s;

  RunConfig config;
  try {
    const std::filesystem::path cfg(config_path);
    json j;
    try {
      j = json::parse(io::read_file(cfg));
    } catch (const json::parse_error& e) {
      throw InputError(config_path + ": invalid JSON: " + e.what());
    }
    config = parse_config(j, cfg.parent_path());
    if (!grid_spec.empty()) config.grid = parse_grid_spec(grid_spec);
    if (!lambda_spec.empty() || app.get_subcommand(chosen->name)->count("--lambda")) {
      config.lambdas = parse_lambda_list(lambda_spec);
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (tol_scale != 0.0) {
      if (!(tol_scale > 0.0) || !std::isfinite(tol_scale)) throw InputError("--tol-scale: must be positive");
      config.tol_scale = tol_scale;
    }
    config.timing = config.timing || timing;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Report report = chosen->fn(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    prepare_out_dir(config);
    io::write_file_atomic(config.out_dir / "report.json",
                          report.to_json(config.timing ? std::optional<double>(seconds) : std::nullopt).dump(1) + "\n");
    for (const Check& ch : report.checks) {
      out << (ch.pass ? "PASS " : "FAIL ") << ch.name << "  residual=" << ch.max_residual << "  tol=" << ch.tolerance
          << "\n";
    }
    for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
    return report.pass() ? 0 : 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace isoflat::cli
