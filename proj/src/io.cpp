#include "isoflat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace isoflat::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream s(line);
  while (std::getline(s, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw InputError(where + ": not a finite number: '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InputError(where + ": not an integer: '" + t + "'");
  }
  return v;
}

json field_values(const ScalarField& f) {
  json a = json::array();
  for (double v : f.values()) a.push_back(v);
  return a;
}

json matrix_values(const Mat5& m) {
  json a = json::array();
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) a.push_back(m(r, c));
  return a;
}

ScalarField field_from_json(const json& j, const Grid& grid, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  if (j.size() != grid.size()) {
    throw InputError(where + ": expected " + std::to_string(grid.size()) + " values, got " + std::to_string(j.size()));
  }
  ScalarField f(grid, 0.0);
  for (std::size_t n = 0; n < j.size(); ++n) {
    if (!j[n].is_number()) {
      throw InputError(where + ": non-numeric entry",
                       GridPoint{static_cast<int>(n % grid.nx), static_cast<int>(n / grid.nx)});
    }
    f.values()[n] = j[n].get<double>();
  }
  return f;
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number_integer()) throw InputError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scalar_csv(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid();
  out << "nx,ny,hx,hy,x0,y0\n"
      << g.nx << ',' << g.ny << ',' << format_double(g.hx) << ',' << format_double(g.hy) << ','
      << format_double(g.x0) << ',' << format_double(g.y0) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) out << (i ? "," : "") << format_double(field(i, j));
    out << '\n';
  }
}

ScalarField read_scalar_csv(std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw InputError(source + ": unexpected end of file, expected " + what);
    ++lineno;
    return trim(line);
  };
  if (next("header") != "nx,ny,hx,hy,x0,y0") {
    throw InputError(source + ": line 1 must be the header 'nx,ny,hx,hy,x0,y0'");
  }
  const std::vector<std::string> meta = split(next("grid values"), ',');
  const std::string where2 = source + " line 2";
  if (meta.size() != 6) throw InputError(where2 + ": expected 6 grid values");
  Grid g{parse_int(meta[0], where2 + " nx"),     parse_int(meta[1], where2 + " ny"),
         parse_double(meta[2], where2 + " hx"),  parse_double(meta[3], where2 + " hy"),
         parse_double(meta[4], where2 + " x0"),  parse_double(meta[5], where2 + " y0")};
  g.validate();
  ScalarField f(g, 0.0);
  for (int j = 0; j < g.ny; ++j) {
    const std::vector<std::string> row = split(next("a data row"), ',');
    const std::string where = source + " line " + std::to_string(lineno);
    if (row.size() != static_cast<std::size_t>(g.nx)) {
      throw InputError(where + ": expected " + std::to_string(g.nx) + " values, got " + std::to_string(row.size()));
    }
    for (int i = 0; i < g.nx; ++i) {
      try {
        f(i, j) = parse_double(row[i], where);
      } catch (const InputError& e) {
        throw InputError(e.what(), GridPoint{i, j});
      }
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) throw InputError(source + " line " + std::to_string(lineno) + ": trailing data");
  }
  return f;
}

json grid_to_json(const Grid& g) {
  return {{"nx", g.nx}, {"ny", g.ny}, {"hx", g.hx}, {"hy", g.hy}, {"x0", g.x0}, {"y0", g.y0}};
}

Grid grid_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": grid must be an object");
  const int nx = integer(j, "nx", where);
  const int ny = integer(j, "ny", where);
  Grid g;
  if (j.contains("x_min") || j.contains("x_max")) {
    g = Grid::spanning(nx, ny, number(j, "x_min", where), number(j, "x_max", where), number(j, "y_min", where),
                       number(j, "y_max", where));
  } else {
    g = {nx, ny, number(j, "hx", where), number(j, "hy", where), j.contains("x0") ? number(j, "x0", where) : 0.0,
         j.contains("y0") ? number(j, "y0", where) : 0.0};
  }
  g.validate();
  return g;
}

json patch_to_json(const IsothermicPatch& p) {
  return {{"grid", grid_to_json(p.grid)}, {"u", field_values(p.u)}, {"k1", field_values(p.k1)}, {"k2", field_values(p.k2)}};
}

IsothermicPatch patch_from_json(const json& j, const std::string& source) {
  const Grid g = grid_from_json(member(j, "grid", source), source + " grid");
  IsothermicPatch p{g, field_from_json(member(j, "u", source), g, source + " u"),
                    field_from_json(member(j, "k1", source), g, source + " k1"),
                    field_from_json(member(j, "k2", source), g, source + " k2")};
  p.validate();
  return p;
}

json form_to_json(const ConnectionForm& form) {
  json ax = json::array(), ay = json::array();
  for (std::size_t n = 0; n < form.grid.size(); ++n) {
    ax.push_back(matrix_values(form.ax.values()[n].matrix()));
    ay.push_back(matrix_values(form.ay.values()[n].matrix()));
  }
  return {{"grid", grid_to_json(form.grid)},
          {"lambda", form.lambda ? json(*form.lambda) : json(nullptr)},
          {"ax", std::move(ax)},
          {"ay", std::move(ay)}};
}

json frames_to_json(const FrameField& frames) {
  json f = json::array();
  for (const GroupElement& g : frames.frames.values()) f.push_back(matrix_values(g.matrix()));
  return {{"grid", grid_to_json(frames.grid)},
          {"base", matrix_values(frames.base.matrix())},
          {"frames", std::move(f)},
          {"max_defect", frames.max_defect()},
          {"warnings", frames.warnings}};
}

void write_triple_csv(std::ostream& out, const SurfaceTriple& t) {
  out << "i,j,n1,n2,n3,n4,n5,f1,f2,f3,f4,f5,fhat1,fhat2,fhat3,fhat4,fhat5\n";
  for (int j = 0; j < t.grid.ny; ++j) {
    for (int i = 0; i < t.grid.nx; ++i) {
      out << i << ',' << j;
      for (const Field<MinkowskiVector>* v : {&t.n, &t.f, &t.fhat})
        for (int c = 0; c < 5; ++c) out << ',' << format_double((*v)(i, j)[c]);
      out << '\n';
    }
  }
}

void write_surface_csv(std::ostream& out, const EuclideanSurface& s) {
  out << "i,j,x,y,z,nx,ny,nz\n";
  for (int j = 0; j < s.grid.ny; ++j) {
    for (int i = 0; i < s.grid.nx; ++i) {
      out << i << ',' << j;
      for (int c = 0; c < 3; ++c) out << ',' << format_double(s.points(i, j)[c]);
      for (int c = 0; c < 3; ++c) out << ',' << format_double(s.normals(i, j)[c]);
      out << '\n';
    }
  }
}

void write_obj(std::ostream& out, const Field<Vec3>& points, const Field<Vec3>* normals) {
  const Grid& g = points.grid();
  if (normals && !(normals->grid() == g)) throw InputError("write_obj: normal grid does not match points");
  for (const Vec3& p : points.values())
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
  if (normals) {
    for (const Vec3& n : normals->values())
      out << "vn " << format_double(n.x()) << ' ' << format_double(n.y()) << ' ' << format_double(n.z()) << '\n';
  }
  auto vid = [&](int i, int j) { return g.index(i, j) + 1; };
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const std::size_t a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (normals) {
        out << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << '\n';
        out << "f " << a << "//" << a << ' ' << c << "//" << c << ' ' << d << "//" << d << '\n';
      } else {
        out << "f " << a << ' ' << b << ' ' << c << '\n' << "f " << a << ' ' << c << ' ' << d << '\n';
      }
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot rename onto '" + path.string() + "'");
  }
}

}  // namespace isoflat::io
