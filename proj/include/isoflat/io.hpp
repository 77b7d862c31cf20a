#pragma once
// File formats: CSV scalar fields, JSON patches and snapshots, CSV point and
// triple dumps, OBJ meshes. Every writer formats doubles with 17 significant
// digits so output is byte-identical for identical inputs.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "isoflat/connection.hpp"
#include "isoflat/frame.hpp"
#include "isoflat/grid.hpp"
#include "isoflat/isothermic.hpp"
#include "isoflat/surface.hpp"

namespace isoflat::io {

using nlohmann::json;

/// "%.17g".
std::string format_double(double v);

/// Line 1: "nx,ny,hx,hy,x0,y0"; line 2: their values; then ny rows of nx
/// values (row j holds y = y0 + j hy).
void write_scalar_csv(std::ostream& out, const ScalarField& field);
/// `source` names the input in error messages.
ScalarField read_scalar_csv(std::istream& in, const std::string& source);

json grid_to_json(const Grid& grid);
/// Accepts {nx, ny, hx, hy, x0?, y0?} or {nx, ny, x_min, x_max, y_min, y_max}.
Grid grid_from_json(const json& j, const std::string& where);

/// {"grid": ..., "u": [...], "k1": [...], "k2": [...]}, values row-major.
json patch_to_json(const IsothermicPatch& patch);
IsothermicPatch patch_from_json(const json& j, const std::string& source);

/// {"grid", "lambda", "ax": [[25 values], ...], "ay": ...}, matrices row-major.
json form_to_json(const ConnectionForm& form);
/// {"grid", "base", "frames": [[25 values], ...], "max_defect", "warnings"}.
json frames_to_json(const FrameField& frames);

/// Header "i,j,n1..n5,f1..f5,fhat1..fhat5" then one row per node.
void write_triple_csv(std::ostream& out, const SurfaceTriple& triple);
/// Header "i,j,x,y,z,nx,ny,nz" then one row per node.
void write_surface_csv(std::ostream& out, const EuclideanSurface& surface);
/// "v x y z" per node in grid row-major order, "vn" per node when normals are
/// given, and two triangles per grid cell.
void write_obj(std::ostream& out, const Field<Vec3>& points, const Field<Vec3>* normals = nullptr);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace isoflat::io
