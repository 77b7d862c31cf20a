#pragma once
// Command-line front end: configuration, the four subcommands and the JSON
// report they produce.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "isoflat/grid.hpp"

namespace isoflat::cli {

enum class SourceKind { Cylinder, Meridian, PatchFile, KFile, KConstant, KBilinear, KRevolution };

/// theta(x) = base + amplitude sin(frequency x + phase).
struct ThetaSpec {
  double base = 0.0;
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

struct RunConfig {
  std::optional<Grid> grid;
  std::vector<double> lambdas{1.0};
  SourceKind source = SourceKind::Cylinder;
  double radius = 1.0;      // cylinder
  ThetaSpec theta;          // meridian, k_revolution
  double r0 = 1.0;          // meridian, k_revolution
  std::string path;         // patch_file, k_file
  double k_value = 1.0;     // k_constant; a in k_bilinear
  double k_slope = 0.0;     // b in k = a + b x y
  double k_floor = 1e-6;
  double calapso_threshold = 1e-6;
  std::optional<double> u0;
  std::vector<double> infinity{0.0, 0.0, 0.0, 0.0, 1.0};
  double tol_scale = 1.0;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::filesystem::path out_dir = ".";
  bool timing = false;
};

/// Parses the JSON configuration; relative file paths are resolved against
/// `base_dir`. Throws InputError naming the offending field.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// "nx,ny,hx,hy[,x0,y0]".
Grid parse_grid_spec(const std::string& spec);
/// Comma-separated finite numbers, at least one.
std::vector<double> parse_lambda_list(const std::string& spec);

struct Check {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string command;
  std::string source;
  Grid grid;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
  nlohmann::json details = nlohmann::json::object();

  bool pass() const;
  /// Runtime is included only when given, keeping reports reproducible.
  nlohmann::json to_json(std::optional<double> runtime_seconds = std::nullopt) const;
};

Report cmd_check(const RunConfig& config);
Report cmd_build(const RunConfig& config);
Report cmd_surfaces(const RunConfig& config);
Report cmd_calapso(const RunConfig& config);

/// Full command line. Exit status: 0 all checks pass, 1 a check failed or a
/// numerical procedure broke down, 2 invalid input or configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isoflat::cli
