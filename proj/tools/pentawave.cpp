// pentawave: command-line front end for the fivefold wave-field experiments.
//
// Exit codes: 0 ok, 2 configuration error (including too few extrema to
// register), 3 I/O error, 4 internal contract violation.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pentawave/errors.hpp"
#include "pentawave/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitContract = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace pentawave;

  CLI::App app{"Fivefold standing-wave superposition: series, identities, extrema and tilings"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string command;
  double k = 1.0;
  double radius = 10.0;
  int terms = 8;
  double grid_step = 0.5;
  std::uint64_t seed = 7;
  std::int64_t points = 10000;
  double k_min = 0.1;
  double k_max = 10.0;
  double grad_tol = 0.0;
  std::string out_dir = ".";
  std::string formats = "csv,json";
  std::string config_file;

  app.add_option("command", command, "field | identity | converge | extrema | tiling | match")
      ->required();
  auto* k_opt = app.add_option("--k", k, "wavenumber");
  auto* radius_opt = app.add_option("--radius", radius, "disk radius");
  auto* terms_opt = app.add_option("--terms", terms, "series terms N");
  auto* step_opt = app.add_option("--grid-step", grid_step, "sampling pitch");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* points_opt = app.add_option("--points", points, "identity: number of random points");
  auto* kmin_opt = app.add_option("--k-min", k_min, "identity: lower wavenumber");
  auto* kmax_opt = app.add_option("--k-max", k_max, "identity: upper wavenumber");
  auto* grad_opt = app.add_option("--grad-tol", grad_tol, "critical point gradient tolerance");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* fmt_opt = app.add_option("--format", formats, "comma list of csv,json,svg");
  app.add_option("--config", config_file, "JSON config file; flags take precedence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw IoError("cannot read config file " + config_file);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + config_file + " is not valid JSON: " + e.what());
      }
      cfg.merge_json(j);
    }
    cfg.command = parse_command(command);
    if (k_opt->count()) cfg.k = k;
    if (radius_opt->count()) cfg.radius = radius;
    if (terms_opt->count()) cfg.terms = terms;
    if (step_opt->count()) cfg.grid_step = grid_step;
    if (seed_opt->count()) cfg.seed = seed;
    if (points_opt->count()) cfg.points = points;
    if (kmin_opt->count()) cfg.k_min = k_min;
    if (kmax_opt->count()) cfg.k_max = k_max;
    if (grad_opt->count()) cfg.tolerances.grad_tol = grad_tol;
    if (out_opt->count()) cfg.output_dir = out_dir;
    if (fmt_opt->count()) cfg.formats = parse_formats(formats);
    cfg.validate();

    for (const auto& path : run(cfg)) std::cout << path.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InsufficientDataError& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitContract;
  }
}
