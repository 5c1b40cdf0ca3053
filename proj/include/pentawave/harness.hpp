#pragma once

// Experiment runners behind the `pentawave` command-line tool. Each runner
// computes its result in memory first, then writes every output file from a
// single sequential stage.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pentawave/extrema.hpp"
#include "pentawave/pentagrid.hpp"

namespace pentawave {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { field, identity, converge, extrema, tiling, match };

std::string_view to_string(Command c);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

struct Tolerances {
  std::optional<double> grad_tol;
  std::optional<double> seed_spacing;
  std::optional<double> dedupe_radius;
  std::optional<double> eig_degenerate_tol;
  std::optional<int> max_newton_steps;
  std::optional<double> singular_eps;
};

struct OutputFormats {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// Parses "csv,json,svg" style lists; throws ConfigError on unknown entries.
OutputFormats parse_formats(std::string_view list);

struct RunConfig {
  Command command = Command::field;
  double k = 1.0;
  double radius = 10.0;
  int terms = 8;
  double grid_step = 0.5;
  std::uint64_t seed = 7;
  // identity suite only
  std::int64_t points = 10000;
  double k_min = 0.1;
  double k_max = 10.0;
  Tolerances tolerances;
  std::filesystem::path output_dir = ".";
  OutputFormats formats;

  /// Throws ConfigError on the first invalid field.
  void validate() const;

  /// Resolved configuration as echoed into outputs (output_dir excluded so
  /// outputs do not depend on where they were written).
  nlohmann::ordered_json to_json() const;

  /// Applies the keys present in `j` on top of *this.
  void merge_json(const nlohmann::json& j);

  SearchConfig search_config() const;
};

/// Shortest decimal string that round-trips the double; -0 prints as "0".
std::string format_double(double v);

/// Lattice points h(i, j) with |p| <= radius, rows of increasing y.
std::vector<Point> disk_grid(double radius, double step);
/// Number of lattice points disk_grid would return, without allocating.
std::int64_t disk_grid_count(double radius, double step);

inline constexpr std::int64_t kMaxGridSamples = 100'000'000;

struct FieldRow {
  Point p;
  double s5 = 0.0;
  double p5_lead = 0.0;
  double series = 0.0;
};

struct ConvergenceRow {
  int terms = 0;
  double max_error = 0.0;
  double bound = 0.0;
};

/// In-memory results of the runners, for tests and for the writers.
std::vector<FieldRow> compute_field(const RunConfig& cfg);
std::vector<ConvergenceRow> compute_convergence(const RunConfig& cfg);

struct MatchRun {
  std::vector<CriticalPoint> critical_points;
  LineGrid grid;
  CorrespondenceSet correspondences;
  MatchReport report;
};
MatchRun compute_match(const RunConfig& cfg);

nlohmann::ordered_json report_to_json(const MatchReport& rep);
nlohmann::ordered_json envelope(const RunConfig& cfg, nlohmann::ordered_json report);

/// Runs cfg.command and writes its outputs. Returns the files written.
/// Throws ConfigError, IoError, InsufficientDataError or ContractViolation.
std::vector<std::filesystem::path> run(const RunConfig& cfg);

std::vector<std::filesystem::path> run_field_export(const RunConfig& cfg);
std::vector<std::filesystem::path> run_identity(const RunConfig& cfg);
std::vector<std::filesystem::path> run_convergence_study(const RunConfig& cfg);
std::vector<std::filesystem::path> run_extrema(const RunConfig& cfg);
std::vector<std::filesystem::path> run_tiling(const RunConfig& cfg);
std::vector<std::filesystem::path> run_match_pipeline(const RunConfig& cfg);

}  // namespace pentawave
