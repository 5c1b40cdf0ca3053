#include "pentawave/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "pentawave/errors.hpp"
#include "pentawave/identities.hpp"
#include "pentawave/svg.hpp"
#include "pentawave/wavefield.hpp"

namespace pentawave {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kIdentityTolerance = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

// Collects output files and writes them in one pass at the end of a run.
class OutputSet {
 public:
  explicit OutputSet(const RunConfig& cfg) : cfg_(cfg) {}

  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  std::vector<fs::path> flush() const {
    ensure_output_dir(cfg_.output_dir);
    std::vector<fs::path> written;
    const fs::path config_path = cfg_.output_dir / "config.json";
    write_file(config_path, cfg_.to_json().dump(2) + "\n");
    written.push_back(config_path);
    for (const auto& [name, content] : files_) {
      const fs::path p = cfg_.output_dir / name;
      write_file(p, content);
      written.push_back(p);
    }
    return written;
  }

 private:
  const RunConfig& cfg_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    line += c;
    first = false;
  }
  line += '\n';
  return line;
}

std::string f(double v) { return format_double(v); }
std::string f(std::int64_t v) { return std::to_string(v); }
std::string f(int v) { return std::to_string(v); }

LineGrid lead_term_grid(const RunConfig& cfg) {
  LineGrid grid = make_pentagrid(cfg.k / (2.0 * kTau));
  if (cfg.tolerances.singular_eps) grid.singular_eps = *cfg.tolerances.singular_eps;
  return grid;
}

void draw_grid_lines(SvgCanvas& svg, const LineGrid& grid, Window view, std::string_view colour) {
  const std::array<Point, 4> corners = {Point{view.xmin, view.ymin}, Point{view.xmax, view.ymin},
                                        Point{view.xmax, view.ymax}, Point{view.xmin, view.ymax}};
  for (std::size_t fam = 0; fam < grid.families.size(); ++fam) {
    double lo = grid.strip_coordinate(fam, corners[0]);
    double hi = lo;
    for (const Point& q : corners) {
      lo = std::min(lo, grid.strip_coordinate(fam, q));
      hi = std::max(hi, grid.strip_coordinate(fam, q));
    }
    const auto& family = grid.families[fam];
    for (auto m = static_cast<long>(std::ceil(lo)); m <= static_cast<long>(std::floor(hi)); ++m) {
      Point a;
      Point b;
      const double offset = (m * kPi + family.phase) / grid.c;
      if (svg.clip_line(family.normal, offset, a, b)) svg.line(a, b, colour, 0.75);
    }
  }
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::field: return "field";
    case Command::identity: return "identity";
    case Command::converge: return "converge";
    case Command::extrema: return "extrema";
    case Command::tiling: return "tiling";
    case Command::match: return "match";
  }
  return "field";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::field, Command::identity, Command::converge, Command::extrema,
                    Command::tiling, Command::match}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

OutputFormats parse_formats(std::string_view list) {
  OutputFormats out{false, false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string_view item = list.substr(start, comma - start);
    if (item == "csv") {
      out.csv = true;
    } else if (item == "json") {
      out.json = true;
    } else if (item == "svg") {
      out.svg = true;
    } else if (!item.empty()) {
      throw ConfigError("unknown output format '" + std::string(item) + "'");
    }
    start = comma + 1;
  }
  return out;
}

void RunConfig::validate() const {
  require(std::isfinite(k) && k > 0.0, "--k must be finite and > 0");
  require(std::isfinite(radius) && radius >= 0.0, "--radius must be finite and >= 0");
  require(terms >= 0 && terms <= 1000, "--terms must be in [0, 1000]");
  require(std::isfinite(grid_step) && grid_step > 0.0, "--grid-step must be > 0");
  require(points >= 1, "--points must be >= 1");
  require(k_min > 0.0 && k_min <= k_max && std::isfinite(k_max), "need 0 < k_min <= k_max");
  require(!output_dir.empty(), "--out must not be empty");
  const auto positive = [](const std::optional<double>& v) { return !v || (*v > 0.0); };
  require(positive(tolerances.grad_tol) && positive(tolerances.seed_spacing) &&
              positive(tolerances.dedupe_radius) && positive(tolerances.eig_degenerate_tol) &&
              positive(tolerances.singular_eps),
          "tolerances must be > 0");
  require(!tolerances.max_newton_steps || *tolerances.max_newton_steps >= 1,
          "max_newton_steps must be >= 1");
}

ojson RunConfig::to_json() const {
  ojson j;
  j["command"] = std::string(to_string(command));
  j["k"] = k;
  j["radius"] = radius;
  j["terms"] = terms;
  j["grid_step"] = grid_step;
  j["seed"] = seed;
  j["points"] = points;
  j["k_min"] = k_min;
  j["k_max"] = k_max;
  ojson tol = ojson::object();
  if (tolerances.grad_tol) tol["grad_tol"] = *tolerances.grad_tol;
  if (tolerances.seed_spacing) tol["seed_spacing"] = *tolerances.seed_spacing;
  if (tolerances.dedupe_radius) tol["dedupe_radius"] = *tolerances.dedupe_radius;
  if (tolerances.eig_degenerate_tol) tol["eig_degenerate_tol"] = *tolerances.eig_degenerate_tol;
  if (tolerances.max_newton_steps) tol["max_newton_steps"] = *tolerances.max_newton_steps;
  if (tolerances.singular_eps) tol["singular_eps"] = *tolerances.singular_eps;
  j["tolerances"] = tol;
  ojson fmts = ojson::array();
  if (formats.csv) fmts.push_back("csv");
  if (formats.json) fmts.push_back("json");
  if (formats.svg) fmts.push_back("svg");
  j["formats"] = fmts;
  return j;
}

void RunConfig::merge_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    if (j.contains("command")) command = parse_command(j.at("command").get<std::string>());
    if (j.contains("k")) k = j.at("k").get<double>();
    if (j.contains("radius")) radius = j.at("radius").get<double>();
    if (j.contains("terms")) terms = j.at("terms").get<int>();
    if (j.contains("grid_step")) grid_step = j.at("grid_step").get<double>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("points")) points = j.at("points").get<std::int64_t>();
    if (j.contains("k_min")) k_min = j.at("k_min").get<double>();
    if (j.contains("k_max")) k_max = j.at("k_max").get<double>();
    if (j.contains("out")) output_dir = j.at("out").get<std::string>();
    if (j.contains("formats")) {
      const auto& v = j.at("formats");
      if (v.is_string()) {
        formats = parse_formats(v.get<std::string>());
      } else {
        std::string joined;
        for (const auto& item : v) joined += item.get<std::string>() + ",";
        formats = parse_formats(joined);
      }
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      if (t.contains("grad_tol")) tolerances.grad_tol = t.at("grad_tol").get<double>();
      if (t.contains("seed_spacing")) tolerances.seed_spacing = t.at("seed_spacing").get<double>();
      if (t.contains("dedupe_radius")) {
        tolerances.dedupe_radius = t.at("dedupe_radius").get<double>();
      }
      if (t.contains("eig_degenerate_tol")) {
        tolerances.eig_degenerate_tol = t.at("eig_degenerate_tol").get<double>();
      }
      if (t.contains("max_newton_steps")) {
        tolerances.max_newton_steps = t.at("max_newton_steps").get<int>();
      }
      if (t.contains("singular_eps")) tolerances.singular_eps = t.at("singular_eps").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config file: ") + e.what());
  }
}

SearchConfig RunConfig::search_config() const {
  SearchConfig sc = SearchConfig::defaults(k, radius);
  if (tolerances.grad_tol) sc.grad_tol = *tolerances.grad_tol;
  if (tolerances.seed_spacing) sc.seed_spacing = *tolerances.seed_spacing;
  if (tolerances.dedupe_radius) sc.dedupe_radius = *tolerances.dedupe_radius;
  if (tolerances.eig_degenerate_tol) sc.eig_degenerate_tol = *tolerances.eig_degenerate_tol;
  if (tolerances.max_newton_steps) sc.max_newton_steps = *tolerances.max_newton_steps;
  sc.validate(k);
  return sc;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // no "-0" in outputs
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::int64_t disk_grid_count(double radius, double step) {
  const auto rows = static_cast<std::int64_t>(std::floor(radius / step));
  std::int64_t count = 0;
  for (std::int64_t j = -rows; j <= rows; ++j) {
    const double y = j * step;
    const double half = std::sqrt(std::max(0.0, radius * radius - y * y));
    auto cols = static_cast<std::int64_t>(std::floor(half / step));
    // Guard against sqrt rounding at the rim.
    while (std::hypot((cols + 1) * step, y) <= radius) ++cols;
    while (cols >= 0 && std::hypot(cols * step, y) > radius) --cols;
    if (cols >= 0) count += 2 * cols + 1;
  }
  return count;
}

std::vector<Point> disk_grid(double radius, double step) {
  const auto rows = static_cast<long>(std::floor(radius / step));
  std::vector<Point> pts;
  for (long j = -rows; j <= rows; ++j) {
    for (long i = -rows; i <= rows; ++i) {
      const Point p{i * step, j * step};
      if (std::hypot(p.x, p.y) <= radius) pts.push_back(p);
    }
  }
  return pts;
}

namespace {

void check_grid_size(const RunConfig& cfg) {
  const double rows = 2.0 * std::floor(cfg.radius / cfg.grid_step) + 1.0;
  // Every row holds at least its x = 0 sample.
  if (rows > static_cast<double>(kMaxGridSamples) ||
      disk_grid_count(cfg.radius, cfg.grid_step) > kMaxGridSamples) {
    const double suggested = 1.01 * cfg.radius * std::sqrt(kPi / kMaxGridSamples);
    throw ConfigError("grid of pitch " + format_double(cfg.grid_step) + " over radius " +
                      format_double(cfg.radius) + " exceeds " + std::to_string(kMaxGridSamples) +
                      " samples; try --grid-step " + format_double(suggested));
  }
}

}  // namespace

std::vector<FieldRow> compute_field(const RunConfig& cfg) {
  cfg.validate();
  check_grid_size(cfg);
  const double lead_k = cfg.k / (2.0 * kTau);
  const SeriesSpec spec{cfg.k, cfg.terms};
  std::vector<FieldRow> rows;
  for (const Point& p : disk_grid(cfg.radius, cfg.grid_step)) {
    rows.push_back({p, s5(cfg.k, p), p5(lead_k, p), series_partial(spec, p)});
  }
  return rows;
}

std::vector<ConvergenceRow> compute_convergence(const RunConfig& cfg) {
  cfg.validate();
  check_grid_size(cfg);
  const auto pts = disk_grid(cfg.radius, cfg.grid_step);
  std::vector<double> exact;
  exact.reserve(pts.size());
  for (const Point& p : pts) exact.push_back(s5(cfg.k, p));

  std::vector<ConvergenceRow> rows;
  for (int n = 0; n <= cfg.terms; ++n) {
    ConvergenceRow row{n, 0.0, tail_bound(cfg.k, cfg.radius, n).scaled_bound};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double err = std::abs(exact[i] - series_partial({cfg.k, n}, pts[i]));
      row.max_error = std::max(row.max_error, err);
    }
    rows.push_back(row);
  }
  return rows;
}

MatchRun compute_match(const RunConfig& cfg) {
  cfg.validate();
  MatchRun run;
  run.critical_points = find_critical_points(cfg.k, cfg.search_config());
  run.grid = lead_term_grid(cfg);
  const MatchSelection sel = select_extrema(run.grid, run.critical_points, cfg.radius);
  run.correspondences = correspondences(run.grid, sel.kept);
  run.report = assemble_report(run.correspondences, sel.num_extrema);
  run.report.excluded_near_edge = sel.excluded_near_edge;
  return run;
}

ojson report_to_json(const MatchReport& rep) {
  ojson j;
  j["num_extrema"] = rep.num_extrema;
  j["num_matched"] = rep.num_matched;
  j["num_regions_hit"] = rep.num_regions_hit;
  j["regions_with_exactly_one"] = rep.regions_with_exactly_one;
  j["regions_with_multiple"] = rep.regions_with_multiple;
  j["dual_position_collisions"] = rep.dual_position_collisions;
  j["residuals"] = rep.residuals;
  j["mean_residual"] = rep.mean_residual;
  j["median_residual"] = rep.median_residual;
  j["max_residual"] = rep.max_residual;
  j["excluded_near_singular"] = rep.excluded_near_singular;
  j["excluded_on_boundary"] = rep.excluded_on_boundary;
  j["excluded_near_edge"] = rep.excluded_near_edge;
  ojson flagged = ojson::array();
  for (const auto& iv : rep.flagged_regions) flagged.push_back(iv.m);
  j["flagged_regions"] = flagged;
  j["transform"] = {{"scale", rep.transform.scale},
                    {"rotation", rep.transform.rotation},
                    {"translation", {rep.transform.translation.x, rep.transform.translation.y}}};
  return j;
}

ojson envelope(const RunConfig& cfg, ojson report) {
  ojson j;
  j["config"] = cfg.to_json();
  j["report"] = std::move(report);
  j["version"] = std::string(kVersion);
  return j;
}

std::vector<fs::path> run_field_export(const RunConfig& cfg) {
  const auto rows = compute_field(cfg);
  const TailBound tb = tail_bound(cfg.k, cfg.radius, cfg.terms);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.s5 - r.series));

  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "x,y,s5,p5_lead,series_N\n";
    for (const auto& r : rows) csv += csv_line({f(r.p.x), f(r.p.y), f(r.s5), f(r.p5_lead), f(r.series)});
    out.add("field.csv", std::move(csv));
  }
  if (cfg.formats.json) {
    ojson rep;
    rep["samples"] = static_cast<std::int64_t>(rows.size());
    rep["max_abs_truncation_error"] = worst;
    rep["scaled_bound"] = tb.scaled_bound;
    out.add("field.json", envelope(cfg, rep).dump(2) + "\n");
  }
  if (cfg.formats.svg) {
    const Window view = Window::square(cfg.radius + cfg.grid_step / 2.0);
    SvgCanvas svg(view);
    for (const auto& r : rows) {
      const double h = cfg.grid_step;
      svg.rect({r.p.x - h / 2.0, r.p.y - h / 2.0}, h, h, diverging_colour(r.s5 / 5.0));
    }
    // Zero set of the leading product term.
    draw_grid_lines(svg, lead_term_grid(cfg), view, "#333333");
    out.add("field.svg", svg.str());
  }
  auto files = out.flush();
  if (worst > tb.scaled_bound) {
    throw ContractViolation("truncation error " + format_double(worst) + " exceeds bound " +
                            format_double(tb.scaled_bound));
  }
  return files;
}

std::vector<fs::path> run_identity(const RunConfig& cfg) {
  cfg.validate();
  const ResidualReport rep =
      run_identity_suite(cfg.points, cfg.seed, {cfg.k_min, cfg.k_max}, cfg.radius);
  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "check,max_abs_residual\n";
    csv += csv_line({"expansion", f(rep.max_expansion)});
    csv += csv_line({"functional", f(rep.max_functional)});
    csv += csv_line({"direction_sum", f(rep.max_direction_sum)});
    csv += csv_line({"two_wave", f(rep.max_two_wave)});
    csv += csv_line({"all", f(rep.max_abs_residual)});
    csv += csv_line({"all_scaled", f(rep.max_scaled_residual)});
    out.add("identity.csv", std::move(csv));
  }
  if (cfg.formats.json) {
    ojson j;
    j["max_abs_residual"] = rep.max_abs_residual;
    j["max_scaled_residual"] = rep.max_scaled_residual;
    j["max_expansion"] = rep.max_expansion;
    j["max_functional"] = rep.max_functional;
    j["max_direction_sum"] = rep.max_direction_sum;
    j["max_two_wave"] = rep.max_two_wave;
    j["num_points"] = rep.num_points;
    j["rng_seed"] = rep.rng_seed;
    j["tolerance_scaled"] = kIdentityTolerance;
    out.add("identity.json", envelope(cfg, j).dump(2) + "\n");
  }
  auto files = out.flush();
  if (rep.max_scaled_residual > kIdentityTolerance) {
    throw ContractViolation("identity residual " + format_double(rep.max_scaled_residual) +
                            " exceeds 1e-9 (1 + k|p|)^5");
  }
  return files;
}

std::vector<fs::path> run_convergence_study(const RunConfig& cfg) {
  const auto rows = compute_convergence(cfg);
  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "N,max_error,bound\n";
    for (const auto& r : rows) csv += csv_line({f(r.terms), f(r.max_error), f(r.bound)});
    out.add("converge.csv", std::move(csv));
  }
  if (cfg.formats.json) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
      arr.push_back({{"N", r.terms}, {"max_error", r.max_error}, {"bound", r.bound}});
    }
    out.add("converge.json", envelope(cfg, {{"rows", arr}}).dump(2) + "\n");
  }
  if (cfg.formats.svg) {
    // log10 of error and bound against N.
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const auto& r : rows) {
      for (double v : {r.max_error, r.bound}) {
        if (v <= 0.0) continue;
        const double l = std::log10(v);
        lo = any ? std::min(lo, l) : l;
        hi = any ? std::max(hi, l) : l;
        any = true;
      }
    }
    const double span_n = std::max(1, cfg.terms);
    SvgCanvas svg({-0.5, span_n + 0.5, std::floor(lo) - 0.5, std::ceil(hi) + 0.5}, 600.0);
    std::vector<Point> err_line;
    std::vector<Point> bound_line;
    for (const auto& r : rows) {
      if (r.max_error > 0.0) err_line.push_back({double(r.terms), std::log10(r.max_error)});
      if (r.bound > 0.0) bound_line.push_back({double(r.terms), std::log10(r.bound)});
    }
    svg.polyline(bound_line.data(), bound_line.size(), "#cc0000", 1.5);
    svg.polyline(err_line.data(), err_line.size(), "#0033cc", 1.5);
    for (const Point& p : err_line) svg.circle(p, 3.0, "#0033cc");
    for (const Point& p : bound_line) svg.circle(p, 3.0, "#cc0000");
    out.add("converge.svg", svg.str());
  }
  auto files = out.flush();
  for (const auto& r : rows) {
    if (r.max_error > r.bound) {
      throw ContractViolation("N=" + std::to_string(r.terms) + ": max error " +
                              format_double(r.max_error) + " exceeds bound " +
                              format_double(r.bound));
    }
  }
  return files;
}

std::vector<fs::path> run_extrema(const RunConfig& cfg) {
  cfg.validate();
  const auto pts = find_critical_points(cfg.k, cfg.search_config());
  std::map<std::string, std::int64_t> counts{
      {"maximum", 0}, {"minimum", 0}, {"saddle", 0}, {"degenerate", 0}};
  for (const auto& cp : pts) ++counts[std::string(to_string(cp.kind))];

  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "x,y,value,kind,lambda_min,lambda_max,grad_norm\n";
    for (const auto& cp : pts) {
      csv += csv_line({f(cp.location.x), f(cp.location.y), f(cp.value),
                       std::string(to_string(cp.kind)), f(cp.eigenvalues[0]),
                       f(cp.eigenvalues[1]), f(cp.grad_norm)});
    }
    out.add("extrema.csv", std::move(csv));
  }
  if (cfg.formats.json) {
    ojson list = ojson::array();
    for (const auto& cp : pts) {
      list.push_back({{"x", cp.location.x},
                      {"y", cp.location.y},
                      {"value", cp.value},
                      {"kind", to_string(cp.kind)},
                      {"eigenvalues", cp.eigenvalues},
                      {"grad_norm", cp.grad_norm}});
    }
    ojson rep;
    rep["counts"] = counts;
    rep["critical_points"] = list;
    out.add("extrema.json", envelope(cfg, rep).dump(2) + "\n");
  }
  if (cfg.formats.svg) {
    SvgCanvas svg(Window::square(cfg.radius));
    for (const auto& cp : pts) {
      const char* colour = cp.kind == CriticalKind::maximum   ? "#cc0000"
                           : cp.kind == CriticalKind::minimum ? "#0033cc"
                           : cp.kind == CriticalKind::saddle  ? "#999999"
                                                              : "#000000";
      svg.circle(cp.location, 2.5, colour);
    }
    out.add("extrema.svg", svg.str());
  }
  return out.flush();
}

std::vector<fs::path> run_tiling(const RunConfig& cfg) {
  cfg.validate();
  const LineGrid grid = lead_term_grid(cfg);
  const TilingResult t = tiles(grid, Window::square(cfg.radius));
  std::int64_t thin = 0;
  for (const auto& tile : t.tiles) thin += tile.kind == RhombusKind::thin ? 1 : 0;

  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "i,j,kind,crossing_x,crossing_y,v0x,v0y,v1x,v1y,v2x,v2y,v3x,v3y\n";
    for (const auto& tile : t.tiles) {
      const auto& v = tile.vertices;
      csv += csv_line({f(tile.family_i), f(tile.family_j),
                       tile.kind == RhombusKind::thin ? "thin" : "thick", f(tile.crossing.x),
                       f(tile.crossing.y), f(v[0].x), f(v[0].y), f(v[1].x), f(v[1].y), f(v[2].x),
                       f(v[2].y), f(v[3].x), f(v[3].y)});
    }
    out.add("tiling.csv", std::move(csv));
  }
  if (cfg.formats.json) {
    ojson rep;
    rep["grid_wavenumber"] = grid.c;
    rep["spacing"] = grid.spacing();
    rep["num_tiles"] = static_cast<std::int64_t>(t.tiles.size());
    rep["thin"] = thin;
    rep["thick"] = static_cast<std::int64_t>(t.tiles.size()) - thin;
    rep["skipped_singular"] = t.skipped_singular;
    out.add("tiling.json", envelope(cfg, rep).dump(2) + "\n");
  }
  if (cfg.formats.svg) {
    double extent = 1.0;
    for (const auto& tile : t.tiles) {
      for (const auto& v : tile.vertices) extent = std::max({extent, std::abs(v.x), std::abs(v.y)});
    }
    SvgCanvas svg(Window::square(extent + 0.5));
    for (const auto& tile : t.tiles) {
      svg.polygon(tile.vertices.data(), 4, tile.kind == RhombusKind::thin ? "#f4c27a" : "#7aa7f4",
                  "#333333");
    }
    out.add("tiling.svg", svg.str());
  }
  return out.flush();
}

std::vector<fs::path> run_match_pipeline(const RunConfig& cfg) {
  cfg.validate();
  MatchRun m;
  try {
    m = compute_match(cfg);
  } catch (const InsufficientDataError& e) {
    OutputSet out(cfg);
    ojson err;
    err["config"] = cfg.to_json();
    err["error"] = {{"type", "insufficient_data"}, {"message", e.what()}};
    err["version"] = std::string(kVersion);
    out.add("match.json", err.dump(2) + "\n");
    out.flush();
    throw;
  }

  OutputSet out(cfg);
  if (cfg.formats.csv) {
    std::string csv = "x,y,kind,value,m0,m1,m2,m3,m4,vertex_x,vertex_y,residual\n";
    for (std::size_t i = 0; i < m.correspondences.items.size(); ++i) {
      const auto& c = m.correspondences.items[i];
      const auto& iv = c.vertex.index.m;
      csv += csv_line({f(c.extremum.location.x), f(c.extremum.location.y),
                       std::string(to_string(c.extremum.kind)), f(c.extremum.value), f(iv[0]),
                       f(iv[1]), f(iv[2]), f(iv[3]), f(iv[4]), f(c.vertex.position.x),
                       f(c.vertex.position.y), f(m.report.residuals[i])});
    }
    out.add("match.csv", std::move(csv));
  }
  if (cfg.formats.json) out.add("match.json", envelope(cfg, report_to_json(m.report)).dump(2) + "\n");
  if (cfg.formats.svg) {
    const Window view = Window::square(cfg.radius);
    SvgCanvas svg(view);
    draw_grid_lines(svg, m.grid, view, "#bbbbbb");
    // Tiles are generated over a slightly larger window so edges reach the rim.
    const TilingResult t = tiles(m.grid, Window::square(cfg.radius + m.grid.spacing()));
    for (const auto& tile : t.tiles) {
      std::array<Point, 4> pts;
      for (int i = 0; i < 4; ++i) pts[i] = m.report.transform.apply(tile.vertices[i]);
      svg.polygon(pts.data(), 4, "none", "#2a8a2a");
    }
    for (std::size_t i = 0; i < m.correspondences.items.size(); ++i) {
      const auto& c = m.correspondences.items[i];
      svg.line(c.extremum.location, m.report.transform.apply(c.vertex.position), "#000000", 1.0);
    }
    for (const auto& cp : m.critical_points) {
      if (!is_extremum(cp)) continue;
      svg.circle(cp.location, 3.0, cp.kind == CriticalKind::maximum ? "#cc0000" : "#0033cc");
    }
    out.add("match.svg", svg.str());
  }
  return out.flush();
}

std::vector<fs::path> run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::field: return run_field_export(cfg);
    case Command::identity: return run_identity(cfg);
    case Command::converge: return run_convergence_study(cfg);
    case Command::extrema: return run_extrema(cfg);
    case Command::tiling: return run_tiling(cfg);
    case Command::match: return run_match_pipeline(cfg);
  }
  throw ConfigError("unknown command");
}

}  // namespace pentawave
