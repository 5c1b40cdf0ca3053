#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pentawave/errors.hpp"
#include "pentawave/harness.hpp"
#include "pentawave/wavefield.hpp"

using namespace pentawave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "pentawave_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config(Command c, const std::string& dir) {
  RunConfig cfg;
  cfg.command = c;
  cfg.output_dir = scratch(dir);
  return cfg;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(-0.0) == "0");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, kTau, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("parsing helpers") {
  CHECK(parse_command("match") == Command::match);
  CHECK_THROWS_AS(parse_command("bogus"), ConfigError);
  const auto f = parse_formats("csv,svg");
  CHECK(f.csv);
  CHECK_FALSE(f.json);
  CHECK(f.svg);
  CHECK_THROWS_AS(parse_formats("csv,png"), ConfigError);
}

TEST_CASE("config validation and JSON merge") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  RunConfig merged;
  merged.merge_json(nlohmann::json::parse(
      R"({"command": "converge", "k": 2.0, "terms": 4, "formats": ["json"],
          "tolerances": {"grad_tol": 1e-9}})"));
  CHECK(merged.command == Command::converge);
  CHECK(merged.k == 2.0);
  CHECK(merged.terms == 4);
  CHECK_FALSE(merged.formats.csv);
  CHECK(merged.formats.json);
  REQUIRE(merged.tolerances.grad_tol);
  CHECK(*merged.tolerances.grad_tol == 1e-9);
  CHECK_THROWS_AS(merged.merge_json(nlohmann::json::parse(R"({"k": "fast"})")), ConfigError);

  const auto j = merged.to_json();
  CHECK_FALSE(j.contains("output_dir"));
  CHECK(j.at("command") == "converge");
}

TEST_CASE("disk grid") {
  CHECK(disk_grid(0.0, 0.5).size() == 1);
  for (double r : {1.0, 3.3, 10.0}) {
    for (double h : {0.1, 0.25, 0.7}) {
      CHECK(static_cast<std::int64_t>(disk_grid(r, h).size()) == disk_grid_count(r, h));
    }
  }
}

TEST_CASE("field export") {
  SUBCASE("radius zero gives the origin only") {
    auto cfg = config(Command::field, "field0");
    cfg.radius = 0.0;
    const auto rows = compute_field(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].s5 == 0.0);
    CHECK(rows[0].p5_lead == 0.0);
    CHECK(rows[0].series == 0.0);
    run(cfg);
    CHECK(slurp(cfg.output_dir / "field.csv") == "x,y,s5,p5_lead,series_N\n0,0,0,0,0\n");
  }
  SUBCASE("rows cover the disk and stay within the bound") {
    auto cfg = config(Command::field, "field1");
    cfg.radius = 6.0;
    cfg.grid_step = 0.3;
    cfg.terms = 5;
    cfg.formats = {true, true, true};
    const auto rows = compute_field(cfg);
    CHECK(static_cast<std::int64_t>(rows.size()) == disk_grid_count(6.0, 0.3));
    const double bound = tail_bound(cfg.k, cfg.radius, cfg.terms).scaled_bound;
    for (const auto& r : rows) CHECK(std::abs(r.s5 - r.series) <= bound);
    const auto files = run(cfg);
    CHECK(files.size() == 4);  // config + csv + json + svg
    const std::string csv = slurp(cfg.output_dir / "field.csv");
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == rows.size() + 1);
    CHECK(slurp(cfg.output_dir / "field.svg").rfind("<svg", 0) == 0);
  }
  SUBCASE("absurd grids are refused with a suggested pitch") {
    auto cfg = config(Command::field, "field2");
    cfg.radius = 1e4;
    cfg.grid_step = 1e-2;
    try {
      compute_field(cfg);
      FAIL("expected refusal");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("--grid-step") != std::string::npos);
    }
  }
}

TEST_CASE("unwritable output directory") {
  const fs::path blocker = scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "file";
  RunConfig cfg;
  cfg.command = Command::tiling;
  cfg.output_dir = blocker / "sub";
  CHECK_THROWS_AS(run(cfg), IoError);
}

TEST_CASE("convergence study") {
  auto cfg = config(Command::converge, "converge");
  cfg.radius = 8.0;
  cfg.grid_step = 0.4;
  cfg.terms = 10;
  const auto rows = compute_convergence(cfg);
  REQUIRE(rows.size() == 11);
  for (const auto& r : rows) CHECK(r.max_error <= r.bound);
  for (std::size_t n = 0; n + 1 < rows.size(); ++n) {
    CHECK(rows[n].bound / rows[n + 1].bound >= std::pow(kTau, 4) * (1.0 - 1e-12));
  }
  double max_s5 = 0.0;
  for (const Point& p : disk_grid(cfg.radius, cfg.grid_step)) {
    max_s5 = std::max(max_s5, std::abs(s5(cfg.k, p)));
  }
  CHECK(rows[0].max_error == max_s5);

  run(cfg);
  const std::string csv = slurp(cfg.output_dir / "converge.csv");
  CHECK(csv.rfind("N,max_error,bound\n", 0) == 0);
}

TEST_CASE("identity runner") {
  auto cfg = config(Command::identity, "identity");
  cfg.points = 2000;
  cfg.radius = 20.0;
  const auto files = run(cfg);
  CHECK(files.size() == 3);
  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "identity.json"));
  CHECK(j.at("report").at("max_scaled_residual").get<double>() <= 1e-9);
  CHECK(j.at("version") == std::string(kVersion));
}

TEST_CASE("extrema and tiling runners") {
  auto ex = config(Command::extrema, "extrema");
  ex.radius = 8.0;
  ex.formats = {true, true, true};
  CHECK(run(ex).size() == 4);
  CHECK(slurp(ex.output_dir / "extrema.csv").rfind("x,y,value,kind,", 0) == 0);

  auto ti = config(Command::tiling, "tiling");
  ti.radius = 30.0;
  ti.formats = {true, true, true};
  run(ti);
  const auto j = nlohmann::json::parse(slurp(ti.output_dir / "tiling.json"));
  CHECK(j.at("report").at("thin").get<int>() > 0);
  CHECK(j.at("report").at("thick").get<int>() > 0);
  CHECK(j.at("report").at("skipped_singular").get<int>() > 0);
}

TEST_CASE("match pipeline output") {
  auto cfg = config(Command::match, "match_a");
  cfg.radius = 30.0;
  cfg.formats = {true, true, true};
  run(cfg);
  auto again = cfg;
  again.output_dir = scratch("match_b");
  run(again);
  const std::string a = slurp(cfg.output_dir / "match.json");
  CHECK(a == slurp(again.output_dir / "match.json"));
  CHECK(slurp(cfg.output_dir / "config.json") == slurp(again.output_dir / "config.json"));

  const auto j = nlohmann::json::parse(a);
  CHECK(j.contains("config"));
  CHECK(j.contains("version"));
  const auto& rep = j.at("report");
  for (const char* key :
       {"num_extrema", "num_regions_hit", "regions_with_exactly_one", "residuals",
        "mean_residual", "median_residual", "max_residual", "excluded_near_singular"}) {
    CHECK_MESSAGE(rep.contains(key), key);
  }
}

TEST_CASE("match pipeline with too few extrema") {
  auto cfg = config(Command::match, "match_small");
  cfg.radius = 5.0;  // nothing survives the one-spacing rim trim
  CHECK_THROWS_AS(run(cfg), InsufficientDataError);
  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "match.json"));
  CHECK(j.at("error").at("type") == "insufficient_data");
}
