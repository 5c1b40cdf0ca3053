// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances and pinned regression values live here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pentawave/errors.hpp"
#include "pentawave/extrema.hpp"
#include "pentawave/harness.hpp"
#include "pentawave/identities.hpp"
#include "pentawave/pentagrid.hpp"
#include "pentawave/wavefield.hpp"

using namespace pentawave;
using pentawave::testing::random_disk_points;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Regression values from the validated pilot run of
// `pentawave match --k 1 --radius 40 --seed 7`.
constexpr std::int64_t kPinnedRegionsHit = 110;
constexpr std::int64_t kPinnedExactlyOne = 90;
constexpr double kPinnedMeanResidual = 0.254176610944689;

Outcome identity_suite() {
  Outcome o;
  const auto rep = run_identity_suite(10000, 20240611, {0.1, 10.0}, 20.0);
  expect(o, rep.max_scaled_residual <= 1e-9,
         "scaled residual " + sci(rep.max_scaled_residual) + " > 1e-9");
  o.detail = "max |r|/(1+k|p|)^5 = " + sci(rep.max_scaled_residual) +
             ", max |r| = " + sci(rep.max_abs_residual) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome bound_dominance() {
  Outcome o;
  const double k = 1.0;
  const auto pts = random_disk_points(1000, 10.0, 777);
  std::vector<double> exact;
  for (const Point& p : pts) exact.push_back(s5(k, p));
  std::vector<double> max_err(11, 0.0);
  std::int64_t violations = 0;
  for (int n = 0; n <= 10; ++n) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double err = std::abs(exact[i] - series_partial({k, n}, pts[i]));
      if (err > tail_bound(k, norm(pts[i]), n).scaled_bound) ++violations;
      max_err[n] = std::max(max_err[n], err);
    }
  }
  expect(o, violations == 0, std::to_string(violations) + " bound violations");
  const double lo = std::pow(kInvTau, 5) / 2.0;
  const double hi = 2.0 * std::pow(kInvTau, 4);
  double rmin = 1e300;
  double rmax = 0.0;
  for (int n = 3; n <= 10; ++n) {
    const double r = max_err[n] / max_err[n - 1];
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    expect(o, r >= lo && r <= hi, "ratio at N=" + std::to_string(n) + " = " + sci(r));
  }
  o.detail = "violations " + std::to_string(violations) + ", error ratios in [" + sci(rmin) +
             ", " + sci(rmax) + "] vs [" + sci(lo) + ", " + sci(hi) + "]" +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome fibonacci() {
  Outcome o;
  for (int n = 0; n <= 40; ++n) {
    const auto rounded = static_cast<std::int64_t>(std::llround(fib_closed_form(n)));
    expect(o, rounded == fib(n), "closed form differs at n=" + std::to_string(n));
  }
  const std::int64_t printed[] = {1, 1, 2, 3, 5};
  for (int n = 0; n < 5; ++n) expect(o, fib(n) == printed[n], "F_" + std::to_string(n));
  if (o.pass) o.detail = "n = 0..40 exact; F_0..F_4 = 1,1,2,3,5";
  return o;
}

Outcome checkerboard() {
  Outcome o;
  const Window w{0.5, 2.0 * kPi - 0.5, 0.5, 2.0 * kPi - 0.5};
  auto cfg = SearchConfig::defaults(1.0, 0.0);
  cfg.window = w;
  const auto found = find_critical_points(s2_field(1.0), cfg);
  const auto oracle = s2_oracle(1.0, w);
  expect(o, oracle.size() == 4, "oracle size");
  expect(o, found.size() == oracle.size(),
         "found " + std::to_string(found.size()) + " points, expected " +
             std::to_string(oracle.size()));
  double worst = 0.0;
  if (found.size() == oracle.size()) {
    for (std::size_t i = 0; i < found.size(); ++i) {
      worst = std::max(worst, distance(found[i].location, oracle[i].location));
      expect(o, found[i].kind == oracle[i].kind, "kind mismatch");
      expect(o, std::abs(found[i].value - oracle[i].value) <= 1e-12, "value mismatch");
    }
  }
  expect(o, worst <= 1e-9, "location error " + sci(worst));
  o.detail = std::to_string(found.size()) + " points, max location error " + sci(worst) +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome sign_law() {
  Outcome o;
  const double c = 1.0 / (2.0 * kTau);
  const LineGrid g = make_pentagrid(c);
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(-6.0 * g.spacing(), 6.0 * g.spacing());
  int tested = 0;
  int mismatches = 0;
  while (tested < 10000) {
    const Point p{u(rng), u(rng)};
    bool away = true;
    for (int f = 0; f < 5; ++f) away = away && g.line_distance(f, p) > 1e-6 * g.spacing();
    if (!away) continue;
    ++tested;
    if (region_sign(index_vector(g, p)) != (p5(c, p) > 0.0 ? 1 : -1)) ++mismatches;
  }
  expect(o, mismatches == 0, std::to_string(mismatches) + " sign mismatches");
  o.detail = std::to_string(tested) + " points, " + std::to_string(mismatches) + " mismatches";
  return o;
}

Outcome tiling_geometry() {
  Outcome o;
  const LineGrid g = make_pentagrid(1.0);
  const auto result = tiles(g, Window::square(10.0));
  int thin = 0;
  int thick = 0;
  double edge_err = 0.0;
  double angle_err = 0.0;
  bool origin_emitted = false;
  for (const auto& t : result.tiles) {
    (t.kind == RhombusKind::thin ? thin : thick)++;
    if (norm(t.crossing) < 1e-9) origin_emitted = true;
    for (int e = 0; e < 4; ++e) {
      const Vec2 next = t.vertices[(e + 1) % 4] - t.vertices[e];
      const Vec2 prev = t.vertices[(e + 3) % 4] - t.vertices[e];
      edge_err = std::max(edge_err, std::abs(norm(next) - 1.0));
      const double ang = std::acos(std::clamp(dot(next, prev) / (norm(next) * norm(prev)), -1.0, 1.0)) *
                         180.0 / kPi;
      double best = 1e300;
      for (double allowed : {36.0, 72.0, 108.0, 144.0}) best = std::min(best, std::abs(ang - allowed));
      angle_err = std::max(angle_err, best);
    }
  }
  // The zero-offset grid has all five m = 0 lines through the origin.
  bool origin_skipped = false;
  for (int f = 0; f < 5; ++f) origin_skipped = origin_skipped || g.line_distance(f, {0, 0}) == 0.0;
  expect(o, edge_err <= 1e-12, "edge error " + sci(edge_err));
  expect(o, angle_err <= 1e-10, "angle error " + sci(angle_err));
  expect(o, thin > 0 && thick > 0, "missing a rhombus kind");
  expect(o, !origin_emitted && origin_skipped && result.skipped_singular > 0,
         "origin crossing not excluded");
  o.detail = std::to_string(result.tiles.size()) + " tiles (" + std::to_string(thin) + " thin, " +
             std::to_string(thick) + " thick), " + std::to_string(result.skipped_singular) +
             " singular crossings skipped, edge err " + sci(edge_err) + ", angle err " +
             sci(angle_err) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome registration_recovery() {
  Outcome o;
  const SimilarityTransform planted{3.7, 0.4, {5.0, -2.0}};
  const LineGrid g = make_pentagrid(1.0 / (2.0 * kTau));
  std::set<IndexVector> regions;
  for (const Point& p : random_disk_points(5000, 40.0, 31)) {
    try {
      regions.insert(index_vector(g, p));
    } catch (const OnBoundaryError&) {
    }
  }
  CorrespondenceSet corr;
  for (const auto& r : regions) {
    CriticalPoint cp;
    const DualVertex v = dual_vertex(r);
    cp.location = planted.apply(v.position);
    cp.kind = CriticalKind::maximum;
    corr.items.push_back({cp, v});
  }
  const auto rep = assemble_report(corr, static_cast<std::int64_t>(corr.items.size()));
  const double ds = std::abs(rep.transform.scale - planted.scale);
  const double dr = std::abs(rep.transform.rotation - planted.rotation);
  const double dt = distance(rep.transform.translation, planted.translation);
  expect(o, ds <= 1e-9, "scale error " + sci(ds));
  expect(o, dr <= 1e-9, "rotation error " + sci(dr));
  expect(o, rep.max_residual <= 1e-9, "residual " + sci(rep.max_residual));
  o.detail = std::to_string(corr.items.size()) + " planted points, scale err " + sci(ds) +
             ", rotation err " + sci(dr) + ", translation err " + sci(dt) + ", max residual " +
             sci(rep.max_residual) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome matching_regression() {
  Outcome o;
  RunConfig cfg;
  cfg.command = Command::match;
  cfg.k = 1.0;
  cfg.radius = 40.0;
  cfg.seed = 7;
  const MatchRun a = compute_match(cfg);
  const MatchRun b = compute_match(cfg);
  const std::string ja = envelope(cfg, report_to_json(a.report)).dump(2);
  const std::string jb = envelope(cfg, report_to_json(b.report)).dump(2);
  expect(o, ja == jb, "JSON differs between runs");

  const auto& rep = a.report;
  const double ratio =
      static_cast<double>(rep.regions_with_exactly_one) / static_cast<double>(rep.num_regions_hit);
  const double pinned_ratio =
      static_cast<double>(kPinnedExactlyOne) / static_cast<double>(kPinnedRegionsHit);
  expect(o, rep.num_regions_hit == kPinnedRegionsHit && rep.regions_with_exactly_one == kPinnedExactlyOne,
         "region counts " + std::to_string(rep.regions_with_exactly_one) + "/" +
             std::to_string(rep.num_regions_hit));
  expect(o, ratio == pinned_ratio, "ratio changed");
  expect(o, rep.mean_residual == kPinnedMeanResidual,
         "mean residual " + format_double(rep.mean_residual));

  // Brute-force cross-check: strict local extrema of a dense sample at
  // pitch pi/(16k) against the pipeline's maxima and minima.
  const double h = kPi / (16.0 * cfg.k);
  const auto scan = testing::dense_grid_extrema(
      [&](Point p) { return static_cast<double>(testing::s5_reference(cfg.k, p.x, p.y)); },
      cfg.radius, h);
  const double inner = cfg.radius - 2.0 * h;
  int unmatched_scan = 0;
  int unmatched_pipeline = 0;
  for (const auto& gx : scan) {
    if (norm(gx.location) > inner) continue;
    const bool hit = std::any_of(a.critical_points.begin(), a.critical_points.end(), [&](const auto& cp) {
      return distance(cp.location, gx.location) <= 2.0 * h &&
             cp.kind == (gx.is_max ? CriticalKind::maximum : CriticalKind::minimum);
    });
    if (!hit) ++unmatched_scan;
  }
  for (const auto& cp : a.critical_points) {
    if (!is_extremum(cp) || norm(cp.location) > inner - 2.0 * h) continue;
    const bool hit = std::any_of(scan.begin(), scan.end(), [&](const auto& gx) {
      return distance(cp.location, gx.location) <= 2.0 * h;
    });
    if (!hit) ++unmatched_pipeline;
  }
  expect(o, unmatched_scan == 0 && unmatched_pipeline == 0,
         "dense scan disagreement " + std::to_string(unmatched_scan) + "/" +
             std::to_string(unmatched_pipeline));
  o.detail = "exactly-one " + std::to_string(rep.regions_with_exactly_one) + "/" +
             std::to_string(rep.num_regions_hit) + " = " + format_double(ratio) +
             ", mean residual " + format_double(rep.mean_residual) + ", dense scan " +
             std::to_string(scan.size()) + " extrema agree" + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome symmetry_suite() {
  Outcome o;
  const double rot = 2.0 * kPi / 5.0;
  double worst_odd = 0.0;
  double worst_rot = 0.0;
  for (const Point& p : random_disk_points(10000, 20.0, 404)) {
    const double sv = s5(1.0, p);
    const double pv = p5(1.0, p);
    worst_odd = std::max({worst_odd, std::abs(s5(1.0, -p) + sv), std::abs(p5(1.0, -p) + pv)});
    const Point q = rotate(p, rot);
    worst_rot = std::max({worst_rot, std::abs(s5(1.0, q) - sv) / std::max(1.0, std::abs(sv)),
                          std::abs(p5(1.0, q) - pv) / std::max(1.0, std::abs(pv))});
  }
  expect(o, worst_odd <= 1e-12, "oddness " + sci(worst_odd));
  expect(o, worst_rot <= 1e-12, "rotation " + sci(worst_rot));

  const auto pts = find_critical_points(1.0, SearchConfig::defaults(1.0, 40.0));
  double worst_set_rot = 0.0;
  double worst_set_ref = 0.0;
  for (const auto& cp : pts) {
    const Point r = rotate(cp.location, rot);
    double best_r = 1e300;
    double best_m = 1e300;
    for (const auto& other : pts) {
      if (other.kind == cp.kind) best_r = std::min(best_r, distance(other.location, r));
      const bool swapped = (cp.kind == CriticalKind::maximum && other.kind == CriticalKind::minimum) ||
                           (cp.kind == CriticalKind::minimum && other.kind == CriticalKind::maximum) ||
                           (!is_extremum(cp) && other.kind == cp.kind);
      if (swapped) best_m = std::min(best_m, distance(other.location, -cp.location));
    }
    worst_set_rot = std::max(worst_set_rot, best_r);
    worst_set_ref = std::max(worst_set_ref, best_m);
  }
  expect(o, worst_set_rot <= 1e-8, "critical set rotation " + sci(worst_set_rot));
  expect(o, worst_set_ref <= 1e-8, "critical set reflection " + sci(worst_set_ref));
  o.detail = "oddness " + sci(worst_odd) + ", rotation " + sci(worst_rot) + "; " +
             std::to_string(pts.size()) + " critical points, set rotation " + sci(worst_set_rot) +
             ", reflection " + sci(worst_set_ref) + (o.pass ? "" : "; " + o.detail);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit_s;  // <= 0: no limit
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "identity suite", identity_suite, 5.0},
      {2, "bound dominance", bound_dominance, 10.0},
      {3, "fibonacci", fibonacci, 0.0},
      {4, "checkerboard oracle", checkerboard, 2.0},
      {5, "sign law", sign_law, 0.0},
      {6, "tiling geometry", tiling_geometry, 0.0},
      {7, "registration recovery", registration_recovery, 0.0},
      {8, "matching regression", matching_regression, 0.0},
      {9, "symmetry suite", symmetry_suite, 0.0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      out.pass = false;
      out.detail += "; runtime " + sci(secs) + " s over limit";
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %d %s: %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
