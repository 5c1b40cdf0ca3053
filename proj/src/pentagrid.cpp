#include "pentawave/pentagrid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "pentawave/errors.hpp"
#include "pentawave/wavefield.hpp"

namespace pentawave {

double LineGrid::spacing() const { return kPi / c; }

double LineGrid::strip_coordinate(std::size_t f, Point p) const {
  const auto& fam = families.at(f);
  return (c * dot(p, fam.normal) - fam.phase) / kPi;
}

double LineGrid::line_distance(std::size_t f, Point p) const {
  const double t = strip_coordinate(f, p);
  return std::abs(t - std::round(t)) * spacing();
}

LineGrid make_pentagrid(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("grid wavenumber must be > 0");
  LineGrid grid;
  grid.c = c;
  for (const Vec2& e : direction_basis()) grid.families.push_back({e, 0.0});
  grid.boundary_eps = 1e-12 * grid.spacing();
  return grid;
}

LineGrid make_checkerboard_grid(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("wavenumber must be > 0");
  const double s = 1.0 / std::sqrt(2.0);
  LineGrid grid;
  grid.c = k * s;
  // cos(v) = sin(v + pi/2): the second family carries phase -pi/2.
  grid.families = {{{s, s}, 0.0}, {{s, -s}, -kPi / 2.0}};
  grid.boundary_eps = 1e-12 * grid.spacing();
  return grid;
}

IndexVector index_vector(const LineGrid& grid, Point p) {
  if (!is_finite(p)) throw ConfigError("point coordinates must be finite");
  IndexVector iv;
  iv.m.reserve(grid.families.size());
  for (std::size_t f = 0; f < grid.families.size(); ++f) {
    if (grid.line_distance(f, p) <= grid.boundary_eps) {
      throw OnBoundaryError("point lies on a line of family " + std::to_string(f));
    }
    iv.m.push_back(static_cast<std::int64_t>(std::floor(grid.strip_coordinate(f, p))));
  }
  return iv;
}

int region_sign(const IndexVector& iv) {
  const std::int64_t sum = std::accumulate(iv.m.begin(), iv.m.end(), std::int64_t{0});
  return (sum % 2 == 0) ? 1 : -1;
}

DualVertex dual_vertex(const LineGrid& grid, const IndexVector& iv) {
  if (iv.m.size() != grid.families.size()) {
    throw ConfigError("index vector length does not match the grid");
  }
  Vec2 pos;
  for (std::size_t j = 0; j < iv.m.size(); ++j) {
    pos += static_cast<double>(iv.m[j]) * grid.families[j].normal;
  }
  return {iv, pos};
}

DualVertex dual_vertex(const IndexVector& iv) {
  if (iv.m.size() != 5) throw ConfigError("pentagrid index vectors have five entries");
  const auto& e = direction_basis();
  Vec2 pos;
  for (std::size_t j = 0; j < 5; ++j) pos += static_cast<double>(iv.m[j]) * e[j];
  return {iv, pos};
}

TilingResult tiles(const LineGrid& grid, Window window) {
  if (grid.families.size() != 5) throw ConfigError("tiles() needs a five-family grid");
  if (!(window.xmin <= window.xmax && window.ymin <= window.ymax) ||
      !std::isfinite(window.xmin + window.xmax + window.ymin + window.ymax)) {
    throw ConfigError("tiling window must be finite and non-empty");
  }

  const std::array<Point, 4> corners = {Point{window.xmin, window.ymin},
                                        Point{window.xmax, window.ymin},
                                        Point{window.xmax, window.ymax},
                                        Point{window.xmin, window.ymax}};
  const auto line_range = [&](std::size_t f) {
    double lo = grid.strip_coordinate(f, corners[0]);
    double hi = lo;
    for (const Point& q : corners) {
      lo = std::min(lo, grid.strip_coordinate(f, q));
      hi = std::max(hi, grid.strip_coordinate(f, q));
    }
    return std::pair{static_cast<std::int64_t>(std::ceil(lo)),
                     static_cast<std::int64_t>(std::floor(hi))};
  };

  const double singular_dist = grid.singular_eps * grid.spacing();
  TilingResult out;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      const Vec2 ni = grid.families[i].normal;
      const Vec2 nj = grid.families[j].normal;
      const double det = ni.x * nj.y - ni.y * nj.x;
      const auto [mi_lo, mi_hi] = line_range(i);
      const auto [mj_lo, mj_hi] = line_range(j);
      const std::size_t d = (j - i) % 5;
      const RhombusKind kind = (d == 2 || d == 3) ? RhombusKind::thin : RhombusKind::thick;

      for (std::int64_t mi = mi_lo; mi <= mi_hi; ++mi) {
        for (std::int64_t mj = mj_lo; mj <= mj_hi; ++mj) {
          const double bi = (mi * kPi + grid.families[i].phase) / grid.c;
          const double bj = (mj * kPi + grid.families[j].phase) / grid.c;
          const Point p{(bi * nj.y - bj * ni.y) / det, (ni.x * bj - nj.x * bi) / det};
          if (!window.contains(p)) continue;

          IndexVector base;
          base.m.resize(5);
          bool singular = false;
          for (std::size_t l = 0; l < 5 && !singular; ++l) {
            if (l == i || l == j) continue;
            if (grid.line_distance(l, p) <= singular_dist) {
              singular = true;
            } else {
              base.m[l] = static_cast<std::int64_t>(std::floor(grid.strip_coordinate(l, p)));
            }
          }
          if (singular) {
            ++out.skipped_singular;
            continue;
          }
          // The four regions around the crossing differ only in m_i, m_j.
          base.m[i] = mi - 1;
          base.m[j] = mj - 1;
          const Vec2 v0 = dual_vertex(grid, base).position;
          RhombusTile tile;
          tile.vertices = {v0, v0 + ni, v0 + ni + nj, v0 + nj};
          tile.kind = kind;
          tile.family_i = static_cast<int>(i);
          tile.family_j = static_cast<int>(j);
          tile.crossing = p;
          out.tiles.push_back(tile);
        }
      }
    }
  }
  return out;
}

Vec2 SimilarityTransform::apply(Vec2 v) const {
  return scale * rotate(v, rotation) + translation;
}

SimilarityTransform SimilarityTransform::inverse() const {
  SimilarityTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = -rotation;
  inv.translation = -(inv.scale * rotate(translation, -rotation));
  return inv;
}

SimilarityTransform fit_similarity(const std::vector<std::pair<Vec2, Point>>& pairs) {
  using C = std::complex<double>;
  if (pairs.size() < 2) throw InsufficientDataError("similarity fit needs at least two pairs");

  C src_mean{};
  C dst_mean{};
  for (const auto& [s, t] : pairs) {
    src_mean += C{s.x, s.y};
    dst_mean += C{t.x, t.y};
  }
  const double n = static_cast<double>(pairs.size());
  src_mean /= n;
  dst_mean /= n;

  C cross{};
  double spread = 0.0;
  for (const auto& [s, t] : pairs) {
    const C zs = C{s.x, s.y} - src_mean;
    const C zt = C{t.x, t.y} - dst_mean;
    cross += std::conj(zs) * zt;
    spread += std::norm(zs);
  }
  if (!(spread > 0.0)) throw InsufficientDataError("similarity fit needs two distinct sources");

  const C a = cross / spread;
  if (!(std::abs(a) > 0.0)) throw InsufficientDataError("degenerate similarity fit");
  const C b = dst_mean - a * src_mean;
  return {std::abs(a), std::arg(a), {b.real(), b.imag()}};
}

CorrespondenceSet correspondences(const LineGrid& grid,
                                  const std::vector<CriticalPoint>& extrema) {
  CorrespondenceSet out;
  const double singular_dist = grid.singular_eps * grid.spacing();
  std::map<IndexVector, int> hits;
  for (const auto& cp : extrema) {
    int near_lines = 0;
    for (std::size_t f = 0; f < grid.families.size(); ++f) {
      if (grid.line_distance(f, cp.location) <= singular_dist) ++near_lines;
    }
    if (near_lines >= 2) {
      ++out.excluded_near_singular;
      continue;
    }
    IndexVector iv;
    try {
      iv = index_vector(grid, cp.location);
    } catch (const OnBoundaryError&) {
      ++out.excluded_on_boundary;
      continue;
    }
    ++hits[iv];
    out.items.push_back({cp, dual_vertex(grid, iv)});
  }
  for (const auto& [iv, count] : hits) {
    if (count > 1) out.flagged_regions.push_back(iv);
  }
  return out;
}

MatchReport assemble_report(const CorrespondenceSet& corr, std::int64_t num_extrema) {
  MatchReport rep;
  rep.num_extrema = num_extrema;
  rep.num_matched = static_cast<std::int64_t>(corr.items.size());
  rep.excluded_near_singular = corr.excluded_near_singular;
  rep.excluded_on_boundary = corr.excluded_on_boundary;
  rep.flagged_regions = corr.flagged_regions;

  std::map<IndexVector, int> hits;
  for (const auto& c : corr.items) ++hits[c.vertex.index];
  rep.num_regions_hit = static_cast<std::int64_t>(hits.size());
  std::set<std::vector<std::int64_t>> positions;
  for (const auto& [iv, count] : hits) {
    if (count == 1) ++rep.regions_with_exactly_one;
    if (count > 1) ++rep.regions_with_multiple;
    // Index vectors differing by a multiple of (1,...,1) share a dual position.
    std::vector<std::int64_t> key;
    for (std::int64_t m : iv.m) key.push_back(m - iv.m.front());
    positions.insert(std::move(key));
  }
  rep.dual_position_collisions = rep.num_regions_hit - static_cast<std::int64_t>(positions.size());

  std::vector<std::pair<Vec2, Point>> pairs;
  pairs.reserve(corr.items.size());
  for (const auto& c : corr.items) pairs.emplace_back(c.vertex.position, c.extremum.location);
  rep.transform = fit_similarity(pairs);

  for (const auto& [src, dst] : pairs) {
    rep.residuals.push_back(distance(rep.transform.apply(src), dst) / rep.transform.scale);
  }
  std::vector<double> sorted = rep.residuals;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double sum = 0.0;
  for (double r : rep.residuals) sum += r;
  rep.mean_residual = sum / static_cast<double>(n);
  rep.median_residual = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  rep.max_residual = sorted.back();
  return rep;
}

MatchSelection select_extrema(const LineGrid& grid, const std::vector<CriticalPoint>& extrema,
                              std::optional<double> trim_radius) {
  MatchSelection sel;
  for (const auto& cp : extrema) {
    if (!is_extremum(cp)) continue;
    ++sel.num_extrema;
    if (trim_radius && *trim_radius - norm(cp.location) <= grid.spacing()) {
      ++sel.excluded_near_edge;
      continue;
    }
    sel.kept.push_back(cp);
  }
  return sel;
}

MatchReport match_report(const LineGrid& grid, const std::vector<CriticalPoint>& extrema,
                         std::optional<double> trim_radius) {
  const MatchSelection sel = select_extrema(grid, extrema, trim_radius);
  MatchReport rep = assemble_report(correspondences(grid, sel.kept), sel.num_extrema);
  rep.excluded_near_edge = sel.excluded_near_edge;
  return rep;
}

}  // namespace pentawave
