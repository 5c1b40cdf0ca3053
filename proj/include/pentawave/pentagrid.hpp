#pragma once

// Line grids (the pentagrid and, for the checkerboard analogue, a square
// grid), region labelling, de Bruijn dualisation to rhombus tilings and
// least-squares registration of dual vertices against field extrema.

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pentawave/extrema.hpp"
#include "pentawave/geometry.hpp"

namespace pentawave {

/// Lines {p : c (p . normal) - phase = m pi}, m integer.
struct LineFamily {
  Vec2 normal;
  double phase = 0.0;
};

struct LineGrid {
  double c = 1.0;
  std::vector<LineFamily> families;
  // Points closer than boundary_eps (absolute distance) to a line are "on" it.
  double boundary_eps = 0.0;
  // Crossings closer than singular_eps * spacing() to a further line are singular.
  double singular_eps = 1e-9;

  double spacing() const;
  /// Signed strip coordinate (c (p . n) - phase) / pi for family f.
  double strip_coordinate(std::size_t f, Point p) const;
  /// Distance from p to the nearest line of family f.
  double line_distance(std::size_t f, Point p) const;
};

/// Zero-offset pentagrid with normals e_i; the zero set of p5(c, .).
LineGrid make_pentagrid(double c);

/// Square grid on which sin(k(x+y)/2) cos(k(x-y)/2) vanishes.
LineGrid make_checkerboard_grid(double k);

struct IndexVector {
  std::vector<std::int64_t> m;
  friend auto operator<=>(const IndexVector&, const IndexVector&) = default;
};

struct DualVertex {
  IndexVector index;
  Vec2 position;
};

enum class RhombusKind { thin, thick };

struct RhombusTile {
  std::array<Vec2, 4> vertices;  // cyclic order, tiling space
  RhombusKind kind = RhombusKind::thick;
  int family_i = 0;
  int family_j = 0;
  Point crossing;  // intersection point in field space
};

struct TilingResult {
  std::vector<RhombusTile> tiles;
  std::int64_t skipped_singular = 0;
};

/// floor of the strip coordinates; throws OnBoundaryError near a grid line.
IndexVector index_vector(const LineGrid& grid, Point p);

/// (-1)^(sum m_i).
int region_sign(const IndexVector& iv);

/// sum_j m_j e_j using the grid normals.
DualVertex dual_vertex(const LineGrid& grid, const IndexVector& iv);
/// Pentagrid form: sum_j m_j e_j with the five basis directions.
DualVertex dual_vertex(const IndexVector& iv);

/// Rhombi dual to the transverse crossings inside the window. Requires a
/// five-family grid.
TilingResult tiles(const LineGrid& grid, Window window);

struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;
  Vec2 translation;

  Vec2 apply(Vec2 v) const;
  SimilarityTransform inverse() const;
};

/// Least-squares scale/rotation/translation mapping sources onto targets.
SimilarityTransform fit_similarity(const std::vector<std::pair<Vec2, Point>>& pairs);

struct Correspondence {
  CriticalPoint extremum;
  DualVertex vertex;
};

struct CorrespondenceSet {
  std::vector<Correspondence> items;
  std::int64_t excluded_near_singular = 0;
  std::int64_t excluded_on_boundary = 0;
  std::vector<IndexVector> flagged_regions;  // regions holding > 1 extremum
};

/// Region label and dual vertex of each extremum.
CorrespondenceSet correspondences(const LineGrid& grid, const std::vector<CriticalPoint>& extrema);

struct MatchReport {
  std::int64_t num_extrema = 0;
  std::int64_t num_matched = 0;
  std::int64_t num_regions_hit = 0;
  std::int64_t regions_with_exactly_one = 0;
  std::int64_t regions_with_multiple = 0;
  std::int64_t dual_position_collisions = 0;
  std::vector<double> residuals;  // in units of the fitted tile edge
  double mean_residual = 0.0;
  double median_residual = 0.0;
  double max_residual = 0.0;
  std::int64_t excluded_near_singular = 0;
  std::int64_t excluded_on_boundary = 0;
  std::int64_t excluded_near_edge = 0;
  std::vector<IndexVector> flagged_regions;
  SimilarityTransform transform;
};

/// Fits the tiling-to-field transform and residual statistics.
MatchReport assemble_report(const CorrespondenceSet& corr, std::int64_t num_extrema);

struct MatchSelection {
  std::vector<CriticalPoint> kept;
  std::int64_t num_extrema = 0;  // maxima and minima offered
  std::int64_t excluded_near_edge = 0;
};

/// Maxima/minima lying more than one grid spacing inside the disk of radius
/// trim_radius (every extremum when no radius is given).
MatchSelection select_extrema(const LineGrid& grid, const std::vector<CriticalPoint>& extrema,
                              std::optional<double> trim_radius);

/// Full matching: only maxima/minima at least one grid spacing inside the
/// disk of radius trim_radius (when given) take part.
MatchReport match_report(const LineGrid& grid, const std::vector<CriticalPoint>& extrema,
                         std::optional<double> trim_radius = std::nullopt);

}  // namespace pentawave
