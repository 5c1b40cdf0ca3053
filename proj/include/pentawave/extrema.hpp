#pragma once

// Critical-point search for smooth planar fields: seeded Newton refinement,
// deduplication and Hessian classification.

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pentawave/geometry.hpp"

namespace pentawave {

/// Value, gradient and Hessian of a twice-differentiable planar field.
struct ScalarField {
  std::function<double(Point)> value;
  std::function<Vec2(Point)> gradient;
  std::function<SymMat2(Point)> hessian;
};

ScalarField s5_field(double k);
ScalarField s2_field(double k);

enum class CriticalKind { maximum, minimum, saddle, degenerate };

std::string_view to_string(CriticalKind kind);

struct CriticalPoint {
  Point location;
  double value = 0.0;
  CriticalKind kind = CriticalKind::degenerate;
  std::array<double, 2> eigenvalues{};  // ascending
  double grad_norm = 0.0;
};

struct SearchConfig {
  double radius = 0.0;        // search disk centred on the origin
  double seed_spacing = 0.0;  // pitch of the seed lattice
  double grad_tol = 1e-10;
  double dedupe_radius = 0.0;
  int max_newton_steps = 60;
  double eig_degenerate_tol = 0.0;
  // When set, the search domain is this rectangle instead of the disk.
  std::optional<Window> window;

  /// Eight seeds per wavelength, dedupe at a quarter pitch, eigenvalue
  /// threshold 1e-8 k^2.
  static SearchConfig defaults(double k, double radius);

  /// Throws ConfigError unless seed_spacing <= pi/(2k), 0 < dedupe_radius <
  /// seed_spacing and the tolerances are positive.
  void validate(double k) const;

  bool contains(Point p) const;
};

struct Classification {
  CriticalKind kind = CriticalKind::degenerate;
  std::array<double, 2> eigenvalues{};
};

/// Newton iteration x <- x - H^-1 g with a gradient-step fallback on nearly
/// singular Hessians. Returns nullopt when it does not converge within
/// max_newton_steps or leaves the search domain.
std::optional<Point> newton_refine(const ScalarField& field, Point seed, const SearchConfig& cfg);
std::optional<Point> newton_refine(double k, Point seed, const SearchConfig& cfg);

Classification classify(const ScalarField& field, Point location, const SearchConfig& cfg);
Classification classify(double k, Point location, const SearchConfig& cfg);

/// All critical points found from a regular seed lattice over the domain,
/// sorted by (x, y).
std::vector<CriticalPoint> find_critical_points(const ScalarField& field, const SearchConfig& cfg);
std::vector<CriticalPoint> find_critical_points(double k, const SearchConfig& cfg);

/// Analytic critical set of s2 inside the window:
/// ((2a+1) pi / 2k, (2b+1) pi / 2k).
std::vector<CriticalPoint> s2_oracle(double k, Window window);

bool is_extremum(const CriticalPoint& cp);

}  // namespace pentawave
