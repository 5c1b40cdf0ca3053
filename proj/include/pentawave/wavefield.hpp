#pragma once

// Fivefold standing-wave superposition s5, its five-sine product p5, the
// perpendicular two-wave field s2, and the golden-ratio product series that
// reproduces s5 together with its truncation bound.

#include <array>
#include <cstdint>

#include "pentawave/geometry.hpp"

namespace pentawave {

/// Golden ratio and friends.
inline constexpr double kTau = 1.61803398874989484820458683436563812;
inline constexpr double kInvTau = 0.61803398874989484820458683436563812;
inline constexpr double kSqrt5 = 2.23606797749978969640917366873127624;

using DirectionBasis = std::array<Vec2, 5>;

/// Projections a_i = p . e_i onto the five basis directions.
using ProjectionSet = std::array<double, 5>;

/// The five unit vectors e_i = (cos 2*pi*i/5, sin 2*pi*i/5), i = 0..4.
const DirectionBasis& direction_basis();

/// Throws ConfigError for non-finite coordinates.
ProjectionSet project(Point p);

// Field evaluations. All throw ConfigError when k <= 0 or p is not finite.
double s5(double k, Point p);
double p5(double k, Point p);
double s2(double k, Point p);

Vec2 grad_s5(double k, Point p);
SymMat2 hess_s5(double k, Point p);
Vec2 grad_s2(double k, Point p);
SymMat2 hess_s2(double k, Point p);

/// Largest n accepted by fib().
inline constexpr int kMaxFibIndex = 91;

/// Fibonacci numbers with the shifted indexing F_0 = 1, F_1 = 1, F_2 = 2, ...
/// This is the common sequence advanced by one: fib(n) == F_{n+1} in the
/// F_0 = 0 convention. Throws std::out_of_range outside [0, kMaxFibIndex].
std::int64_t fib(int n);

/// Binet form (tau^(n+1) - (-1/tau)^(n+1)) / sqrt(5) in floating point.
double fib_closed_form(int n);

struct SeriesSpec {
  double k = 1.0;  // wavenumber, > 0
  int terms = 0;   // retained terms n = 0 .. terms-1
};

/// 16 * sum_{n<N} (-1)^n F_n p5(k / (2 tau^(n+1)), p), summed from the
/// smallest term upward.
double series_partial(const SeriesSpec& spec, Point p);

/// Single series term (-1)^n F_n p5(k / (2 tau^(n+1)), p), without the 16.
double series_term(double k, int n, Point p);

struct TailBound {
  double radius = 0.0;
  double C = 0.0;             // (1/sqrt 5) (k radius / 2)^5
  double raw_bound = 0.0;     // bound on the unscaled series tail from n = N
  double scaled_bound = 0.0;  // 16 * raw_bound, bounds |s5 - series_partial|
};

/// Closed-form tail bound valid for every point with |p| <= radius.
TailBound tail_bound(double k, double radius, int terms);

/// Smallest N with tail_bound(k, radius, N).scaled_bound <= eps.
int terms_for_tolerance(double k, double radius, double eps);

}  // namespace pentawave
