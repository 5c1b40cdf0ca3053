#pragma once

// Residual checks for the trigonometric identities behind the product series.
// Each residual is zero in exact arithmetic.

#include <array>
#include <cstdint>
#include <vector>

#include "pentawave/geometry.hpp"

namespace pentawave {

/// One term of the 16-term sine expansion: coeff * sin(k * sum_i sign_i a_i).
struct ExpansionTerm {
  std::array<int, 5> signs;
  int coeff;
};

/// Terms generated from the subsets of {0..4} of size <= 2 whose members are
/// flipped; coefficient (-1)^|subset|.
std::vector<ExpansionTerm> expansion_terms_generated();

/// The same 16 terms in the order they are usually written out by hand.
const std::vector<ExpansionTerm>& expansion_terms_table();

/// Signed sum of the 16 sines; equals 16 * p5(k, p).
double expansion_lhs(double k, Point p);

/// s5(2k) + s5(2k tau) - s5(2k / tau) - 16 p5(k).
double functional_residual(double k, Point p);

/// [0]: sum a_i; [1..5]: a_i + a_{i+1} + tau a_{i+3}; [6..10]: a_i + a_{i+2} - a_{i+1} / tau.
std::array<double, 11> direction_sum_residuals(Point p);

/// sin(kx) + sin(ky) - 2 sin(k(x+y)/2) cos(k(x-y)/2).
double two_wave_residual(double k, Point p);

struct KRange {
  double lo = 0.1;
  double hi = 10.0;
};

struct ResidualReport {
  double max_abs_residual = 0.0;
  // max over points of |residual| / (1 + k|p|)^5
  double max_scaled_residual = 0.0;
  double max_expansion = 0.0;
  double max_functional = 0.0;
  double max_direction_sum = 0.0;
  double max_two_wave = 0.0;
  std::int64_t num_points = 0;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const ResidualReport&, const ResidualReport&) = default;
};

/// Samples points uniformly in the disk of the given radius and k uniformly
/// in k_range, then records the largest residual of every identity above.
ResidualReport run_identity_suite(std::int64_t num_points, std::uint64_t seed, KRange k_range,
                                  double radius);

}  // namespace pentawave
