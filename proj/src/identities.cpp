#include "pentawave/identities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "pentawave/errors.hpp"
#include "pentawave/wavefield.hpp"

namespace pentawave {

namespace {

constexpr std::array<int, 5> flip(std::initializer_list<int> idx) {
  std::array<int, 5> s{1, 1, 1, 1, 1};
  for (int i : idx) s[i] = -1;
  return s;
}

}  // namespace

std::vector<ExpansionTerm> expansion_terms_generated() {
  std::vector<ExpansionTerm> terms;
  for (unsigned mask = 0; mask < 32; ++mask) {
    const int flips = std::popcount(mask);
    if (flips > 2) continue;
    ExpansionTerm t{{1, 1, 1, 1, 1}, flips % 2 == 0 ? 1 : -1};
    for (int i = 0; i < 5; ++i) {
      if (mask & (1u << i)) t.signs[i] = -1;
    }
    terms.push_back(t);
  }
  return terms;
}

const std::vector<ExpansionTerm>& expansion_terms_table() {
  // All-plus term, then the five single flips, then the ten double flips
  // (adjacent pairs first, then pairs two apart).
  static const std::vector<ExpansionTerm> table = {
      {flip({}), +1},
      {flip({0}), -1},    {flip({1}), -1},    {flip({2}), -1},
      {flip({3}), -1},    {flip({4}), -1},
      {flip({0, 1}), +1}, {flip({1, 2}), +1}, {flip({2, 3}), +1},
      {flip({3, 4}), +1}, {flip({0, 4}), +1},
      {flip({0, 2}), +1}, {flip({1, 3}), +1}, {flip({2, 4}), +1},
      {flip({0, 3}), +1}, {flip({1, 4}), +1},
  };
  return table;
}

double expansion_lhs(double k, Point p) {
  if (!(k > 0.0)) throw ConfigError("wavenumber must be > 0");
  const auto a = project(p);
  double sum = 0.0;
  for (const auto& t : expansion_terms_table()) {
    double arg = 0.0;
    for (int i = 0; i < 5; ++i) arg += t.signs[i] * a[i];
    sum += t.coeff * std::sin(k * arg);
  }
  return sum;
}

double functional_residual(double k, Point p) {
  return s5(2.0 * k, p) + s5(2.0 * k * kTau, p) - s5(2.0 * k / kTau, p) - 16.0 * p5(k, p);
}

std::array<double, 11> direction_sum_residuals(Point p) {
  const auto a = project(p);
  std::array<double, 11> r{};
  r[0] = a[0] + a[1] + a[2] + a[3] + a[4];
  for (int i = 0; i < 5; ++i) {
    r[1 + i] = a[i] + a[(i + 1) % 5] + kTau * a[(i + 3) % 5];
    r[6 + i] = a[i] + a[(i + 2) % 5] - a[(i + 1) % 5] / kTau;
  }
  return r;
}

double two_wave_residual(double k, Point p) {
  const double rhs = 2.0 * std::sin(k * (p.x + p.y) / 2.0) * std::cos(k * (p.x - p.y) / 2.0);
  return s2(k, p) - rhs;
}

ResidualReport run_identity_suite(std::int64_t num_points, std::uint64_t seed, KRange k_range,
                                  double radius) {
  if (num_points < 1) throw ConfigError("identity suite needs at least one point");
  if (!(k_range.lo <= k_range.hi)) throw ConfigError("empty wavenumber range");
  if (!(k_range.lo > 0.0)) throw ConfigError("wavenumber range must be positive");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ConfigError("radius must be >= 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ResidualReport rep;
  rep.num_points = num_points;
  rep.rng_seed = seed;

  for (std::int64_t n = 0; n < num_points; ++n) {
    const double rr = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * kPi * unit(rng);
    const double k = k_range.lo + (k_range.hi - k_range.lo) * unit(rng);
    const Point p{rr * std::cos(theta), rr * std::sin(theta)};
    const double scale = std::pow(1.0 + k * norm(p), 5);

    const double expansion = std::abs(expansion_lhs(k, p) - 16.0 * p5(k, p));
    const double functional = std::abs(functional_residual(k, p));
    double dsum = 0.0;
    for (double r : direction_sum_residuals(p)) dsum = std::max(dsum, std::abs(r));
    const double two_wave = std::abs(two_wave_residual(k, p));

    rep.max_expansion = std::max(rep.max_expansion, expansion);
    rep.max_functional = std::max(rep.max_functional, functional);
    rep.max_direction_sum = std::max(rep.max_direction_sum, dsum);
    rep.max_two_wave = std::max(rep.max_two_wave, two_wave);
    const double worst = std::max({expansion, functional, dsum, two_wave});
    rep.max_abs_residual = std::max(rep.max_abs_residual, worst);
    rep.max_scaled_residual = std::max(rep.max_scaled_residual, worst / scale);
  }
  return rep;
}

}  // namespace pentawave
