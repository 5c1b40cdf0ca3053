#include "pentawave/wavefield.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pentawave/errors.hpp"

namespace pentawave {

namespace {

// Above this index the products F_n tau^-(n+1) are taken from the Binet form
// rather than the exact integer recurrence.
constexpr int kExactFibLimit = 70;
constexpr int kMaxSeriesTerms = 1000;

void check_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ConfigError("wavenumber must be finite and > 0, got " + std::to_string(k));
  }
}

DirectionBasis make_basis() {
  DirectionBasis e;
  for (int i = 0; i < 5; ++i) {
    const double angle = 2.0 * kPi * i / 5.0;
    e[i] = {std::cos(angle), std::sin(angle)};
  }
  return e;
}

double sine_product(double k, const ProjectionSet& a) {
  double prod = 1.0;
  for (double ai : a) prod *= std::sin(k * ai);
  return prod;
}

}  // namespace

const DirectionBasis& direction_basis() {
  static const DirectionBasis basis = make_basis();
  return basis;
}

ProjectionSet project(Point p) {
  if (!is_finite(p)) throw ConfigError("point coordinates must be finite");
  const auto& e = direction_basis();
  ProjectionSet a;
  for (int i = 0; i < 5; ++i) a[i] = dot(p, e[i]);
  return a;
}

double s5(double k, Point p) {
  check_wavenumber(k);
  double sum = 0.0;
  for (double ai : project(p)) sum += std::sin(k * ai);
  return sum;
}

double p5(double k, Point p) {
  check_wavenumber(k);
  return sine_product(k, project(p));
}

double s2(double k, Point p) {
  check_wavenumber(k);
  if (!is_finite(p)) throw ConfigError("point coordinates must be finite");
  return std::sin(k * p.x) + std::sin(k * p.y);
}

Vec2 grad_s5(double k, Point p) {
  check_wavenumber(k);
  const auto& e = direction_basis();
  const auto a = project(p);
  Vec2 g;
  for (int i = 0; i < 5; ++i) g += (k * std::cos(k * a[i])) * e[i];
  return g;
}

SymMat2 hess_s5(double k, Point p) {
  check_wavenumber(k);
  const auto& e = direction_basis();
  const auto a = project(p);
  SymMat2 h;
  for (int i = 0; i < 5; ++i) {
    const double w = -k * k * std::sin(k * a[i]);
    h.xx += w * e[i].x * e[i].x;
    h.xy += w * e[i].x * e[i].y;
    h.yy += w * e[i].y * e[i].y;
  }
  return h;
}

Vec2 grad_s2(double k, Point p) {
  check_wavenumber(k);
  if (!is_finite(p)) throw ConfigError("point coordinates must be finite");
  return {k * std::cos(k * p.x), k * std::cos(k * p.y)};
}

SymMat2 hess_s2(double k, Point p) {
  check_wavenumber(k);
  if (!is_finite(p)) throw ConfigError("point coordinates must be finite");
  return {-k * k * std::sin(k * p.x), 0.0, -k * k * std::sin(k * p.y)};
}

std::int64_t fib(int n) {
  if (n < 0 || n > kMaxFibIndex) {
    throw std::out_of_range("fib index " + std::to_string(n) + " outside [0, " +
                            std::to_string(kMaxFibIndex) + "]");
  }
  std::int64_t prev = 1;  // F_0
  std::int64_t cur = 1;   // F_1
  if (n == 0) return prev;
  for (int i = 2; i <= n; ++i) {
    const std::int64_t next = prev + cur;
    prev = cur;
    cur = next;
  }
  return cur;
}

double fib_closed_form(int n) {
  const double m = static_cast<double>(n + 1);
  return (std::pow(kTau, m) - std::pow(-kInvTau, m)) / kSqrt5;
}

double series_term(double k, int n, Point p) {
  check_wavenumber(k);
  const double fn = n <= kExactFibLimit ? static_cast<double>(fib(n)) : fib_closed_form(n);
  const double wavenumber = k / (2.0 * std::pow(kTau, n + 1));
  const double term = fn * sine_product(wavenumber, project(p));
  return (n % 2 == 0) ? term : -term;
}

double series_partial(const SeriesSpec& spec, Point p) {
  check_wavenumber(spec.k);
  if (spec.terms < 0 || spec.terms > kMaxSeriesTerms) {
    throw ConfigError("series terms must be in [0, " + std::to_string(kMaxSeriesTerms) + "]");
  }
  double sum = 0.0;
  for (int n = spec.terms - 1; n >= 0; --n) sum += series_term(spec.k, n, p);
  return 16.0 * sum;
}

TailBound tail_bound(double k, double radius, int terms) {
  check_wavenumber(k);
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ConfigError("radius must be finite and >= 0");
  }
  if (terms < 0) throw ConfigError("terms must be >= 0");

  TailBound tb;
  tb.radius = radius;
  tb.C = std::pow(k * radius / 2.0, 5) / kSqrt5;
  if (!std::isfinite(tb.C)) throw ConfigError("k * radius too large for the tail bound");

  const double n = static_cast<double>(terms);
  const double q4 = std::pow(kInvTau, 4);
  const double q5 = std::pow(kInvTau, 5);
  const double geometric4 = std::pow(kInvTau, 4.0 * n + 4.0) / (1.0 - q4);
  const double geometric5 = std::pow(kInvTau, 5.0 * n + 5.0) / (1.0 - q5);
  tb.raw_bound = tb.C * (geometric4 + geometric5);
  tb.scaled_bound = 16.0 * tb.raw_bound;
  return tb;
}

int terms_for_tolerance(double k, double radius, double eps) {
  if (!(eps > 0.0)) throw ConfigError("tolerance must be > 0");
  for (int n = 0; n <= kMaxSeriesTerms; ++n) {
    if (tail_bound(k, radius, n).scaled_bound <= eps) return n;
  }
  throw ConfigError("tolerance not reachable within " + std::to_string(kMaxSeriesTerms) +
                    " terms");
}

}  // namespace pentawave
