#include "pentawave/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "pentawave/errors.hpp"
#include "pentawave/wavefield.hpp"

namespace pentawave {

namespace {

bool lex_less(Point a, Point b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); }

// Domain grown by one seed pitch; Newton iterates outside it are abandoned.
bool in_halo(const SearchConfig& cfg, Point p) {
  const double h = cfg.seed_spacing;
  if (cfg.window) {
    const Window& w = *cfg.window;
    return p.x >= w.xmin - h && p.x <= w.xmax + h && p.y >= w.ymin - h && p.y <= w.ymax + h;
  }
  return norm(p) <= cfg.radius + h;
}

std::vector<Point> seed_lattice(const SearchConfig& cfg) {
  const double h = cfg.seed_spacing;
  Window box = cfg.window ? *cfg.window : Window::square(cfg.radius);
  const auto lo_x = static_cast<long>(std::ceil(box.xmin / h));
  const auto hi_x = static_cast<long>(std::floor(box.xmax / h));
  const auto lo_y = static_cast<long>(std::ceil(box.ymin / h));
  const auto hi_y = static_cast<long>(std::floor(box.ymax / h));
  std::vector<Point> seeds;
  for (long j = lo_y; j <= hi_y; ++j) {
    for (long i = lo_x; i <= hi_x; ++i) {
      const Point p{i * h, j * h};
      if (cfg.contains(p)) seeds.push_back(p);
    }
  }
  return seeds;
}

// Solves H d = -g; nullopt when H is too close to singular.
std::optional<Vec2> newton_step(const SymMat2& h, Vec2 g, double det_floor) {
  const double det = h.det();
  if (std::abs(det) < det_floor) return std::nullopt;
  return Vec2{-(h.yy * g.x - h.xy * g.y) / det, -(-h.xy * g.x + h.xx * g.y) / det};
}

}  // namespace

ScalarField s5_field(double k) {
  return {[k](Point p) { return s5(k, p); }, [k](Point p) { return grad_s5(k, p); },
          [k](Point p) { return hess_s5(k, p); }};
}

ScalarField s2_field(double k) {
  return {[k](Point p) { return s2(k, p); }, [k](Point p) { return grad_s2(k, p); },
          [k](Point p) { return hess_s2(k, p); }};
}

std::string_view to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::degenerate: return "degenerate";
  }
  return "degenerate";
}

SearchConfig SearchConfig::defaults(double k, double radius) {
  SearchConfig cfg;
  cfg.radius = radius;
  cfg.seed_spacing = kPi / (4.0 * k);
  cfg.dedupe_radius = 0.25 * cfg.seed_spacing;
  cfg.eig_degenerate_tol = 1e-8 * k * k;
  return cfg;
}

void SearchConfig::validate(double k) const {
  if (!(k > 0.0)) throw ConfigError("wavenumber must be > 0");
  if (window) {
    if (!(window->xmin <= window->xmax && window->ymin <= window->ymax)) {
      throw ConfigError("search window is empty");
    }
  } else if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ConfigError("search radius must be finite and >= 0");
  }
  if (!(seed_spacing > 0.0) || seed_spacing > kPi / (2.0 * k) * (1.0 + 1e-12)) {
    throw ConfigError("seed_spacing must be in (0, pi/(2k)]");
  }
  if (!(dedupe_radius > 0.0) || !(dedupe_radius < seed_spacing)) {
    throw ConfigError("dedupe_radius must be in (0, seed_spacing)");
  }
  if (!(grad_tol > 0.0) || !(eig_degenerate_tol > 0.0)) {
    throw ConfigError("tolerances must be > 0");
  }
  if (max_newton_steps < 1) throw ConfigError("max_newton_steps must be >= 1");
}

bool SearchConfig::contains(Point p) const {
  return window ? window->contains(p) : norm(p) <= radius;
}

std::optional<Point> newton_refine(const ScalarField& field, Point seed, const SearchConfig& cfg) {
  if (!is_finite(seed)) return std::nullopt;
  const double det_floor = cfg.eig_degenerate_tol * cfg.eig_degenerate_tol;
  const double fallback_len = 0.1 * cfg.seed_spacing;

  Point x = seed;
  for (int step = 0; step <= cfg.max_newton_steps; ++step) {
    const Vec2 g = field.gradient(x);
    const double gn = norm(g);
    if (!std::isfinite(gn)) return std::nullopt;
    if (gn <= cfg.grad_tol) {
      // One polishing step; kept only if it does not make things worse.
      if (auto d = newton_step(field.hessian(x), g, det_floor)) {
        const Point y = x + *d;
        if (is_finite(y) && norm(field.gradient(y)) <= gn) return y;
      }
      return x;
    }
    if (step == cfg.max_newton_steps) break;

    if (auto d = newton_step(field.hessian(x), g, det_floor)) {
      Vec2 dx = *d;
      const double len = norm(dx);
      if (len > cfg.seed_spacing) dx = (cfg.seed_spacing / len) * dx;
      x = x + dx;
    } else {
      const Vec2 dir = (1.0 / gn) * g;
      const Point up = x + fallback_len * dir;
      const Point down = x - fallback_len * dir;
      x = norm(field.gradient(up)) < norm(field.gradient(down)) ? up : down;
    }
    if (!is_finite(x) || !in_halo(cfg, x)) return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Point> newton_refine(double k, Point seed, const SearchConfig& cfg) {
  return newton_refine(s5_field(k), seed, cfg);
}

Classification classify(const ScalarField& field, Point location, const SearchConfig& cfg) {
  Classification c;
  c.eigenvalues = field.hessian(location).eigenvalues();
  const double tol = cfg.eig_degenerate_tol;
  const auto [lo, hi] = c.eigenvalues;
  if (hi < -tol) {
    c.kind = CriticalKind::maximum;
  } else if (lo > tol) {
    c.kind = CriticalKind::minimum;
  } else if (lo < -tol && hi > tol) {
    c.kind = CriticalKind::saddle;
  } else {
    c.kind = CriticalKind::degenerate;
  }
  return c;
}

Classification classify(double k, Point location, const SearchConfig& cfg) {
  return classify(s5_field(k), location, cfg);
}

std::vector<CriticalPoint> find_critical_points(const ScalarField& field,
                                                const SearchConfig& cfg) {
  struct Candidate {
    Point location;
    double grad_norm;
  };
  std::vector<Candidate> found;
  for (const Point& seed : seed_lattice(cfg)) {
    const auto x = newton_refine(field, seed, cfg);
    if (!x || !cfg.contains(*x)) continue;
    const double gn = norm(field.gradient(*x));
    if (gn > cfg.grad_tol) continue;
    found.push_back({*x, gn});
  }

  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
    return lex_less(a.location, b.location);
  });

  std::vector<CriticalPoint> kept;
  for (const auto& cand : found) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const CriticalPoint& cp) {
      return distance(cp.location, cand.location) < cfg.dedupe_radius;
    });
    if (dup) continue;
    const auto cls = classify(field, cand.location, cfg);
    kept.push_back({cand.location, field.value(cand.location), cls.kind, cls.eigenvalues,
                    cand.grad_norm});
  }

  std::sort(kept.begin(), kept.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return lex_less(a.location, b.location);
  });
  return kept;
}

std::vector<CriticalPoint> find_critical_points(double k, const SearchConfig& cfg) {
  cfg.validate(k);
  return find_critical_points(s5_field(k), cfg);
}

std::vector<CriticalPoint> s2_oracle(double k, Window window) {
  if (!(k > 0.0)) throw ConfigError("wavenumber must be > 0");
  // Critical coordinates (2a+1) pi / 2k lying inside [lo, hi].
  const auto indices = [k](double lo, double hi) {
    const auto first = static_cast<long>(std::ceil((2.0 * k * lo / kPi - 1.0) / 2.0));
    const auto last = static_cast<long>(std::floor((2.0 * k * hi / kPi - 1.0) / 2.0));
    std::vector<long> out;
    for (long a = first; a <= last; ++a) out.push_back(a);
    return out;
  };
  // sin(k x) at x = (2a+1) pi / 2k is +1 for even a, -1 for odd a.
  const auto sine_sign = [](long a) { return (a % 2 == 0) ? 1 : -1; };

  std::vector<CriticalPoint> pts;
  for (long a : indices(window.xmin, window.xmax)) {
    for (long b : indices(window.ymin, window.ymax)) {
      const int sx = sine_sign(a);
      const int sy = sine_sign(b);
      CriticalPoint cp;
      cp.location = {(2 * a + 1) * kPi / (2.0 * k), (2 * b + 1) * kPi / (2.0 * k)};
      cp.value = sx + sy;
      const double ex = -k * k * sx;
      const double ey = -k * k * sy;
      cp.eigenvalues = {std::min(ex, ey), std::max(ex, ey)};
      if (sx > 0 && sy > 0) {
        cp.kind = CriticalKind::maximum;
      } else if (sx < 0 && sy < 0) {
        cp.kind = CriticalKind::minimum;
      } else {
        cp.kind = CriticalKind::saddle;
      }
      pts.push_back(cp);
    }
  }
  std::sort(pts.begin(), pts.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return lex_less(a.location, b.location);
  });
  return pts;
}

bool is_extremum(const CriticalPoint& cp) {
  return cp.kind == CriticalKind::maximum || cp.kind == CriticalKind::minimum;
}

}  // namespace pentawave
