#include "degen/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degen/errors.hpp"

namespace degen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  double m = std::max(x, y);
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

// D(u) = F(u) - Lambda >= 0 for 0 <= u <= turning abscissa
double turn_D(const Geometry& g, const Turn& T, double u) {
  if (u == 0.0) return kInf;
  double D = g.Fdiff(u, T.anchor) + T.delta;
  if (D < 0.0) {
    if (D > -1e-12 * (1.0 + std::fabs(g.F(T.anchor)))) return 0.0;
    throw DomainError("geodesic: point beyond the turning abscissa");
  }
  return D;
}

// Integral over [lo, hi] with 0 <= lo <= hi, substituting u = hi - s^2.
// Height/Gap are scaled by 1/v(hi); the caller adds log v(hi).
double part_integral(const Geometry& g, const Turn& T, double lo, double hi, GeoKind kind,
                     const QuadratureSpec& q) {
  if (hi <= lo) return 0.0;
  double Dhi = turn_D(g, T, hi);
  bool singular = (Dhi == 0.0);
  if (singular && kind == GeoKind::Inner) throw DomainError("geodesic: inner kernel diverges at the turning point");
  double limit = 0.0;
  if (singular) {
    double base = 2.0 / std::sqrt(2.0 * g.absFp(hi));
    if (kind == GeoKind::Curv) base *= g.Fpp(hi) / (g.Fp(hi) * g.Fp(hi));
    limit = base;
  }
  const double off = hi - T.anchor;  // <= 0
  auto fn = [&](double s) -> double {
    double s2 = s * s;
    double u = hi - s2;
    if (u <= 0.0) u = 0.0;
    double D = (u == 0.0) ? kInf : g.Fstep(T.anchor, off - s2) + T.delta;
    if (D < 0.0) D = 0.0;
    double om = -std::expm1(-2.0 * D);
    if (!(om > 0.0)) return limit;
    double rs = std::sqrt(om);
    switch (kind) {
      case GeoKind::Arc:
        return 2.0 * s / rs;
      case GeoKind::Height: {
        double vs = (u == 0.0) ? 0.0 : std::exp(-2.0 * g.Fstep(hi, -s2));
        return 2.0 * s * vs / rs;
      }
      case GeoKind::Gap: {
        double vs = (u == 0.0) ? 0.0 : std::exp(-2.0 * g.Fstep(hi, -s2));
        return 2.0 * s * vs / (rs * (1.0 + rs));
      }
      case GeoKind::Inner: {
        double v = std::exp(-2.0 * D);
        return 2.0 * s * v / (om * rs);
      }
      case GeoKind::Curv: {
        if (u < 1e-200) return 0.0;
        double p = g.Fp(u);
        double c = g.Fpp(u) / (p * p);
        if (!std::isfinite(c)) return 0.0;
        return 2.0 * s * c / rs;
      }
    }
    return 0.0;
  };
  return integrate_gk(fn, 0.0, std::sqrt(hi - lo), q);
}

void check_columns(double a, double b) {
  if (b < 0.0) throw DomainError("geodesic: upper column must be >= 0");
  if (a > b) throw DomainError("geodesic: need a <= b");
}

}  // namespace

QuadratureSpec geodesic_quadrature() {
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-11;
  q.max_subdivisions = 30;
  return q;
}

double geo_log_integral(const Geometry& g, const Turn& T, double a, double b, GeoKind kind, const QuadratureSpec& q) {
  if (kind != GeoKind::Height && kind != GeoKind::Gap) throw DomainError("geo_log_integral: positive kernels only");
  check_columns(a, b);
  auto part = [&](double lo, double hi) {
    if (hi <= lo || hi == 0.0) return -kInf;
    double val = part_integral(g, T, lo, hi, kind, q);
    if (!(val > 0.0)) return -kInf;
    return -2.0 * turn_D(g, T, hi) + std::log(val);
  };
  if (a >= 0.0) return part(a, b);
  return logsumexp(part(0.0, -a), part(0.0, b));
}

double geo_integral(const Geometry& g, const Turn& T, double a, double b, GeoKind kind, const QuadratureSpec& q) {
  check_columns(a, b);
  if (a == b) return 0.0;
  switch (kind) {
    case GeoKind::Height:
    case GeoKind::Gap:
      return std::exp(geo_log_integral(g, T, a, b, kind, q));
    case GeoKind::Arc:
      return (b - a) + std::exp(geo_log_integral(g, T, a, b, GeoKind::Gap, q));
    default:
      break;
  }
  if (a >= 0.0) return part_integral(g, T, a, b, kind, q);
  return part_integral(g, T, 0.0, -a, kind, q) + part_integral(g, T, 0.0, b, kind, q);
}

namespace {
Turn turn_for_lambda(const Geometry& g, double lambda, double x) {
  if (!(lambda > 0.0)) throw DomainError("geodesic: lambda must be positive");
  double L = -std::log(lambda);
  if (g.F(x) < L) throw DomainError("geodesic: f(x) > lambda");
  double Rc = g.R() * (1.0 - 1e-12);
  if (L > g.F(Rc)) return Turn::at(g.Finv(L));
  return Turn{x, g.F(x) - L};
}
}  // namespace

double geodesic_height(const Geometry& g, double lambda, double x) {
  if (!(x > 0.0)) throw DomainError("geodesic_height: x must be positive");
  Turn T = turn_for_lambda(g, lambda, x);
  return lambda * std::exp(geo_log_integral(g, T, 0.0, std::min(x, T.anchor), GeoKind::Height));
}

double arc_length(const Geometry& g, double lambda, double x) {
  if (!(x > 0.0)) throw DomainError("arc_length: x must be positive");
  Turn T = turn_for_lambda(g, lambda, x);
  return geo_integral(g, T, 0.0, std::min(x, T.anchor), GeoKind::Arc);
}

GeodesicRecord turning_data(const Geometry& g, double lambda, int nsamples) {
  double Rc = g.R() * (1.0 - 1e-12);
  if (!(lambda > 0.0 && lambda < g.f(Rc))) throw DomainError("turning_data: lambda out of range");
  if (nsamples < 1) throw DomainError("turning_data: nsamples >= 1");
  GeodesicRecord rec;
  rec.lambda = lambda;
  rec.X = g.Finv(-std::log(lambda));
  Turn T = Turn::at(rec.X);
  rec.Y = lambda * std::exp(geo_log_integral(g, T, 0.0, rec.X, GeoKind::Height));
  rec.R_len = geo_integral(g, T, 0.0, rec.X, GeoKind::Arc);
  rec.Y_prime = geo_integral(g, T, 0.0, rec.X, GeoKind::Curv);
  double hstep = 1e-4;
  auto Yof = [&](double lam) {
    double X = g.Finv(-std::log(lam));
    return lam * std::exp(geo_log_integral(g, Turn::at(X), 0.0, X, GeoKind::Height));
  };
  double lp = lambda * (1 + hstep), lm = lambda * (1 - hstep);
  if (lp < g.f(Rc)) rec.Y_prime_fd = (Yof(lp) - Yof(lm)) / (lp - lm);
  else rec.Y_prime_fd = std::numeric_limits<double>::quiet_NaN();

  rec.samples.push_back({0.0, 0.0, 0.0});
  double y = 0.0, t = 0.0, prev = 0.0;
  for (int j = 1; j <= nsamples; ++j) {
    double s = 1.0 - static_cast<double>(j) / nsamples;
    double x = (j == nsamples) ? rec.X : rec.X * (1.0 - s * s);
    y += lambda * std::exp(geo_log_integral(g, T, prev, x, GeoKind::Height));
    t += geo_integral(g, T, prev, x, GeoKind::Arc);
    rec.samples.push_back({x, y, t});
    prev = x;
  }
  return rec;
}

BallShape ball_shape(const Geometry& g, double x1, double r) {
  if (!(x1 >= 0.0) || !(r > 0.0)) throw DomainError("ball_shape: need x1 >= 0, r > 0");
  if (!(x1 + r < g.R())) throw DomainError("ball_shape: x1 + r must be < R");
  auto gap_at = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    double X = x1 + rho;
    return std::exp(geo_log_integral(g, Turn::at(X), x1, X, GeoKind::Gap));
  };
  auto G = [&](double rho) { return rho + gap_at(rho) - r; };
  double rho;
  try {
    rho = find_root(G, 0.0, r, 1e-15);
  } catch (const BracketError&) {
    throw NonConvergence("ball_shape: shooting bracket failed");
  }
  BallShape s;
  s.x1 = x1;
  s.r = r;
  s.r_star = rho;
  double X = x1 + rho;
  Turn T = Turn::at(X);
  double lg = geo_log_integral(g, T, x1, X, GeoKind::Gap);
  double ly = geo_log_integral(g, T, x1, X, GeoKind::Height);
  s.gap = std::exp(lg);
  s.log_h = -g.F(X) + ly;
  s.h = std::exp(s.log_h);
  s.height_ratio = std::exp(ly - lg);
  return s;
}

double log_h_star(const Geometry& g, double x1, double t) {
  if (!(x1 >= 0.0) || !(t > 0.0)) throw DomainError("h_star: need x1 >= 0, t > 0");
  if (!(x1 + t < g.R())) throw DomainError("h_star: x1 + t must be < R");
  double X = x1 + t;
  return -g.F(X) + geo_log_integral(g, Turn::at(X), x1, X, GeoKind::Height);
}

double h_star(const Geometry& g, double x1, double t) { return std::exp(log_h_star(g, x1, t)); }

const char* to_string(DistanceKind k) {
  switch (k) {
    case DistanceKind::Horizontal: return "horizontal";
    case DistanceKind::Region1: return "region1";
    case DistanceKind::Region2: return "region2";
    case DistanceKind::UpperBoundOnly: return "upper_bound_only";
  }
  return "?";
}

namespace twocol {

std::array<double, 2> reduce(double c1, double c2) {
  double a = c1, b = c2;
  if (std::fabs(a) > std::fabs(b)) std::swap(a, b);
  if (b < 0.0) {
    a = -a;
    b = -b;
  }
  return {a, b};
}

double r1_gap(const Geometry& g, double a, double b, double delta) {
  return std::exp(geo_log_integral(g, Turn{b, delta}, a, b, GeoKind::Gap));
}

double r1_log_height(const Geometry& g, double a, double b, double delta) {
  return -g.F(b) + delta + geo_log_integral(g, Turn{b, delta}, a, b, GeoKind::Height);
}

double r2_length(const Geometry& g, double a, double b, double X) {
  Turn T = Turn::at(X);
  double ga = std::exp(geo_log_integral(g, T, a, X, GeoKind::Gap));
  double gb = std::exp(geo_log_integral(g, T, b, X, GeoKind::Gap));
  return (X - a) + (X - b) + ga + gb;
}

double r2_log_height(const Geometry& g, double a, double b, double X) {
  Turn T = Turn::at(X);
  return -g.F(X) + logsumexp(geo_log_integral(g, T, a, X, GeoKind::Height),
                             geo_log_integral(g, T, b, X, GeoKind::Height));
}

}  // namespace twocol

namespace {

double upper_cap(const Geometry& g) { return g.R() * (1.0 - 1e-9); }

// smallest delta >= 0 with h(delta) <= 0, h decreasing
double solve_delta(const std::function<double(double)>& h) {
  double hi = 1.0;
  int guard = 0;
  while (h(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 60) throw NonConvergence("distance: delta bracket expansion failed");
  }
  return find_root(h, 0.0, hi, 1e-14);
}

double taxicab(const Geometry& g, double a, double b, double lnT) {
  double hi = upper_cap(g);
  auto cost = [&](double x) { return 2.0 * x - a - b + std::exp(lnT + g.F(x)); };
  const int n = 256;
  double best = cost(std::max(b, 1e-300));
  int bi = 0;
  std::vector<double> xs(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = b + (hi - b) * i / n;
    if (xs[i] <= 0.0) continue;
    double c = cost(xs[i]);
    if (c < best) {
      best = c;
      bi = i;
    }
  }
  double lo = xs[std::max(bi - 1, 0)], up = xs[std::min(bi + 1, n)];
  lo = std::max(lo, 1e-300);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    double m1 = up - gr * (up - lo), m2 = lo + gr * (up - lo);
    if (cost(m1) < cost(m2)) up = m2;
    else lo = m1;
  }
  return std::min(best, cost(0.5 * (lo + up)));
}

double vertical_lower(const Geometry& g, double b, double lnT, double upper) {
  double cap = upper_cap(g);
  auto h = [&](double ell) {
    double L = std::exp(ell);
    double x = std::min(b + L, cap);
    return ell - g.F(x) - lnT;
  };
  double lo = -700.0, hi = std::log(upper) + 1e-12;
  if (h(lo) >= 0.0) return 0.0;
  if (h(hi) <= 0.0) return upper;
  return std::exp(find_root(h, lo, hi, 1e-12));
}

}  // namespace

DistanceResult control_distance_2d(const Geometry& g, Point2 p, Point2 q) {
  double dy = std::fabs(q.x2 - p.x2);
  return control_distance_2d_log(g, p.x1, q.x1, dy == 0.0 ? -kInf : std::log(dy));
}

DistanceResult control_distance_2d_log(const Geometry& g, double p1, double q1, double lnT) {
  if (!(std::fabs(p1) < g.R() && std::fabs(q1) < g.R())) throw DomainError("distance: abscissa outside (-R,R)");
  if (std::isnan(lnT)) throw DomainError("distance: log height is NaN");
  auto [a, b] = twocol::reduce(p1, q1);
  DistanceResult res;
  if (lnT == -kInf) {
    res.d = res.lower_bound = res.upper_bound = b - a;
    res.kind = DistanceKind::Horizontal;
    return res;
  }
  res.upper_bound = taxicab(g, a, b, lnT);
  res.lower_bound = std::max(b - a, vertical_lower(g, b, lnT, res.upper_bound));

  if (b > 0.0 && twocol::r1_log_height(g, a, b, 0.0) >= lnT) {
    double delta = solve_delta([&](double dl) { return twocol::r1_log_height(g, a, b, dl) - lnT; });
    res.kind = DistanceKind::Region1;
    res.turn_X = b;
    res.turn_delta = delta;
    res.d = (b - a) + twocol::r1_gap(g, a, b, delta);
    return res;
  }
  double cap = upper_cap(g);
  auto psi = [&](double X) { return twocol::r2_log_height(g, a, b, X) - lnT; };
  if (psi(cap) < 0.0) {
    res.kind = DistanceKind::UpperBoundOnly;
    res.d = res.upper_bound;
    return res;
  }
  double lo = b;
  if (lo == 0.0) {
    lo = 1e-3 * cap;
    while (psi(lo) >= 0.0) lo *= 0.5;
  } else if (a == b) {
    // same column: zero height at X = b, so step inside the bracket
    double step = 1e-3 * (cap - b);
    while (psi(b + step) >= 0.0) step *= 0.5;
    lo = b + step;
  }
  double X = find_root(psi, lo, cap, 1e-14);
  res.kind = DistanceKind::Region2;
  res.turn_X = X;
  res.d = twocol::r2_length(g, a, b, X);
  return res;
}

double control_distance_nd(const Geometry& g, const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("distance_nd: dimension mismatch");
  if (p.size() < 3) throw DomainError("distance_nd: n >= 3 required");
  std::size_t n = p.size();
  double d2 = control_distance_2d(g, {p[0], p[n - 1]}, {q[0], q[n - 1]}).d;
  double e2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) e2 += (p[i] - q[i]) * (p[i] - q[i]);
  return std::sqrt(d2 * d2 + e2);
}

DHat d_hat(const Geometry& g, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("d_hat: bad points");
  DHat out;
  out.d = x.size() == 2 ? control_distance_2d(g, {x[0], x[1]}, {y[0], y[1]}).d : control_distance_nd(g, x, y);
  double x1 = std::fabs(x[0]);
  out.d_hat = std::min(out.d, 1.0 / g.absFp(x1 + out.d));
  if (out.d > 0.0) {
    BallShape s = ball_shape(g, x1, out.d);
    out.d_star = s.r_star;
    out.ratio = out.d_hat / s.gap;
  }
  return out;
}

double ball_column_log_height(const Geometry& g, double x1, double r, double u) {
  auto [a, b] = twocol::reduce(x1, u);
  double sep = b - a;
  if (sep >= r) return -kInf;
  double target = r - sep;
  if (b > 0.0) {
    double gmax = twocol::r1_gap(g, a, b, 0.0);
    if (target <= gmax) {
      double lt = std::log(target);
      double delta = (target == gmax) ? 0.0 : solve_delta([&](double dl) {
        return geo_log_integral(g, Turn{b, dl}, a, b, GeoKind::Gap) - lt;
      });
      return twocol::r1_log_height(g, a, b, delta);
    }
  }
  double cap = upper_cap(g);
  double hi = std::min(0.5 * (r + a + b) * (1.0 + 1e-12) + 1e-300, cap);
  auto L = [&](double X) { return twocol::r2_length(g, a, b, X) - r; };
  if (L(hi) < 0.0) {
    if (L(cap) < 0.0) throw DomainError("ball oracle: column not reachable below R");
    hi = cap;
  }
  double X = find_root(L, b, hi, 1e-14);
  return twocol::r2_log_height(g, a, b, X);
}

}  // namespace degen
