#include "degen/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "degen/errors.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  double x, w;
};

// Gauss panels on [p,q], geometrically graded toward both ends.
void graded_nodes(double p, double q, const OracleGrid& grid, std::vector<Node>& out, bool grade_left = true,
                  bool grade_right = true) {
  const GaussRule& gr = gauss_legendre(grid.order);
  std::vector<double> edges;
  double L = q - p;
  double mid = p + 0.5 * L;
  edges.push_back(p);
  if (grade_left) {
    for (int k = grid.levels - 1; k >= 1; --k) edges.push_back(p + 0.5 * L * std::ldexp(1.0, -k));
  }
  edges.push_back(mid);
  if (grade_right) {
    for (int k = 1; k <= grid.levels - 1; ++k) edges.push_back(q - 0.5 * L * std::ldexp(1.0, -k));
  }
  edges.push_back(q);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i], b = edges[i + 1];
    if (!(b > a)) continue;
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int j = 0; j < grid.order; ++j) out.push_back({c + hw * gr.x[j], hw * gr.w[j]});
  }
}

double log_weighted_sum(const std::vector<double>& logv, const std::vector<double>& w, std::size_t from,
                        std::size_t to) {
  double m = -kInf;
  for (std::size_t i = from; i < to; ++i) m = std::max(m, logv[i]);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i)
    if (logv[i] > -kInf) s += w[i] * std::exp(logv[i] - m);
  return m + std::log(s);
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::Small ? "small" : "large"; }

double BallVolumeResult::formula() const { return std::exp(log_formula); }
double BallVolumeResult::oracle() const { return has_oracle ? std::exp(log_oracle) : 0.0; }
double BallVolumeResult::ratio() const {
  return has_oracle ? std::exp(log_formula - log_oracle) : std::numeric_limits<double>::quiet_NaN();
}

double radial_integral(const Geometry& g, const ScalarFn& w, double r0) {
  if (!(r0 > 0.0 && r0 < g.R())) throw DomainError("radial_integral: r0 out of range");
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-12;
  return integrate_gk([&](double r) { return r <= 0.0 ? 0.0 : w(r) * g.f(r) / g.absFp(r); }, 0.0, r0, q);
}

ColumnArea column_area(const Geometry& g, double x1, double r, double split, const OracleGrid& grid) {
  if (!(x1 >= 0.0 && r > 0.0 && x1 + r < g.R())) throw DomainError("column_area: need x1 >= 0, x1 + r < R");
  double lo = x1 - r, hi = x1 + r;
  std::vector<double> bps = {lo, hi, x1};
  for (double c : {0.0, -x1, split})
    if (c > lo && c < hi) bps.push_back(c);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::vector<Node> nodes;
  std::size_t split_index = 0;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    if (bps[i] >= split && split_index == 0) split_index = nodes.size();
    graded_nodes(bps[i], bps[i + 1], grid, nodes);
  }
  if (split_index == 0 && !(bps.front() >= split)) split_index = nodes.size();

  std::vector<double> logphi(nodes.size()), w(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    logphi[i] = ball_column_log_height(g, x1, r, nodes[i].x);
    w[i] = 2.0 * nodes[i].w;
  });
  ColumnArea out;
  out.log_total = log_weighted_sum(logphi, w, 0, nodes.size());
  out.log_left = log_weighted_sum(logphi, w, 0, split_index);
  out.log_right = log_weighted_sum(logphi, w, split_index, nodes.size());
  return out;
}

double log_formula_2d(const Geometry& g, double x1, double r, Regime* regime) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ball volume: r > 0 required");
  bool small = r * g.absFp(x1) <= 1.0;
  if (regime) *regime = small ? Regime::Small : Regime::Large;
  if (small) return 2.0 * std::log(r) - g.F(x1);
  double a = g.absFp(x1 + r);
  return -g.F(x1 + r) - 2.0 * std::log(a);
}

double log_formula_nd(const Geometry& g, double x1, double r, int n, Regime* regime) {
  if (n < 3) throw DomainError("volume_nd: n >= 3 required");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ball volume: r > 0 required");
  bool small = r * g.absFp(x1) <= 2.0;
  if (regime) *regime = small ? Regime::Small : Regime::Large;
  if (small) return n * std::log(r) - g.F(x1);
  double a = g.absFp(x1 + r);
  return -g.F(x1 + r) - n * std::log(a) + (0.5 * n - 1.0) * std::log(r * a);
}

BallVolumeResult area_2d(const Geometry& g, double center_x1, double r, bool oracle, const OracleGrid& grid) {
  if (!(center_x1 >= 0.0 && r > 0.0 && center_x1 + r < g.R())) throw DomainError("area_2d: need x1 >= 0, x1 + r < R");
  BallVolumeResult res;
  res.center_x1 = center_x1;
  res.radius = r;
  res.dim = 2;
  res.log_formula = log_formula_2d(g, center_x1, r, &res.regime);
  if (oracle) {
    double split = center_x1 + ball_shape(g, center_x1, r).r_star;
    res.log_oracle = column_area(g, center_x1, r, split, grid).log_total;
    res.has_oracle = true;
  }
  return res;
}

BallVolumeResult volume_nd(const Geometry& g, double center_x1, double r, int n, bool oracle, const OracleGrid& grid,
                           int shell_nodes) {
  if (n < 3) throw DomainError("volume_nd: n >= 3 required");
  if (!(center_x1 >= 0.0 && r > 0.0 && center_x1 + r < g.R())) throw DomainError("volume_nd: need x1 >= 0, x1 + r < R");
  BallVolumeResult res;
  res.center_x1 = center_x1;
  res.radius = r;
  res.dim = n;
  res.log_formula = log_formula_nd(g, center_x1, r, n, &res.regime);
  if (oracle) {
    int k = n - 2;
    double log_sphere = std::log(2.0) + 0.5 * k * std::log(std::numbers::pi) - std::lgamma(0.5 * k);
    // rho = r sin(theta); graded toward theta = 0 where the slices are largest
    OracleGrid tg{std::max(2, shell_nodes / 2), std::max(2, grid.order / 2)};
    std::vector<Node> nodes;
    graded_nodes(0.0, 0.5 * std::numbers::pi, tg, nodes, true, false);
    std::vector<double> logv(nodes.size()), w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double th = nodes[i].x;
      double s = r * std::cos(th);
      double la = column_area(g, center_x1, s, center_x1 + ball_shape(g, center_x1, s).r_star, grid).log_total;
      logv[i] = la + k * std::log(r) + (k - 1) * std::log(std::sin(th)) + std::log(std::cos(th));
      w[i] = nodes[i].w;
    }
    res.log_oracle = log_sphere + log_weighted_sum(logv, w, 0, nodes.size());
    res.has_oracle = true;
  }
  return res;
}

ThickParts thick_part_measures(const Geometry& g, double x1, double r, const OracleGrid& grid) {
  BallShape s = ball_shape(g, x1, r);
  ColumnArea ca = column_area(g, x1, r, x1 + s.r_star, grid);
  ThickParts t;
  t.r_star = s.r_star;
  t.log_total = ca.log_total;
  t.b_plus = std::exp(ca.log_right - ca.log_total);
  t.b_minus = std::exp(ca.log_left - ca.log_total);
  return t;
}

LaplaceTail laplace_tail_check(const Geometry& g, double z1, double r, double beta) {
  if (!(beta > -1.0)) throw DomainError("laplace_tail: beta > -1 required");
  double a = g.absFp(z1);
  if (!(g.eps() / a < r && r < z1)) throw DomainError("laplace_tail: need eps/|F'(z1)| < r < z1");
  double p = 1.0 + beta;
  QuadratureSpec q;
  q.abs_tol = 1e-300;
  q.rel_tol = 1e-11;
  // w = s^(1/p) absorbs the w^beta weight
  auto integrand = [&](double s) {
    if (s <= 0.0) return 1.0 / p;
    double w = std::pow(s, 1.0 / p);
    if (w >= z1) return 0.0;
    return std::exp(-g.Fstep(z1, -w)) / p;
  };
  LaplaceTail t;
  t.lhs = integrate_gk(integrand, 0.0, std::pow(r, p), q);
  t.lhs_inner = integrate_gk(integrand, 0.0, std::pow(g.eps() / a, p), q);
  t.rhs = std::pow(a, -p);
  return t;
}

namespace {

struct PolarState {
  int region;
  double X, R, x, y;
  Turn T;
};

PolarState polar_state(const Geometry& g, double r, double lambda) {
  double Rc = g.R() * (1.0 - 1e-12);
  if (!(lambda > 0.0 && lambda < g.f(Rc))) throw DomainError("jacobian: lambda out of range");
  PolarState st;
  st.X = g.Finv(-std::log(lambda));
  st.T = Turn::at(st.X);
  st.R = geo_integral(g, st.T, 0.0, st.X, GeoKind::Arc);
  if (std::fabs(r - st.R) < 1e-6 * st.R) throw DomainError("jacobian: too close to the separating curve");
  if (!(r > 0.0) || r >= 2.0 * st.R) throw DomainError("jacobian: r outside (0, 2R(lambda))");
  st.region = r < st.R ? 1 : 2;
  double target = st.region == 1 ? r : 2.0 * st.R - r;
  auto h = [&](double x) { return (x <= 0.0 ? 0.0 : geo_integral(g, st.T, 0.0, x, GeoKind::Arc)) - target; };
  st.x = find_root(h, 0.0, st.X, 1e-15);
  double yx = lambda * geo_integral(g, st.T, 0.0, st.x, GeoKind::Height);
  if (st.region == 1) {
    st.y = yx;
  } else {
    double Y = lambda * geo_integral(g, st.T, 0.0, st.X, GeoKind::Height);
    st.y = 2.0 * Y - yx;
  }
  return st;
}

}  // namespace

Point2 polar_point(const Geometry& g, double r, double lambda) {
  PolarState st = polar_state(g, r, lambda);
  return {st.x, st.y};
}

JacobianProbe jacobian_probe(const Geometry& g, double r, double lambda) {
  PolarState st = polar_state(g, r, lambda);
  JacobianProbe out;
  out.region = st.region;
  out.x = st.x;
  out.y = st.y;
  double x = st.x;
  double D = g.Fstep(st.X, x - st.X);
  double v = std::exp(-2.0 * D);
  double om = -std::expm1(-2.0 * D);
  double rs = std::sqrt(om);
  double inner = geo_integral(g, st.T, 0.0, x, GeoKind::Inner);
  double curv = geo_integral(g, st.T, 0.0, x, GeoKind::Curv);
  double ax = g.absFp(x);
  if (st.region == 1) {
    out.jacobian = rs * inner;
    out.jacobian_ibp = 1.0 / ax - rs * curv;
    double m11 = rs, m12 = rs * inner / lambda, m21 = lambda * v, m22 = -om * inner;
    out.matrix_det = std::fabs(m11 * m22 - m12 * m21);
    out.estimate = v / ax;
  } else {
    double Yp = geo_integral(g, st.T, 0.0, st.X, GeoKind::Curv);
    out.jacobian = rs * (2.0 * Yp + inner);
    out.jacobian_ibp = 1.0 / ax + rs * (2.0 * Yp - curv);
    double hl = 1e-5 * lambda;
    auto Rof = [&](double lam) {
      double X = g.Finv(-std::log(lam));
      return geo_integral(g, Turn::at(X), 0.0, X, GeoKind::Arc);
    };
    double Rp = (Rof(lambda + hl) - Rof(lambda - hl)) / (2.0 * hl);
    double m11 = -rs, m12 = rs * (2.0 * Rp + inner / lambda), m21 = lambda * v;
    double m22 = 2.0 * Yp - 2.0 * lambda * v * Rp + om * inner;
    out.matrix_det = std::fabs(m11 * m22 - m12 * m21);
    out.estimate = 1.0 / g.absFp(st.X);
  }
  double hr = 1e-6 * r, hl = 1e-6 * lambda;
  Point2 rp = polar_point(g, r + hr, lambda), rm = polar_point(g, r - hr, lambda);
  Point2 lp = polar_point(g, r, lambda + hl), lm = polar_point(g, r, lambda - hl);
  double xr = (rp.x1 - rm.x1) / (2 * hr), yr = (rp.x2 - rm.x2) / (2 * hr);
  double xl = (lp.x1 - lm.x1) / (2 * hl), yl = (lp.x2 - lm.x2) / (2 * hl);
  out.fd_det = std::fabs(xr * yl - xl * yr);
  return out;
}

}  // namespace degen
