#include "degen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degen/errors.hpp"

namespace degen {

Geometry::Geometry(Handles h, double R, double eps, double C_struct, double c5, std::string name)
    : h_(std::move(h)), R_(R), eps_(eps), C_(C_struct), c5_(c5), name_(std::move(name)) {
  if (!h_.F || !h_.F_prime || !h_.F_second) throw DomainError("geometry: missing handle");
  if (!(R > 0.0)) throw DomainError("geometry: R must be positive");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("geometry: eps must lie in (0,1]");
  if (!(C_struct >= 1.0)) throw DomainError("geometry: C must be >= 1");
}

Geometry Geometry::from_function(ScalarFn F, double R, double eps, double C_struct, double c5, std::string name) {
  Handles h;
  h.F = F;
  h.F_prime = [F](double x) {
    double d = 1e-5 * x;
    return (F(x - 2 * d) - 8 * F(x - d) + 8 * F(x + d) - F(x + 2 * d)) / (12 * d);
  };
  h.F_second = [F](double x) {
    double d = 1e-4 * x;
    return (-F(x - 2 * d) + 16 * F(x - d) - 30 * F(x) + 16 * F(x + d) - F(x + 2 * d)) / (12 * d * d);
  };
  return Geometry(std::move(h), R, eps, C_struct, c5, std::move(name));
}

double Geometry::check(double x) const {
  double a = std::fabs(x);
  if (!(a < R_)) throw DomainError("geometry: |x| >= R");
  return a;
}

double Geometry::F(double x) const {
  double a = check(x);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return h_.F(a);
}

double Geometry::Fp(double x) const {
  double a = check(x);
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return h_.F_prime(a);
}

double Geometry::Fpp(double x) const {
  double a = check(x);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return h_.F_second(a);
}

double Geometry::f(double x) const { return std::exp(-F(x)); }

double Geometry::Fdiff(double u, double w) const {
  double a = check(u), b = check(w);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  if (h_.F_diff) return h_.F_diff(a, b);
  return h_.F(a) - h_.F(b);
}

double Geometry::Fstep(double w, double du) const {
  check(w);
  check(w + du);
  if (w + du <= 0.0) return std::numeric_limits<double>::infinity();
  if (h_.F_step) return h_.F_step(w, du);
  return h_.F(w + du) - h_.F(w);
}

double Geometry::Finv(double L) const {
  if (h_.F_inverse) {
    double x = h_.F_inverse(L);
    if (!(x < R_)) throw DomainError("geometry: F^-1 outside (0,R)");
    return x;
  }
  double hi = R_ * (1.0 - 1e-12);
  if (h_.F(hi) > L) throw DomainError("geometry: F^-1 outside (0,R)");
  double lo = hi;
  while (h_.F(lo) < L) {
    lo *= 0.5;
    if (lo < 1e-300) throw DomainError("geometry: F^-1 underflow");
  }
  return find_root([&](double x) { return h_.F(x) - L; }, lo, hi, 1e-15);
}

double Geometry::derivative_crosscheck(const std::vector<double>& xs) const {
  double worst = 0.0;
  for (double x : xs) {
    double d = 1e-5 * x;
    double fd = (h_.F(x - 2 * d) - 8 * h_.F(x - d) + 8 * h_.F(x + d) - h_.F(x + 2 * d)) / (12 * d);
    worst = std::max(worst, std::fabs(fd / h_.F_prime(x) - 1.0));
  }
  return worst;
}

Geometry make_power_geometry(double sigma, double R) {
  if (!(sigma > 0.0)) throw DomainError("power geometry: sigma must be positive");
  if (!(R > 0.0 && R <= 1.0)) throw DomainError("power geometry: R must lie in (0,1]");
  Geometry::Handles h;
  h.F = [sigma](double x) { return std::pow(x, -sigma); };
  h.F_prime = [sigma](double x) { return -sigma * std::pow(x, -sigma - 1.0); };
  h.F_second = [sigma](double x) { return sigma * (sigma + 1.0) * std::pow(x, -sigma - 2.0); };
  // u^-s - w^-s = w^-s * expm1(-s ln(u/w)), accurate near u = w
  h.F_diff = [sigma](double u, double w) {
    return std::pow(w, -sigma) * std::expm1(-sigma * std::log1p((u - w) / w));
  };
  h.F_step = [sigma](double w, double du) {
    return std::pow(w, -sigma) * std::expm1(-sigma * std::log1p(du / w));
  };
  h.F_inverse = [sigma](double L) {
    if (!(L > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(L, -1.0 / sigma);
  };
  Geometry g(std::move(h), R, std::min(sigma, 1.0), std::pow(2.0, sigma + 1.0), 1.0 + sigma,
             "power");
  g.sigma_ = sigma;
  return g;
}

std::vector<double> dyadic_grid(double R, int kmin, int kmax) {
  std::vector<double> out;
  for (int k = kmin; k <= kmax; ++k) {
    double x = std::ldexp(1.0, -k);
    if (x < R) out.push_back(x);
  }
  return out;
}

std::vector<ComparabilityReport> check_structure_conditions(const Geometry& g, const std::vector<double>& grid,
                                                            double tol) {
  std::vector<ComparabilityReport> out;

  ComparabilityReport c1;
  c1.name = "cond1_blowup";
  {
    // F(x/2) - F(x) >= eps ln 2 > eps/2 forces F -> infinity
    double prev = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 40; ++k) {
      double x = std::ldexp(1.0, -k);
      if (!(x < g.R())) continue;
      double v = g.F(x);
      if (std::isfinite(prev)) {
        c1.add({x}, v - prev, 0.5 * g.eps());
        if (!(v - prev >= 0.5 * g.eps())) c1.pass = false;
      }
      prev = v;
    }
    if (c1.samples.empty()) c1.pass = false;
  }
  out.push_back(c1);

  ComparabilityReport c2;
  c2.name = "cond2_signs";
  for (double x : grid) {
    c2.add({x}, -g.Fp(x), g.Fpp(x));
    if (!(g.Fp(x) < 0.0 && g.Fpp(x) > 0.0)) c2.pass = false;
  }
  out.push_back(c2);

  ComparabilityReport c3;
  c3.name = "cond3_doubling_derivative";
  for (double r : grid) {
    for (int j = -8; j <= 8; ++j) {
      double x = r * std::exp2(j / 8.0);
      if (!(x < g.R())) continue;
      c3.add({r, x}, g.absFp(x), g.absFp(r));
      double q = g.absFp(x) / g.absFp(r);
      if (q < (1.0 / g.C_struct()) * (1 - tol) || q > g.C_struct() * (1 + tol)) c3.pass = false;
    }
  }
  out.push_back(c3);

  ComparabilityReport c4;
  c4.name = "cond4_monotone_bound";
  {
    std::vector<double> xs = grid;
    std::sort(xs.begin(), xs.end());
    double prev = -1.0;
    for (double x : xs) {
      double q = 1.0 / (-x * g.Fp(x));
      c4.add({x}, q, 1.0 / g.eps());
      if (q > (1.0 / g.eps()) * (1 + tol)) c4.pass = false;
      if (q < prev * (1 - tol)) c4.pass = false;
      prev = q;
    }
  }
  out.push_back(c4);

  ComparabilityReport c5;
  c5.name = "cond5_second_derivative";
  for (double x : grid) {
    c5.add({x}, g.Fpp(x) * x, -g.Fp(x));
    double q = g.Fpp(x) * x / (-g.Fp(x));
    if (q < (1.0 / g.c5()) * (1 - tol) || q > g.c5() * (1 + tol)) c5.pass = false;
  }
  out.push_back(c5);

  for (auto& r : out)
    if (r.samples.empty()) r.pass = false;
  return out;
}

std::vector<ComparabilityReport> consequences_probe(const Geometry& g, const std::vector<double>& grid) {
  std::vector<ComparabilityReport> out;
  double eps = g.eps();

  // part 1 in log form: -F(x1) < eps ln(x1/x2) - F(x2)
  ComparabilityReport p1;
  p1.name = "consequence1_decay";
  for (double x1 : grid) {
    for (double m : {1.25, 1.5, 2.0, 4.0}) {
      double x2 = m * x1;
      if (!(x2 < g.R())) continue;
      double lhs = -g.F(x1);
      double rhs = eps * std::log(x1 / x2) - g.F(x2);
      p1.add({x1, x2}, std::exp(lhs - rhs), 1.0);
      if (!(lhs < rhs)) p1.pass = false;
    }
  }
  out.push_back(p1);

  ComparabilityReport p2;
  p2.name = "consequence2_neighbour";
  for (double x1 : grid) {
    double w = 1.0 / g.absFp(x1);
    double lo = std::max(eps * x1, x1 - w), hi = x1 + w;
    for (int j = 0; j <= 8; ++j) {
      double x2 = lo + (hi - lo) * j / 8.0;
      if (!(x2 > 0.0 && x2 < g.R())) continue;
      p2.add({x1, x2}, std::exp(-g.Fdiff(x2, x1)), 1.0);
    }
  }
  p2.pass = p2.within(std::exp(-1.0) / 20.0, 20.0 * std::exp(1.0));
  out.push_back(p2);

  ComparabilityReport p3;
  p3.name = "consequence3_curvature";
  for (double x : grid) {
    double a = g.absFp(x);
    p3.add({x}, g.Fpp(x) / (a * a), 1.0 / (x * a));
  }
  p3.pass = p3.within(1.0 / g.c5(), g.c5() * (1 + 1e-10));
  out.push_back(p3);
  return out;
}

}  // namespace degen
