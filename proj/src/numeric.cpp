#include "degen/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <cstdio>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "degen/errors.hpp"

namespace degen {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

namespace {

struct SimpsonCtx {
  const ScalarFn& f;
  int max_depth;
  bool failed = false;
};

double simpson_rec(SimpsonCtx& c, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = c.f(lm), frm = c.f(rm);
  double h = b - a;
  double left = h / 12.0 * (fa + 4.0 * flm + fm);
  double right = h / 12.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (!std::isfinite(delta)) {
    c.failed = true;
    return left + right;
  }
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= c.max_depth || m <= a || m >= b) {
    c.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_rec(c, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(c, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (a > b) throw DomainError("integrate: a > b");
  if (a == b) return 0.0;
  // coarse pass on 8 panels sets the relative scale
  constexpr int P = 8;
  double h = (b - a) / P;
  std::vector<double> xs(2 * P + 1), fs(2 * P + 1);
  double l1 = 0.0;
  for (int i = 0; i <= 2 * P; ++i) {
    xs[i] = (i == 2 * P) ? b : a + 0.5 * h * i;
    fs[i] = f(xs[i]);
    if (!std::isfinite(fs[i])) throw DomainError("integrate: integrand not finite");
    l1 += std::fabs(fs[i]);
  }
  l1 *= (b - a) / (2 * P + 1);
  double tol = std::max(spec.abs_tol, spec.rel_tol * l1) / P;
  SimpsonCtx ctx{f, spec.max_subdivisions};
  double total = 0.0;
  for (int p = 0; p < P; ++p) {
    double pa = xs[2 * p], pb = xs[2 * p + 2];
    double whole = (pb - pa) / 6.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
    total += simpson_rec(ctx, pa, pb, fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], whole, tol, 1);
  }
  if (ctx.failed) throw NonConvergence("integrate: subdivision limit reached above tolerance");
  return total;
}

double integrate_gk(const ScalarFn& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (a > b) throw DomainError("integrate_gk: a > b");
  if (a == b) return 0.0;
  // global adaptive: always split the interval with the largest error
  struct Seg {
    double a, b, q, err;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  auto rule = [&](double lo, double hi) {
    double err = 0.0;
    double q = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
    // the library reports the single-panel error in units of the unscaled rule
    return Seg{lo, hi, q, err * 0.5 * (hi - lo)};
  };
  std::priority_queue<Seg> heap;
  Seg s0 = rule(a, b);
  double total = s0.q, err = s0.err;
  heap.push(s0);
  const std::size_t max_segments = std::size_t{1} << std::min(spec.max_subdivisions, 12);
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (heap.size() >= max_segments || !std::isfinite(total)) break;
    Seg s = heap.top();
    heap.pop();
    double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {
      heap.push(s);
      break;
    }
    Seg l = rule(s.a, m), r = rule(m, s.b);
    total += l.q + r.q - s.q;
    err += l.err + r.err - s.err;
    heap.push(l);
    heap.push(r);
  }
  if (!std::isfinite(total)) throw DomainError("integrate_gk: integrand not finite");
  // re-sum to drop accumulated drift
  total = 0.0;
  err = 0.0;
  for (auto h = heap; !h.empty(); h.pop()) {
    total += h.top().q;
    err += h.top().err;
  }
  if (err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "integrate_gk: error %.3g above tolerance on [%.6g, %.6g], value %.6g", err, a, b,
                  total);
    throw NonConvergence(buf);
  }
  return total;
}

double integrate_sqrt_singular(const ScalarFn& rho, const ScalarFn& S, double a, double b,
                               const QuadratureSpec& spec) {
  if (!(a < b)) throw DomainError("integrate_sqrt_singular: need a < b");
  constexpr int samples = 64;
  double prev = S(a);
  for (int i = 1; i <= samples; ++i) {
    double u = a + (b - a) * i / samples;
    double cur = S(u);
    if (!(cur > prev)) throw DomainError("integrate_sqrt_singular: S not strictly increasing");
    prev = cur;
  }
  double Sb = S(b);
  double dh = 1e-5 * (b - a);
  double dS = (3.0 * Sb - 4.0 * S(b - dh) + S(b - 2.0 * dh)) / (2.0 * dh);
  double limit0 = 2.0 * rho(b) / std::sqrt(dS);
  auto g = [&](double s) {
    if (s == 0.0) return limit0;
    double u = b - s * s;
    double diff = Sb - S(u);
    if (diff <= 0.0) return limit0;
    return 2.0 * s * rho(u) / std::sqrt(diff);
  };
  return integrate(g, 0.0, std::sqrt(b - a), spec);
}

double bisect(const ScalarFn& h, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double flo = h(lo), fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw BracketError("bisect: no sign change on bracket");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = h(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double find_root(const ScalarFn& h, double lo, double hi, double rel_tol, int max_iter) {
  if (lo > hi) std::swap(lo, hi);
  double flo = h(lo), fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw BracketError("find_root: no sign change on bracket");
  auto term = [rel_tol](double x, double y) {
    return std::fabs(x - y) <= rel_tol * std::max(std::fabs(x), std::fabs(y)) ||
           std::fabs(x - y) <= 1e-300;
  };
  std::uintmax_t it = static_cast<std::uintmax_t>(max_iter);
  auto r = boost::math::tools::toms748_solve(h, lo, hi, flo, fhi, term, it);
  if (it >= static_cast<std::uintmax_t>(max_iter)) throw NonConvergence("find_root: iteration limit");
  return 0.5 * (r.first + r.second);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  if (n < 1) throw DomainError("gauss_legendre: n >= 1 required");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::move(g)).first->second;
}

double gauss_fixed(const ScalarFn& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  double c = 0.5 * (a + b), hw = 0.5 * (b - a), s = 0.0;
  for (int i = 0; i < n; ++i) s += g.w[i] * f(c + hw * g.x[i]);
  return s * hw;
}

void TridiagonalOperator::validate() const {
  if (diagonal.empty()) throw DomainError("tridiagonal: empty diagonal");
  if (off_diagonal.size() + 1 != diagonal.size()) throw DomainError("tridiagonal: inconsistent lengths");
  if (!(grid_step > 0.0)) throw DomainError("tridiagonal: grid_step must be positive");
}

int sturm_count(const TridiagonalOperator& T, double x) {
  const auto& d = T.diagonal;
  const auto& e = T.off_diagonal;
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

double rayleigh_quotient(const TridiagonalOperator& T, const std::vector<double>& v) {
  const auto& d = T.diagonal;
  const auto& e = T.off_diagonal;
  std::size_t m = d.size();
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    long double tv = static_cast<long double>(d[i]) * v[i];
    if (i > 0) tv += static_cast<long double>(e[i - 1]) * v[i - 1];
    if (i + 1 < m) tv += static_cast<long double>(e[i]) * v[i + 1];
    num += tv * v[i];
    den += static_cast<long double>(v[i]) * v[i];
  }
  return static_cast<double>(num / den);
}

double center_value(const std::vector<double>& v) {
  std::size_t m = v.size();
  if (m == 0) return 0.0;
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

Eigenpair smallest_eigenpair(const TridiagonalOperator& T) {
  T.validate();
  const auto& d = T.diagonal;
  const auto& e = T.off_diagonal;
  std::size_t m = d.size();
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < m; ++i) {
    double rad = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < m ? std::fabs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(T, mid) >= 1)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 4e-16 * std::max(std::fabs(lo), std::fabs(hi))) break;
  }
  double lambda = 0.5 * (lo + hi);
  double scale = std::max(std::fabs(lambda), 1e-300);
  double shift = lambda - 1e-8 * scale;

  std::vector<double> v(m, 1.0), c(m), y(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.7 * i);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    // Thomas solve of (T - shift) y = v; positive definite since shift < lambda
    double b0 = d[0] - shift;
    if (b0 == 0.0) b0 = 1e-300;
    c[0] = (m > 1 ? e[0] : 0.0) / b0;
    y[0] = v[0] / b0;
    for (std::size_t i = 1; i < m; ++i) {
      double den = d[i] - shift - e[i - 1] * c[i - 1];
      if (den == 0.0) den = 1e-300;
      c[i] = (i + 1 < m ? e[i] / den : 0.0);
      y[i] = (v[i] - e[i - 1] * y[i - 1]) / den;
    }
    for (std::size_t i = m - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
    double norm = 0.0;
    for (double t : y) norm += t * t;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NonConvergence("inverse iteration breakdown");
    double diff = 0.0, s = (y[0] * v[0] >= 0 ? 1.0 : -1.0);
    double vnorm = 0.0;
    for (double t : v) vnorm += t * t;
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = 0; i < m; ++i) {
      double nv = s * y[i] / norm;
      diff = std::max(diff, std::fabs(nv - v[i] / vnorm));
      v[i] = nv;
    }
    if (it > 0 && diff < 1e-13) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("inverse iteration did not converge");
  double ss = 0.0;
  for (double t : v) ss += t * t;
  double k = 1.0 / std::sqrt(T.grid_step * ss);
  if (center_value(v) < 0) k = -k;
  for (double& t : v) t *= k;
  Eigenpair out;
  // the Sturm pivots lose digits to the 2/h^2 diagonal; the Rayleigh quotient
  // of the converged vector is accurate to second order
  out.value = rayleigh_quotient(T, v);
  out.vector = std::move(v);
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear_fit: need >= 2 matched points");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear_fit: degenerate abscissae");
  double b = sxy / sxx;
  double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {my - b * mx, b, r2};
}

}  // namespace degen
