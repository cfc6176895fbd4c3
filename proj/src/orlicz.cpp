#include "degen/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degen/errors.hpp"
#include "degen/rng.hpp"

namespace degen {

YoungFunction::YoungFunction(double N, bool allow_large_N) : N_(N) {
  if (!(N > 1.0)) throw DomainError("Young function: N must exceed 1");
  if (N > 2.0 && !allow_large_N) throw DomainError("Young function: N > 2 requires the large-N flag");
  E_ = std::exp(2.0 * N);
  c_ = std::pow(2.0 * N, N);
}

double YoungFunction::phi(double t) const {
  if (t < 0.0) throw DomainError("phi: t >= 0 required");
  if (t <= E_) return c_ * t;
  return t * std::pow(std::log(t), N_);
}

double YoungFunction::log_phi(double t) const {
  if (t <= 0.0) return -std::numeric_limits<double>::infinity();
  if (t <= E_) return std::log(c_) + std::log(t);
  return std::log(t) + N_ * std::log(std::log(t));
}

double YoungFunction::phi_prime(double t) const {
  if (t < E_) return c_;
  double L = std::log(t);
  return std::pow(L, N_) + N_ * std::pow(L, N_ - 1.0);
}

double YoungFunction::phi_inverse(double y) const {
  if (y < 0.0) throw DomainError("phi_inverse: y >= 0 required");
  if (y <= c_ * E_) return y / c_;
  double ly = std::log(y);
  double L = find_root([&](double L) { return L + N_ * std::log(L) - ly; }, 2.0 * N_, std::max(ly, 2.0 * N_ + 1.0),
                       1e-15);
  return std::exp(L);
}

double YoungFunction::top_branch_L(double s) const {
  double ls = std::log(s);
  auto q = [&](double L) { return N_ * std::log(L) + std::log1p(N_ / L) - ls; };
  if (q(2.0 * N_) >= 0.0) return 2.0 * N_;  // rounding at the knot
  double hi = std::max(std::pow(s, 1.0 / N_), 2.0 * N_ + 1.0);
  return find_root(q, 2.0 * N_, hi, 1e-15);
}

double YoungFunction::phi_prime_inverse(double s) const {
  if (s < c_) return 0.0;
  if (s < 1.5 * c_) return E_;
  return std::exp(top_branch_L(s));
}

double YoungFunction::conj(double s) const {
  if (s < 0.0) throw DomainError("conjugate: s >= 0 required");
  if (s < c_) return 0.0;
  if (s < 1.5 * c_) return E_ * (s - c_);
  double L = top_branch_L(s);
  return std::exp(L + std::log(N_) + (N_ - 1.0) * std::log(L));
}

double YoungFunction::conj_by_quadrature(double s) const {
  if (s < c_) return 0.0;
  double mid = std::min(s, 1.5 * c_);
  double out = E_ * (mid - c_);
  if (s > 1.5 * c_) {
    // (Phi')^{-1} on the top branch by bisection
    auto inv = [&](double sig) {
      double ls = std::log(sig);
      // rounding at the knot sig = 1.5 (2N)^N
      if (N_ * std::log(2.0 * N_) + std::log1p(0.5) >= ls) return E_;
      double L = bisect([&](double L) { return N_ * std::log(L) + std::log1p(N_ / L) - ls; }, 2.0 * N_,
                        std::max(std::pow(sig, 1.0 / N_), 2.0 * N_ + 1.0), 1e-13);
      return std::exp(L);
    };
    QuadratureSpec q;
    q.rel_tol = 1e-11;
    q.abs_tol = 1e-12;
    out += integrate(inv, 1.5 * c_, s, q);
  }
  return out;
}

double YoungFunction::h(double T) const {
  // middle branch: conj(s) = E (s - c) below (2N e^2)^N / 2
  double knot = N_ * std::log(2.0 * N_) + 2.0 * N_ - std::log(2.0);
  if (T < knot) return std::log(c_ + std::exp(T - 2.0 * N_));
  double lnN = std::log(N_);
  auto q = [&](double L) { return L + lnN + (N_ - 1.0) * std::log(L) - T; };
  double L = find_root(q, 2.0 * N_, std::max(T, 2.0 * N_ + 1.0), 1e-15);
  return N_ * std::log(L) + std::log1p(N_ / L);
}

double YoungFunction::conj_inverse(double y) const {
  if (y <= 0.0) return c_;
  return std::exp(h(std::log(y)));
}

double DiscreteMeasureSpace::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double orlicz_norm(const ScalarFn& Phi, const std::vector<double>& f, const std::vector<double>& w) {
  if (f.size() != w.size() || f.empty()) throw DomainError("orlicz_norm: values and weights must match");
  double fmax = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("orlicz_norm: weights must be positive");
    fmax = std::max(fmax, std::fabs(f[i]));
  }
  if (fmax == 0.0) throw ZeroFunction("orlicz_norm: f is identically zero");
  auto defect = [&](double lk) {
    double k = std::exp(lk), s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] != 0.0) s += w[i] * Phi(std::fabs(f[i]) / k);
    return s;
  };
  double lo = std::log(fmax), hi = lo;
  int guard = 0;
  while (defect(hi) > 1.0) {
    hi += 2.0;
    if (++guard > 400) throw NonConvergence("orlicz_norm: upper bracket");
  }
  guard = 0;
  while (defect(lo) <= 1.0) {
    lo -= 2.0;
    if (++guard > 400) throw NonConvergence("orlicz_norm: lower bracket");
  }
  // invariant: defect(lo) > 1 >= defect(hi)
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (defect(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  return std::exp(hi);
}

double orlicz_norm(const YoungFunction& yf, const std::vector<double>& f, const std::vector<double>& w) {
  return orlicz_norm([&](double t) { return yf.phi(t); }, f, w);
}

double conj_orlicz_norm(const YoungFunction& yf, const std::vector<double>& f, const std::vector<double>& w) {
  return orlicz_norm([&](double s) { return yf.conj(s); }, f, w);
}

ConjInverseGamma conj_inverse_and_gamma(const YoungFunction& yf, double t) {
  if (!(t > 0.0)) throw DomainError("conj_inverse_and_gamma: t > 0 required");
  ConjInverseGamma out;
  out.conj_inv = yf.conj_inverse(t);
  double lg = yf.log_gamma(t);
  out.gamma = std::exp(lg);
  double N = yf.N();
  if (t < std::exp(-2.0 * N)) {
    double bound = N * std::log(2.0) - N * std::log(-std::log(t));
    out.estimate_ok = lg <= bound + 1e-12;
  }
  return out;
}

std::vector<ComparabilityReport> algebra_checks(const YoungFunction& yf, std::uint64_t seed, const AlgebraOptions& opt) {
  std::vector<ComparabilityReport> out;
  Rng rng(seed);
  const double N = yf.N();
  const double slack = 1e-12;

  ComparabilityReport sub;
  sub.name = "submultiplicative";
  {
    int viol = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < opt.submult_trials; ++i) {
      double a = rng.log_uniform(1e-8, 1e16), b = rng.log_uniform(1e-8, 1e16);
      double d = yf.log_phi(a * b) - (yf.log_phi(a) + yf.log_phi(b));
      worst = std::max(worst, d);
      if (d > slack) ++viol;
    }
    sub.add({static_cast<double>(opt.submult_trials)}, std::exp(worst), 1.0);
    sub.pass = viol == 0;
    sub.detail = "violations=" + std::to_string(viol);
  }
  out.push_back(sub);

  ComparabilityReport young;
  young.name = "young_inequality";
  {
    int viol = 0;
    double worst = 0.0;
    for (int i = 0; i < opt.young_trials; ++i) {
      double t = rng.log_uniform(1e-6, 1e12), s = rng.log_uniform(1e-2, 1e4);
      double lhs = t * s, rhs = yf.phi(t) + yf.conj(s);
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs * (1.0 + slack)) ++viol;
    }
    young.add({static_cast<double>(opt.young_trials)}, worst, 1.0);
    young.pass = viol == 0;
    young.detail = "violations=" + std::to_string(viol);
  }
  out.push_back(young);

  ComparabilityReport hold;
  hold.name = "holder_factor_2";
  {
    int viol = 0;
    double worst = 0.0;
    for (int i = 0; i < opt.holder_trials; ++i) {
      std::size_t n = 2 + rng.index(49);
      std::vector<double> w(n), f(n), g(n);
      for (std::size_t j = 0; j < n; ++j) {
        w[j] = rng.uniform(0.01, 1.0);
        f[j] = rng.uniform() < 0.2 ? 0.0 : rng.log_uniform(1e-3, 1e6);
        g[j] = rng.uniform() < 0.2 ? 0.0 : rng.log_uniform(1e-3, 1e6);
      }
      f[0] = std::max(f[0], 1.0);
      g[0] = std::max(g[0], 1.0);
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += w[j] * f[j] * g[j];
      double rhs = 2.0 * orlicz_norm(yf, f, w) * conj_orlicz_norm(yf, g, w);
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs * (1.0 + 1e-9)) ++viol;
    }
    hold.add({static_cast<double>(opt.holder_trials)}, worst, 1.0);
    hold.pass = viol == 0;
    hold.detail = "violations=" + std::to_string(viol);
  }
  out.push_back(hold);

  ComparabilityReport gam;
  gam.name = "gamma_estimate";
  {
    int viol = 0;
    for (int i = 0; i < opt.gamma_points; ++i) {
      // x = e^{-T}, T evenly spaced beyond 2N (log-spaced x)
      double T = 2.0 * N + 700.0 * (i + 1) / opt.gamma_points;
      double lg = -yf.h(T);
      double lb = N * std::log(2.0) - N * std::log(T);
      gam.add({T}, std::exp(lg - lb), 1.0);
      if (lg > lb + slack) ++viol;
    }
    gam.pass = viol == 0;
    gam.detail = "violations=" + std::to_string(viol);
  }
  out.push_back(gam);

  ComparabilityReport hg;
  hg.name = "h_growth";
  {
    bool ok = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int t = 5; t <= 100; t += 5) {
      double v = yf.h(t);
      hg.add({static_cast<double>(t)}, v, t > 2.0 * N ? N * std::log(0.5 * t) : 1.0);
      if (!(v > 0.0) || !(v > prev)) ok = false;
      if (t > 2.0 * N && v < N * std::log(0.5 * t) - slack) ok = false;
      prev = v;
    }
    double far = yf.h(1e4) - yf.h(5.0);
    if (!(far > 10.0)) ok = false;
    hg.pass = ok;
    std::ostringstream os;
    os << "h(100)-h(5)=" << yf.h(100.0) - yf.h(5.0) << " h(1e4)-h(5)=" << far;
    hg.detail = os.str();
  }
  out.push_back(hg);

  ComparabilityReport knots;
  knots.name = "conjugate_knots";
  {
    double c = yf.knot_slope();
    double at_knot = yf.conj(yf.phi(yf.E()) / yf.E());
    double left = yf.E() * (0.5 * c);
    double right = yf.conj(1.5 * c);
    knots.add({c}, right, left);
    bool ok = at_knot == 0.0 && std::fabs(right / left - 1.0) < 1e-12;
    ok = ok && yf.phi_prime(yf.E()) >= yf.phi(yf.E()) / yf.E();
    knots.pass = ok;
  }
  out.push_back(knots);

  ComparabilityReport quad;
  quad.name = "conjugate_quadrature";
  {
    double c = yf.knot_slope();
    for (double m : {0.5, 1.2, 1.5, 2.0, 5.0, 20.0, 100.0}) {
      double s = m * c;
      double a = yf.conj(s), b = yf.conj_by_quadrature(s);
      if (a == 0.0 && b == 0.0) {
        quad.add({s}, 1.0, 1.0);
        continue;
      }
      quad.add({s}, a, b);
    }
    quad.pass = quad.within(1.0 - 1e-8, 1.0 + 1e-8);
  }
  out.push_back(quad);

  ComparabilityReport shape;
  shape.name = "convex_superlinear";
  {
    bool ok = yf.phi(0.0) == 0.0;
    double prev_ratio = 0.0;
    for (int i = 0; i <= 400; ++i) {
      double t = std::exp(-5.0 + 30.0 * i / 400.0);
      double hstep = 1e-3 * t;
      double sd = yf.phi(t + hstep) - 2.0 * yf.phi(t) + yf.phi(t - hstep);
      if (sd < -1e-9 * yf.phi(t)) ok = false;
      double ratio = yf.phi(t) / t;
      if (ratio < prev_ratio * (1.0 - 1e-14)) ok = false;
      prev_ratio = ratio;
    }
    shape.add({0.0}, prev_ratio, yf.knot_slope());
    shape.pass = ok;
  }
  out.push_back(shape);
  return out;
}

}  // namespace degen
