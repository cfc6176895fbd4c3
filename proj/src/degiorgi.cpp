#include "degen/degiorgi.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <limits>

#include "degen/errors.hpp"

namespace degen {

double cutoff_constant(double gamma) {
  if (!(gamma > 1.0)) throw DomainError("cutoff: gamma > 1 required");
  return 1.0 / (2.0 * boost::math::zeta(gamma));
}

CutoffRadii cutoff_radii(double r, double gamma, int K) {
  if (!(r > 0.0)) throw DomainError("cutoff: r > 0 required");
  if (K < 1) throw DomainError("cutoff: K >= 1 required");
  CutoffRadii out;
  out.c = cutoff_constant(gamma);
  out.radii.reserve(K);
  out.radii.push_back(r);
  for (int j = 1; j < K; ++j) out.radii.push_back(out.radii.back() - out.c * r / std::pow(j, gamma));
  return out;
}

void IterationParams::validate() const {
  if (!(eps > 0.0)) throw DomainError("iteration: eps > 0 required");
  if (!(N > 1.0 + 0.5 * eps)) throw DomainError("iteration: N > 1 + eps/2 required");
  if (!(tau >= 1.0)) throw DomainError("iteration: tau >= 1 required");
  if (!(C_iter > 0.0) || !(phi_norm > 0.0) || !(superradius_ratio > 0.0) || c_cutoff < 0.0)
    throw DomainError("iteration: positive constants required");
}

double IterationParams::cutoff() const { return c_cutoff > 0.0 ? c_cutoff : cutoff_constant(1.0 + 0.5 * eps); }

double IterationParams::gamma0() const {
  double c = cutoff();
  return std::log(4.0) - 2.0 * std::log(c * tau * phi_norm * eps);
}

const char* to_string(IterStatus s) {
  switch (s) {
    case IterStatus::Ok: return "OK";
    case IterStatus::Blown: return "BLOWN";
    case IterStatus::DivergedB: return "DIVERGED_B";
  }
  return "?";
}

namespace {

void check_yf(const YoungFunction& yf, const IterationParams& p) {
  p.validate();
  if (yf.N() != p.N) throw DomainError("iteration: Young function N differs from params");
}

template <class H>
IterationRun run_recursion(const IterationParams& p, double b0, int K, H hfun) {
  IterationRun run;
  const double lnC = std::log(p.C_iter * p.superradius_ratio);
  const double g0 = p.gamma0();
  const double e = p.eps;
  double b = b0;
  run.states.push_back({0, std::exp(-b), b});
  if (std::isinf(b) && b > 0) {
    for (int k = 1; k <= K; ++k) run.states.push_back({k, 0.0, b});
    return run;
  }
  for (int k = 0; k < K; ++k) {
    double T = b - (2.0 + e) * std::log(k + 2.0) - g0;
    if (!(T > 2.0 * p.N)) {
      run.status = IterStatus::Blown;
      run.blown_at = k;
      run.linear_growth = false;
      return run;
    }
    b = b - lnC - (1.0 + 0.5 * e) * std::log(k + 1.0) + hfun(T);
    run.states.push_back({k + 1, std::exp(-b), b});
    if (b < b0 + (k + 1)) run.linear_growth = false;
  }
  return run;
}

}  // namespace

IterationRun degiorgi_iterate_b(const YoungFunction& yf, const IterationParams& p, double b0, int K) {
  check_yf(yf, p);
  return run_recursion(p, b0, K, [&](double T) { return yf.h(T); });
}

IterationRun degiorgi_iterate(const YoungFunction& yf, const IterationParams& p, double U0, int K) {
  if (U0 < 0.0) throw DomainError("iteration: U0 >= 0 required");
  double b0 = U0 == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(U0);
  return degiorgi_iterate_b(yf, p, b0, K);
}

IterationRun degiorgi_iterate_estimate(const YoungFunction& yf, const IterationParams& p, double b0, int K) {
  check_yf(yf, p);
  const double N = p.N;
  return run_recursion(p, b0, K, [&](double T) { return N * std::log(T) - N * std::log(2.0); });
}

double induction_margin(const IterationParams& p, double b0, long long k) {
  double T = b0 + k - (2.0 + p.eps) * std::log(k + 2.0) - p.gamma0();
  if (!(T > 2.0 * p.N)) return -std::numeric_limits<double>::infinity();
  return p.N * std::log(0.5 * T) - (1.0 + 0.5 * p.eps) * std::log(k + 1.0) - 1.0 -
         std::log(p.C_iter * p.superradius_ratio);
}

namespace {

// b_0 needed at step k from the main condition (branch 0) and from T > 2N
// (branch 1). Each branch is concave in k.
double needed_branch(const IterationParams& p, double k, int branch) {
  double base = (2.0 + p.eps) * std::log(k + 2.0) + p.gamma0() - k;
  if (branch == 1) return base + 2.0 * p.N;
  return base +
         2.0 * std::exp((1.0 + std::log(p.C_iter * p.superradius_ratio) + (1.0 + 0.5 * p.eps) * std::log(k + 1.0)) / p.N);
}

// integer maximizer of a concave sequence: first k with g(k+1) <= g(k)
long long concave_argmax(const IterationParams& p, int branch) {
  auto up = [&](long long k) {
    return needed_branch(p, static_cast<double>(k + 1), branch) > needed_branch(p, static_cast<double>(k), branch);
  };
  if (!up(0)) return 0;
  long long lo = 0, hi = 1;
  while (up(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > (1LL << 60)) throw NonConvergence("threshold: requirement unbounded in k");
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (up(mid)) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace

Threshold b0_threshold(const YoungFunction& yf, const IterationParams& p, long long horizon) {
  check_yf(yf, p);
  if (horizon < 1) throw DomainError("threshold: horizon >= 1 required");
  Threshold out;
  out.horizon = horizon;
  out.b0 = -std::numeric_limits<double>::infinity();
  for (int branch = 0; branch < 2; ++branch) {
    long long k = concave_argmax(p, branch);
    double v = needed_branch(p, static_cast<double>(k), branch);
    if (v > out.b0) {
      out.b0 = v;
      out.argmax_k = k;
    }
  }
  // direct scan over the horizon; the concave tail beyond it is covered above
  auto ok = [&](double b0) {
    for (long long k = 0; k <= horizon; ++k)
      if (induction_margin(p, b0, k) < 0.0) return false;
    return induction_margin(p, b0, out.argmax_k) >= 0.0;
  };
  int guard = 0;
  while (!ok(out.b0)) {
    out.b0 = std::nextafter(out.b0, INFINITY) + 1e-15 * std::fabs(out.b0) * guard;
    if (++guard > 64) throw NonConvergence("threshold: rounding did not settle");
  }
  return out;
}

ThresholdFit threshold_fit(const YoungFunction& yf, IterationParams p, const std::vector<double>& ratios) {
  ThresholdFit out;
  std::vector<double> xs;
  for (double q : ratios) {
    p.superradius_ratio = q;
    out.ratios.push_back(q);
    out.thresholds.push_back(b0_threshold(yf, p).b0);
    xs.push_back(std::pow(q, 1.0 / p.N));
  }
  out.fit = linear_fit(xs, out.thresholds);
  return out;
}

InnerBallConstants inner_ball_constants(const YoungFunction& yf, const IterationParams& p, double r,
                                        const ScalarFn& superradius) {
  if (!(r > 0.0)) throw DomainError("inner ball: r > 0 required");
  std::vector<double> ratios;
  for (int j = 0; j <= 10; ++j) ratios.push_back(std::ldexp(1.0, j));
  ThresholdFit tf = threshold_fit(yf, p, ratios);
  InnerBallConstants out;
  double cc = p.cutoff();
  out.C2 = 0.5 * tf.fit.slope;
  out.C1 = 2.0 / (cc * p.eps) * std::exp(0.5 * tf.fit.intercept);
  out.ratio = superradius(r) / r;
  if (!(out.ratio > 0.0) || !std::isfinite(out.ratio)) throw DomainError("inner ball: superradius must be positive");
  out.A_N = out.C1 * std::exp(out.C2 * std::pow(out.ratio, 1.0 / p.N));
  out.eta_N = 1.0 / out.A_N;
  out.ratio_3r = superradius(3.0 * r) / (3.0 * r);
  out.A_N_3r = out.C1 * std::exp(out.C2 * std::pow(out.ratio_3r, 1.0 / p.N));
  return out;
}

IterationRun max_principle_iterate_b(const YoungFunction& yf, double C, double c, double b0, int K) {
  if (!(C > 0.0) || !(c > 0.0)) throw DomainError("max principle: C, c > 0 required");
  IterationRun run;
  run.status = IterStatus::DivergedB;
  const double lnC = std::log(C), l4c2 = std::log(4.0 * c * c);
  double b = b0;
  run.states.push_back({0, std::exp(-b), b});
  if (!(b0 > 0.0)) {
    run.status = IterStatus::Blown;
    run.blown_at = 0;
    run.linear_growth = false;
    return run;
  }
  for (int k = 0; k < K; ++k) {
    double T = b - 3.0 * std::log(k + 2.0) - l4c2;
    b = b - lnC + yf.h(T);
    run.states.push_back({k + 1, std::exp(-b), b});
    if (!(b > 0.0)) {
      run.status = IterStatus::Blown;
      run.blown_at = k + 1;
      run.linear_growth = false;
      return run;
    }
    if (b < b0 + (k + 1)) run.linear_growth = false;
  }
  if (!run.linear_growth) run.status = IterStatus::Ok;
  return run;
}

IterationRun max_principle_iterate(const YoungFunction& yf, double C, double c, double U0, int K) {
  if (U0 < 0.0) throw DomainError("max principle: U0 >= 0 required");
  double b0 = U0 == 0.0 ? std::numeric_limits<double>::infinity() : -std::log(U0);
  return max_principle_iterate_b(yf, C, c, b0, K);
}

bool max_principle_condition(const YoungFunction& yf, double C, double c, double b0) {
  double shift = 1.0 - 3.0 * std::log(3.0);
  return yf.h(b0 + shift - std::log(4.0 * c * c)) > std::log(C) + 1.0;
}

double max_principle_b0(const YoungFunction& yf, double C, double c) {
  double target = std::log(C) + 1.0;
  double shift = 1.0 - 3.0 * std::log(3.0) - std::log(4.0 * c * c);
  // h is bounded below by ln (2N)^N
  if (std::log(yf.knot_slope()) > target) return 0.0;
  double hi = 1.0;
  while (yf.h(hi + shift) <= target) hi *= 2.0;
  double lo = -hi;
  while (yf.h(lo + shift) > target) lo *= 2.0;
  double b = bisect([&](double b0) { return yf.h(b0 + shift) - target; }, lo, hi, 1e-13);
  while (!max_principle_condition(yf, C, c, b)) b = std::nextafter(b, INFINITY);
  return std::max(b, 0.0);
}

}  // namespace degen
