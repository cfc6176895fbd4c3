#include "degen/subrep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "degen/errors.hpp"
#include "degen/parallel.hpp"
#include "degen/rng.hpp"
#include "degen/volumes.hpp"

namespace degen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double threshold_radius(const Geometry& g, double x1) { return x1 > 0.0 ? 1.0 / g.absFp(x1) : 0.0; }

double log_ball(const Geometry& g, double x1, double r, int dim) {
  return dim == 2 ? log_formula_2d(g, x1, r) : log_formula_nd(g, x1, r, dim);
}

struct Node {
  double x, w;
};

// Gauss panels on [a,b] graded geometrically toward both ends.
std::vector<Node> graded_both(double a, double b, int levels, int order) {
  std::vector<Node> out;
  const GaussRule& gr = gauss_legendre(order);
  auto panel = [&](double lo, double hi) {
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < gr.x.size(); ++i) out.push_back({c + h * gr.x[i], h * gr.w[i]});
  };
  double m = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int side = 0; side < 2; ++side) {
    double end = side == 0 ? a : b, dir = side == 0 ? 1.0 : -1.0;
    for (int j = 0; j < levels; ++j) {
      double lo = half * std::ldexp(1.0, -j - 1), hi = half * std::ldexp(1.0, -j);
      panel(std::min(end + dir * lo, end + dir * hi), std::max(end + dir * lo, end + dir * hi));
    }
    double tiny = half * std::ldexp(1.0, -levels);
    panel(std::min(end, end + dir * tiny), std::max(end, end + dir * tiny));
  }
  (void)m;
  return out;
}

std::vector<Node> gauss_on(double a, double b, int order) {
  const GaussRule& gr = gauss_legendre(order);
  std::vector<Node> out;
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < gr.x.size(); ++i) out.push_back({c + h * gr.x[i], h * gr.w[i]});
  return out;
}

}  // namespace

const char* to_string(RadiiMode m) { return m == RadiiMode::Standard ? "standard" : "gamma"; }
const char* to_string(KernelVariant v) { return v == KernelVariant::DHat ? "dhat" : "naive"; }

int RadiiSequence::index_of(double t) const {
  if (radii.size() < 2 || !(t < radii[0]) || t < radii.back()) return -1;
  // radii decreasing: first index i with radii[i] <= t, then k = i - 1
  auto it = std::lower_bound(radii.begin(), radii.end(), t, [](double r, double v) { return r > v; });
  if (it == radii.end()) return -1;
  return static_cast<int>(it - radii.begin()) - 1;
}

RadiiSequence radii_sequence(const Geometry& g, double x1, double r0, RadiiMode mode, const RadiiOptions& opt) {
  if (!(x1 >= 0.0) || !(r0 > 0.0) || !(x1 + r0 < g.R())) throw DomainError("radii: need x1 >= 0, r0 > 0, x1 + r0 < R");
  if (opt.K < 2) throw DomainError("radii: K >= 2 required");
  if (mode == RadiiMode::Gamma && !(opt.gamma > 0.0)) throw DomainError("radii: gamma > 0 required");
  RadiiSequence s;
  s.x1 = x1;
  s.r0 = r0;
  s.mode = mode;
  s.gamma = opt.gamma;
  s.radii.push_back(r0);
  std::vector<char> main_branch;
  double thr = threshold_radius(g, x1) * (mode == RadiiMode::Gamma ? opt.gamma : 1.0);
  for (int k = 0; k < opt.K; ++k) {
    double r = s.radii.back();
    if (opt.r_min > 0.0 && r < opt.r_min) break;
    double next;
    bool main = r >= thr;
    if (main && mode == RadiiMode::Standard) {
      next = ball_shape(g, x1, r).r_star;
      if (!(next > 0.0 && next < r)) {
        next = 0.5 * r;
        main = false;
      }
    } else if (main) {
      next = r - opt.gamma / g.absFp(x1 + r);
      if (next < 0.5 * r) {
        next = 0.5 * r;
        ++s.guarded_steps;
        main = false;
      }
    } else {
      next = 0.5 * r;
    }
    if (main) ++s.main_steps;
    main_branch.push_back(main ? 1 : 0);
    s.radii.push_back(next);
  }
  for (std::size_t k = 0; k + 1 < s.radii.size(); ++k) {
    double a = s.radii[k], b = s.radii[k + 1];
    s.q.push_back(std::sqrt((a - b) * (a + b)));
  }
  if (opt.verify && s.radii.size() >= 2) {
    s.ball_ratio_min = kInf;
    s.ball_ratio_max = 0.0;
    for (std::size_t k = 0; k + 1 < s.radii.size(); ++k) {
      double ratio = std::exp(log_formula_2d(g, x1, s.radii[k]) - log_formula_2d(g, x1, s.radii[k + 1]));
      s.ball_ratio_min = std::min(s.ball_ratio_min, ratio);
      s.ball_ratio_max = std::max(s.ball_ratio_max, ratio);
      s.growth_C = std::max(s.growth_C, s.radii[k] / s.radii[k + 1] - 1.0);
    }
    for (std::size_t k = 0; k + 2 < s.radii.size(); ++k) {
      double d0 = s.radii[k] - s.radii[k + 1], d1 = s.radii[k + 1] - s.radii[k + 2];
      if (main_branch[k] && main_branch[k + 1])
        s.second_diff_c = std::max(s.second_diff_c, std::fabs(d0 - d1) * s.radii[k + 1] / (d0 * d0));
      if (k + 1 < s.q.size()) s.dq_c = std::max(s.dq_c, std::fabs(s.q[k] - s.q[k + 1]) / d0);
    }
  }
  return s;
}

double unit_ball_volume(int k) {
  if (k < 0) throw DomainError("unit ball: k >= 0 required");
  return std::exp(0.5 * k * std::log(std::acos(-1.0)) - std::lgamma(0.5 * k + 1.0));
}

EndMeasures end_measures(const Geometry& g, const RadiiSequence& seq, int k, int dim) {
  if (dim < 2) throw DomainError("ends: dim >= 2 required");
  if (k < 0 || static_cast<std::size_t>(k) + 2 >= seq.radii.size()) throw DomainError("ends: k out of range");
  const double x1 = seq.x1, rk = seq.radii[k], rk1 = seq.radii[k + 1];
  const double dr = rk - rk1, lomega = std::log(unit_ball_volume(dim - 2));
  EndMeasures out;
  double lhk = log_h_star(g, x1, rk);
  out.log_E_tilde = std::log(2.0) + lhk + lomega + (dim - 2) * std::log(seq.q[k]) + std::log(dr);
  out.log_E_hat = std::log(2.0) + lhk + lomega + (dim - 2) * std::log(seq.q[k + 1]) + std::log(dr);
  bool curved = rk >= threshold_radius(g, x1);
  double lcap = curved ? lhk : ball_shape(g, x1, rk).log_h;
  auto integrand = [&](double t) {
    double lh = curved ? log_h_star(g, x1, t) : lcap;
    double width = dim > 2 ? std::pow((rk - t) * (rk + t), 0.5 * (dim - 2)) : 1.0;
    return std::exp(lh - lcap) * width;
  };
  double I = gauss_fixed(integrand, rk1, rk, 24);
  out.log_E = std::log(2.0) + lcap + lomega + std::log(I);
  out.log_ball = log_ball(g, x1, rk, dim);
  return out;
}

void KernelSpec::validate(const Geometry& g) const {
  if (!(r0 > 0.0) || !(2.0 * r0 < g.R())) throw DomainError("kernel: need 0 < r0 < R/2");
  if (dim < 2) throw DomainError("kernel: dim >= 2 required");
}

bool in_cusp(const Geometry& g, const RadiiSequence& seq, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("cusp: bad points");
  double t = y[0] - x[0];
  int k = seq.index_of(t);
  if (k < 1) return false;
  std::size_t n = x.size();
  double mid = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) mid += (y[i] - x[i]) * (y[i] - x[i]);
  if (n > 2 && !(mid < seq.q[k] * seq.q[k])) return false;
  double dz = std::fabs(y[n - 1] - x[n - 1]);
  if (dz == 0.0) return true;
  return std::log(dz) < log_h_star(g, seq.x1, seq.radii[k]);
}

double kernel_log_from_distance(const Geometry& g, KernelVariant v, double x1, double d, int dim) {
  if (!(d > 0.0)) return kInf;
  double ld = std::log(d);
  if (v == KernelVariant::DHat) ld = std::min(ld, -std::log(g.absFp(x1 + d)));
  return ld - log_ball(g, x1, d, dim);
}

double kernel_log_eval(const Geometry& g, const KernelSpec& spec, const std::vector<double>& x,
                       const std::vector<double>& y) {
  spec.validate(g);
  if (static_cast<int>(x.size()) != spec.dim || static_cast<int>(y.size()) != spec.dim)
    throw DomainError("kernel: point dimension differs from spec");
  std::vector<double> xr = x, yr = y;
  if (xr[0] < 0.0) {
    xr[0] = -xr[0];
    yr[0] = -yr[0];
  }
  double t = yr[0] - xr[0];
  if (!(t > 0.0)) return -kInf;
  RadiiOptions ro;
  ro.K = 200000;
  ro.r_min = t;
  ro.verify = false;
  RadiiSequence seq = radii_sequence(g, xr[0], spec.r0, RadiiMode::Standard, ro);
  if (!in_cusp(g, seq, xr, yr)) return -kInf;
  double d = spec.dim == 2 ? control_distance_2d(g, {xr[0], xr[1]}, {yr[0], yr[1]}).d : control_distance_nd(g, xr, yr);
  return kernel_log_from_distance(g, spec.variant, xr[0], d, spec.dim);
}

double kernel_eval(const Geometry& g, const KernelSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
  return std::exp(kernel_log_eval(g, spec, x, y));
}

RowIntegral kernel_row_integral(const Geometry& g, double r0, std::array<double, 2> y, const RowOptions& opt) {
  KernelSpec spec{r0, 2, KernelVariant::DHat};
  spec.validate(g);
  const double y1 = y[0];
  if (!(y1 > 0.0) || !(y1 + r0 < g.R())) throw DomainError("row integral: need y1 > 0 in range");
  const double T = std::min(y1, r0);
  // nodes in t = y1 - x1, graded toward t = 0
  std::vector<Node> tn;
  const GaussRule& gr = gauss_legendre(opt.order);
  for (int j = 0; j < opt.levels; ++j) {
    double lo = T * std::ldexp(1.0, -j - 1), hi = T * std::ldexp(1.0, -j);
    int sub = std::max(1, 8 >> j);
    for (int s = 0; s < sub; ++s) {
      double a = lo + (hi - lo) * s / sub, b = lo + (hi - lo) * (s + 1) / sub;
      double c = 0.5 * (a + b), h = 0.5 * (b - a);
      for (std::size_t i = 0; i < gr.x.size(); ++i) tn.push_back({c + h * gr.x[i], h * gr.w[i]});
    }
  }
  std::vector<double> part_hat(tn.size(), 0.0), part_naive(tn.size(), 0.0);
  parallel_for(tn.size(), [&](std::size_t i) {
    double t = tn[i].x, x1 = y1 - t;
    RadiiOptions ro;
    ro.K = 200000;
    ro.r_min = t;
    ro.verify = false;
    RadiiSequence seq = radii_sequence(g, x1, r0, RadiiMode::Standard, ro);
    int k = seq.index_of(t);
    if (k < 1) return;
    double lH = log_h_star(g, x1, seq.radii[k]);
    const GaussRule& gs = gauss_legendre(opt.inner);
    double sh = 0.0, sn = 0.0;
    for (std::size_t j = 0; j < gs.x.size(); ++j) {
      // s = H (1 + xi) / 2 kept in logs: H underflows for small radii
      double d = control_distance_2d_log(g, x1, y1, lH + std::log(0.5 * (1.0 + gs.x[j]))).d;
      double lw = std::log(gs.w[j]) + lH;
      sh += std::exp(lw + kernel_log_from_distance(g, KernelVariant::DHat, x1, d, 2));
      sn += std::exp(lw + kernel_log_from_distance(g, KernelVariant::NaiveD, x1, d, 2));
    }
    part_hat[i] = tn[i].w * sh;
    part_naive[i] = tn[i].w * sn;
  });
  RowIntegral out;
  for (std::size_t i = 0; i < tn.size(); ++i) {
    out.dhat += part_hat[i];
    out.naive += part_naive[i];
  }
  return out;
}

double grad_A_norm(const Geometry& g, const TestFunction& tf, double x, double y) {
  double a = tf.wx(x, y), b = g.f(x) * tf.wy(x, y);
  return std::hypot(a, b);
}

std::vector<TestFunction> standard_test_family(const Geometry& g, double r0) {
  const double s = 1.0 / g.f(r0);  // y-scale of B(0, r0)
  std::vector<TestFunction> fam;
  fam.push_back({"x", [](double x, double) { return x; }, [](double, double) { return 1.0; },
                 [](double, double) { return 0.0; }});
  fam.push_back({"x2_plus_y", [s](double x, double y) { return x * x + s * y; },
                 [](double x, double) { return 2.0 * x; }, [s](double, double) { return s; }});
  fam.push_back({"sin_x", [r0](double x, double) { return std::sin(x / r0); },
                 [r0](double x, double) { return std::cos(x / r0) / r0; }, [](double, double) { return 0.0; }});
  fam.push_back({"y_scaled", [s](double, double y) { return s * y; }, [](double, double) { return 0.0; },
                 [s](double, double) { return s; }});
  for (double m : {0.1, 1.0}) {
    double M = m * s;
    std::ostringstream name;
    name << "sin_My_x_M" << m;
    fam.push_back({name.str(), [M](double x, double y) { return std::sin(M * y) * x; },
                   [M](double, double y) { return std::sin(M * y); },
                   [M](double x, double y) { return M * std::cos(M * y) * x; }});
  }
  return fam;
}

namespace {

struct CuspNode {
  double y1, s, weight;  // weight includes K
};

ResidualSample residual_at(const Geometry& g, double r0, double x1, double x2, const std::vector<TestFunction>& family,
                           const ResidualOptions& opt) {
  ResidualSample out;
  out.x1 = x1;
  out.x2 = x2;
  RadiiOptions ro;
  ro.K = opt.max_boxes + 2;
  ro.r_min = r0 * opt.r_min_factor;
  ro.verify = false;
  RadiiSequence seq = radii_sequence(g, x1, r0, RadiiMode::Standard, ro);
  out.truncated = !(seq.radii.back() < ro.r_min);
  if (seq.radii.size() < 4) throw NonConvergence("residual: radii sequence too short");

  // average over the curved end E(x, r_1)
  const double r1 = seq.radii[1], r2 = seq.radii[2];
  const bool curved = r1 >= threshold_radius(g, x1);
  const double lcap = curved ? log_h_star(g, x1, r1) : ball_shape(g, x1, r1).log_h;
  std::vector<Node> e1 = gauss_on(r2, r1, opt.end_nodes);
  const GaussRule& ge = gauss_legendre(opt.end_nodes);
  std::vector<double> mass(e1.size());
  std::vector<double> Hs(e1.size());
  for (std::size_t i = 0; i < e1.size(); ++i) {
    double lh = curved ? log_h_star(g, x1, e1[i].x) : lcap;
    Hs[i] = std::exp(lh);
    mass[i] = e1[i].w * std::exp(lh - lcap);
  }

  // cusp nodes with kernel weights
  std::vector<CuspNode> nodes;
  std::size_t boxes = seq.radii.size() - 2;
  out.boxes = static_cast<int>(boxes);
  int bn = boxes > 500 ? 2 : opt.box_nodes;
  for (std::size_t k = 1; k + 1 < seq.radii.size(); ++k) {
    double a = seq.radii[k + 1], b = seq.radii[k];
    double lH = log_h_star(g, x1, b);
    const GaussRule& gv = gauss_legendre(bn);
    for (const Node& u : gauss_on(a, b, bn)) {
      for (std::size_t j = 0; j < gv.x.size(); ++j) {
        double ls = lH + std::log(0.5 * (1.0 + gv.x[j]));
        double d = control_distance_2d_log(g, x1, x1 + u.x, ls).d;
        double lk = kernel_log_from_distance(g, KernelVariant::DHat, x1, d, 2);
        nodes.push_back({x1 + u.x, std::exp(ls), std::exp(std::log(u.w * 0.5 * gv.w[j]) + lH + lk)});
      }
    }
  }

  for (const TestFunction& tf : family) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
      double yy1 = x1 + e1[i].x, s = 0.0;
      for (std::size_t j = 0; j < ge.x.size(); ++j) s += ge.w[j] * tf.w(yy1, x2 + Hs[i] * ge.x[j]);
      num += mass[i] * 0.5 * s;
      den += mass[i];
    }
    double left = std::fabs(tf.w(x1, x2) - num / den);
    double right = 0.0;
    for (const CuspNode& c : nodes)
      right += c.weight * (grad_A_norm(g, tf, c.y1, x2 + c.s) + grad_A_norm(g, tf, c.y1, x2 - c.s));
    out.left.push_back(left);
    out.right.push_back(right);
  }
  return out;
}

}  // namespace

ResidualResult subrep_residual_check(const Geometry& g, double r0, const std::vector<TestFunction>& family,
                                     const ResidualOptions& opt) {
  KernelSpec spec{r0, 2, KernelVariant::DHat};
  spec.validate(g);
  if (opt.samples < 1) throw DomainError("residual: samples >= 1 required");
  if (family.empty()) throw DomainError("residual: empty test family");
  // sample points of the right half ball B(0, r0), drawn up front for determinism
  Rng rng(opt.seed);
  std::vector<std::array<double, 2>> pts;
  while (static_cast<int>(pts.size()) < opt.samples) {
    double x1 = r0 * rng.uniform(), u = rng.uniform();
    if (!(x1 > 0.0)) continue;
    double lh = ball_column_log_height(g, 0.0, r0, x1);
    if (!std::isfinite(lh)) continue;
    pts.push_back({x1, std::exp(lh) * (2.0 * u - 1.0)});
  }
  ResidualResult res;
  res.samples.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { res.samples[i] = residual_at(g, r0, pts[i][0], pts[i][1], family, opt); });
  for (std::size_t f = 0; f < family.size(); ++f) {
    ComparabilityReport rep;
    rep.name = "subrep_" + family[f].name;
    for (const auto& s : res.samples) rep.add({s.x1, s.x2}, s.left[f], s.right[f]);
    rep.pass = std::isfinite(rep.ratio_max);
    res.C = std::max(res.C, rep.ratio_max);
    res.per_function.push_back(rep);
  }
  return res;
}

EndpointResult sobolev_endpoint_integral(const Geometry& g, double N, double r0, double y1, int dim, double t_N) {
  if (!(N > 1.0)) throw DomainError("endpoint: N > 1 required");
  if (!(t_N > 1.0)) throw DomainError("endpoint: t_N > 1 required");
  if (dim < 2) throw DomainError("endpoint: dim >= 2 required");
  if (!(y1 > 0.0 && y1 <= r0) || !(2.0 * r0 < g.R())) throw DomainError("endpoint: need 0 < y1 <= r0 < R/2");
  EndpointResult out;
  out.t_N = t_N;
  const double a0 = g.absFp(r0);
  out.omega = 1.0 / (t_N * a0);
  const double lomega = std::log(out.omega);
  const double lB = dim == 2 ? log_formula_2d(g, 0.0, r0) : log_formula_nd(g, 0.0, r0, dim);
  const double lnE = 2.0 * N;
  const double n = dim;
  auto small_regime = [&](double r) {
    double x1 = y1 - r;
    return x1 > 0.0 && r * g.absFp(x1) < 2.0;
  };
  auto log_arg = [&](double r) {
    double x1 = y1 - r;
    double inv_s;
    if (small_regime(r)) inv_s = -(n - 1.0) * std::log(r) + g.F(x1);
    else {
      double ay = g.absFp(y1);
      inv_s = n * std::log(ay) + g.F(y1) - 0.5 * (n - 2.0) * std::log(r * ay);
    }
    return inv_s + lB - lomega;
  };
  auto psi = [&](double r, bool small_only) {
    double L = log_arg(r);
    if (L <= lnE) return std::pow(lnE, N);
    return small_only ? 0.0 : std::pow(L, N);
  };
  // regime switch: r |F'(y1 - r)| = 2 has one root (left side increasing)
  double rs = y1;
  if (small_regime(0.5 * y1 * 1e-12)) {
    auto h = [&](double r) { return r * g.absFp(y1 - r) - 2.0; };
    if (h(y1 * (1.0 - 1e-12)) > 0.0) rs = find_root(h, 0.5 * y1 * 1e-12, y1 * (1.0 - 1e-12), 1e-14);
  } else {
    rs = 0.0;
  }
  QuadratureSpec q;
  q.rel_tol = 1e-9;
  q.abs_tol = 1e-300;
  q.max_subdivisions = 40;
  // r = y1 e^{-u}; the small-r end carries an integrable log singularity
  auto in_u = [&](double a, double b, bool small_only) {
    if (!(b > a)) return 0.0;
    double ua = std::log(y1 / b), ub = std::log(y1 / a);
    return integrate_gk([&](double u) { double r = y1 * std::exp(-u); return psi(r, small_only) * r; }, ua, ub, q);
  };
  auto total = [&](bool small_only) {
    double lo = y1 * 1e-30;
    double v = 0.0;
    if (rs > lo) v += in_u(lo, rs, small_only);
    v += in_u(std::max(rs, lo), y1, small_only);
    // below y1 e^-69 the small branch gives at most (ln E)^N-type mass times lo
    return v;
  };
  out.I = total(false) / out.omega;
  out.I_small = total(true) / out.omega;
  out.small_cap = std::pow(lnE, N) * r0 / out.omega;
  out.bound = std::pow(a0, N + 1.0) * std::pow(r0, N + 1.0);
  // the extra geometric condition on a log grid of (0, r0)
  out.q_max = 0.0;
  for (int j = 0; j <= 200; ++j) {
    double r = r0 * std::ldexp(1.0, 0) * std::pow(2.0, -0.2 * j);
    out.q_max = std::max(out.q_max, r * g.Fpp(r) / g.absFp(r));
  }
  out.gammacond_ok = out.q_max < 1.0 + 1.0 / N;
  return out;
}

namespace {

struct Column {
  double u, wu, phi;  // column abscissa, weight, half height
};

std::vector<Column> ball_columns(const Geometry& g, double r, double a, double b, const PoincareOptions& opt) {
  std::vector<Node> un = graded_both(a, b, opt.levels, opt.order);
  std::vector<Column> cols(un.size());
  parallel_for(un.size(), [&](std::size_t i) {
    double lh = ball_column_log_height(g, 0.0, r, std::fabs(un[i].x));
    cols[i] = {un[i].x, un[i].w, std::isfinite(lh) ? std::exp(lh) : 0.0};
  });
  return cols;
}

// integral of fn over the union of columns |y| < phi(u)
template <class Fn>
double over_columns(const std::vector<Column>& cols, int inner, Fn fn) {
  const GaussRule& gr = gauss_legendre(inner);
  long double s = 0.0L;
  for (const Column& c : cols) {
    if (c.phi <= 0.0) continue;
    long double cs = 0.0L;
    for (std::size_t j = 0; j < gr.x.size(); ++j) cs += gr.w[j] * fn(c.u, c.phi * gr.x[j]);
    s += static_cast<long double>(c.wu) * c.phi * cs;
  }
  return static_cast<double>(s);
}

}  // namespace

ComparabilityReport division_of_regions_check(std::uint64_t seed, int trials, double ratio) {
  Rng rng(seed);
  ComparabilityReport rep;
  rep.name = "division_of_regions";
  int viol = 0;
  for (int t = 0; t < trials; ++t) {
    std::size_t n = 4 + rng.index(37);
    std::vector<double> w(n), mu(n);
    std::vector<int> part(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = rng.uniform() < 0.1 ? 0.0 : rng.uniform(-1.0, 1.0);
      mu[i] = rng.uniform(0.01, 1.0);
      part[i] = i == 0 ? 0 : (i == 1 ? 1 : static_cast<int>(rng.index(2)));
    }
    double m[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) m[part[i]] += mu[i];
    if (ratio > 0.0) {
      double scale = m[0] / (ratio * m[1]);
      for (std::size_t i = 0; i < n; ++i)
        if (part[i] == 1) mu[i] *= scale;
      m[1] *= scale;
    }
    long double S[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) S[part[i]][part[j]] += mu[i] * mu[j] * std::fabs(w[i] - w[j]);
    double lhs = static_cast<double>(S[0][0] + S[0][1] + S[1][0] + S[1][1]);
    double C = 2.0 + 2.0 * m[0] / m[1] + 2.0 * m[1] / m[0];
    double rhs = C * static_cast<double>(S[0][1]);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) ++viol;
    if (rhs > 0.0) rep.add({static_cast<double>(n), m[0] / m[1]}, lhs, rhs);
  }
  rep.pass = viol == 0;
  rep.detail = "violations=" + std::to_string(viol);
  return rep;
}

std::vector<ComparabilityReport> poincare_sobolev11_check(const Geometry& g, const std::vector<double>& radii,
                                                          const std::vector<TestFunction>& family, std::uint64_t seed,
                                                          const PoincareOptions& opt) {
  if (radii.empty()) throw DomainError("poincare: no radii");
  ComparabilityReport sob, half, full, incl;
  sob.name = "sobolev11_bump";
  half.name = "poincare_half_ball";
  full.name = "poincare_full_ball";
  incl.name = "inclusion";
  Rng rng(seed);
  bool incl_ok = true;
  double grad_dev = 0.0;
  for (double r : radii) {
    if (!(r > 0.0) || !(4.0 * r < g.R())) throw DomainError("poincare: need 0 < 4r < R");
    std::vector<TestFunction> fam = family.empty() ? standard_test_family(g, r) : family;

    // (1,1)-Sobolev with the bump (1 - d/r)_+^2; d and its A-gradient by differences
    std::vector<Column> pos = ball_columns(g, r, 0.0, r, opt);
    const GaussRule& gi = gauss_legendre(opt.inner);
    std::vector<std::array<double, 3>> vals(pos.size() * gi.x.size());
    parallel_for(vals.size(), [&](std::size_t idx) {
      const Column& c = pos[idx / gi.x.size()];
      double y = std::fabs(c.phi * gi.x[idx % gi.x.size()]);
      if (c.phi <= 0.0) {
        vals[idx] = {0.0, 0.0, 1.0};
        return;
      }
      auto dist = [&](double u, double v) { return control_distance_2d(g, {0.0, 0.0}, {u, v}).d; };
      double d = dist(c.u, y);
      double delta = 1e-5 * r, fy = g.f(c.u), dy = fy * delta;
      double gx = (dist(c.u + delta, y) - dist(c.u - delta, y)) / (2.0 * delta);
      double gy = (dist(c.u, y + dy) - dist(c.u, y - dy)) / (2.0 * delta);
      double gd = std::hypot(gx, gy);
      double s = std::max(0.0, 1.0 - d / r);
      vals[idx] = {s * s, 2.0 * s / r * gd, gd};
    });
    long double L = 0.0L, Rr = 0.0L;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (pos[i].phi <= 0.0) continue;
      for (std::size_t j = 0; j < gi.x.size(); ++j) {
        const auto& v = vals[i * gi.x.size() + j];
        long double wgt = static_cast<long double>(pos[i].wu) * pos[i].phi * gi.w[j] * 2.0;  // both u signs
        L += wgt * v[0];
        Rr += wgt * v[1];
        if (v[0] > 0.0) grad_dev = std::max(grad_dev, std::fabs(v[2] - 1.0));
      }
    }
    sob.add({r}, static_cast<double>(L), r * static_cast<double>(Rr));

    // Poincare on the half ball and on the full ball against B(0, 2r)
    std::vector<Column> full_cols = ball_columns(g, r, -r, r, opt);
    std::vector<Column> big_cols = ball_columns(g, 2.0 * r, -2.0 * r, 2.0 * r, opt);
    for (const TestFunction& tf : fam) {
      double mH = over_columns(pos, opt.inner, [](double, double) { return 1.0; });
      double wH = over_columns(pos, opt.inner, [&](double u, double y) { return tf.w(u, y); }) / mH;
      double lh = over_columns(pos, opt.inner, [&](double u, double y) { return std::fabs(tf.w(u, y) - wH); });
      double rh = over_columns(pos, opt.inner, [&](double u, double y) { return grad_A_norm(g, tf, u, y); });
      half.add({r}, lh, r * rh);
      double mF = over_columns(full_cols, opt.inner, [](double, double) { return 1.0; });
      double wF = over_columns(full_cols, opt.inner, [&](double u, double y) { return tf.w(u, y); }) / mF;
      double lf = over_columns(full_cols, opt.inner, [&](double u, double y) { return std::fabs(tf.w(u, y) - wF); });
      double rf = over_columns(big_cols, opt.inner, [&](double u, double y) { return grad_A_norm(g, tf, u, y); });
      full.add({r}, lf, r * rf);
    }

    // inclusions B(0,r) in (-r,r)x(-h,h) in B(0,2r), and the 2h box
    BallShape bs = ball_shape(g, 0.0, r);
    double phimax = 0.0;
    for (const Column& c : full_cols) phimax = std::max(phimax, c.phi);
    if (phimax > bs.h * (1.0 + 1e-8)) incl_ok = false;
    incl.add({r, 0.0}, phimax, bs.h);
    double worst = 0.0, worst2 = 0.0;
    for (int s = 0; s < opt.inclusion_samples; ++s) {
      double u = r * rng.uniform(-1.0, 1.0), v = bs.h * rng.uniform(-1.0, 1.0);
      double d = control_distance_2d(g, {0.0, 0.0}, {u, v}).d;
      worst = std::max(worst, d / (2.0 * r));
      double d2 = control_distance_2d(g, {0.0, 0.0}, {u, 2.0 * v}).d;
      worst2 = std::max(worst2, d2 / (2.0 * r));
    }
    if (!(worst < 1.0) || !(worst2 < 1.0)) incl_ok = false;
    incl.add({r, 1.0}, worst, 1.0);
    incl.add({r, 2.0}, worst2, 1.0);
  }
  sob.pass = std::isfinite(sob.ratio_max) && sob.ratio_min > 0.0;
  {
    std::ostringstream os;
    os << "max | |grad_A d| - 1 | = " << grad_dev;
    sob.detail = os.str();
  }
  half.pass = std::isfinite(half.ratio_max);
  full.pass = std::isfinite(full.ratio_max);
  incl.pass = incl_ok;
  ComparabilityReport div = division_of_regions_check(seed ^ 0x9e3779b97f4a7c15ULL, 200, 0.0);
  ComparabilityReport div1 = division_of_regions_check(seed + 1, 200, 1.0);
  div.name = "division_of_regions";
  div1.name = "division_of_regions_equal";
  return {sob, half, full, incl, div, div1};
}

std::vector<ComparabilityReport> average_control_check(const Geometry& g, const std::vector<double>& radii,
                                                       const std::vector<TestFunction>& family, int samples,
                                                       std::uint64_t seed, const PoincareOptions& opt) {
  if (radii.empty() || samples < 1) throw DomainError("average control: need radii and samples >= 1");
  ComparabilityReport ctl, overlap, ends;
  ctl.name = "avg_control";
  overlap.name = "avg_control_overlap";
  ends.name = "avg_control_ends";
  Rng rng(seed);
  const GaussRule& gi = gauss_legendre(opt.inner);
  for (double r : radii) {
    if (!(r > 0.0) || !(2.0 * r < g.R())) throw DomainError("average control: need 0 < 2r < R");
    std::vector<TestFunction> fam = family.empty() ? standard_test_family(g, r) : family;
    double rs = ball_shape(g, 0.0, r).r_star, rho = r - rs;
    auto half_height = [&](double u) {
      double lh = ball_column_log_height(g, 0.0, r, u);
      return std::isfinite(lh) ? std::exp(lh) : 0.0;
    };

    // reference end E~(0,r) and |grad_A w| averaged over the half ball
    double lH0 = log_h_star(g, 0.0, r), H0 = std::exp(lH0);
    std::vector<Node> ref = gauss_on(rs, r, opt.order);
    std::vector<Column> pos = ball_columns(g, r, 0.0, r, opt);
    double mHB = over_columns(pos, opt.inner, [](double, double) { return 1.0; });
    std::vector<double> ref_avg(fam.size()), grad(fam.size());
    for (std::size_t f = 0; f < fam.size(); ++f) {
      long double s = 0.0L;
      for (const Node& n : ref)
        for (std::size_t j = 0; j < gi.x.size(); ++j) s += n.w * gi.w[j] * 0.5 * fam[f].w(n.x, H0 * gi.x[j]);
      ref_avg[f] = static_cast<double>(s) / rho;
      grad[f] = over_columns(pos, opt.inner, [&](double u, double y) { return grad_A_norm(g, fam[f], u, y); }) / mHB;
    }

    for (int k = 0; k < samples; ++k) {
      double x1 = rs * (1.0 - rng.uniform());  // (0, r*]
      double x2 = half_height(x1) * rng.uniform(-1.0, 1.0);
      RadiiOptions ro;
      ro.K = 2;
      ro.verify = false;
      double next = radii_sequence(g, x1, rho, RadiiMode::Standard, ro).radii.at(1), width = rho - next;
      double lH = log_h_star(g, x1, rho), H = std::exp(lH);
      // box E~(x, rho) in the unit coordinate t: y = x2 + H t, |t| < 1
      auto to_t = [&](double y) {
        double d = y - x2;
        if (d == 0.0) return 0.0;
        return std::copysign(std::exp(std::log(std::fabs(d)) - lH), d);
      };
      std::vector<Node> cols = graded_both(x1 + next, x1 + rho, opt.levels / 2, opt.order);
      std::vector<double> lo(cols.size()), hi(cols.size());
      parallel_for(cols.size(), [&](std::size_t i) {
        double ph = half_height(cols[i].x);
        lo[i] = std::max(-1.0, to_t(-ph));
        hi[i] = std::min(1.0, to_t(ph));
      });
      long double cap = 0.0L;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (hi[i] > lo[i]) cap += cols[i].w * 0.5 * (hi[i] - lo[i]);
      overlap.add({r, x1, x2}, static_cast<double>(cap) / width, 1.0);
      ends.add({r, x1, x2}, std::exp(lH - lH0) * width / rho, 1.0);
      for (std::size_t f = 0; f < fam.size(); ++f) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < cols.size(); ++i) {
          if (!(hi[i] > lo[i])) continue;
          double c = 0.5 * (lo[i] + hi[i]), h = 0.5 * (hi[i] - lo[i]);
          for (std::size_t j = 0; j < gi.x.size(); ++j)
            s += cols[i].w * gi.w[j] * 0.5 * h * fam[f].w(cols[i].x, x2 + H * (c + h * gi.x[j]));
        }
        double lhs = std::fabs(static_cast<double>(s) / width - ref_avg[f]);
        ctl.add({r, x1, x2, static_cast<double>(f)}, lhs, r * grad[f]);
      }
    }
  }
  // comparability window [1e-2, 1e2]; the control is one-sided
  ctl.pass = ctl.ratio_max <= 1e2;
  overlap.pass = overlap.ratio_min >= 1e-2 && overlap.ratio_max <= 1.0 + 1e-9;
  ends.pass = ends.within(1e-2, 1e2);
  ctl.detail = "left / (r avg_HB |grad_A w|)";
  overlap.detail = "|E~(x, r - r*) cap HB(0,r)| / |E~(x, r - r*)|";
  ends.detail = "|E~(x, r - r*)| / |E~(0,r)|";
  return {ctl, overlap, ends};
}

}  // namespace degen
