#include <algorithm>
#include <cmath>
#include <sstream>

#include "degen/cli.hpp"
#include "degen/degiorgi.hpp"
#include "degen/errors.hpp"
#include "degen/geodesics.hpp"
#include "degen/orlicz.hpp"
#include "degen/spectral.hpp"
#include "degen/subrep.hpp"
#include "degen/volumes.hpp"

namespace degen {

namespace {

Geometry geometry_from(const RunConfig& cfg, Report& rep, double sigma_default = 1.0) {
  std::string kind = cfg.str("geometry", "power");
  if (kind != "power") throw DomainError("unknown geometry '" + kind + "' (supported: power)");
  double sigma = cfg.num("sigma", sigma_default), R = cfg.num("R", 1.0);
  rep.param("geometry", kind);
  rep.param("sigma", sigma);
  rep.param("R", R);
  return make_power_geometry(sigma, R);
}

int positive_int(const RunConfig& cfg, const std::string& key, long long def) {
  long long v = cfg.integer(key, def);
  if (v < 1 || v > 100000000) throw DomainError("'" + key + "' must be a positive integer");
  return static_cast<int>(v);
}

CommandResult cmd_geodesic(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep);
  double lambda = cfg.has("lambda") ? cfg.num("lambda", 0.0) : g.f(0.2 * g.R());
  int samples = positive_int(cfg, "samples", 64);
  rep.param("lambda", lambda);
  rep.param("samples", std::to_string(samples));
  GeodesicRecord rec = turning_data(g, lambda, samples);
  rep.param("X", rec.X);
  rep.param("Y", rec.Y);
  rep.param("R_len", rec.R_len);
  double fX = g.f(rec.X);
  rep.check("turning_abscissa", "geo.turning_point", fX, lambda, std::fabs(fX / lambda - 1.0) <= 1e-8);
  double cap = lambda / g.absFp(rec.X);
  rep.check("turning_height_upper_bound", "geo.height_upper_bound", rec.Y, cap, rec.Y <= cap * (1.0 + 1e-9));
  double hi = 1.0 + 1.0 / g.eps() + 1e-6;
  double q = rec.R_len / rec.X;
  rep.check("arc_length_vs_abscissa", "geo.arc_length", rec.R_len, rec.X, q >= 1.0 && q <= hi);
  double dev = std::fabs(rec.Y_prime - rec.Y_prime_fd) / std::fabs(rec.Y_prime);
  rep.check("turning_height_derivative", "geo.Y_prime", rec.Y_prime, rec.Y_prime_fd, dev <= 1e-4);
  bool mono = true;
  Table t{"geodesic.csv", {"x", "y", "t"}, {}};
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    const auto& s = rec.samples[i];
    if (s.t < s.x * (1.0 - 1e-12)) mono = false;
    if (i > 0 && !(s.y > rec.samples[i - 1].y)) mono = false;
    t.rows.push_back({s.x, s.y, s.t});
  }
  rep.check("samples_monotone", "geo.record", static_cast<double>(rec.samples.size()), 0.0, mono);
  res.tables.push_back(t);
  return res;
}

CommandResult cmd_distance(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep);
  std::vector<double> p = cfg.list("p"), q = cfg.list("q");
  if (p.empty() || q.empty()) throw DomainError("distance needs --p and --q");
  if (p.size() != q.size() || p.size() < 2) throw DomainError("--p and --q need the same dimension >= 2");
  rep.param("p", cfg.str("p", ""));
  rep.param("q", cfg.str("q", ""));
  std::size_t n = p.size();
  DistanceResult d2 = control_distance_2d(g, {p[0], p[n - 1]}, {q[0], q[n - 1]});
  double d = n == 2 ? d2.d : control_distance_nd(g, p, q);
  DHat dh = d_hat(g, p, q);
  rep.param("d", d);
  rep.param("d_hat", dh.d_hat);
  rep.param("kind", to_string(d2.kind));
  rep.check("distance_bounds", "geo.distance_bounds", d2.d, d2.upper_bound,
            d2.d >= d2.lower_bound * (1.0 - 1e-9) && d2.d <= d2.upper_bound * (1.0 + 1e-9));
  rep.check("shooting_reached", "geo.distance", d2.d, d2.upper_bound, d2.kind != DistanceKind::UpperBoundOnly,
            d2.kind == DistanceKind::UpperBoundOnly ? "taxicab bound only" : "");
  res.tables.push_back({"distance.csv", {"d", "d_hat", "lower", "upper"}, {{d, dh.d_hat, d2.lower_bound, d2.upper_bound}}});
  return res;
}

CommandResult cmd_ball_volume(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep);
  double x1 = cfg.num("x1", 0.0), r = cfg.num("r", 1.0 / 16);
  int dim = positive_int(cfg, "dim", 2);
  bool oracle = cfg.flag("oracle");
  rep.param("x1", x1);
  rep.param("r", r);
  rep.param("dim", std::to_string(dim));
  if (dim < 2) throw DomainError("--dim must be >= 2");
  BallVolumeResult v = dim == 2 ? area_2d(g, x1, r, oracle) : volume_nd(g, x1, r, dim, oracle);
  rep.param("regime", to_string(v.regime));
  rep.param("log_formula", v.log_formula);
  rep.param("formula", v.formula());
  std::vector<double> row = {x1, r, static_cast<double>(dim), v.log_formula};
  rep.check("formula_finite", "vol.formula", v.log_formula, 0.0, std::isfinite(v.log_formula));
  if (oracle) {
    rep.param("log_oracle", v.log_oracle);
    rep.param("oracle", v.oracle());
    rep.param("ratio", v.ratio());
    double q = v.ratio();
    rep.check("formula_vs_oracle", "vol.comparable", v.formula(), v.oracle(), q >= 1e-2 && q <= 1e2);
    row.push_back(v.log_oracle);
  } else {
    row.push_back(std::nan(""));
  }
  res.tables.push_back({"ball_volume.csv", {"x1", "r", "dim", "log_formula", "log_oracle"}, {row}});
  return res;
}

CommandResult cmd_orlicz(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  double N = cfg.num("N", 2.0);
  std::string which = cfg.str("check", "all");
  int trials = positive_int(cfg, "trials", 100000);
  auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 7));
  rep.param("N", N);
  rep.param("check", which);
  rep.param("trials", std::to_string(trials));
  rep.param("seed", std::to_string(seed));
  YoungFunction yf(N);
  AlgebraOptions opt;
  opt.submult_trials = trials;
  opt.young_trials = std::max(1, trials / 10);
  opt.holder_trials = std::max(1, trials / 100);
  auto reps = algebra_checks(yf, seed, opt);
  bool any = false;
  for (const auto& r : reps) {
    if (which != "all" && r.name != which) continue;
    rep.absorb(r, "orlicz." + r.name);
    any = true;
  }
  if (!any) {
    std::string names;
    for (const auto& r : reps) names += " " + r.name;
    throw DomainError("unknown --check '" + which + "'; choose all or one of:" + names);
  }
  Table t{"orlicz_phi.csv", {"t", "phi"}, {}};
  for (int i = 0; i <= 40; ++i) {
    double x = std::pow(10.0, -2.0 + 0.15 * i);
    t.rows.push_back({x, yf.phi(x)});
  }
  res.tables.push_back(t);
  return res;
}

CommandResult cmd_kernel_check(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep);
  double r = cfg.num("r", 1.0 / 64);
  int dim = positive_int(cfg, "dim", 2);
  std::string vname = cfg.str("variant", "dhat");
  if (vname != "dhat" && vname != "naive") throw DomainError("--variant must be dhat or naive");
  KernelVariant v = vname == "dhat" ? KernelVariant::DHat : KernelVariant::NaiveD;
  rep.param("r", r);
  rep.param("dim", std::to_string(dim));
  rep.param("variant", vname);
  if (dim == 2) {
    RowIntegral ri = kernel_row_integral(g, r, {r, 0.0});
    double val = ri.value(v), q = val / r;
    rep.param("row_integral", val);
    if (v == KernelVariant::DHat)
      rep.check("row_integral_over_r", "kernel.row_bound", val, r, q >= 1e-2 && q <= 1e2);
    else
      rep.check("row_integral_over_r", "kernel.naive_failure", val, r, q >= 0.1,
                "the naive kernel row integral is not O(r)");
    res.tables.push_back({"kernel.csv", {"r", "dhat", "naive"}, {{r, ri.dhat, ri.naive}}});
    return res;
  }
  // n >= 3: pointwise kernel values along the axis of the cusp at x = (r/4, 0, ..., 0)
  KernelSpec spec{r, dim, v};
  std::vector<double> x(dim, 0.0);
  x[0] = 0.25 * r;
  Table t{"kernel.csv", {"t", "log_kernel"}, {}};
  bool ok = true;
  for (int i = 1; i <= 8; ++i) {
    double s = r * std::ldexp(1.0, -i);
    std::vector<double> y = x;
    y[0] += s;
    double lk = kernel_log_eval(g, spec, x, y);
    if (std::isnan(lk)) ok = false;
    t.rows.push_back({s, lk});
  }
  rep.check("kernel_values_defined", "kernel.eval", static_cast<double>(t.rows.size()), 0.0, ok);
  res.tables.push_back(t);
  return res;
}

CommandResult cmd_sobolev_endpoint(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep, 0.4);
  double N = cfg.num("N", 2.0), r = cfg.num("r", 1.0 / 64), y1 = cfg.num("y1", r);
  int dim = positive_int(cfg, "dim", 2);
  rep.param("N", N);
  rep.param("r", r);
  rep.param("y1", y1);
  rep.param("dim", std::to_string(dim));
  EndpointResult e = sobolev_endpoint_integral(g, N, r, y1, dim);
  rep.param("I", e.I);
  rep.param("bound", e.bound);
  rep.param("q_max", e.q_max);
  rep.check("growth_condition", "endpoint.gammacond", e.q_max, 1.0 + 1.0 / N, e.gammacond_ok);
  rep.check("small_argument_part", "endpoint.small_part", e.I_small, e.small_cap, e.I_small <= e.small_cap * (1.0 + 1e-9));
  double q = e.I / e.bound;
  rep.check("endpoint_integral_bounded", "endpoint.bound", e.I, e.bound, q >= 1e-2 && q <= 1e2);
  res.tables.push_back({"sobolev_endpoint.csv", {"r", "y1", "I", "bound"}, {{r, y1, e.I, e.bound}}});
  return res;
}

CommandResult cmd_poincare(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  Geometry g = geometry_from(cfg, rep);
  double r = cfg.num("r", 1.0 / 16);
  auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 7));
  rep.param("r", r);
  rep.param("seed", std::to_string(seed));
  auto reps = poincare_sobolev11_check(g, {r}, {}, seed);
  for (auto& a : average_control_check(g, {r}, {}, 20, seed)) reps.push_back(std::move(a));
  Table t{"poincare.csv", {"index", "ratio_min", "ratio_max"}, {}};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    rep.absorb(reps[i], "poincare." + reps[i].name);
    t.rows.push_back({static_cast<double>(i), reps[i].ratio_min, reps[i].ratio_max});
  }
  res.tables.push_back(t);
  return res;
}

Table iteration_table(const std::string& file, const IterationRun& run) {
  Table t{file, {"k", "U", "b"}, {}};
  for (const auto& s : run.states) t.rows.push_back({static_cast<double>(s.k), s.U, s.b});
  return t;
}

CommandResult cmd_degiorgi(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  IterationParams p;
  p.N = cfg.num("N", 2.0);
  p.eps = cfg.num("eps", 1.0);
  p.superradius_ratio = cfg.num("ratio", 1.0);
  p.C_iter = cfg.num("C", 1.0);
  p.tau = cfg.num("tau", 1.0);
  p.phi_norm = cfg.num("phi-norm", 1.0);
  p.validate();
  int steps = positive_int(cfg, "steps", 200);
  YoungFunction yf(p.N);
  Threshold th = b0_threshold(yf, p);
  std::string b0s = cfg.str("b0", "auto");
  double b0 = b0s == "auto" ? th.b0 : cfg.num("b0", 0.0);
  for (auto [k, v] : std::vector<std::pair<std::string, double>>{
           {"N", p.N}, {"eps", p.eps}, {"ratio", p.superradius_ratio}, {"C", p.C_iter}, {"tau", p.tau},
           {"phi-norm", p.phi_norm}, {"b0", b0}, {"threshold", th.b0}})
    rep.param(k, v);
  rep.param("steps", std::to_string(steps));
  IterationRun run = degiorgi_iterate_b(yf, p, b0, steps);
  rep.param("status", to_string(run.status));
  rep.check("iteration_defined", "degiorgi.recursion", static_cast<double>(run.states.size()), steps + 1.0,
            run.status == IterStatus::Ok,
            run.status == IterStatus::Blown ? "blown at k=" + std::to_string(run.blown_at) : "");
  double last = run.states.empty() ? b0 : run.states.back().b;
  rep.check("linear_growth", "degiorgi.induction", last, b0 + (run.states.empty() ? 0 : run.states.back().k),
            run.linear_growth);
  res.tables.push_back(iteration_table("degiorgi.csv", run));
  return res;
}

CommandResult cmd_maxprinciple(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  double N = cfg.num("N", 2.0), C = cfg.num("C", 100.0), c = cfg.num("c", 0.3);
  int steps = positive_int(cfg, "steps", 500);
  YoungFunction yf(N);
  std::string b0s = cfg.str("b0", "auto");
  double b0 = b0s == "auto" ? max_principle_b0(yf, C, c) : cfg.num("b0", 0.0);
  rep.param("N", N);
  rep.param("C", C);
  rep.param("c", c);
  rep.param("b0", b0);
  rep.param("steps", std::to_string(steps));
  bool cond = max_principle_condition(yf, C, c, b0);
  rep.check("positivity_condition", "maxprinciple.condition", b0, max_principle_b0(yf, C, c), cond);
  IterationRun run = max_principle_iterate_b(yf, C, c, b0, steps);
  rep.param("status", to_string(run.status));
  double last = run.states.empty() ? b0 : run.states.back().b;
  rep.check("divergence", "maxprinciple.divergence", last, b0 + (run.states.empty() ? 0 : run.states.back().k),
            run.linear_growth && run.status != IterStatus::Blown);
  res.tables.push_back(iteration_table("maxprinciple.csv", run));
  return res;
}

CommandResult cmd_counterexample(const RunConfig& cfg) {
  CommandResult res;
  Report& rep = res.report;
  SeriesSpec spec;
  spec.delta0 = cfg.num("delta0", 1.0);
  spec.alpha_prime = cfg.num("alpha-prime", 0.25);
  spec.M = positive_int(cfg, "M", 4096);
  spec.validate();
  double t = cfg.num("t", 0.0), x = cfg.num("x", 0.0);
  int m = positive_int(cfg, "m", 1000);
  std::string cache = cfg.str("cache", "");
  rep.param("delta0", spec.delta0);
  rep.param("alpha-prime", spec.alpha_prime);
  rep.param("M", std::to_string(spec.M));
  rep.param("t", t);
  rep.param("x", x);
  rep.param("m", std::to_string(m));
  if (spec.M < 128) throw DomainError("--M must be at least 128 for the fit");
  SeriesData sd = series_coefficients(spec, {x}, {t}, m, cache);
  std::vector<double> b(spec.M);
  for (int n = 1; n <= spec.M; ++n) b[n - 1] = sd.B_at(n, 0, 0);
  std::vector<int> Ms;
  for (int M = 64; M <= spec.M; M *= 2) Ms.push_back(M);
  std::vector<double> S = l4_partial_sums(b, Ms);
  Table tab{"counterexample.csv", {"M", "S_M"}, {}};
  std::vector<double> lx;
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    tab.rows.push_back({static_cast<double>(Ms[i]), S[i]});
    lx.push_back(std::log(static_cast<double>(Ms[i])));
  }
  LinearFit fit = linear_fit(lx, S);
  rep.param("fit_slope", fit.slope);
  rep.param("fit_intercept", fit.intercept);
  rep.param("fit_r2", fit.r2);
  rep.check("partial_sums_grow", "series.divergence", fit.slope, 0.0, fit.slope > 0.0);
  rep.check("log_fit_r2", "series.log_fit", fit.r2, 0.98, fit.r2 >= 0.98);
  ConvolutionBound cb = convolution_lower_bound(spec, std::min(spec.M, 10000));
  rep.check("convolution_lower_bound", "series.convolution", cb.c_min, 0.0, cb.c_min > 0.0 && cb.violations == 0);
  res.tables.push_back(tab);
  return res;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"geodesic",         "distance", "ball-volume", "orlicz",
                                                 "kernel-check",     "sobolev-endpoint", "poincare", "degiorgi",
                                                 "maxprinciple",     "counterexample",   "verify-all"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  CommandResult res;
  if (name == "geodesic") res = cmd_geodesic(cfg);
  else if (name == "distance") res = cmd_distance(cfg);
  else if (name == "ball-volume") res = cmd_ball_volume(cfg);
  else if (name == "orlicz") res = cmd_orlicz(cfg);
  else if (name == "kernel-check") res = cmd_kernel_check(cfg);
  else if (name == "sobolev-endpoint") res = cmd_sobolev_endpoint(cfg);
  else if (name == "poincare") res = cmd_poincare(cfg);
  else if (name == "degiorgi") res = cmd_degiorgi(cfg);
  else if (name == "maxprinciple") res = cmd_maxprinciple(cfg);
  else if (name == "counterexample") res = cmd_counterexample(cfg);
  else if (name == "verify-all") {
    VerifyOptions opt;
    opt.quick = cfg.flag("quick");
    opt.seed = static_cast<std::uint64_t>(cfg.integer("seed", 7));
    opt.sigma = cfg.num("sigma", 0.0);
    opt.cache_dir = cfg.str("cache", "");
    std::vector<int> ids;
    for (double v : cfg.list("criteria")) {
      if (v != std::floor(v) || v < 1 || v > kCriteriaCount) throw DomainError("--criteria takes ids 1..12");
      ids.push_back(static_cast<int>(v));
    }
    res = run_verify_all(opt, ids);
  } else {
    throw DomainError("unknown command '" + name + "'");
  }
  res.report.command = name;
  return res;
}

}  // namespace degen
