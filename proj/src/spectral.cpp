#include "degen/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "degen/errors.hpp"
#include "degen/parallel.hpp"

namespace degen {

double EigenResult::value_at(double xq) const {
  double s = (xq + a) / grid_step - 1.0;  // fractional node index
  if (s <= -1.0 || s >= static_cast<double>(v0.size())) return 0.0;
  long i = static_cast<long>(std::floor(s));
  double w = s - static_cast<double>(i);
  double left = i >= 0 ? v0[i] : 0.0;
  double right = i + 1 < static_cast<long>(v0.size()) ? v0[i + 1] : 0.0;
  return (1.0 - w) * left + w * right;
}

ScalarFn decay_potential(double delta0) {
  if (!(delta0 > 0.0)) throw DomainError("potential: delta0 > 0 required");
  return [delta0](double x) { return x == 0.0 ? 0.0 : std::exp(-delta0 / std::fabs(x)); };
}

namespace {

TridiagonalOperator assemble(const ScalarFn& g, double eta, double a, int m) {
  TridiagonalOperator T;
  double h = 2.0 * a / (m + 1);
  T.grid_step = h;
  T.diagonal.resize(m);
  T.off_diagonal.assign(m - 1, -1.0 / (h * h));
  for (int i = 0; i < m; ++i) {
    double x = -a + (i + 1) * h;
    double gx = g(x);
    if (gx < 0.0) throw DomainError("least_eigen: g >= 0 required");
    T.diagonal[i] = 2.0 / (h * h) + gx * eta * eta;
  }
  return T;
}

}  // namespace

EigenResult least_eigen(const ScalarFn& g, double eta, double a, int m, bool refine_check) {
  if (m < 100) throw DomainError("least_eigen: m >= 100 required");
  if (!(a > 0.0)) throw DomainError("least_eigen: a > 0 required");
  TridiagonalOperator T = assemble(g, eta, a, m);
  Eigenpair ep = smallest_eigenpair(T);
  EigenResult out;
  out.eta = eta;
  out.a = a;
  out.lambda0 = ep.value;
  out.v0 = std::move(ep.vector);
  out.grid_step = T.grid_step;
  out.rayleigh = rayleigh_quotient(T, out.v0);
  if (refine_check) {
    out.refined_lambda = smallest_eigenpair(assemble(g, eta, a, 2 * m + 1)).value;
    if (std::fabs(out.refined_lambda - out.lambda0) > 1e-3 * std::fabs(out.refined_lambda))
      throw NonConvergence("least_eigen: grid refinement shifts the eigenvalue by more than 1e-3");
  }
  return out;
}

double mu0(double a, int m) {
  return least_eigen([](double) { return 1.0; }, 1.0, a, m, false).lambda0;
}

double a_of_eta(double delta0, double eta, double C) {
  double den = std::log(C) + 2.0 * std::log(eta);
  if (!(den > 0.0)) throw DomainError("a(eta): C eta^2 > 1 required");
  return delta0 / den;
}

ShapeDefect eigen_shape_defect(const EigenResult& e) {
  ShapeDefect out;
  const auto& v = e.v0;
  std::size_t m = v.size();
  double vmax = 0.0;
  for (double t : v) vmax = std::max(vmax, std::fabs(t));
  for (std::size_t i = 0; i < m; ++i) out.asymmetry = std::max(out.asymmetry, std::fabs(v[i] - v[m - 1 - i]));
  for (std::size_t i = m / 2; i + 1 < m; ++i) out.increase = std::max(out.increase, v[i + 1] - v[i]);
  out.asymmetry /= vmax;
  out.increase /= vmax;
  return out;
}

ComparabilityReport lambda_log_bound_sweep(double delta0, const std::vector<double>& etas, int m) {
  if (etas.empty()) throw DomainError("log bound sweep: empty eta list");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] >= 10.0)) throw DomainError("log bound sweep: eta >= 10 required");
    if (i > 0 && !(etas[i] > etas[i - 1])) throw DomainError("log bound sweep: etas must increase");
  }
  ScalarFn g = decay_potential(delta0);
  std::vector<EigenResult> full(etas.size());
  std::vector<double> inner(etas.size()), mus(etas.size());
  parallel_for(etas.size(), [&](std::size_t i) {
    full[i] = least_eigen(g, etas[i], 1.0, m, true);
    double ae = a_of_eta(delta0, etas[i]);
    inner[i] = least_eigen(g, etas[i], ae, m, false).lambda0;
    mus[i] = mu0(ae, m);
  });
  ComparabilityReport rep;
  rep.name = "lambda_log_bound";
  bool chain = true, mono = true;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    double L = std::log(etas[i]);
    rep.add({etas[i], full[i].lambda0}, full[i].lambda0, L * L);
    if (!(full[i].lambda0 <= inner[i] * (1.0 + 1e-12) && inner[i] <= mus[i] * (1.0 + 1e-12))) chain = false;
    if (i > 0 && !(full[i].lambda0 >= full[i - 1].lambda0)) mono = false;
  }
  double last = rep.samples.back().ratio;
  bool bounded = rep.ratio_max <= 2.0 * last + 1.0;
  rep.pass = bounded && chain && mono;
  std::ostringstream os;
  os << "bounded=" << bounded << " chain=" << chain << " monotone=" << mono << " last_ratio=" << last;
  rep.detail = os.str();
  return rep;
}

double SeriesSpec::coefficient(int n) const { return n >= 1 ? std::pow(static_cast<double>(n), -(0.5 + alpha_prime)) : 0.0; }

void SeriesSpec::validate() const {
  if (!(alpha_prime > 0.0)) throw DomainError("series: alpha' > 0 required");
  if (!(delta0 > 0.0)) throw DomainError("series: delta0 > 0 required");
  if (M < 1) throw DomainError("series: M >= 1 required");
}

double cosh_series(double t, double lambda, int terms) {
  double z = t * t * lambda, term = 1.0, sum = 1.0;
  for (int k = 1; k < terms; ++k) {
    term *= z / ((2.0 * k - 1.0) * (2.0 * k));
    sum += term;
  }
  return sum;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

// n -> (lambda, v(x_0), v(x_1), ...)
using CacheMap = std::map<int, std::vector<double>>;

CacheMap read_cache(const std::string& path, std::size_t width) {
  CacheMap out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int n;
    if (!(ls >> n)) continue;
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(std::strtod(tok.c_str(), nullptr));
    if (row.size() == width) out[n] = std::move(row);
  }
  return out;
}

void write_cache(const std::string& path, const CacheMap& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    for (const auto& [n, row] : data) {
      out << n;
      for (double v : row) out << ' ' << fmt_double(v);
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

SeriesData series_coefficients(const SeriesSpec& spec, const std::vector<double>& xs, const std::vector<double>& ts,
                               int m, const std::string& cache_dir) {
  spec.validate();
  SeriesData out;
  out.xs = xs;
  out.ts = ts;
  const int M = spec.M;
  const std::size_t width = 2 + xs.size();
  std::vector<std::vector<double>> rows(M);

  std::string path;
  CacheMap cache;
  if (!cache_dir.empty()) {
    std::ostringstream key;
    key << "delta0=" << fmt_double(spec.delta0) << ";m=" << m << ";x=";
    for (double x : xs) key << fmt_double(x) << ',';
    std::ostringstream name;
    name << "eig_" << std::hex << fnv1a(key.str()) << ".txt";
    std::filesystem::create_directories(cache_dir);
    path = (std::filesystem::path(cache_dir) / name.str()).string();
    cache = read_cache(path, width);
  }
  std::vector<int> missing;
  for (int n = 1; n <= M; ++n) {
    auto it = cache.find(n);
    if (it != cache.end()) rows[n - 1] = it->second;
    else missing.push_back(n);
  }
  ScalarFn g = decay_potential(spec.delta0);
  parallel_for(missing.size(), [&](std::size_t j) {
    int n = missing[j];
    EigenResult e = least_eigen(g, static_cast<double>(n), 1.0, m, false);
    std::vector<double> row{e.lambda0, center_value(e.v0)};
    for (double x : xs) row.push_back(e.value_at(x));
    rows[n - 1] = std::move(row);
  });
  if (!path.empty() && !missing.empty()) {
    for (int n : missing) cache[n] = rows[n - 1];
    write_cache(path, cache);
  }

  out.lambdas.resize(M);
  out.v_at_0.resize(M);
  out.B.resize(M);
  for (int n = 1; n <= M; ++n) {
    const auto& row = rows[n - 1];
    out.lambdas[n - 1] = row[0];
    out.v_at_0[n - 1] = row[1];
    double an = spec.coefficient(n), sl = std::sqrt(row[0]);
    auto& Bn = out.B[n - 1];
    Bn.resize(xs.size() * ts.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t k = 0; k < ts.size(); ++k) Bn[i * ts.size() + k] = std::cosh(ts[k] * sl) * row[2 + i] * an;
  }
  return out;
}

std::vector<double> l4_partial_sums(const std::vector<double>& b, const std::vector<int>& Ms) {
  int Mmax = 0;
  for (int M : Ms) {
    if (M < 2) throw DomainError("l4 partial sums: M >= 2 required");
    Mmax = std::max(Mmax, M);
  }
  if (static_cast<int>(b.size()) < Mmax - 1) throw DomainError("l4 partial sums: not enough coefficients");
  std::vector<double> S(Mmax + 1, 0.0);
  long double acc = 0.0L;
  for (int n = 2; n <= Mmax; ++n) {
    long double conv = 0.0L;
    for (int k = 1; k <= n - 1; ++k) conv += static_cast<long double>(b[n - k - 1]) * b[k - 1];
    acc += conv * conv;
    S[n] = static_cast<double>(acc);
  }
  std::vector<double> out;
  for (int M : Ms) out.push_back(S[M]);
  return out;
}

ConvolutionBound convolution_lower_bound(const SeriesSpec& spec, int nmax) {
  if (nmax < 2) throw DomainError("convolution bound: nmax >= 2 required");
  std::vector<double> a(nmax + 1);
  for (int n = 0; n <= nmax; ++n) a[n] = spec.coefficient(n);
  std::vector<double> scaled(nmax + 1, 0.0);
  for (int n = 2; n <= nmax; ++n) {
    long double s = 0.0L;
    for (int k = 1; k <= n - 1; ++k) s += static_cast<long double>(a[n - k]) * a[k];
    scaled[n] = static_cast<double>(s) * std::pow(static_cast<double>(n), 2.0 * spec.alpha_prime);
  }
  ConvolutionBound out;
  out.c_min = scaled[2];
  out.argmin = 2;
  for (int n = 3; n <= nmax; ++n)
    if (scaled[n] < out.c_min) {
      out.c_min = scaled[n];
      out.argmin = n;
    }
  for (int n = 2; n <= nmax; ++n)
    if (scaled[n] < out.c_min) ++out.violations;
  return out;
}

ComparabilityReport wn_sobolev_norms(const SeriesSpec& spec, const std::vector<double>& lambdas, int N_max,
                                     double alpha) {
  if (!(alpha > 0.0 && alpha < spec.alpha_prime)) throw DomainError("wN norms: 0 < alpha < alpha' required");
  ComparabilityReport rep;
  rep.name = "wN_factorial_bound";
  bool finite = true;
  double peak = 0.0;
  int peak_at = 0;
  std::vector<double> vals;
  for (int N = 0; N <= N_max; ++N) {
    // log of ||w_N||^2 = sum (lambda_n^N a_n)^2 with a running maximum
    double lmax = -INFINITY;
    std::vector<double> logs(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      logs[i] = 2.0 * (N * std::log(lambdas[i]) + std::log(spec.coefficient(static_cast<int>(i) + 1)));
      lmax = std::max(lmax, logs[i]);
    }
    double s = 0.0;
    for (double l : logs) s += std::exp(l - lmax);
    double log_norm = 0.5 * (lmax + std::log(s));
    double log_scaled =
        log_norm + 0.5 * std::log(std::max(N, 1)) + 2.0 * N * std::log(alpha) - std::lgamma(2.0 * N + 1.0);
    double v = std::exp(log_scaled);
    if (!std::isfinite(v)) finite = false;
    rep.add({static_cast<double>(N)}, v, 1.0);
    vals.push_back(v);
    if (v > peak) {
      peak = v;
      peak_at = N;
    }
  }
  // bounded: finite, and no longer rising at the end of the range
  rep.pass = finite && (N_max == 0 || vals.back() <= peak);
  std::ostringstream os;
  os << "peak=" << peak << " at N=" << peak_at << " terms=" << lambdas.size();
  rep.detail = os.str();
  return rep;
}

double energy_identity_defect(const SeriesSpec& spec, int M_terms, int N, int m) {
  spec.validate();
  if (M_terms < 1 || N < 0) throw DomainError("energy identity: M_terms >= 1, N >= 0 required");
  ScalarFn g = decay_potential(spec.delta0);
  std::vector<double> lhs_n(M_terms), rhs_n(M_terms);
  parallel_for(M_terms, [&](std::size_t j) {
    int n = static_cast<int>(j) + 1;
    EigenResult e = least_eigen(g, n, 1.0, m, false);
    double h = e.grid_step;
    std::size_t mm = e.v0.size();
    // grid energy of v_n: forward differences with zero ends, potential at nodes
    long double dx = 0.0L, pot = 0.0L, l2 = 0.0L;
    for (std::size_t i = 0; i <= mm; ++i) {
      double left = i > 0 ? e.v0[i - 1] : 0.0;
      double right = i < mm ? e.v0[i] : 0.0;
      double d = (right - left) / h;
      dx += d * d;
    }
    for (std::size_t i = 0; i < mm; ++i) {
      pot += g(e.x(i)) * static_cast<double>(n) * n * e.v0[i] * e.v0[i];
      l2 += e.v0[i] * e.v0[i];
    }
    double an = spec.coefficient(n), lam = e.lambda0;
    double w = an * an * std::pow(lam, 2.0 * N);
    // Parseval in y: total measure 2 pi on each side, cancels in the ratio
    lhs_n[j] = w * static_cast<double>((dx + pot) * h);
    rhs_n[j] = w * lam * static_cast<double>(l2 * h);
  });
  long double L = 0.0L, Rr = 0.0L;
  for (int j = 0; j < M_terms; ++j) {
    L += lhs_n[j];
    Rr += rhs_n[j];
  }
  return static_cast<double>(std::fabs(L - Rr) / Rr);
}

double plancherel_defect(const std::vector<double>& b) {
  std::size_t M = b.size();
  if (M == 0) throw DomainError("plancherel: empty coefficients");
  std::size_t P = 4 * M + 8;
  const double pi = std::acos(-1.0);
  long double quad = 0.0L;
  for (std::size_t p = 0; p < P; ++p) {
    double y = 2.0 * pi * p / P;
    std::complex<double> s = 0.0;
    for (std::size_t n = 1; n <= M; ++n) s += b[n - 1] * std::polar(1.0, y * n);
    quad += std::norm(s);
  }
  quad *= 2.0 * pi / P;
  long double direct = 0.0L;
  for (double v : b) direct += static_cast<long double>(v) * v;
  direct *= 2.0 * pi;
  return static_cast<double>(std::fabs(quad - direct) / direct);
}

std::vector<double> dy_energy_partial_sums(const SeriesSpec& spec, const std::vector<int>& Ms) {
  std::vector<double> out;
  long double acc = 0.0L;
  int n = 0;
  std::vector<int> sorted = Ms;
  if (!std::is_sorted(sorted.begin(), sorted.end())) throw DomainError("dy partial sums: M list must be sorted");
  for (int M : sorted) {
    while (n < M) {
      ++n;
      double a = spec.coefficient(n);
      acc += static_cast<long double>(n) * n * a * a;
    }
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

}  // namespace degen
