#include "mcurv/saw.hpp"

#include <algorithm>
#include <cmath>

#include "mcurv/dd.hpp"
#include "mcurv/kernels.hpp"

namespace mcurv::saw {

namespace {

double tail_for_level(int N, double alpha, int K) {
  double q = std::pow(static_cast<double>(N), -alpha);
  return std::pow(static_cast<double>(N), -alpha * (K + 1)) / (1.0 - q);
}

double g0(double u) { return u <= 0.5 ? u * u : (2.0 - u) * u - 0.5; }

}  // namespace

SawParams SawParams::with_level(int N, double alpha, int K) {
  SawParams p;
  p.N = N;
  p.alpha = alpha;
  p.truncation_level = K;
  p.validate();
  p.tolerance = tail_for_level(N, alpha, K);
  return p;
}

SawParams SawParams::with_tolerance(int N, double alpha, double tol) {
  SawParams p;
  p.N = N;
  p.alpha = alpha;
  p.truncation_level = -1;
  p.tolerance = tol;
  p.validate();
  return p;
}

void SawParams::validate() const {
  if (N < 2) throw input_error("N must be an integer >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must be in (0,1)");
  if (truncation_level < 0 && !(tolerance > 0.0))
    throw input_error("tolerance must be positive");
  if (truncation_level < 0 && level() > 4096)
    throw input_error("tolerance requires an unreasonable truncation level");
}

int SawParams::level() const {
  if (truncation_level >= 0) return truncation_level;
  // smallest K >= 0 with N^{-alpha(K+1)} <= tol * (1 - N^{-alpha})
  double q = std::pow(static_cast<double>(N), -alpha);
  double target = tolerance * (1.0 - q);
  double k = std::log(1.0 / target) / (alpha * std::log(static_cast<double>(N))) - 1.0;
  int K = std::max(0, static_cast<int>(std::ceil(k - 1e-9)));
  while (K < 8192 && tail_for_level(N, alpha, K) > tolerance) ++K;
  return K;
}

double SawParams::tail_bound() const { return tail_for_level(N, alpha, level()); }

SawTables SawTables::build(const SawParams& p) {
  p.validate();
  SawTables t;
  t.N = p.N;
  t.K = p.level();
  t.alpha = p.alpha;
  t.scale_f.resize(t.K + 1);
  t.scale_F.resize(t.K + 1);
  double Nd = static_cast<double>(p.N);
  for (int k = 0; k <= t.K; ++k) {
    t.scale_f[k] = std::pow(Nd, -p.alpha * k);
    t.scale_F[k] = std::pow(Nd, -(1.0 + p.alpha) * k);
  }
  t.tail = p.tail_bound();
  return t;
}

double saw_base(double x) {
  double u = x - std::floor(x);
  double u2 = u + u;
  return u <= 0.5 ? u2 : 2.0 - u2;
}

SawValue saw_sum(double x, const SawTables& t) {
  DD u = dd_frac(DD(x));
  double f = 0;
  for (int k = 0; k <= t.K; ++k) {
    double ud = u.hi + u.lo;
    double ud2 = ud + ud;
    double tent = ud <= 0.5 ? ud2 : 2.0 - ud2;
    f += t.scale_f[k] * tent;
    if (k < t.K) u = dd_frac(dd_mul_double(u, static_cast<double>(t.N)));
  }
  return {f, t.tail};
}

SawValue saw_sum(double x, const SawParams& p) {
  return saw_sum(x, SawTables::build(p));
}

SawValue saw_antiderivative(double x, const SawTables& t) {
  DD u = dd_frac(DD(x));
  double F = 0;
  for (int k = 0; k <= t.K; ++k) {
    double ud = u.hi + u.lo;
    double t1 = (0.5 * t.scale_f[k]) * x;
    double t2 = t.scale_F[k] * (g0(ud) - 0.5 * ud);
    F += t1 + t2;
    if (k < t.K) u = dd_frac(dd_mul_double(u, static_cast<double>(t.N)));
  }
  return {F, std::fabs(x) * t.tail};
}

SawValue saw_antiderivative(double x, const SawParams& p) {
  return saw_antiderivative(x, SawTables::build(p));
}

double secant_slope(double x, double y, const SawTables& t) {
  if (x == y) throw input_error("secant_slope: arguments coincide");
  double lo = std::min(x, y);
  double hi = std::max(x, y);

  DD ux = dd_frac(DD(lo));
  DD uy = dd_frac(DD(hi));
  DD sep = two_sum(hi, -lo);  // exact y - x, scaled by N each level

  double slope = 0;
  const double Nd = static_cast<double>(t.N);
  for (int k = 0; k <= t.K; ++k) {
    DD du = dd_sub(uy, ux);
    double crossings = std::nearbyint(dd_sub(sep, du).value());
    double sep_d = sep.value();
    double s_k;
    if (crossings == 0.0) {
      // same tent period, uy >= ux; factored G0 differences avoid the
      // cancellation that kills plain F(y)-F(x) at small separations
      double uxd = ux.value();
      double uyd = uy.value();
      double dg0;
      if (uyd <= 0.5) {
        dg0 = du.value() * (uyd + uxd);
      } else if (uxd > 0.5) {
        dg0 = du.value() * (2.0 - (uyd + uxd));
      } else {
        double above = dd_add(uy, -0.5).value();   // >= 0
        double below = -dd_add(ux, -0.5).value();  // >= 0
        dg0 = above * (1.5 - uyd) + below * (0.5 + uxd);
      }
      s_k = t.scale_f[k] * (dg0 / sep_d);
    } else {
      double du_d = du.value();
      double dg0 = g0(uy.value()) - g0(ux.value());
      s_k = t.scale_f[k] * (0.5 + (dg0 - 0.5 * du_d) / sep_d);
    }
    slope += s_k;
    if (k < t.K) {
      ux = dd_frac(dd_mul_double(ux, Nd));
      uy = dd_frac(dd_mul_double(uy, Nd));
      sep = dd_mul_double(sep, Nd);
    }
  }
  return slope;
}

double secant_slope(double x, double y, const SawParams& p) {
  return secant_slope(x, y, SawTables::build(p));
}

double hoelder_constant(const SawParams& p) {
  p.validate();
  double Nd = static_cast<double>(p.N);
  return 2.0 * Nd / (std::pow(Nd, 1.0 - p.alpha) - 1.0) +
         2.0 * std::pow(Nd, p.alpha) / (std::pow(Nd, p.alpha) - 1.0);
}

GraphPoint graph_map(const Vec& x, const SawParams& p) {
  if (x.empty()) throw input_error("graph_map: empty argument");
  for (double c : x)
    if (!std::isfinite(c)) throw input_error("graph_map: non-finite coordinate");
  SawValue F = saw_antiderivative(x[0], p);
  Vec out = x;
  out.push_back(F.value);
  return {std::move(out), F.error_bound};
}

CriticalExponents critical_alpha(double p, int m) {
  if (m < 1) throw input_error("m must be >= 1");
  double mm1 = static_cast<double>(m) * (m + 1);
  if (!(p > mm1)) throw input_error("p must exceed m(m+1)");
  CriticalExponents c;
  c.p = p;
  c.m = m;
  c.alpha_curve = 1.0 - 2.0 / p;
  c.alpha_manifold = 1.0 - mm1 / p;
  c.alpha_regularity = 1.0 - static_cast<double>(m) * (m + 2) / p;
  return c;
}

double domain_bound_scan(const SawParams& p, double eps_slope) {
  if (!(eps_slope > 0)) throw input_error("eps_slope must be positive");
  SawTables tab = SawTables::build(p);
  const size_t grid = size_t{1} << 20;
  const size_t chunk = size_t{1} << 14;
  std::vector<double> xs(chunk), fs(chunk);
  for (size_t base = 0; base < grid; base += chunk) {
    size_t cnt = std::min(chunk, grid - base);
    for (size_t j = 0; j < cnt; ++j)
      xs[j] = static_cast<double>(base + j) / static_cast<double>(grid);
    kern::saw_eval_batch(xs.data(), cnt, tab, fs.data(), nullptr);
    for (size_t j = 0; j < cnt; ++j)
      if (fs[j] > eps_slope)
        return static_cast<double>(base + j) / static_cast<double>(grid);
  }
  return 1.0;
}

}  // namespace mcurv::saw
