#pragma once

#include <vector>

#include "mcurv/common.hpp"

namespace mcurv::saw {

/// Parameters of the van der Waerden saw family: base N, Hoelder exponent
/// alpha, and a series truncation given either as an explicit level K or as
/// a tolerance from which K is derived (tail of the antiderivative on [0,1]).
struct SawParams {
  int N = 100;
  double alpha = 0.5;
  int truncation_level = -1;  // K >= 0 when explicit, otherwise derived
  double tolerance = 1e-12;

  static SawParams with_level(int N, double alpha, int K);
  static SawParams with_tolerance(int N, double alpha, double tol = 1e-12);

  void validate() const;

  /// Resolved truncation level K.
  int level() const;

  /// Tail bound N^{-alpha(K+1)} / (1 - N^{-alpha}); uniform for the saw sum,
  /// scaled by |x| for the antiderivative.
  double tail_bound() const;
};

/// Precomputed per-level scale factors shared by scalar and SIMD evaluators.
struct SawTables {
  int N = 0;
  int K = 0;
  double alpha = 0;
  std::vector<double> scale_f;  // N^{-alpha k}
  std::vector<double> scale_F;  // N^{-k(1+alpha)}
  double tail = 0;

  static SawTables build(const SawParams& p);
};

struct SawValue {
  double value = 0;
  double error_bound = 0;
};

/// Periodic tent: 2x on [0,1/2], 2-2x on (1/2,1], extended with period 1.
double saw_base(double x);

/// Truncated saw sum f(x) = sum_{k<=K} N^{-alpha k} f0(N^k x).
SawValue saw_sum(double x, const SawParams& p);
SawValue saw_sum(double x, const SawTables& t);

/// Truncated antiderivative F(x) = int_0^x f, via exact per-level
/// floor/fraction decomposition (valid for negative x as well).
SawValue saw_antiderivative(double x, const SawParams& p);
SawValue saw_antiderivative(double x, const SawTables& t);

/// (F(y) - F(x)) / (y - x) with per-level compensated differences. Plain
/// subtraction of antiderivative values loses the secant-gap signal once
/// |y - x| drops below ~1e-8; this path stays accurate to ~1e-15 absolute.
double secant_slope(double x, double y, const SawTables& t);
double secant_slope(double x, double y, const SawParams& p);

/// Hoelder constant of F': 2N/(N^{1-alpha} - 1) + 2N^alpha/(N^alpha - 1).
double hoelder_constant(const SawParams& p);

struct GraphPoint {
  Vec point;            // (x^1, ..., x^m, F(x^1))
  double error_bound;   // truncation bound carried by the last coordinate
};

/// G(x^1,...,x^m) = (x^1,...,x^m, F(x^1)).
GraphPoint graph_map(const Vec& x, const SawParams& p);

struct CriticalExponents {
  double p = 0;
  int m = 1;
  double alpha_curve = 0;       // 1 - 2/p
  double alpha_manifold = 0;    // 1 - m(m+1)/p
  double alpha_regularity = 0;  // 1 - m(m+2)/p
};

/// Requires p > m(m+1).
CriticalExponents critical_alpha(double p, int m);

/// Largest A such that the truncated saw stays <= eps_slope on a 2^20 grid
/// prefix of [0,1]. Used to pick the flat chart region for the grid families.
double domain_bound_scan(const SawParams& p, double eps_slope);

}  // namespace mcurv::saw
