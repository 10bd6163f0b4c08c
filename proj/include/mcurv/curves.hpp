#pragma once

#include <cstdint>
#include <vector>

#include "mcurv/common.hpp"
#include "mcurv/saw.hpp"
#include "mcurv/scale_report.hpp"

namespace mcurv::curves {

struct QuadratureSpec {
  enum class Scheme { automatic, product_riemann, monte_carlo };
  Scheme scheme = Scheme::automatic;
  size_t mc_samples = 200'000;
  uint64_t seed = 1;
  int exclusion_radius = 1;  // skip tuples whose index distance is below this
  int threads = 0;           // 0: MCURV_THREADS env or hardware count
  size_t riemann_limit = 400;  // automatic: product-Riemann up to this size

  bool use_riemann(size_t n) const {
    if (scheme == Scheme::product_riemann) return true;
    if (scheme == Scheme::monte_carlo) return false;
    return n <= riemann_limit;
  }
};

/// Discretized curve. Arc-length curves satisfy chord <= parameter gap;
/// graph-parametrized curves (y = F(x) sampled over x) carry the graph
/// parameter instead, with quadrature weights encoding the chosen measure.
struct SampledCurve {
  enum class Param { arc_length, graph };

  std::vector<double> params;               // strictly increasing, in [0, L)
  std::vector<std::vector<double>> coords;  // [dim][n]
  std::vector<double> weights;              // per-sample quadrature weights
  double length = 0;
  bool closed = false;
  Param param_kind = Param::arc_length;

  size_t size() const { return params.size(); }
  int dim() const { return static_cast<int>(coords.size()); }

  Vec point(size_t i) const {
    Vec p(coords.size());
    for (size_t d = 0; d < coords.size(); ++d) p[d] = coords[d][i];
    return p;
  }

  /// Parameter distance; circle metric min(|s-t|, L-|s-t|) when closed.
  double param_dist(size_t i, size_t j) const {
    double d = std::fabs(params[i] - params[j]);
    return closed ? std::min(d, length - d) : d;
  }

  /// Circular index distance when closed, |i-j| otherwise.
  size_t index_dist(size_t i, size_t j) const {
    size_t d = i > j ? i - j : j - i;
    return closed ? std::min(d, params.size() - d) : d;
  }

  void validate() const;

  static SampledCurve from_points(std::vector<double> params,
                                  const std::vector<Vec>& pts, bool closed,
                                  double length, Param kind);
};

/// Resamples a polyline to n points equally spaced in cumulative chord
/// length. n >= 3; throws on zero total length.
SampledCurve resample_arclength(const std::vector<Vec>& polyline, size_t n,
                                bool closed);

SampledCurve make_circle(double radius, size_t n, int ambient_dim = 2);
SampledCurve make_segment(double len, size_t n);
SampledCurve make_ellipse(double a, double b, size_t n);

/// Graph of the saw antiderivative F over [x0, x1]; integrates with respect
/// to the graph parameter by default, or with arc-length weights
/// sqrt(1 + f(x)^2) dx when arc_weights is set.
SampledCurve make_saw_graph(const saw::SawParams& p, size_t n,
                            bool arc_weights = false, double x0 = 0.0,
                            double x1 = 1.0);

/// min over sample pairs of chord length / parameter distance; throws on
/// duplicate points (non-injective input).
double bilipschitz_constant(const SampledCurve& c);

struct EnergyResult {
  double value = 0;
  double std_error = 0;  // 0 for deterministic quadrature
  size_t samples = 0;
  bool monte_carlo = false;
};

/// M_p: triple integral of the Menger curvature to the p-th power.
EnergyResult energy_mp(const SampledCurve& c, double p, const QuadratureSpec& q = {});

/// I_p: double integral of (inf over the third point of R)^{-p}.
EnergyResult energy_ip(const SampledCurve& c, double p, const QuadratureSpec& q = {});

/// U_p: single integral of (inf over the other two points of R)^{-p}.
EnergyResult energy_up(const SampledCurve& c, double p, const QuadratureSpec& q = {});

struct ConeCheckReport {
  double max_angle_ratio = 0;  // max over pairs/midpoints of angle / |x-y|^alpha
  bool pass = true;            // every angle within 2 asin(min(1, 2.5 C |x-y|^alpha))
  size_t pairs_checked = 0;
};

/// Secant-cone containment check: for sample pairs closer than epsilon and
/// intermediate samples z, the secant angles at both endpoints must stay
/// within the spindle opening. Requires (5/2) C epsilon^alpha < 1.
ConeCheckReport secant_cone_check(const SampledCurve& c, double alpha,
                                  double holder_C, double epsilon);

/// Dyadic-shell decomposition of M_p by parameter distance of the first two
/// points: shell k holds pairs with d in (2^{-k-1} L, 2^{-k} L]. Shell sums
/// add up to energy_mp on the same grid. With local_z the third point is
/// restricted to the parameter arc between the pair; that is the scale-split
/// local part whose shells decay at the rate 2^{k(p - p alpha - 2)} (the
/// full sums carry an O(2^{-k}) far-z background on top).
ScaleReport scale_decomposed_mp(const SampledCurve& c, double p,
                                const QuadratureSpec& q = {}, int max_shells = 0,
                                bool local_z = false);

}  // namespace mcurv::curves
