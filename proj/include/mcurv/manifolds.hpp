#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcurv/common.hpp"
#include "mcurv/geometry.hpp"
#include "mcurv/saw.hpp"
#include "mcurv/scale_report.hpp"

namespace mcurv::manifolds {

struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  double volume() const {
    double v = 1;
    for (size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  Vec sample(Rng& rng) const {
    Vec p(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    return p;
  }
};

/// Chart-based sampled m-manifold in R^n: embedding evaluator, pointwise
/// area weight |JG|, and an optional tangent-frame evaluator (m spanning
/// vectors of T_x Sigma, used as a beta-number candidate plane).
struct SampledManifold {
  int m = 0;
  int n = 0;
  Box domain;
  std::function<Vec(const Vec&)> embed;
  std::function<double(const Vec&)> area_weight;
  std::function<std::vector<Vec>(const Vec&)> tangent;  // may be empty
  std::string name;

  void validate() const;
};

/// [0,1]^m embedded flat into R^n (trailing coordinates zero).
SampledManifold make_flat_patch(int m, int n);

/// Graph chart of the sphere of the given radius: x -> (x, sqrt(R^2-|x|^2))
/// over [-half_width, half_width]^m, half_width < R/sqrt(m).
SampledManifold make_sphere_patch(int m, double radius, double half_width);

/// Graph of the saw antiderivative over [0,1]^m: x -> (x, F(x^1)), with
/// area weight sqrt(1 + f(x^1)^2) at the same truncation level as F.
SampledManifold make_saw_graph_manifold(int m, const saw::SawParams& p);

/// Embedded uniform chart grid (per_axis points per axis), used as the
/// discrete point cloud for beta-number estimates.
std::vector<Vec> sample_point_cloud(const SampledManifold& M, size_t per_axis);

/// Crude embedded-diameter estimate from a coarse chart grid.
double estimate_diameter(const SampledManifold& M);

struct EnergyEstimate {
  double estimate = 0;
  double std_error = 0;
  size_t samples = 0;
};

/// Monte-Carlo estimate of E_p over (chart domain)^{m+2} with the area
/// weight product; 64 fixed seeded streams, jackknife standard error.
/// Identical seed and sample count give a bit-identical estimate.
EnergyEstimate energy_ep_mc(const SampledManifold& M, double p, size_t samples,
                            uint64_t seed, int threads = 0);

struct ShellSpec {
  int k0 = 0;     // coarsest level, 2^{-k0} >= 2 diam(Sigma)
  int k_max = 8;  // finest level

  static ShellSpec for_diameter(double diam, int k_max);
};

/// Per-shell estimates of E_p restricted to tuples whose embedded diameter
/// lies in (2^{-k-1}, 2^{-k}]; one uniform sample stream binned by shell
/// (sums are consistent with energy_ep_mc), or per-shell importance sampling
/// toward small diameters when requested (weights keep it unbiased).
ScaleReport energy_ep_shells(const SampledManifold& M, double p,
                             const ShellSpec& shells, size_t samples_per_shell,
                             uint64_t seed, int threads = 0,
                             bool importance = false);

struct BetaFit {
  double C_fit = 0;      // max beta / r^alpha over the fitting subset
  double slope = 0;      // free log-log slope of beta vs r
  int violations = 0;    // pairs with beta > 1.1 * C_fit * r^alpha
  bool degenerate_flat = false;
  size_t pairs = 0;
};

/// Beta-number decay fit: upper-bound beta estimates at chart-grid
/// centers over the given radii (tangent plane included among candidates),
/// log-log slope, and a 10%-slack validation of the fitted constant; the
/// constant is fitted on even-indexed centers and validated on all.
BetaFit beta_scaling_fit(const SampledManifold& M, int centers,
                         const std::vector<double>& radii, double alpha,
                         size_t cloud_per_axis = 0);

struct DcBetaReport {
  double max_ratio = 0;  // max of H^{m+1}(T) / (beta * d^{m+1})
  double C_bound = 0;    // (2 + 4A)^n 2^{-(n-m-1)}, A = diam([0,1]^{n-m-1})
  int violations = 0;
  size_t degenerate = 0;  // tuples with zero simplex measure (ratio 0)
  size_t tuples = 0;
};

/// Simplex-measure vs beta-number inequality check over random tuples.
/// Upper-bound beta estimates keep the inequality direction: a violation
/// would contradict the bound itself. When tuple_dump is set, one CSV row
/// per tuple (chart coordinates, diameter, simplex measure, beta, ratio)
/// is written in tuple order for external inspection.
DcBetaReport dc_beta_bound_check(const SampledManifold& M, size_t tuple_count,
                                 uint64_t seed, size_t cloud_per_axis = 0,
                                 std::ostream* tuple_dump = nullptr);

double simplex_beta_constant(int m, int n);

}  // namespace mcurv::manifolds
