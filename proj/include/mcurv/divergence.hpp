#pragma once

#include <cstdint>
#include <vector>

#include "mcurv/common.hpp"
#include "mcurv/saw.hpp"
#include "mcurv/scale_report.hpp"

namespace mcurv::diverge {

/// Parameters of the blow-up lower-bound harness (curve and manifold runs).
struct LowerBoundConfig {
  saw::SawParams saw_params;
  double p = 4;
  int m = 1;               // manifold intrinsic dimension
  double delta = 1.0 / 32;  // tuple-box radius fraction, in (0, 1/16)
  double eps_slope = 0.1;   // derivative bound defining the flat prefix [0,A)
  double domain_bound = 0;  // A; scanned from the truncated saw when 0
  int cells_per_level = 256;
  int samples_per_cell = 64;
  int gap_samples = 1000;  // secant-gap triples per level
  uint64_t seed = 12345;
  int threads = 0;

  void validate() const;

  /// A: either the configured value or the largest scanned prefix of [0,1]
  /// with |truncated f| <= eps_slope.
  double resolve_domain_bound() const;
};

/// The three sampling intervals of one level-k cell; closed intervals with
/// exact integer endpoints over the common denominator 16 N^k.
struct IntervalFamily {
  double x_lo, x_hi, y_lo, y_hi, z_lo, z_hi;
  long long nx_lo, nx_hi, ny_lo, ny_hi, nz_lo, nz_hi;  // numerators
  double denom;                                        // 16 N^k
};

/// X, Y, Z intervals of cell m at level k; requires 0 <= m <= N^k - 1.
IntervalFamily curve_interval_family(int k, long long cell, int N);

/// Menger curvature of three graph points (x,F(x)), (y,F(y)), (z,F(z))
/// computed from compensated secant slopes; survives separations down to
/// ~1e-13 where coordinate-based evaluation loses the signal.
double graph_menger_curvature(double x, double y, double z,
                              const saw::SawTables& tab);

/// min over sampled cells and triples of |secant slope difference| * N^{k
/// alpha}; the estimate requires this to stay >= 1/16 for the chosen N.
double secant_gap_check(const LowerBoundConfig& cfg, int k);

/// Per-level restricted triple integrals of R^{-p} over the interval
/// families, with the true graph curvature as integrand; refuses (with a
/// precondition error) when the secant-gap validation fails. The fitted
/// exponent is compared against p - p*alpha - 2.
ScaleReport curve_lowerbound(const LowerBoundConfig& cfg, int k_lo, int k_hi);

/// Anchor grid J_n = N^{-n} Z^m intersected with [0,A)^m plus the canonical
/// m+2 tuple offsets.
struct ManifoldGrid {
  int level = 0;
  int m = 0;
  int N = 0;
  double A = 0;
  long long per_axis = 0;  // ceil(A N^n) anchors per axis

  double cell_count() const;
  double spacing() const;  // N^{-n}

  Vec anchor(long long flat) const;
  /// x_0 = x, x_i = x + e_i/(2 N^n), x_{m+1} = x + e_1/(4 N^n).
  std::vector<Vec> tuple_points(const Vec& anchor) const;
};

ManifoldGrid manifold_grid(int level, const LowerBoundConfig& cfg);

/// H^{m(m+2)} of the tuple box U(x): (omega_m delta^m N^{-nm})^{m+2}.
double tuple_box_measure(const ManifoldGrid& g, double delta);

struct TupleStats {
  double min_height_normalized = 0;  // min h(T) * N^{n(1+alpha)}
  double min_curv_normalized = 0;    // min K_G(T) * N^{-n(1-alpha)}
  double max_plane_dist = 0;         // max ||Q_p(T) - Q_Rm|| over samples
  size_t degenerate_faces = 0;
  size_t samples = 0;
};

/// Normalized height / discrete-curvature minima over tuples sampled from
/// the boxes U(x) at the given level.
TupleStats manifold_tuple_stats(const LowerBoundConfig& cfg, int level,
                                size_t samples);

/// Per-level lower bounds A^m N^{nm} * |U| * mean K_G^p (the cell count is
/// reported as ceil(A N^n)^m; the bound uses the A^m N^{nm} minorant so the
/// level scaling matches the predicted exponent m - m(m+2) + (1-alpha) p).
ScaleReport manifold_lowerbound(const LowerBoundConfig& cfg, int n_lo, int n_hi);

struct BlowupFit {
  double fitted = 0;
  double predicted = 0;
  double relative_gap = 0;  // |fitted-predicted| / |predicted| (absolute gap
                            // when predicted == 0)
};

/// Log-linear fit of per-level sums against level * log(base); levels with
/// non-positive sums are excluded, and fewer than 3 usable levels is an
/// input error.
BlowupFit blowup_fit(const ScaleReport& report);

/// Verdict rule shared by the CLI and the acceptance suite: divergent when
/// the fitted exponent is not decisively negative (threshold -0.05).
bool is_divergent(const ScaleReport& report);

}  // namespace mcurv::diverge
