#include "mcurv/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "mcurv/geometry.hpp"
#include "mcurv/parallel.hpp"

namespace mcurv::diverge {

namespace {

long long checked_pow_ll(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 59) / base)
      throw input_error("level too deep: exact interval endpoints overflow");
    r *= base;
  }
  return r;
}

}  // namespace

void LowerBoundConfig::validate() const {
  saw_params.validate();
  if (!(p > 0)) throw input_error("p must be positive");
  if (m < 1) throw input_error("m must be >= 1");
  if (!(delta > 0 && delta < 1.0 / 16))
    throw input_error("delta must lie in (0, 1/16)");
  if (!(eps_slope > 0)) throw input_error("eps_slope must be positive");
  if (domain_bound < 0 || domain_bound >= 1)
    throw input_error("domain bound A must lie in (0,1)");
  if (cells_per_level < 1 || samples_per_cell < 1 || gap_samples < 1)
    throw input_error("sampling counts must be positive");
}

double LowerBoundConfig::resolve_domain_bound() const {
  if (domain_bound > 0) return domain_bound;
  return saw::domain_bound_scan(saw_params, eps_slope);
}

IntervalFamily curve_interval_family(int k, long long cell, int N) {
  if (k < 0) throw input_error("level k must be >= 0");
  if (N < 2) throw input_error("N must be >= 2");
  long long nk = checked_pow_ll(N, k);
  if (cell < 0 || cell >= nk)
    throw input_error("cell index out of range [0, N^k - 1]");

  IntervalFamily f;
  long long base = 16 * cell;
  f.nx_lo = base;
  f.nx_hi = base + 1;
  f.nz_lo = base + 4;
  f.nz_hi = base + 5;
  f.ny_lo = base + 7;
  f.ny_hi = base + 8;
  f.denom = 16.0 * static_cast<double>(nk);
  f.x_lo = static_cast<double>(f.nx_lo) / f.denom;
  f.x_hi = static_cast<double>(f.nx_hi) / f.denom;
  f.y_lo = static_cast<double>(f.ny_lo) / f.denom;
  f.y_hi = static_cast<double>(f.ny_hi) / f.denom;
  f.z_lo = static_cast<double>(f.nz_lo) / f.denom;
  f.z_hi = static_cast<double>(f.nz_hi) / f.denom;
  return f;
}

double graph_menger_curvature(double x, double y, double z,
                              const saw::SawTables& tab) {
  double s_xy = saw::secant_slope(x, y, tab);
  double s_xz = saw::secant_slope(x, z, tab);
  double s_yz = saw::secant_slope(y, z, tab);
  double ds = s_xz - s_xy;
  double h = std::sqrt((1.0 + s_xy * s_xy) * (1.0 + s_xz * s_xz) *
                       (1.0 + s_yz * s_yz));
  return 2.0 * std::fabs(ds) / (std::fabs(y - z) * h);
}

double secant_gap_check(const LowerBoundConfig& cfg, int k) {
  cfg.validate();
  auto tab = saw::SawTables::build(cfg.saw_params);
  const int N = cfg.saw_params.N;
  const long long cells = checked_pow_ll(N, k);
  const double nk_alpha = std::pow(static_cast<double>(N),
                                   static_cast<double>(k) * cfg.saw_params.alpha);
  Rng rng(hash_combine(cfg.seed, hash_combine(0xC0FFEE, k)));
  double min_ratio = inf;
  for (int it = 0; it < cfg.gap_samples; ++it) {
    long long cell = static_cast<long long>(rng.below(static_cast<uint64_t>(cells)));
    auto f = curve_interval_family(k, cell, N);
    double x = rng.uniform(f.x_lo, f.x_hi);
    double y = rng.uniform(f.y_lo, f.y_hi);
    double z = rng.uniform(f.z_lo, f.z_hi);
    double gap = std::fabs(saw::secant_slope(x, y, tab) - saw::secant_slope(x, z, tab));
    min_ratio = std::min(min_ratio, gap * nk_alpha);
  }
  return min_ratio;
}

ScaleReport curve_lowerbound(const LowerBoundConfig& cfg, int k_lo, int k_hi) {
  cfg.validate();
  if (k_lo < 1 || k_hi < k_lo) throw input_error("bad level range");
  auto tab = saw::SawTables::build(cfg.saw_params);
  const int N = cfg.saw_params.N;
  const double alpha = cfg.saw_params.alpha;

  ScaleReport rep;
  rep.base = static_cast<double>(N);
  rep.predicted_exponent = cfg.p - cfg.p * alpha - 2.0;
  rep.gap_check = inf;
  for (int k = k_lo; k <= k_hi; ++k) {
    double g = secant_gap_check(cfg, k);
    rep.gap_check = std::min(rep.gap_check, g);
  }
  if (!(rep.gap_check >= 1.0 / 16))
    throw precondition_error(
        "secant-gap validation failed (min ratio below 1/16): increase N");

  double cum = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const long long cells = checked_pow_ll(N, k);
    const long long sampled =
        std::min<long long>(cells, cfg.cells_per_level);
    const double vol = std::pow(1.0 / (16.0 * std::pow(N, k)), 3);

    std::vector<double> cell_integral(sampled, 0.0);
    parallel_blocks(static_cast<size_t>(sampled), cfg.threads, [&](size_t j) {
      long long cell = static_cast<long long>(
          (static_cast<double>(j) * static_cast<double>(cells)) /
          static_cast<double>(sampled));
      cell = std::min(cell, cells - 1);
      auto f = curve_interval_family(k, cell, N);
      Rng rng(hash_combine(cfg.seed, hash_combine(static_cast<uint64_t>(k),
                                                  static_cast<uint64_t>(cell))));
      double acc = 0;
      for (int s = 0; s < cfg.samples_per_cell; ++s) {
        double x = rng.uniform(f.x_lo, f.x_hi);
        double y = rng.uniform(f.y_lo, f.y_hi);
        double z = rng.uniform(f.z_lo, f.z_hi);
        acc += std::pow(graph_menger_curvature(x, y, z, tab), cfg.p);
      }
      cell_integral[j] = vol * acc / static_cast<double>(cfg.samples_per_cell);
    });
    double mean_cell = pairwise_sum(cell_integral) / static_cast<double>(sampled);
    double sum = static_cast<double>(cells) * mean_cell;
    cum += sum;
    rep.levels.push_back({k, static_cast<double>(cells), sum, cum});
  }
  rep.fitted_exponent = fit_scale_exponent(rep.levels, rep.base);
  return rep;
}

double ManifoldGrid::cell_count() const {
  return std::pow(static_cast<double>(per_axis), m);
}

double ManifoldGrid::spacing() const {
  return std::pow(static_cast<double>(N), -level);
}

Vec ManifoldGrid::anchor(long long flat) const {
  Vec x(m);
  const double h = spacing();
  for (int d = 0; d < m; ++d) {
    x[d] = static_cast<double>(flat % per_axis) * h;
    flat /= per_axis;
  }
  return x;
}

std::vector<Vec> ManifoldGrid::tuple_points(const Vec& a) const {
  const double h = spacing();
  std::vector<Vec> pts(m + 2, a);
  for (int i = 1; i <= m; ++i) pts[i][i - 1] += 0.5 * h;
  pts[m + 1][0] += 0.25 * h;
  return pts;
}

ManifoldGrid manifold_grid(int level, const LowerBoundConfig& cfg) {
  cfg.validate();
  if (level < 1) throw input_error("grid level must be >= 1");
  ManifoldGrid g;
  g.level = level;
  g.m = cfg.m;
  g.N = cfg.saw_params.N;
  g.A = cfg.resolve_domain_bound();
  double an = g.A * std::pow(static_cast<double>(g.N), level);
  g.per_axis = static_cast<long long>(std::ceil(an - 1e-12));
  if (g.per_axis < 1) g.per_axis = 1;
  return g;
}

double tuple_box_measure(const ManifoldGrid& g, double delta) {
  double ball = unit_ball_volume(g.m) * std::pow(delta * g.spacing(), g.m);
  return std::pow(ball, g.m + 2);
}

TupleStats manifold_tuple_stats(const LowerBoundConfig& cfg, int level,
                                size_t samples) {
  cfg.validate();
  auto grid = manifold_grid(level, cfg);
  auto tab = saw::SawTables::build(cfg.saw_params);
  const int m = cfg.m;
  const double h = grid.spacing();
  const double r = cfg.delta * h;
  const double n1a = std::pow(static_cast<double>(grid.N),
                              level * (1.0 + cfg.saw_params.alpha));
  const double n1ma = std::pow(static_cast<double>(grid.N),
                               -level * (1.0 - cfg.saw_params.alpha));

  const long long total_cells = static_cast<long long>(grid.cell_count());
  Rng rng(hash_combine(cfg.seed, hash_combine(0x7F4A, level)));
  TupleStats st;
  st.min_height_normalized = inf;
  st.min_curv_normalized = inf;
  st.samples = samples;

  geom::AffinePlane horiz = geom::AffinePlane::axis_aligned(Vec(m + 1, 0.0), m);

  for (size_t it = 0; it < samples; ++it) {
    long long flat = static_cast<long long>(
        rng.below(static_cast<uint64_t>(total_cells)));
    Vec a = grid.anchor(flat);
    auto centers = grid.tuple_points(a);
    geom::PointTuple T;
    T.points.reserve(m + 2);
    for (auto& c : centers) {
      Vec z = rng.in_ball(c, r);
      Vec pt(m + 1);
      for (int d = 0; d < m; ++d) pt[d] = z[d];
      pt[m] = saw::saw_antiderivative(z[0], tab).value;
      T.points.push_back(std::move(pt));
    }
    try {
      auto hf = geom::simplex_height_face(T);
      st.min_height_normalized = std::min(st.min_height_normalized, hf.height * n1a);
      st.max_plane_dist = std::max(
          st.max_plane_dist, geom::projection_distance(hf.face_plane, horiz));
    } catch (const input_error&) {
      ++st.degenerate_faces;
      continue;
    }
    double K = geom::discrete_curvature(T);
    st.min_curv_normalized = std::min(st.min_curv_normalized, K * n1ma);
  }
  return st;
}

ScaleReport manifold_lowerbound(const LowerBoundConfig& cfg, int n_lo, int n_hi) {
  cfg.validate();
  if (n_lo < 1 || n_hi < n_lo) throw input_error("bad level range");
  auto tab = saw::SawTables::build(cfg.saw_params);
  const int m = cfg.m;
  const double alpha = cfg.saw_params.alpha;
  const double A = cfg.resolve_domain_bound();

  ScaleReport rep;
  rep.base = static_cast<double>(cfg.saw_params.N);
  rep.predicted_exponent = m - m * (m + 2) + (1.0 - alpha) * cfg.p;

  double cum = 0;
  for (int level = n_lo; level <= n_hi; ++level) {
    LowerBoundConfig cfg_a = cfg;
    cfg_a.domain_bound = A;
    auto grid = manifold_grid(level, cfg_a);
    const double vol_u = tuple_box_measure(grid, cfg.delta);
    const double h = grid.spacing();
    const double r = cfg.delta * h;
    const long long total_cells = static_cast<long long>(grid.cell_count());
    const long long sampled = std::min<long long>(total_cells, cfg.cells_per_level);

    std::vector<double> cell_mean(sampled, 0.0);
    parallel_blocks(static_cast<size_t>(sampled), cfg.threads, [&](size_t j) {
      long long flat = static_cast<long long>(
          (static_cast<double>(j) * static_cast<double>(total_cells)) /
          static_cast<double>(sampled));
      flat = std::min(flat, total_cells - 1);
      Rng rng(hash_combine(cfg.seed, hash_combine(static_cast<uint64_t>(level),
                                                  static_cast<uint64_t>(flat))));
      Vec a = grid.anchor(flat);
      auto centers = grid.tuple_points(a);
      geom::PointTuple T;
      T.points.assign(m + 2, Vec(m + 1, 0.0));
      double acc = 0;
      for (int s = 0; s < cfg.samples_per_cell; ++s) {
        for (int i = 0; i < m + 2; ++i) {
          Vec z = rng.in_ball(centers[i], r);
          for (int d = 0; d < m; ++d) T.points[i][d] = z[d];
          T.points[i][m] = saw::saw_antiderivative(z[0], tab).value;
        }
        acc += std::pow(geom::discrete_curvature(T), cfg.p);
      }
      cell_mean[j] = acc / static_cast<double>(cfg.samples_per_cell);
    });

    // anchor-count minorant A^m N^{nm} (lower bound for the true count
    // ceil(A N^n)^m, which goes into the report)
    double ideal_cells = std::pow(A * std::pow(static_cast<double>(grid.N), level), m);
    double mean_kp = pairwise_sum(cell_mean) / static_cast<double>(sampled);
    double sum = ideal_cells * vol_u * mean_kp;
    cum += sum;
    rep.levels.push_back({level, grid.cell_count(), sum, cum});
  }
  rep.fitted_exponent = fit_scale_exponent(rep.levels, rep.base);
  return rep;
}

BlowupFit blowup_fit(const ScaleReport& report) {
  int usable = 0;
  for (const auto& l : report.levels)
    if (l.sum > 0) ++usable;
  if (usable < 3) throw input_error("blowup fit needs at least 3 levels with positive sums");
  BlowupFit fit;
  fit.fitted = fit_scale_exponent(report.levels, report.base);
  fit.predicted = report.predicted_exponent;
  if (std::fabs(fit.predicted) > 1e-12)
    fit.relative_gap = std::fabs(fit.fitted - fit.predicted) / std::fabs(fit.predicted);
  else
    fit.relative_gap = std::fabs(fit.fitted - fit.predicted);
  return fit;
}

bool is_divergent(const ScaleReport& report) {
  return report.fitted_exponent >= -0.05;
}

}  // namespace mcurv::diverge
