// Acceptance suite: analytic special cases, scaling laws, inequality sweeps
// and exponent fits at desk scale. One pass/fail line per criterion; the
// process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mcurv/curves.hpp"
#include "mcurv/divergence.hpp"
#include "mcurv/geometry.hpp"
#include "mcurv/manifolds.hpp"
#include "mcurv/saw.hpp"

using namespace mcurv;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<bool(std::ostream&)> run;
};

diverge::LowerBoundConfig curve_cfg(double alpha) {
  diverge::LowerBoundConfig cfg;
  cfg.saw_params = saw::SawParams::with_tolerance(100, alpha, 1e-12);
  cfg.p = 4.0;
  cfg.m = 1;
  cfg.cells_per_level = 256;
  cfg.samples_per_cell = 64;
  cfg.gap_samples = 1000;
  cfg.seed = 20240915;
  return cfg;
}

diverge::LowerBoundConfig manifold_cfg(double alpha) {
  diverge::LowerBoundConfig cfg;
  cfg.saw_params = saw::SawParams::with_tolerance(10, alpha, 1e-12);
  cfg.p = 12.0;
  cfg.m = 2;
  cfg.cells_per_level = 192;
  cfg.samples_per_cell = 64;
  cfg.gap_samples = 400;
  cfg.seed = 73;
  return cfg;
}

bool criterion_circle_energy(std::ostream& os) {
  auto res = curves::energy_mp(curves::make_circle(1.0, 200), 2.0);
  double exact = std::pow(2 * M_PI, 3);
  double rel = std::fabs(res.value - exact) / exact;
  os << "M_2(circle,n=200)=" << res.value << " exact=" << exact
     << " rel=" << rel;
  return rel < 0.02;
}

bool criterion_scaling_laws(std::ostream& os) {
  Rng rng(1815);
  double worst = 0;
  for (int it = 0; it < 10000; ++it) {
    int n = 2 + static_cast<int>(rng.below(3));
    int cnt = 3 + static_cast<int>(rng.below(static_cast<uint64_t>(n - 1)));
    geom::PointTuple T;
    for (int i = 0; i < cnt; ++i) {
      Vec p(n);
      for (auto& c : p) c = rng.uniform(-1, 1);
      T.points.push_back(std::move(p));
    }
    int k = T.order();
    double K = geom::discrete_curvature(T);
    double V = geom::simplex_measure(T);
    for (double lam : {0.5, 2.0, 10.0}) {
      auto S = T.scaled_by(lam);
      double dK = std::fabs(geom::discrete_curvature(S) - K / lam);
      double dV = std::fabs(geom::simplex_measure(S) - V * std::pow(lam, k));
      if (K > 0) worst = std::max(worst, dK / (K / lam));
      if (V > 0) worst = std::max(worst, dV / (V * std::pow(lam, k)));
    }
  }
  os << "worst relative scaling error=" << worst;
  return worst <= 1e-12;
}

bool criterion_dominance(std::ostream& os) {
  Rng rng(2718);
  size_t violations = 0, tested = 0;
  while (tested < 100000) {
    int n = 2 + static_cast<int>(rng.below(2));
    Vec a(n), b(n), c(n);
    for (auto& v : a) v = rng.uniform(-1, 1);
    for (auto& v : b) v = rng.uniform(-1, 1);
    for (auto& v : c) v = rng.uniform(-1, 1);
    double mc = geom::menger_curvature(a, b, c);
    if (mc == 0) continue;
    ++tested;
    double dc = geom::discrete_curvature(geom::PointTuple{{a, b, c}});
    if (mc < dc - 1e-12) ++violations;
  }
  os << "violations=" << violations << "/100000";
  return violations == 0;
}

bool criterion_hoelder(std::ostream& os) {
  auto params = saw::SawParams::with_tolerance(100, 0.5, 1e-12);
  auto tab = saw::SawTables::build(params);
  double C = saw::hoelder_constant(params);
  Rng rng(31415);
  size_t violations = 0;
  double worst_margin = inf;
  for (int it = 0; it < 100000; ++it) {
    double x = rng.uniform(), y = rng.uniform();
    if (x == y) continue;
    double lhs = std::fabs(saw::saw_sum(x, tab).value - saw::saw_sum(y, tab).value);
    double rhs = C * std::sqrt(std::fabs(x - y)) + 2 * tab.tail;
    worst_margin = std::min(worst_margin, rhs - lhs);
    if (lhs > rhs) ++violations;
  }
  os << "violations=" << violations << " min margin=" << worst_margin;
  return violations == 0;
}

bool criterion_secant_gap(std::ostream& os) {
  auto cfg = curve_cfg(0.5);
  double worst = inf;
  for (int k = 1; k <= 6; ++k)
    worst = std::min(worst, diverge::secant_gap_check(cfg, k));
  os << "min ratio over k=1..6: " << worst << " (needs >= " << 1.0 / 16 << ")";
  return worst >= 1.0 / 16;
}

bool criterion_curve_dichotomy(std::ostream& os) {
  auto grow = diverge::curve_lowerbound(curve_cfg(0.4), 1, 6);
  double tol = 0.15 * std::fabs(grow.predicted_exponent) + 0.05;
  bool grow_ok = std::fabs(grow.fitted_exponent - grow.predicted_exponent) <= tol &&
                 diverge::is_divergent(grow);

  auto decay = diverge::curve_lowerbound(curve_cfg(0.6), 1, 6);
  bool decay_ok = !diverge::is_divergent(decay);
  for (size_t i = 1; i < decay.levels.size(); ++i)
    decay_ok = decay_ok && decay.levels[i].sum < decay.levels[i - 1].sum;

  os << "alpha=0.4: fitted=" << grow.fitted_exponent
     << " predicted=" << grow.predicted_exponent << " (tol " << tol << ") "
     << (diverge::is_divergent(grow) ? "DIVERGENT" : "CONVERGENT")
     << "; alpha=0.6: fitted=" << decay.fitted_exponent << " "
     << (diverge::is_divergent(decay) ? "DIVERGENT" : "CONVERGENT");
  return grow_ok && decay_ok;
}

bool criterion_critical_flatness(std::ostream& os) {
  auto rep = diverge::curve_lowerbound(curve_cfg(0.5), 1, 6);
  double log_mean = 0;
  int cnt = 0;
  for (const auto& l : rep.levels)
    if (l.level >= 2) {
      log_mean += std::log(l.sum);
      ++cnt;
    }
  log_mean /= cnt;
  double gm = std::exp(log_mean);
  double worst = 1;
  for (const auto& l : rep.levels)
    if (l.level >= 2) worst = std::max(worst, std::max(l.sum / gm, gm / l.sum));
  os << "max deviation from geometric mean over k=2..6: x" << worst;
  return worst < 2.0;
}

bool criterion_manifold_exponents(std::ostream& os) {
  // critical alpha = 1 - m(m+1)/p = 0.5 at m=2, p=12
  auto cfg = manifold_cfg(0.5);
  double min_stat = inf, max_stat = 0;
  for (int n = 1; n <= 4; ++n) {
    auto st = diverge::manifold_tuple_stats(cfg, n, 2500);
    if (st.degenerate_faces != 0) {
      os << "degenerate faces at level " << n;
      return false;
    }
    min_stat = std::min(min_stat, st.min_curv_normalized);
    max_stat = std::max(max_stat, st.min_curv_normalized);
  }
  bool stats_ok = max_stat / min_stat <= 2.0;

  auto crit = diverge::manifold_lowerbound(cfg, 1, 4);
  bool nondecay = crit.fitted_exponent >= -0.05;
  for (size_t i = 1; i < crit.levels.size(); ++i)
    nondecay = nondecay && crit.levels[i].sum >= 0.5 * crit.levels[i - 1].sum;

  auto away = diverge::manifold_lowerbound(manifold_cfg(0.6), 1, 4);
  bool away_ok = away.fitted_exponent < 0 && away.predicted_exponent < 0;
  for (size_t i = 1; i < away.levels.size(); ++i)
    away_ok = away_ok && away.levels[i].sum < away.levels[i - 1].sum;

  os << "K_G minima spread x" << max_stat / min_stat
     << "; critical fitted=" << crit.fitted_exponent
     << "; alpha=0.6 fitted=" << away.fitted_exponent
     << " predicted=" << away.predicted_exponent;
  return stats_ok && nondecay && away_ok;
}

bool criterion_simplex_beta_bound(std::ostream& os) {
  auto params = saw::SawParams::with_tolerance(100, 0.5, 1e-12);
  auto M1 = manifolds::make_saw_graph_manifold(1, params);
  auto r1 = manifolds::dc_beta_bound_check(M1, 10000, 1234, 8192);
  auto M2 = manifolds::make_saw_graph_manifold(2, params);
  auto r2 = manifolds::dc_beta_bound_check(M2, 10000, 1235, 80);
  os << "m=1: violations=" << r1.violations << " max ratio/C=" << r1.max_ratio / r1.C_bound
     << "; m=2: violations=" << r2.violations << " max ratio/C="
     << r2.max_ratio / r2.C_bound;
  return r1.violations == 0 && r2.violations == 0;
}

bool criterion_beta_scaling(std::ostream& os) {
  auto params = saw::SawParams::with_tolerance(100, 0.5, 1e-12);
  auto M = manifolds::make_saw_graph_manifold(1, params);
  std::vector<double> radii;
  for (int j = 3; j <= 12; ++j) radii.push_back(std::pow(2.0, -j));
  auto fit = manifolds::beta_scaling_fit(M, 64, radii, 0.5, 65536);
  os << "slope=" << fit.slope << " C_fit=" << fit.C_fit
     << " violations=" << fit.violations;
  return !fit.degenerate_flat && fit.slope >= 0.4 && fit.slope <= 1.0 &&
         fit.violations == 0;
}

bool criterion_shell_consistency(std::ostream& os) {
  auto ell = curves::make_ellipse(1.4, 0.8, 120);
  auto rep = curves::scale_decomposed_mp(ell, 2.0);
  double total = curves::energy_mp(ell, 2.0).value;
  double rel = std::fabs(rep.levels.back().cumulative - total) / total;
  bool curve_ok = rel <= 1e-12;

  auto M = manifolds::make_sphere_patch(1, 1.0, 0.6);
  auto full = manifolds::energy_ep_mc(M, 3.0, 50000, 999);
  auto spec = manifolds::ShellSpec::for_diameter(manifolds::estimate_diameter(M), 14);
  auto shells = manifolds::energy_ep_shells(M, 3.0, spec, 15000, 1000);
  double diff = std::fabs(shells.levels.back().cumulative - full.estimate);
  bool ep_ok = diff <= 3 * full.std_error;
  os << "curve shells rel err=" << rel << "; ep |shells-mc|=" << diff
     << " vs 3 sigma=" << 3 * full.std_error;
  return curve_ok && ep_ok;
}

bool criterion_cone_check(std::ostream& os) {
  auto seg = curves::secant_cone_check(curves::make_segment(1.0, 200), 1.0, 1.0, 0.2);
  bool seg_ok = seg.pass && seg.max_angle_ratio == 0.0;

  auto circ = curves::secant_cone_check(curves::make_circle(1.0, 2000), 1.0, 1.0, 0.3);
  bool circ_ok = circ.pass;

  auto params = saw::SawParams::with_tolerance(100, 0.5, 1e-12);
  double C = saw::hoelder_constant(params);
  auto graph = curves::make_saw_graph(params, 160001);
  std::vector<Vec> poly(graph.size());
  for (size_t i = 0; i < graph.size(); ++i) poly[i] = graph.point(i);
  auto arc = curves::resample_arclength(poly, 40000, false);
  double eps = 2.6e-4;
  auto saw_rep = curves::secant_cone_check(arc, 0.5, C, eps);
  bool saw_ok = saw_rep.pass && saw_rep.pairs_checked > 0;

  os << "segment ratio=" << seg.max_angle_ratio << "; circle pass=" << circ_ok
     << "; saw graph pass=" << saw_ok << " (pairs=" << saw_rep.pairs_checked
     << ", max ratio=" << saw_rep.max_angle_ratio << ")";
  return seg_ok && circ_ok && saw_ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "circle energy M_2 within 2% of (2 pi)^3", 10, criterion_circle_energy},
      {2, "curvature/measure scaling laws at 1e-12", 5, criterion_scaling_laws},
      {3, "Menger curvature dominates discrete curvature", 30, criterion_dominance},
      {4, "Hoelder bound on the saw (1e5 pairs)", 30, criterion_hoelder},
      {5, "secant-gap ratio >= 1/16 for k=1..6", 60, criterion_secant_gap},
      {6, "curve dichotomy at p=4 (alpha 0.4 / 0.6)", 300, criterion_curve_dichotomy},
      {7, "critical flatness at alpha = 1 - 2/p", 120, criterion_critical_flatness},
      {8, "manifold exponents at m=2, p=12", 600, criterion_manifold_exponents},
      {9, "simplex-measure vs beta bound (1e4 tuples x2)", 120, criterion_simplex_beta_bound},
      {10, "beta scaling slope and fitted bound", 60, criterion_beta_scaling},
      {11, "shell consistency (curve exact, ep 3-sigma)", 120, criterion_shell_consistency},
      {12, "secant-cone containment checks", 60, criterion_cone_check},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::ostringstream detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
      ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      detail << " [over budget " << c.budget_s << "s]";
      ok = false;
    }
    std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL",
                c.id, c.name.c_str(), detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
