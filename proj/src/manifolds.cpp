#include "mcurv/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "mcurv/parallel.hpp"
#include "mcurv/report_io.hpp"

namespace mcurv::manifolds {

namespace {

constexpr size_t mc_streams = 64;

geom::PointTuple embed_tuple(const SampledManifold& M, const std::vector<Vec>& chart) {
  geom::PointTuple T;
  T.points.reserve(chart.size());
  for (const auto& z : chart) T.points.push_back(M.embed(z));
  return T;
}

double jackknife_se(const std::vector<double>& means) {
  const size_t s = means.size();
  if (s < 2) return 0;
  double m = 0;
  for (double v : means) m += v;
  m /= static_cast<double>(s);
  double var = 0;
  for (double v : means) var += (v - m) * (v - m);
  var /= static_cast<double>(s - 1);
  return std::sqrt(var / static_cast<double>(s));
}

}  // namespace

void SampledManifold::validate() const {
  if (m < 1) throw input_error("manifold dimension m must be >= 1");
  if (n <= m) throw input_error("ambient dimension must exceed m");
  if (domain.dim() != m) throw input_error("chart domain dimension mismatch");
  for (int i = 0; i < m; ++i)
    if (!(domain.hi[i] > domain.lo[i])) throw input_error("empty chart domain");
  if (!embed || !area_weight) throw input_error("manifold evaluators not set");
}

SampledManifold make_flat_patch(int m, int n) {
  SampledManifold M;
  M.m = m;
  M.n = n;
  M.domain = {Vec(m, 0.0), Vec(m, 1.0)};
  M.embed = [m, n](const Vec& x) {
    Vec p(n, 0.0);
    for (int i = 0; i < m; ++i) p[i] = x[i];
    return p;
  };
  M.area_weight = [](const Vec&) { return 1.0; };
  M.tangent = [m, n](const Vec&) {
    std::vector<Vec> t(m, Vec(n, 0.0));
    for (int i = 0; i < m; ++i) t[i][i] = 1.0;
    return t;
  };
  M.name = "flat-patch";
  M.validate();
  return M;
}

SampledManifold make_sphere_patch(int m, double radius, double half_width) {
  if (!(radius > 0)) throw input_error("sphere radius must be positive");
  if (!(half_width > 0 && half_width < radius / std::sqrt(static_cast<double>(m))))
    throw input_error("sphere patch half width must satisfy w < R/sqrt(m)");
  SampledManifold M;
  M.m = m;
  M.n = m + 1;
  M.domain = {Vec(m, -half_width), Vec(m, half_width)};
  double R2 = radius * radius;
  M.embed = [m, R2](const Vec& x) {
    Vec p(m + 1);
    double s = 0;
    for (int i = 0; i < m; ++i) {
      p[i] = x[i];
      s += x[i] * x[i];
    }
    p[m] = std::sqrt(R2 - s);
    return p;
  };
  M.area_weight = [m, R2](const Vec& x) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += x[i] * x[i];
    return std::sqrt(1.0 + s / (R2 - s));
  };
  M.tangent = [m, R2](const Vec& x) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += x[i] * x[i];
    double h = std::sqrt(R2 - s);
    std::vector<Vec> t(m, Vec(m + 1, 0.0));
    for (int i = 0; i < m; ++i) {
      t[i][i] = 1.0;
      t[i][m] = -x[i] / h;
    }
    return t;
  };
  M.name = "sphere-patch";
  M.validate();
  return M;
}

SampledManifold make_saw_graph_manifold(int m, const saw::SawParams& p) {
  p.validate();
  auto tab = std::make_shared<saw::SawTables>(saw::SawTables::build(p));
  SampledManifold M;
  M.m = m;
  M.n = m + 1;
  M.domain = {Vec(m, 0.0), Vec(m, 1.0)};
  M.embed = [m, tab](const Vec& x) {
    Vec pt(m + 1);
    for (int i = 0; i < m; ++i) pt[i] = x[i];
    pt[m] = saw::saw_antiderivative(x[0], *tab).value;
    return pt;
  };
  M.area_weight = [tab](const Vec& x) {
    double f = saw::saw_sum(x[0], *tab).value;
    return std::sqrt(1.0 + f * f);
  };
  M.tangent = [m, tab](const Vec& x) {
    double f = saw::saw_sum(x[0], *tab).value;
    std::vector<Vec> t(m, Vec(m + 1, 0.0));
    t[0][0] = 1.0;
    t[0][m] = f;
    for (int i = 1; i < m; ++i) t[i][i] = 1.0;
    return t;
  };
  M.name = "saw-graph";
  M.validate();
  return M;
}

std::vector<Vec> sample_point_cloud(const SampledManifold& M, size_t per_axis) {
  M.validate();
  if (per_axis < 2) throw input_error("point cloud needs at least 2 points per axis");
  const int m = M.m;
  size_t total = 1;
  for (int i = 0; i < m; ++i) total *= per_axis;
  std::vector<Vec> cloud;
  cloud.reserve(total);
  std::vector<size_t> idx(m, 0);
  Vec x(m);
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rem = flat;
    for (int i = 0; i < m; ++i) {
      idx[i] = rem % per_axis;
      rem /= per_axis;
      x[i] = M.domain.lo[i] + (M.domain.hi[i] - M.domain.lo[i]) *
                                  static_cast<double>(idx[i]) /
                                  static_cast<double>(per_axis - 1);
    }
    cloud.push_back(M.embed(x));
  }
  return cloud;
}

double estimate_diameter(const SampledManifold& M) {
  auto pts = sample_point_cloud(M, M.m == 1 ? 128 : 16);
  double d = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, dist(pts[i], pts[j]));
  return d;
}

EnergyEstimate energy_ep_mc(const SampledManifold& M, double p, size_t samples,
                            uint64_t seed, int threads) {
  M.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  const size_t total = std::max(samples, mc_streams);
  const int tuple_size = M.m + 2;
  const double vol = M.domain.volume();
  double vol_pow = 1;
  for (int i = 0; i < tuple_size; ++i) vol_pow *= vol;

  std::vector<double> stream_mean(mc_streams, 0.0);
  parallel_blocks(mc_streams, threads, [&](size_t s) {
    Rng rng(hash_combine(seed, s));
    const size_t cnt = total / mc_streams + (s < total % mc_streams ? 1 : 0);
    std::vector<Vec> chart(tuple_size);
    double acc = 0;
    for (size_t it = 0; it < cnt; ++it) {
      double wprod = 1;
      for (int i = 0; i < tuple_size; ++i) {
        chart[i] = M.domain.sample(rng);
        wprod *= M.area_weight(chart[i]);
      }
      double K = geom::discrete_curvature(embed_tuple(M, chart));
      acc += std::pow(K, p) * wprod;
    }
    stream_mean[s] = cnt > 0 ? acc / static_cast<double>(cnt) : 0.0;
  });

  double mean = 0;
  for (double m_ : stream_mean) mean += m_;
  mean /= static_cast<double>(mc_streams);
  return {vol_pow * mean, vol_pow * jackknife_se(stream_mean), total};
}

ShellSpec ShellSpec::for_diameter(double diam, int k_max) {
  if (!(diam > 0)) throw input_error("diameter must be positive");
  ShellSpec s;
  s.k0 = static_cast<int>(std::floor(-std::log2(2.0 * diam)));
  s.k_max = k_max;
  if (s.k0 > s.k_max) throw input_error("shell spec needs k0 <= k_max");
  return s;
}

ScaleReport energy_ep_shells(const SampledManifold& M, double p,
                             const ShellSpec& shells, size_t samples_per_shell,
                             uint64_t seed, int threads, bool importance) {
  M.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  if (shells.k0 > shells.k_max) throw input_error("shell spec needs k0 <= k_max");
  const int nshells = shells.k_max - shells.k0 + 1;
  const int tuple_size = M.m + 2;
  const double vol = M.domain.volume();
  const int m = M.m;

  auto shell_index = [&](double d) {
    if (!(d > 0)) return -1;
    int k = static_cast<int>(std::floor(-std::log2(d)));
    if (k < shells.k0 || k > shells.k_max) return -1;
    return k - shells.k0;
  };

  std::vector<std::vector<double>> partial(mc_streams);

  if (!importance) {
    // one uniform stream binned by shell
    const size_t total = std::max<size_t>(samples_per_shell * nshells, mc_streams);
    double vol_pow = 1;
    for (int i = 0; i < tuple_size; ++i) vol_pow *= vol;
    parallel_blocks(mc_streams, threads, [&](size_t s) {
      Rng rng(hash_combine(seed, s));
      const size_t cnt = total / mc_streams + (s < total % mc_streams ? 1 : 0);
      std::vector<double> acc(nshells, 0.0);
      std::vector<Vec> chart(tuple_size);
      for (size_t it = 0; it < cnt; ++it) {
        double wprod = 1;
        for (int i = 0; i < tuple_size; ++i) {
          chart[i] = M.domain.sample(rng);
          wprod *= M.area_weight(chart[i]);
        }
        auto T = embed_tuple(M, chart);
        int sh = shell_index(geom::diameter(T));
        if (sh < 0) continue;
        acc[sh] += std::pow(geom::discrete_curvature(T), p) * wprod;
      }
      for (auto& a : acc) a *= vol_pow / static_cast<double>(total);
      partial[s] = std::move(acc);
    });
  } else {
    // per-shell proposal: z_0 uniform, the others uniform in the chart cube
    // of radius 2^{-k} around z_0; densities recorded for unbiasedness
    parallel_blocks(mc_streams, threads, [&](size_t s) {
      Rng rng(hash_combine(seed, s));
      std::vector<double> acc(nshells, 0.0);
      std::vector<Vec> chart(tuple_size);
      for (int sh = 0; sh < nshells; ++sh) {
        const double r = std::pow(2.0, -(shells.k0 + sh));
        const size_t cnt = samples_per_shell / mc_streams +
                           (s < samples_per_shell % mc_streams ? 1 : 0);
        double sum = 0;
        for (size_t it = 0; it < cnt; ++it) {
          chart[0] = M.domain.sample(rng);
          double wprod = M.area_weight(chart[0]);
          double density_vol = vol;
          for (int i = 1; i < tuple_size; ++i) {
            Vec lo(m), hi(m);
            double cube_vol = 1;
            for (int d = 0; d < m; ++d) {
              lo[d] = std::max(M.domain.lo[d], chart[0][d] - r);
              hi[d] = std::min(M.domain.hi[d], chart[0][d] + r);
              cube_vol *= hi[d] - lo[d];
            }
            Vec z(m);
            for (int d = 0; d < m; ++d) z[d] = rng.uniform(lo[d], hi[d]);
            chart[i] = z;
            wprod *= M.area_weight(chart[i]);
            density_vol *= cube_vol;
          }
          auto T = embed_tuple(M, chart);
          if (shell_index(geom::diameter(T)) != sh) continue;
          sum += std::pow(geom::discrete_curvature(T), p) * wprod * density_vol;
        }
        acc[sh] = cnt > 0 ? sum / static_cast<double>(samples_per_shell) : 0.0;
      }
      partial[s] = std::move(acc);
    });
  }

  ScaleReport rep;
  rep.base = 2.0;
  double cum = 0;
  std::vector<double> col(mc_streams);
  for (int sh = 0; sh < nshells; ++sh) {
    for (size_t s = 0; s < mc_streams; ++s) col[s] = partial[s][sh];
    double sum = pairwise_sum(col);
    cum += sum;
    rep.levels.push_back({shells.k0 + sh, 0.0, sum, cum});
  }
  rep.fitted_exponent = fit_scale_exponent(rep.levels, rep.base);
  return rep;
}

BetaFit beta_scaling_fit(const SampledManifold& M, int centers,
                         const std::vector<double>& radii, double alpha,
                         size_t cloud_per_axis) {
  M.validate();
  if (centers < 2) throw input_error("beta fit needs at least 2 centers");
  if (radii.empty()) throw input_error("beta fit needs a radius list");
  if (cloud_per_axis == 0) cloud_per_axis = M.m == 1 ? 65536 : 128;
  auto cloud = sample_point_cloud(M, cloud_per_axis);

  const int m = M.m;
  double r_max = *std::max_element(radii.begin(), radii.end());

  BetaFit fit;
  std::vector<double> log_r, log_b;
  std::vector<std::pair<double, double>> all_pairs;  // (r, beta)
  std::vector<std::pair<double, double>> fit_pairs;

  for (int ci = 0; ci < centers; ++ci) {
    Vec x(m);
    for (int d = 0; d < m; ++d) {
      double lo = M.domain.lo[d], hi = M.domain.hi[d];
      double margin = std::min(r_max, 0.25 * (hi - lo));
      x[d] = lo + margin +
             (hi - lo - 2 * margin) * (ci + 0.5) / static_cast<double>(centers);
    }
    Vec a = M.embed(x);
    std::vector<geom::AffinePlane> cands;
    if (M.tangent) {
      auto tv = M.tangent(x);
      cands.push_back(geom::AffinePlane::through(a, tv));
    }
    for (double r : radii) {
      auto est = geom::beta_number(cloud, a, r, m, geom::BetaMode::approx, cands);
      all_pairs.emplace_back(r, est.value);
      if (ci % 2 == 0) fit_pairs.emplace_back(r, est.value);
      if (est.value > 1e-13) {
        log_r.push_back(std::log(r));
        log_b.push_back(std::log(est.value));
      }
    }
  }
  fit.pairs = all_pairs.size();

  if (log_r.size() < 2) {
    fit.degenerate_flat = true;
    fit.slope = quiet_nan;
    fit.C_fit = 0;
    return fit;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < log_r.size(); ++i) {
    sx += log_r[i];
    sy += log_b[i];
    sxx += log_r[i] * log_r[i];
    sxy += log_r[i] * log_b[i];
  }
  double cnt = static_cast<double>(log_r.size());
  fit.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  for (auto [r, b] : fit_pairs)
    fit.C_fit = std::max(fit.C_fit, b / std::pow(r, alpha));
  for (auto [r, b] : all_pairs)
    if (b > 1.1 * fit.C_fit * std::pow(r, alpha)) ++fit.violations;
  return fit;
}

double simplex_beta_constant(int m, int n) {
  if (n <= m) throw input_error("bound constant needs n > m");
  double A = std::sqrt(static_cast<double>(n - m - 1));
  return std::pow(2.0 + 4.0 * A, n) * std::pow(2.0, -(n - m - 1));
}

DcBetaReport dc_beta_bound_check(const SampledManifold& M, size_t tuple_count,
                                 uint64_t seed, size_t cloud_per_axis,
                                 std::ostream* tuple_dump) {
  M.validate();
  if (cloud_per_axis == 0) cloud_per_axis = M.m == 1 ? 16384 : 96;
  auto cloud = sample_point_cloud(M, cloud_per_axis);
  const size_t cloud_n = cloud.size();
  const int m = M.m;
  const int tuple_size = m + 2;

  DcBetaReport rep;
  rep.C_bound = simplex_beta_constant(m, M.n);
  rep.tuples = tuple_count;

  const size_t blocks = 64;
  std::vector<DcBetaReport> partial(blocks);
  std::vector<std::string> dump_rows(blocks);
  std::string failure;
  std::mutex failure_mu;

  parallel_blocks(blocks, 0, [&](size_t blk) {
    DcBetaReport local;
    std::ostringstream rows;
    std::vector<Vec> chart(tuple_size);
    std::vector<Vec> cloud_plus = cloud;  // tuple points appended per draw
    cloud_plus.resize(cloud_n + tuple_size);
    const size_t begin = blk * tuple_count / blocks;
    const size_t end = (blk + 1) * tuple_count / blocks;
    for (size_t it = begin; it < end; ++it) {
      Rng rng(hash_combine(seed, it));
      for (int i = 0; i < tuple_size; ++i) chart[i] = M.domain.sample(rng);
      auto T = embed_tuple(M, chart);
      double d = geom::diameter(T);
      double H = d > 0 ? geom::simplex_measure(T) : 0.0;
      double beta_val = 0;
      double ratio = 0;
      if (H == 0) {
        ++local.degenerate;
      } else {
        for (int i = 0; i < tuple_size; ++i) cloud_plus[cloud_n + i] = T.points[i];
        auto beta = geom::beta_number(cloud_plus, T.points[0], d, m,
                                      geom::BetaMode::approx);
        if (!(beta.value > 0)) {
          std::lock_guard<std::mutex> lock(failure_mu);
          failure = "impossible geometry: beta = 0 with positive simplex measure";
          return;
        }
        beta_val = beta.value;
        ratio = H / (beta_val * std::pow(d, m + 1));
        local.max_ratio = std::max(local.max_ratio, ratio);
        if (ratio > rep.C_bound) ++local.violations;
      }
      if (tuple_dump) {
        rows << it;
        for (int i = 0; i < tuple_size; ++i)
          for (int dcoord = 0; dcoord < m; ++dcoord)
            rows << ',' << io::format_double(chart[i][dcoord]);
        rows << ',' << io::format_double(d) << ',' << io::format_double(H) << ','
             << io::format_double(beta_val) << ',' << io::format_double(ratio)
             << '\n';
      }
    }
    partial[blk] = local;
    dump_rows[blk] = rows.str();
  });
  if (!failure.empty()) throw std::logic_error(failure);
  for (const auto& p : partial) {
    rep.max_ratio = std::max(rep.max_ratio, p.max_ratio);
    rep.violations += p.violations;
    rep.degenerate += p.degenerate;
  }
  if (tuple_dump) {
    *tuple_dump << "tuple";
    for (int i = 0; i < tuple_size; ++i)
      for (int dcoord = 0; dcoord < m; ++dcoord)
        *tuple_dump << ",x" << i << "_" << dcoord;
    *tuple_dump << ",diam,measure,beta,ratio\n";
    for (const auto& r : dump_rows) *tuple_dump << r;
  }
  return rep;
}

}  // namespace mcurv::manifolds
