#include "mcurv/curves.hpp"

#include <algorithm>
#include <cmath>

#include "mcurv/kernels.hpp"
#include "mcurv/parallel.hpp"

namespace mcurv::curves {

namespace {

constexpr double collinear_eps = 1e-15;

// Menger curvature of samples (i, j, k) straight off the SoA storage; the
// area comes from the sum of squared 2x2 minors (the cross product in any
// dimension), which vanishes exactly on axis-aligned collinear data instead
// of leaving sqrt-of-cancellation noise. Same degenerate conventions as the
// batch kernel.
double curv_idx(const SampledCurve& c, size_t i, size_t j, size_t k) {
  const int dim = c.dim();
  double ubuf[16], vbuf[16];
  std::vector<double> uheap, vheap;
  double* u = ubuf;
  double* v = vbuf;
  if (dim > 16) {
    uheap.resize(dim);
    vheap.resize(dim);
    u = uheap.data();
    v = vheap.data();
  }
  double uu = 0, vv = 0, ww = 0;
  for (int d = 0; d < dim; ++d) {
    const double* x = c.coords[d].data();
    u[d] = x[j] - x[i];
    v[d] = x[k] - x[i];
    double w = x[k] - x[j];
    uu += u[d] * u[d];
    vv += v[d] * v[d];
    ww += w * w;
  }
  double cross2 = 0;
  for (int d = 0; d < dim; ++d)
    for (int e = d + 1; e < dim; ++e) {
      double m = u[d] * v[e] - u[e] * v[d];
      cross2 += m * m;
    }
  double four_area = 2.0 * std::sqrt(cross2);
  double prod = std::sqrt(uu * vv * ww);
  if (four_area <= collinear_eps * prod) return 0.0;
  return four_area / prod;
}

// Index ranges [b, e) that remain after removing windows of circular radius
// excl-1 around i and j.
std::vector<std::pair<size_t, size_t>> allowed_spans(size_t n, bool closed,
                                                     int excl, size_t i, size_t j) {
  const size_t h = static_cast<size_t>(excl - 1);
  std::vector<std::pair<size_t, size_t>> blocked;
  auto push_window = [&](size_t c) {
    if (!closed) {
      size_t b = c >= h ? c - h : 0;
      size_t e = std::min(n, c + h + 1);
      blocked.emplace_back(b, e);
    } else if (2 * h + 1 >= n) {
      blocked.emplace_back(0, n);
    } else if (c >= h && c + h < n) {
      blocked.emplace_back(c - h, c + h + 1);
    } else if (c < h) {
      blocked.emplace_back(0, c + h + 1);
      blocked.emplace_back(n - (h - c), n);
    } else {
      blocked.emplace_back(c - h, n);
      blocked.emplace_back(0, c + h + 1 - n);
    }
  };
  push_window(i);
  push_window(j);
  std::sort(blocked.begin(), blocked.end());
  std::vector<std::pair<size_t, size_t>> merged;
  for (auto span : blocked) {
    if (!merged.empty() && span.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, span.second);
    else
      merged.push_back(span);
  }
  std::vector<std::pair<size_t, size_t>> allowed;
  size_t pos = 0;
  for (auto span : merged) {
    if (span.first > pos) allowed.emplace_back(pos, span.first);
    pos = std::max(pos, span.second);
  }
  if (pos < n) allowed.emplace_back(pos, n);
  return allowed;
}

// sum over allowed k of w_k * c(i, j, k)^p, optionally restricted to the
// parameter arc strictly between i and j (the scale-split local part)
double inner_z_sum(const SampledCurve& c, double p, int excl, size_t i, size_t j,
                   bool local_z = false) {
  const size_t n = c.size();
  const int dim = c.dim();
  std::vector<std::pair<size_t, size_t>> spans;
  if (local_z) {
    size_t lo = std::min(i, j), hi = std::max(i, j);
    bool inner_arc = !c.closed || (hi - lo) <= n - (hi - lo);
    if (inner_arc) {
      if (lo + 1 < hi) spans.emplace_back(lo + 1, hi);
    } else {
      if (hi + 1 < n) spans.emplace_back(hi + 1, n);
      if (lo > 0) spans.emplace_back(0, lo);
    }
  } else {
    spans = allowed_spans(n, c.closed, excl, i, j);
  }
  double total = 0;
  if (dim == 2 || dim == 3) {
    double a[3] = {0, 0, 0}, b[3] = {0, 0, 0};
    const double* z[3] = {nullptr, nullptr, nullptr};
    for (int d = 0; d < dim; ++d) {
      a[d] = c.coords[d][i];
      b[d] = c.coords[d][j];
    }
    for (auto [lo, hi] : spans) {
      for (int d = 0; d < dim; ++d) z[d] = c.coords[d].data() + lo;
      total += kern::menger_pow_sum(dim, z, c.weights.data() + lo, hi - lo, a, b, p);
    }
  } else {
    for (auto [lo, hi] : spans)
      for (size_t k = lo; k < hi; ++k)
        total += c.weights[k] * std::pow(curv_idx(c, i, j, k), p);
  }
  return total;
}

struct IndexSampler {
  std::vector<double> cum;  // prefix sums of weights, cum[n] = L

  explicit IndexSampler(const SampledCurve& c) {
    cum.resize(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) cum[i + 1] = cum[i] + c.weights[i];
  }

  size_t draw(Rng& rng) const {
    double u = rng.uniform(0.0, cum.back());
    size_t idx = static_cast<size_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    return std::min(idx > 0 ? idx - 1 : 0, cum.size() - 2);
  }
};

double jackknife_se(const std::vector<double>& stream_means) {
  const size_t s = stream_means.size();
  if (s < 2) return 0;
  double m = 0;
  for (double v : stream_means) m += v;
  m /= static_cast<double>(s);
  double var = 0;
  for (double v : stream_means) var += (v - m) * (v - m);
  var /= static_cast<double>(s - 1);
  return std::sqrt(var / static_cast<double>(s));
}

}  // namespace

void SampledCurve::validate() const {
  const size_t n = params.size();
  if (n < 2) throw input_error("curve needs at least 2 samples");
  if (coords.empty()) throw input_error("curve has no coordinates");
  for (const auto& col : coords)
    if (col.size() != n) throw input_error("coordinate column size mismatch");
  if (weights.size() != n) throw input_error("weight vector size mismatch");
  for (size_t i = 1; i < n; ++i)
    if (!(params[i] > params[i - 1]))
      throw input_error("parameters must be strictly increasing");
  if (!(length > 0)) throw input_error("curve length must be positive");
  if (closed && !(params.back() < params.front() + length))
    throw input_error("closed curve parameters must stay within one period");
  double wsum = pairwise_sum(weights);
  if (std::fabs(wsum - length) > 1e-12 * length)
    throw input_error("quadrature weights do not sum to the curve length");
  if (param_kind == Param::arc_length) {
    const double slack = 1e-9 * (1.0 + length);
    for (size_t i = 1; i < n; ++i) {
      double chord = 0;
      for (const auto& col : coords) {
        double d = col[i] - col[i - 1];
        chord += d * d;
      }
      if (std::sqrt(chord) > params[i] - params[i - 1] + slack)
        throw input_error("chord exceeds arc-length parameter increment");
    }
  }
}

SampledCurve SampledCurve::from_points(std::vector<double> params,
                                       const std::vector<Vec>& pts, bool closed,
                                       double length, Param kind) {
  SampledCurve c;
  const size_t n = params.size();
  if (pts.size() != n) throw input_error("parameter/point count mismatch");
  if (n < 2) throw input_error("curve needs at least 2 samples");
  const size_t dim = pts[0].size();
  c.params = std::move(params);
  c.coords.assign(dim, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    if (pts[i].size() != dim) throw input_error("point dimension mismatch");
    for (size_t d = 0; d < dim; ++d) c.coords[d][i] = pts[i][d];
  }
  c.closed = closed;
  c.param_kind = kind;
  c.length = closed ? length : c.params.back() - c.params.front();
  c.weights.resize(n);
  if (closed) {
    for (size_t i = 0; i < n; ++i) {
      double next = i + 1 < n ? c.params[i + 1] : c.params[0] + c.length;
      double prev = i > 0 ? c.params[i - 1] : c.params[n - 1] - c.length;
      c.weights[i] = 0.5 * (next - prev);
    }
  } else {
    c.weights[0] = 0.5 * (c.params[1] - c.params[0]);
    for (size_t i = 1; i + 1 < n; ++i)
      c.weights[i] = 0.5 * (c.params[i + 1] - c.params[i - 1]);
    c.weights[n - 1] = 0.5 * (c.params[n - 1] - c.params[n - 2]);
  }
  c.validate();
  return c;
}

SampledCurve resample_arclength(const std::vector<Vec>& polyline, size_t n,
                                bool closed) {
  if (polyline.size() < 2) throw input_error("polyline needs at least 2 points");
  if (n < 3) throw input_error("resampling needs n >= 3");
  const size_t m = polyline.size();
  std::vector<double> cum(closed ? m + 1 : m, 0.0);
  for (size_t i = 1; i < m; ++i)
    cum[i] = cum[i - 1] + dist(polyline[i], polyline[i - 1]);
  if (closed) cum[m] = cum[m - 1] + dist(polyline[0], polyline[m - 1]);
  const double L = cum.back();
  if (!(L > 0)) throw input_error("zero-length polyline");

  auto at_arc = [&](double s) {
    s = std::min(std::max(s, 0.0), L);
    size_t seg = static_cast<size_t>(
        std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
    seg = std::min(std::max<size_t>(seg, 1), cum.size() - 1) - 1;
    const Vec& p0 = polyline[seg];
    const Vec& p1 = polyline[(seg + 1) % m];
    double seg_len = cum[seg + 1] - cum[seg];
    double t = seg_len > 0 ? (s - cum[seg]) / seg_len : 0.0;
    Vec p(p0.size());
    for (size_t d = 0; d < p.size(); ++d) p[d] = p0[d] + t * (p1[d] - p0[d]);
    return p;
  };

  std::vector<double> params(n);
  std::vector<Vec> pts(n);
  const double denom = closed ? static_cast<double>(n) : static_cast<double>(n - 1);
  for (size_t j = 0; j < n; ++j) {
    params[j] = L * static_cast<double>(j) / denom;
    pts[j] = at_arc(params[j]);
  }
  return SampledCurve::from_points(std::move(params), pts, closed, L,
                                   SampledCurve::Param::arc_length);
}

SampledCurve make_circle(double radius, size_t n, int ambient_dim) {
  if (!(radius > 0)) throw input_error("circle radius must be positive");
  if (n < 3) throw input_error("circle needs n >= 3 samples");
  if (ambient_dim < 2) throw input_error("circle needs ambient dimension >= 2");
  const double L = 2.0 * M_PI * radius;
  std::vector<double> params(n);
  std::vector<Vec> pts(n);
  for (size_t i = 0; i < n; ++i) {
    params[i] = L * static_cast<double>(i) / static_cast<double>(n);
    double t = params[i] / radius;
    Vec p(ambient_dim, 0.0);
    p[0] = radius * std::cos(t);
    p[1] = radius * std::sin(t);
    pts[i] = std::move(p);
  }
  return SampledCurve::from_points(std::move(params), pts, true, L,
                                   SampledCurve::Param::arc_length);
}

SampledCurve make_segment(double len, size_t n) {
  if (!(len > 0)) throw input_error("segment length must be positive");
  if (n < 3) throw input_error("segment needs n >= 3 samples");
  std::vector<double> params(n);
  std::vector<Vec> pts(n);
  for (size_t i = 0; i < n; ++i) {
    params[i] = len * static_cast<double>(i) / static_cast<double>(n - 1);
    pts[i] = {params[i], 0.0};
  }
  return SampledCurve::from_points(std::move(params), pts, false, len,
                                   SampledCurve::Param::arc_length);
}

SampledCurve make_ellipse(double a, double b, size_t n) {
  if (!(a > 0 && b > 0)) throw input_error("ellipse semi-axes must be positive");
  const size_t dense = std::max<size_t>(8192, 8 * n);
  std::vector<Vec> poly(dense);
  for (size_t i = 0; i < dense; ++i) {
    double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(dense);
    poly[i] = {a * std::cos(t), b * std::sin(t)};
  }
  return resample_arclength(poly, n, true);
}

SampledCurve make_saw_graph(const saw::SawParams& p, size_t n, bool arc_weights,
                            double x0, double x1) {
  if (n < 3) throw input_error("saw graph needs n >= 3 samples");
  if (!(x1 > x0)) throw input_error("saw graph needs x1 > x0");
  auto tab = saw::SawTables::build(p);
  std::vector<double> xs(n), fs(n), Fs(n);
  for (size_t i = 0; i < n; ++i)
    xs[i] = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
  kern::saw_eval_batch(xs.data(), n, tab, fs.data(), Fs.data());

  std::vector<Vec> pts(n);
  for (size_t i = 0; i < n; ++i) pts[i] = {xs[i], Fs[i]};
  SampledCurve c = SampledCurve::from_points(xs, pts, false, 0.0,
                                             SampledCurve::Param::graph);
  if (arc_weights) {
    for (size_t i = 0; i < n; ++i)
      c.weights[i] *= std::sqrt(1.0 + fs[i] * fs[i]);
    c.length = pairwise_sum(c.weights);
  }
  return c;
}

double bilipschitz_constant(const SampledCurve& c) {
  c.validate();
  const size_t n = c.size();
  double lam = inf;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double chord2 = 0;
      for (const auto& col : c.coords) {
        double d = col[i] - col[j];
        chord2 += d * d;
      }
      if (chord2 == 0)
        throw input_error("bilipschitz_constant: duplicate points (curve not injective)");
      lam = std::min(lam, std::sqrt(chord2) / c.param_dist(i, j));
    }
  }
  return lam;
}

EnergyResult energy_mp(const SampledCurve& c, double p, const QuadratureSpec& q) {
  c.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  const size_t n = c.size();
  const int excl = std::max(1, q.exclusion_radius);

  if (q.use_riemann(n)) {
    const size_t rows_per_block = 16;
    const size_t nblocks = (n + rows_per_block - 1) / rows_per_block;
    std::vector<double> partial(nblocks, 0.0);
    parallel_blocks(nblocks, q.threads, [&](size_t blk) {
      double acc = 0;
      const size_t lo = blk * rows_per_block;
      const size_t hi = std::min(n, lo + rows_per_block);
      for (size_t i = lo; i < hi; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
          if (c.index_dist(i, j) < static_cast<size_t>(excl)) continue;
          double inner = inner_z_sum(c, p, excl, i, j);
          acc += 2.0 * c.weights[i] * c.weights[j] * inner;
        }
      }
      partial[blk] = acc;
    });
    return {pairwise_sum(partial), 0.0, n * n * n, false};
  }

  // Monte-Carlo: 64 fixed seeded streams merged in stream order.
  const size_t streams = 64;
  const size_t total = std::max<size_t>(q.mc_samples, streams);
  IndexSampler sampler(c);
  std::vector<double> stream_mean(streams, 0.0);
  parallel_blocks(streams, q.threads, [&](size_t s) {
    Rng rng(hash_combine(q.seed, s));
    const size_t cnt = total / streams + (s < total % streams ? 1 : 0);
    double acc = 0;
    for (size_t it = 0; it < cnt; ++it) {
      size_t i = sampler.draw(rng);
      size_t j = sampler.draw(rng);
      size_t k = sampler.draw(rng);
      if (c.index_dist(i, j) < static_cast<size_t>(excl) ||
          c.index_dist(i, k) < static_cast<size_t>(excl) ||
          c.index_dist(j, k) < static_cast<size_t>(excl))
        continue;
      acc += std::pow(curv_idx(c, i, j, k), p);
    }
    stream_mean[s] = cnt > 0 ? acc / static_cast<double>(cnt) : 0.0;
  });
  double mean = 0;
  for (double m : stream_mean) mean += m;
  mean /= static_cast<double>(streams);
  const double vol = c.length * c.length * c.length;
  return {vol * mean, vol * jackknife_se(stream_mean), total, true};
}

EnergyResult energy_ip(const SampledCurve& c, double p, const QuadratureSpec& q) {
  c.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  const size_t n = c.size();
  const int excl = std::max(1, q.exclusion_radius);
  const size_t rows_per_block = 8;
  const size_t nblocks = (n + rows_per_block - 1) / rows_per_block;
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(nblocks, q.threads, [&](size_t blk) {
    double acc = 0;
    const size_t lo = blk * rows_per_block;
    const size_t hi = std::min(n, lo + rows_per_block);
    for (size_t t = lo; t < hi; ++t) {
      for (size_t u = t + 1; u < n; ++u) {
        if (c.index_dist(t, u) < static_cast<size_t>(excl)) continue;
        double sup_c = 0;
        for (auto [b, e] : allowed_spans(n, c.closed, excl, t, u))
          for (size_t s = b; s < e; ++s)
            sup_c = std::max(sup_c, curv_idx(c, s, t, u));
        acc += 2.0 * c.weights[t] * c.weights[u] * std::pow(sup_c, p);
      }
    }
    partial[blk] = acc;
  });
  return {pairwise_sum(partial), 0.0, n * n * n, false};
}

EnergyResult energy_up(const SampledCurve& c, double p, const QuadratureSpec& q) {
  c.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  const size_t n = c.size();
  const int excl = std::max(1, q.exclusion_radius);
  const size_t rows_per_block = 4;
  const size_t nblocks = (n + rows_per_block - 1) / rows_per_block;
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(nblocks, q.threads, [&](size_t blk) {
    double acc = 0;
    const size_t lo = blk * rows_per_block;
    const size_t hi = std::min(n, lo + rows_per_block);
    for (size_t u = lo; u < hi; ++u) {
      double sup_c = 0;
      auto spans = allowed_spans(n, c.closed, excl, u, u);
      for (auto [b1, e1] : spans) {
        for (size_t s = b1; s < e1; ++s) {
          for (auto [b2, e2] : spans) {
            for (size_t t = std::max(s + 1, b2); t < e2; ++t) {
              if (c.index_dist(s, t) < static_cast<size_t>(excl)) continue;
              sup_c = std::max(sup_c, curv_idx(c, s, t, u));
            }
          }
        }
      }
      acc += c.weights[u] * std::pow(sup_c, p);
    }
    partial[blk] = acc;
  });
  return {pairwise_sum(partial), 0.0, n * n * n, false};
}

ConeCheckReport secant_cone_check(const SampledCurve& c, double alpha,
                                  double holder_C, double epsilon) {
  c.validate();
  if (!(epsilon > 0)) throw input_error("epsilon must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw input_error("alpha must be in (0,1]");
  if (!(2.5 * holder_C * std::pow(epsilon, alpha) < 1.0))
    throw precondition_error("secant_cone_check requires (5/2) C eps^alpha < 1");
  if (c.closed && !(epsilon <= 0.5 * c.length))
    throw precondition_error("epsilon must not exceed half the curve length");

  const size_t n = c.size();
  ConeCheckReport rep;
  auto point = [&](size_t i) { return c.point(i); };

  for (size_t i = 0; i < n; ++i) {
    for (size_t step = 2; step < n; ++step) {
      size_t j = i + step;
      if (j >= n) {
        if (!c.closed) break;
        j -= n;
        if (j >= i) break;  // wrapped past the start
      }
      double d = c.closed
                     ? (c.params[j % n] - c.params[i] + (i + step >= n ? c.length : 0.0))
                     : c.params[j] - c.params[i];
      if (d >= epsilon) break;
      Vec pi = point(i), pj = point(j);
      Vec chord_ij = sub(pj, pi), chord_ji = sub(pi, pj);
      double bound = 2.0 * std::asin(std::min(1.0, 2.5 * holder_C * std::pow(d, alpha)));
      double dpow = std::pow(d, alpha);
      ++rep.pairs_checked;
      for (size_t s = 1; s < step; ++s) {
        size_t z = (i + s) % n;
        Vec pz = point(z);
        Vec vi = sub(pz, pi), vj = sub(pz, pj);
        if (norm(vi) > 0) {
          double ang = angle_between(vi, chord_ij);
          rep.max_angle_ratio = std::max(rep.max_angle_ratio, ang / dpow);
          if (ang > bound) rep.pass = false;
        }
        if (norm(vj) > 0) {
          double ang = angle_between(vj, chord_ji);
          rep.max_angle_ratio = std::max(rep.max_angle_ratio, ang / dpow);
          if (ang > bound) rep.pass = false;
        }
      }
    }
  }
  return rep;
}

ScaleReport scale_decomposed_mp(const SampledCurve& c, double p,
                                const QuadratureSpec& q, int max_shells,
                                bool local_z) {
  c.validate();
  if (!(p > 0)) throw input_error("energy exponent p must be positive");
  const size_t n = c.size();
  const int excl = std::max(1, q.exclusion_radius);

  int kmax = max_shells;
  if (kmax <= 0) {
    double min_gap = inf;
    for (size_t i = 1; i < n; ++i)
      min_gap = std::min(min_gap, c.params[i] - c.params[i - 1]);
    kmax = static_cast<int>(std::ceil(std::log2(c.length / min_gap))) + 1;
  }
  kmax = std::min(kmax, 62);

  auto shell_of = [&](double d) {
    int k = static_cast<int>(std::floor(-std::log2(d / c.length)));
    return std::min(std::max(k, 0), kmax);
  };

  const size_t rows_per_block = 16;
  const size_t nblocks = (n + rows_per_block - 1) / rows_per_block;
  std::vector<std::vector<double>> partial(nblocks);
  parallel_blocks(nblocks, q.threads, [&](size_t blk) {
    std::vector<double> shells(kmax + 1, 0.0);
    const size_t lo = blk * rows_per_block;
    const size_t hi = std::min(n, lo + rows_per_block);
    for (size_t i = lo; i < hi; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        if (c.index_dist(i, j) < static_cast<size_t>(excl)) continue;
        double inner = inner_z_sum(c, p, excl, i, j, local_z);
        shells[shell_of(c.param_dist(i, j))] +=
            2.0 * c.weights[i] * c.weights[j] * inner;
      }
    }
    partial[blk] = std::move(shells);
  });

  ScaleReport rep;
  rep.base = 2.0;
  double cum = 0;
  std::vector<double> col(nblocks);
  for (int k = 0; k <= kmax; ++k) {
    for (size_t b = 0; b < nblocks; ++b) col[b] = partial[b][k];
    double s = pairwise_sum(col);
    cum += s;
    rep.levels.push_back({k, 0.0, s, cum});
  }
  rep.fitted_exponent = fit_scale_exponent(rep.levels, rep.base);
  return rep;
}

}  // namespace mcurv::curves
