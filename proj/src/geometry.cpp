#include "mcurv/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mcurv::geom {

namespace {

constexpr double collinear_eps = 1e-15;   // menger cutoff: 4*area vs side product
constexpr double gram_clip_rel = 8e-15;   // relative residual noise floor
constexpr double ortho_tol = 1e-9;

// ---- dense symmetric eigensolver (cyclic Jacobi) -------------------------
// Matrices here are tiny (k <= ambient dimension), so a hand-rolled Jacobi
// keeps the module dependency-free.

struct SymEigen {
  std::vector<double> values;      // ascending
  std::vector<Vec> vectors;        // vectors[i] belongs to values[i]
};

// psd_relative selects the relative rotation threshold |a_pq| >
// eps sqrt(a_pp a_qq); on positive semidefinite input this keeps small
// eigenvalues relatively accurate (they feed determinants). Indefinite
// matrices (projector differences) use an absolute threshold instead.
SymEigen jacobi_eigen(std::vector<double> a, int n, bool want_vectors,
                      bool psd_relative = true) {
  std::vector<double> v;
  if (want_vectors) {
    v.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a[i * n + j]));

  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        double app = a[p * n + p], aqq = a[q * n + q];
        double thresh = psd_relative
                            ? 1e-15 * std::sqrt(std::max(app, 0.0) * std::max(aqq, 0.0))
                            : 1e-16 * scale;
        if (std::fabs(apq) <= thresh) continue;
        rotated = true;
        double tau = (aqq - app) / (2 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1 + tau * tau));
        double c = 1.0 / std::sqrt(1 + t * t);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a[i * n + p], aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a[p * n + i], aqi = a[q * n + i];
          a[p * n + i] = c * api - s * aqi;
          a[q * n + i] = s * api + c * aqi;
        }
        if (want_vectors) {
          for (int i = 0; i < n; ++i) {
            double vip = v[i * n + p], viq = v[i * n + q];
            v[i * n + p] = c * vip - s * viq;
            v[i * n + q] = s * vip + c * viq;
          }
        }
      }
    }
    if (!rotated) break;
  }

  SymEigen out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a[i * n + i];
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return out.values[x] < out.values[y]; });
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = out.values[order[i]];
  out.values = std::move(sorted);
  if (want_vectors) {
    out.vectors.resize(n);
    for (int i = 0; i < n; ++i) {
      out.vectors[i].resize(n);
      for (int r = 0; r < n; ++r) out.vectors[i][r] = v[r * n + order[i]];
    }
  }
  return out;
}

// Modified Gram-Schmidt with reorthogonalization; drops dependent directions.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vs, double drop_tol = 1e-12) {
  double scale = 0;
  for (const auto& v : vs) scale = std::max(scale, norm(v));
  if (scale == 0) return {};
  std::vector<Vec> basis;
  for (const auto& v0 : vs) {
    Vec v = v0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(v, -dot(v, b), b);
    double nv = norm(v);
    if (nv > drop_tol * scale) {
      for (auto& c : v) c /= nv;
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// k-volume of the parallelotope spanned by the edges divided by k!, via
// column-pivoted modified Gram-Schmidt (product of residual norms). Residual
// norms are conditioned like eps * diam/height, one power better than the
// Gram-matrix spectrum; residuals at the relative noise floor clip the
// volume to exactly zero (affinely dependent input).
double simplex_volume_from_edges(std::vector<Vec> edges) {
  const int k = static_cast<int>(edges.size());
  double scale = 0;
  for (const auto& e : edges) scale = std::max(scale, norm(e));
  if (scale == 0) return 0.0;

  double vol = 1;
  std::vector<char> used(k, 0);
  std::vector<Vec> basis;
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    double best = -1;
    for (int j = 0; j < k; ++j) {
      if (used[j]) continue;
      double nj = norm(edges[j]);
      if (nj > best) {
        best = nj;
        pick = j;
      }
    }
    for (const auto& b : basis) axpy(edges[pick], -dot(edges[pick], b), b);
    double r = norm(edges[pick]);
    if (r <= gram_clip_rel * scale) return 0.0;
    vol *= r;
    used[pick] = 1;
    Vec b = scaled(edges[pick], 1.0 / r);
    for (int j = 0; j < k; ++j)
      if (!used[j]) axpy(edges[j], -dot(edges[j], b), b);
    basis.push_back(std::move(b));
  }
  return vol / factorial(k);
}

std::vector<Vec> edges_from(const PointTuple& T, size_t base, size_t skip = SIZE_MAX) {
  std::vector<Vec> e;
  for (size_t i = 0; i < T.points.size(); ++i)
    if (i != base && i != skip) e.push_back(sub(T.points[i], T.points[base]));
  return e;
}

}  // namespace

void PointTuple::validate() const {
  if (points.size() < 2) throw input_error("point tuple needs at least 2 points");
  const size_t n = points[0].size();
  if (n == 0) throw input_error("points must have positive dimension");
  for (const auto& p : points)
    if (p.size() != n) throw input_error("point tuple has mixed ambient dimensions");
}

namespace {
// simplex operations additionally require order k <= ambient dimension
void validate_simplex(const PointTuple& T) {
  T.validate();
  if (T.points.size() - 1 > T.points[0].size())
    throw input_error("simplex order k exceeds ambient dimension");
}
}  // namespace

PointTuple PointTuple::scaled_by(double lambda) const {
  PointTuple s;
  s.points.reserve(points.size());
  for (const auto& p : points) s.points.push_back(scaled(p, lambda));
  return s;
}

double AffinePlane::distance(const Vec& p) const {
  Vec r = sub(p, base);
  for (const auto& b : basis) axpy(r, -dot(r, b), b);
  return norm(r);
}

bool AffinePlane::is_orthonormal(double tol) const {
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != base.size()) return false;
    if (std::fabs(norm(basis[i]) - 1.0) > tol) return false;
    for (size_t j = i + 1; j < basis.size(); ++j)
      if (std::fabs(dot(basis[i], basis[j])) > tol) return false;
  }
  return true;
}

AffinePlane AffinePlane::through(Vec base, const std::vector<Vec>& spanning) {
  auto onb = orthonormalize(spanning);
  if (onb.size() != spanning.size())
    throw input_error("spanning set is rank deficient");
  return {std::move(base), std::move(onb)};
}

AffinePlane AffinePlane::axis_aligned(Vec base, int m) {
  AffinePlane p;
  const int n = static_cast<int>(base.size());
  p.base = std::move(base);
  for (int i = 0; i < m && i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    p.basis.push_back(std::move(e));
  }
  return p;
}

double simplex_measure(const PointTuple& T) {
  validate_simplex(T);
  return simplex_volume_from_edges(edges_from(T, 0));
}

double diameter(const PointTuple& T) {
  T.validate();
  double d = 0;
  for (size_t i = 0; i < T.points.size(); ++i)
    for (size_t j = i + 1; j < T.points.size(); ++j)
      d = std::max(d, dist(T.points[i], T.points[j]));
  return d;
}

double min_height(const PointTuple& T) {
  validate_simplex(T);
  const size_t cnt = T.points.size();
  double h = inf;
  for (size_t v = 0; v < cnt; ++v) {
    size_t base = v == 0 ? 1 : 0;
    std::vector<Vec> span;
    for (size_t i = 0; i < cnt; ++i)
      if (i != v && i != base) span.push_back(sub(T.points[i], T.points[base]));
    auto onb = orthonormalize(span);
    Vec r = sub(T.points[v], T.points[base]);
    for (const auto& b : onb) axpy(r, -dot(r, b), b);
    h = std::min(h, norm(r));
  }
  return h;
}

namespace {
// 2 * triangle area via the sum of squared 2x2 minors (the cross product
// magnitude in any dimension); cancellation-free for degenerate triples.
double double_area(const Vec& u, const Vec& v) {
  double cross2 = 0;
  for (size_t d = 0; d < u.size(); ++d)
    for (size_t e = d + 1; e < u.size(); ++e) {
      double m = u[d] * v[e] - u[e] * v[d];
      cross2 += m * m;
    }
  return std::sqrt(cross2);
}
}  // namespace

double menger_radius(const Vec& a, const Vec& b, const Vec& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw input_error("menger_radius: dimension mismatch");
  double ab = dist(a, b), ac = dist(a, c), bc = dist(b, c);
  if (ab == 0 || ac == 0 || bc == 0)
    throw input_error("menger_radius: coincident points");
  double four_area = 2.0 * double_area(sub(b, a), sub(c, a));
  double prod = ab * ac * bc;
  if (four_area < collinear_eps * prod) return inf;
  return prod / four_area;
}

double menger_curvature(const Vec& a, const Vec& b, const Vec& c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw input_error("menger_curvature: dimension mismatch");
  double ab = dist(a, b), ac = dist(a, c), bc = dist(b, c);
  if (ab == 0 || ac == 0 || bc == 0) return 0.0;
  double four_area = 2.0 * double_area(sub(b, a), sub(c, a));
  double prod = ab * ac * bc;
  if (four_area < collinear_eps * prod) return 0.0;
  return four_area / prod;
}

double discrete_curvature(const PointTuple& T) {
  validate_simplex(T);
  double d = diameter(T);
  if (d == 0) return 0.0;
  double vol = simplex_measure(T);
  return vol / std::pow(d, static_cast<int>(T.points.size()));
}

HeightFace simplex_height_face(const PointTuple& T) {
  validate_simplex(T);
  const size_t cnt = T.points.size();
  if (cnt < 3) throw input_error("simplex_height_face needs at least 3 points");
  const int m = static_cast<int>(cnt) - 2;

  std::vector<Vec> face_edges;
  for (size_t i = 1; i + 1 < cnt; ++i)
    face_edges.push_back(sub(T.points[i], T.points[0]));
  auto onb = orthonormalize(face_edges);
  if (static_cast<int>(onb.size()) != m)
    throw input_error("simplex_height_face: degenerate face");

  HeightFace out;
  out.face_plane = {T.points[0], std::move(onb)};
  out.height = out.face_plane.distance(T.points.back());
  out.face_measure = simplex_volume_from_edges(face_edges);
  return out;
}

bool spindle_contains(const Vec& P, const Vec& Q, double angle, const Vec& x) {
  if (P.size() != Q.size() || P.size() != x.size())
    throw input_error("spindle_contains: dimension mismatch");
  if (P == Q) throw input_error("spindle_contains: cone vertices coincide");
  if (!(angle > 0 && angle < M_PI))
    throw input_error("spindle_contains: opening angle must be in (0,pi)");
  Vec xp = sub(x, P), xq = sub(x, Q);
  if (norm(xp) == 0 || norm(xq) == 0) return false;
  double half = 0.5 * angle;
  return angle_between(xp, sub(Q, P)) < half && angle_between(xq, sub(P, Q)) < half;
}

double projection_distance(const AffinePlane& U, const AffinePlane& V) {
  if (U.ambient_dim() != V.ambient_dim())
    throw input_error("projection_distance: ambient dimensions differ");
  if (!U.is_orthonormal(ortho_tol) || !V.is_orthonormal(ortho_tol))
    throw input_error("projection_distance: basis not orthonormal");
  const int n = U.ambient_dim();
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (const auto& b : U.basis)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i * n + j] += b[i] * b[j];
  for (const auto& b : V.basis)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i * n + j] -= b[i] * b[j];
  SymEigen e = jacobi_eigen(std::move(d), n, false, /*psd_relative=*/false);
  double v = std::max(std::fabs(e.values.front()), std::fabs(e.values.back()));
  return std::min(1.0, std::max(0.0, v));
}

// ---- beta-numbers ---------------------------------------------------------

namespace {

double sup_distance(const std::vector<Vec>& pts, const AffinePlane& plane) {
  double s = 0;
  for (const auto& p : pts) s = std::max(s, plane.distance(p));
  return s;
}

// exact minimax line through the origin for 2-D offsets
double exact_line_sweep(const std::vector<Vec>& d, double* theta_best) {
  auto g = [&](double th) {
    double nx = -std::sin(th), ny = std::cos(th);
    double s = 0;
    for (const auto& p : d) s = std::max(s, std::fabs(nx * p[0] + ny * p[1]));
    return s;
  };
  const int M = 1 << 20;
  double best = inf, th_best = 0;
  for (int j = 0; j < M; ++j) {
    double th = M_PI * j / M;
    double v = g(th);
    if (v < best) {
      best = v;
      th_best = th;
    }
  }
  // golden-section refinement around the best grid point
  double lo = th_best - M_PI / M, hi = th_best + M_PI / M;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), dd = lo + gr * (hi - lo);
  double fc = g(c), fd = g(dd);
  while (hi - lo > 1e-9) {
    if (fc < fd) {
      hi = dd;
      dd = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = g(c);
    } else {
      lo = c;
      c = dd;
      fc = fd;
      dd = lo + gr * (hi - lo);
      fd = g(dd);
    }
  }
  double th = 0.5 * (lo + hi);
  double v = g(th);
  if (v < best) {
    best = v;
    th_best = th;
  }
  *theta_best = th_best;
  return best;
}

// top-m principal directions of the offsets
std::vector<Vec> tls_basis(const std::vector<Vec>& d, int n, int m) {
  std::vector<double> cov(static_cast<size_t>(n) * n, 0.0);
  for (const auto& p : d)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cov[i * n + j] += p[i] * p[j];
  SymEigen e = jacobi_eigen(std::move(cov), n, true);
  std::vector<Vec> basis;
  for (int i = 0; i < m; ++i) basis.push_back(e.vectors[n - 1 - i]);
  return orthonormalize(basis);
}

// orthonormal complement of a unit vector
std::vector<Vec> complement_basis(const Vec& nrm) {
  const int n = static_cast<int>(nrm.size());
  std::vector<Vec> cand;
  cand.push_back(nrm);
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    cand.push_back(std::move(e));
  }
  auto onb = orthonormalize(cand);
  return {onb.begin() + 1, onb.end()};
}

// minimax descent over the unit normal (codimension-1 planes only)
AffinePlane normal_descent(const Vec& x, const std::vector<Vec>& offsets,
                           AffinePlane start) {
  const int n = static_cast<int>(x.size());
  // normal of the starting plane
  std::vector<Vec> full = start.basis;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    full.push_back(std::move(e));
  }
  auto onb = orthonormalize(full);
  if (static_cast<int>(onb.size()) != n) return start;
  Vec nrm = onb.back();

  // bounded-work minimax descent: at most max_evals objective evaluations
  auto objective = [&](const Vec& nn, const Vec** worst) {
    double s = -1;
    for (const auto& v : offsets) {
      double d = std::fabs(dot(v, nn));
      if (d > s) {
        s = d;
        *worst = &v;
      }
    }
    return s;
  };
  const Vec* worst = nullptr;
  double obj = objective(nrm, &worst);
  double step = 0.5;
  const int max_evals = 48;
  for (int evals = 0; evals < max_evals && step > 1e-7 && worst && obj > 0; ++evals) {
    Vec t = *worst;
    double sgn = dot(*worst, nrm) >= 0 ? 1.0 : -1.0;
    axpy(t, -dot(t, nrm), nrm);
    double tn = norm(t);
    if (tn < 1e-15 * norm(*worst)) break;
    Vec cand = nrm;
    axpy(cand, -sgn * step / tn, t);
    double cn = norm(cand);
    for (auto& c : cand) c /= cn;
    const Vec* cand_worst = nullptr;
    double co = objective(cand, &cand_worst);
    if (co < obj * (1 - 1e-14)) {
      nrm = std::move(cand);
      obj = co;
      worst = cand_worst;
      step *= 1.4;
    } else {
      step *= 0.5;
    }
  }
  return {x, complement_basis(nrm)};
}

}  // namespace

BetaEstimate beta_number(const std::vector<Vec>& E, const Vec& x, double r,
                         int m, BetaMode mode,
                         const std::vector<AffinePlane>& extra_candidates) {
  if (!(r > 0)) throw input_error("beta_number: radius must be positive");
  const int n = static_cast<int>(x.size());
  if (m < 1 || m >= n) throw input_error("beta_number: need 1 <= m < ambient dim");

  std::vector<Vec> inside;
  for (const auto& y : E) {
    if (static_cast<int>(y.size()) != n)
      throw input_error("beta_number: dimension mismatch in point set");
    if (dist(y, x) <= r) inside.push_back(y);
  }
  if (inside.empty()) return {0.0, AffinePlane::axis_aligned(x, m), true};

  if (mode == BetaMode::exact) {
    if (!(m == 1 && n == 2))
      throw input_error("beta_number: exact mode only supported for m=1, n=2");
    std::vector<Vec> offsets;
    offsets.reserve(inside.size());
    for (const auto& y : inside) offsets.push_back(sub(y, x));
    double theta = 0;
    double sup = exact_line_sweep(offsets, &theta);
    AffinePlane plane{x, {{std::cos(theta), std::sin(theta)}}};
    return {sup / r, std::move(plane), true};
  }

  std::vector<Vec> offsets;
  offsets.reserve(inside.size());
  for (const auto& y : inside) offsets.push_back(sub(y, x));

  std::vector<AffinePlane> candidates;
  for (const auto& c : extra_candidates) {
    if (c.dim() == m && c.ambient_dim() == n && c.is_orthonormal(ortho_tol)) {
      AffinePlane cc = c;
      cc.base = x;
      candidates.push_back(std::move(cc));
    }
  }
  auto tls = tls_basis(offsets, n, m);
  if (static_cast<int>(tls.size()) == m) candidates.push_back({x, std::move(tls)});
  if (candidates.empty()) candidates.push_back(AffinePlane::axis_aligned(x, m));

  AffinePlane best_plane = candidates[0];
  double best = sup_distance(inside, best_plane);
  for (size_t i = 1; i < candidates.size(); ++i) {
    double s = sup_distance(inside, candidates[i]);
    if (s < best) {
      best = s;
      best_plane = candidates[i];
    }
  }
  if (m == n - 1) {
    AffinePlane desc = normal_descent(x, offsets, best_plane);
    double s = sup_distance(inside, desc);
    if (s < best) {
      best = s;
      best_plane = std::move(desc);
    }
  }
  return {best / r, std::move(best_plane), false};
}

}  // namespace mcurv::geom
