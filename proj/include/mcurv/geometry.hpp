#pragma once

#include <vector>

#include "mcurv/common.hpp"

namespace mcurv::geom {

/// Ordered tuple of k+1 points in R^n, the argument of simplex and
/// curvature operations. Requires identical ambient dimension, k+1 >= 2
/// and k <= n.
struct PointTuple {
  std::vector<Vec> points;

  PointTuple() = default;
  explicit PointTuple(std::vector<Vec> pts) : points(std::move(pts)) {}

  int order() const { return static_cast<int>(points.size()) - 1; }  // k
  int ambient_dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

  void validate() const;

  PointTuple scaled_by(double lambda) const;
};

/// Affine m-plane: base point plus an orthonormal spanning frame.
struct AffinePlane {
  Vec base;
  std::vector<Vec> basis;

  int ambient_dim() const { return static_cast<int>(base.size()); }
  int dim() const { return static_cast<int>(basis.size()); }

  /// Euclidean distance from p to the plane.
  double distance(const Vec& p) const;

  bool is_orthonormal(double tol = 1e-9) const;

  /// Orthonormalizes the spanning set; throws input_error if it does not
  /// have full rank.
  static AffinePlane through(Vec base, const std::vector<Vec>& spanning);

  /// Plane spanned by coordinate axes e_1..e_m at base.
  static AffinePlane axis_aligned(Vec base, int m);
};

enum class BetaMode { exact, approx };

struct BetaEstimate {
  double value = 0;
  AffinePlane plane;
  bool is_exact = false;
};

/// H^k of the convex hull of the tuple (Gram determinant of edge vectors,
/// square root, divided by k!). Eigenvalues below a relative noise floor are
/// clipped to zero, so affinely dependent tuples yield exactly 0.
double simplex_measure(const PointTuple& T);

/// Max pairwise distance; requires >= 2 points.
double diameter(const PointTuple& T);

/// Minimum over vertices of the distance to the affine hull of the other
/// vertices; 0 for degenerate simplices.
double min_height(const PointTuple& T);

/// Circumradius of three points: |ab||ac||bc| / (4 H^2). Returns +inf for
/// collinear-but-distinct triples (cutoff 4*area < 1e-15 * side product);
/// throws input_error when two points coincide.
double menger_radius(const Vec& a, const Vec& b, const Vec& c);

/// 1 / menger_radius as a total function: 0 for collinear triples and for
/// triples with coincident points.
double menger_curvature(const Vec& a, const Vec& b, const Vec& c);

/// K(T) = H^{m+1}(conv T) / diam(T)^{m+2} for a tuple of m+2 points;
/// 0 when diam(T) = 0 or the simplex is degenerate.
double discrete_curvature(const PointTuple& T);

struct HeightFace {
  double height = 0;        // distance of the last vertex to the face plane
  double face_measure = 0;  // H^m of the face spanned by the first m+1 points
  AffinePlane face_plane;
};

/// Face/height split of an (m+2)-tuple: the plane spanned by the first m+1
/// points and the height of the last vertex over it. Throws input_error when
/// the face is degenerate.
HeightFace simplex_height_face(const PointTuple& T);

/// Membership in the spindle D(P,Q,angle): intersection of the two half
/// cones with vertices P, Q, common axis PQ and opening angle `angle`.
/// Strict inequality; the vertices themselves are excluded.
bool spindle_contains(const Vec& P, const Vec& Q, double angle, const Vec& x);

/// Grassmannian distance ||pi_U - pi_V|| (largest singular value of the
/// difference of the orthogonal projectors).
double projection_distance(const AffinePlane& U, const AffinePlane& V);

/// Jones beta-number of the finite set E in B(x,r) relative to affine
/// m-planes through x. Exact mode (m=1, n=2 only): certified angle sweep at
/// resolution pi/2^20 plus golden-section refinement. Approx mode: upper
/// bound from the best of {total-least-squares plane, minimax local descent,
/// caller-provided candidate planes}.
BetaEstimate beta_number(const std::vector<Vec>& E, const Vec& x, double r,
                         int m, BetaMode mode,
                         const std::vector<AffinePlane>& extra_candidates = {});

}  // namespace mcurv::geom
