#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "mcurv/saw.hpp"
#include "mcurv/simd_ops.hpp"

namespace mcurv::kern {

inline bool pow_is_int(double p, int* n) {
  double r = std::nearbyint(p);
  if (r == p && std::fabs(r) <= 64) {
    *n = static_cast<int>(r);
    return true;
  }
  return false;
}

// x^n, n >= 0, by binary powering with a fixed multiplication tree.
template <class P>
typename P::V pow_int_pack(typename P::V x, int n) {
  typename P::V r = P::set1(1.0);
  typename P::V b = x;
  while (n > 0) {
    if (n & 1) r = P::mul(r, b);
    n >>= 1;
    if (n > 0) b = P::mul(b, b);
  }
  return r;
}

inline double pow_int(double x, int n) { return pow_int_pack<ScalarPack>(x, n); }

// ---- Menger curvature batch -------------------------------------------

// c(a, b, z) = 4*Area / (|ab||az||bz|), 0 when 4*Area <= 1e-15 * product
// (near-collinear cutoff) or when any two points coincide.
template <class P, int DIM>
struct MengerElem {
  using V = typename P::V;
  V a[DIM], b[DIM], u[DIM];
  V uu, eps;

  MengerElem(const double* av, const double* bv) {
    double s = 0;
    for (int d = 0; d < DIM; ++d) {
      a[d] = P::set1(av[d]);
      b[d] = P::set1(bv[d]);
      double ud = bv[d] - av[d];
      u[d] = P::set1(ud);
      s += ud * ud;
    }
    uu = P::set1(s);
    eps = P::set1(1e-15);
  }

  V curvature(const V z[DIM]) const {
    V v[DIM], t[DIM];
    for (int d = 0; d < DIM; ++d) {
      v[d] = P::sub(z[d], a[d]);
      t[d] = P::sub(z[d], b[d]);
    }
    V vv = P::mul(v[0], v[0]);
    V tt = P::mul(t[0], t[0]);
    for (int d = 1; d < DIM; ++d) {
      vv = P::add(vv, P::mul(v[d], v[d]));
      tt = P::add(tt, P::mul(t[d], t[d]));
    }
    V two_area;
    if constexpr (DIM == 2) {
      two_area = P::abs(P::sub(P::mul(u[0], v[1]), P::mul(u[1], v[0])));
    } else {
      V cx = P::sub(P::mul(u[1], v[2]), P::mul(u[2], v[1]));
      V cy = P::sub(P::mul(u[2], v[0]), P::mul(u[0], v[2]));
      V cz = P::sub(P::mul(u[0], v[1]), P::mul(u[1], v[0]));
      V c2 = P::add(P::add(P::mul(cx, cx), P::mul(cy, cy)), P::mul(cz, cz));
      two_area = P::sqrt(c2);
    }
    V prod = P::sqrt(P::mul(P::mul(uu, vv), tt));
    V four_area = P::add(two_area, two_area);
    typename P::M degen = P::le(four_area, P::mul(eps, prod));
    return P::select(degen, P::set1(0.0), P::div(four_area, prod));
  }
};

template <class P, int DIM>
double menger_pow_sum_impl(const double* const z[DIM], const double* w, size_t n,
                           const double* a, const double* b, double p) {
  MengerElem<P, DIM> elem(a, b);
  int pint = 0;
  const bool is_int = pow_is_int(p, &pint);

  std::array<double, 4> lanes{0, 0, 0, 0};
  constexpr int W = P::width;
  const size_t main = n - n % W;

  if constexpr (W > 1) {
    typename P::V acc = P::set1(0.0);
    for (size_t i = 0; i < main; i += W) {
      typename P::V z_i[DIM];
      for (int d = 0; d < DIM; ++d) z_i[d] = P::load(z[d] + i);
      typename P::V c = elem.curvature(z_i);
      typename P::V term;
      if (is_int) {
        term = pow_int_pack<P>(c, pint);
      } else {
        alignas(32) double buf[W];
        P::store(buf, c);
        for (int l = 0; l < W; ++l) buf[l] = std::pow(buf[l], p);
        term = P::load(buf);
      }
      acc = P::add(acc, P::mul(P::load(w + i), term));
    }
    alignas(32) double accbuf[W];
    P::store(accbuf, acc);
    for (int l = 0; l < W; ++l) lanes[l] = accbuf[l];
  }

  // Tail (and the whole range for the scalar pack): same element formula,
  // lane index i % 4 to mirror the vector accumulator layout.
  MengerElem<ScalarPack, DIM> selem(a, b);
  for (size_t i = (W > 1 ? main : 0); i < n; ++i) {
    double z_i[DIM];
    for (int d = 0; d < DIM; ++d) z_i[d] = z[d][i];
    double c = selem.curvature(z_i);
    double term = is_int ? pow_int(c, pint) : std::pow(c, p);
    lanes[i % 4] += w[i] * term;
  }

  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

// ---- saw batch ----------------------------------------------------------

// Double-double pieces over a pack; mirrors mcurv/dd.hpp.
template <class P>
struct DDPack {
  using V = typename P::V;
  V hi, lo;
};

template <class P>
DDPack<P> two_sum_pack(typename P::V a, typename P::V b) {
  auto s = P::add(a, b);
  auto bb = P::sub(s, a);
  auto err = P::add(P::sub(a, P::sub(s, bb)), P::sub(b, bb));
  return {s, err};
}

template <class P>
DDPack<P> quick_two_sum_pack(typename P::V a, typename P::V b) {
  auto s = P::add(a, b);
  return {s, P::sub(b, P::sub(s, a))};
}

template <class P>
DDPack<P> dd_add_v(const DDPack<P>& a, typename P::V b) {
  auto s = two_sum_pack<P>(a.hi, b);
  auto lo = P::add(s.lo, a.lo);
  return quick_two_sum_pack<P>(s.hi, lo);
}

template <class P>
DDPack<P> dd_mul_v(const DDPack<P>& a, typename P::V b) {
  auto p_hi = P::mul(a.hi, b);
  auto p_lo = P::fma(a.hi, b, P::neg(p_hi));
  auto lo = P::add(p_lo, P::mul(a.lo, b));
  return quick_two_sum_pack<P>(p_hi, lo);
}

template <class P>
DDPack<P> dd_frac_v(const DDPack<P>& v) {
  auto h = P::sub(v.hi, P::floor(v.hi));
  auto r = quick_two_sum_pack<P>(h, v.lo);
  auto val = P::add(r.hi, r.lo);
  r = dd_add_v<P>(r, P::neg(P::floor(val)));
  val = P::add(r.hi, r.lo);
  auto one = P::set1(1.0);
  auto zero = P::set1(0.0);
  r = dd_add_v<P>(r, P::select(P::ge(val, one), P::set1(-1.0), zero));
  val = P::add(r.hi, r.lo);
  r = dd_add_v<P>(r, P::select(P::lt(val, zero), one, zero));
  return r;
}

// Evaluates the truncated saw f (and optionally its antiderivative F) at a
// pack of arguments.
template <class P>
void saw_eval_batch_impl(const double* x, size_t n, const saw::SawTables& tab,
                         double* f_out, double* F_out) {
  constexpr int W = P::width;
  const int K = tab.K;
  const double Nd = static_cast<double>(tab.N);

  auto run = [&](auto pack_tag, size_t i) {
    using Q = decltype(pack_tag);
    using VV = typename Q::V;
    VV xi = Q::load(x + i);
    DDPack<Q> u = dd_frac_v<Q>(DDPack<Q>{xi, Q::set1(0.0)});
    VV f = Q::set1(0.0);
    VV F = Q::set1(0.0);
    VV half = Q::set1(0.5);
    VV two = Q::set1(2.0);
    for (int k = 0; k <= K; ++k) {
      VV ud = Q::add(u.hi, u.lo);
      VV ud2 = Q::add(ud, ud);
      VV tent = Q::select(Q::le(ud, half), ud2, Q::sub(two, ud2));
      f = Q::add(f, Q::mul(Q::set1(tab.scale_f[k]), tent));
      if (F_out) {
        VV g_up = Q::mul(ud, ud);
        VV g_dn = Q::sub(Q::mul(Q::sub(two, ud), ud), half);
        VV g0 = Q::select(Q::le(ud, half), g_up, g_dn);
        VV t1 = Q::mul(Q::set1(0.5 * tab.scale_f[k]), xi);
        VV t2 = Q::mul(Q::set1(tab.scale_F[k]), Q::sub(g0, Q::mul(half, ud)));
        F = Q::add(F, Q::add(t1, t2));
      }
      if (k < K) u = dd_frac_v<Q>(dd_mul_v<Q>(u, Q::set1(Nd)));
    }
    Q::store(f_out + i, f);
    if (F_out) Q::store(F_out + i, F);
  };

  size_t i = 0;
  if constexpr (W > 1) {
    for (; i + W <= n; i += W) run(P{}, i);
  }
  for (; i < n; ++i) run(ScalarPack{}, i);
}

}  // namespace mcurv::kern
