#pragma once

#include <cmath>

namespace mcurv {

/// Unevaluated double-double value hi + lo with |lo| <= ulp(hi)/2.
/// Just enough arithmetic for the saw-function fractional-part recurrence,
/// where errors are amplified by a factor N per level and plain doubles
/// lose the signal after a handful of levels.
struct DD {
  double hi = 0;
  double lo = 0;

  DD() = default;
  explicit DD(double x) : hi(x), lo(0) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline DD dd_sub(const DD& a, const DD& b) { return dd_add(a, {-b.hi, -b.lo}); }

inline DD dd_add(const DD& a, double b) { return dd_add(a, DD(b)); }

inline DD dd_mul_double(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return quick_two_sum(p.hi, lo);
}

/// Reduces v into [0, 1) by subtracting the (exactly representable) integer
/// part of the hi component and fixing up the remainder. The fix-up steps run
/// unconditionally (with a 0.0 operand when nothing needs fixing) so the
/// sequence of roundings matches the branchless SIMD variant exactly.
inline DD dd_frac(const DD& v) {
  DD r = quick_two_sum(v.hi - std::floor(v.hi), v.lo);
  r = dd_add(r, 0.0 - std::floor(r.value()));
  r = dd_add(r, r.value() >= 1.0 ? -1.0 : 0.0);
  r = dd_add(r, r.value() < 0.0 ? 1.0 : 0.0);
  return r;
}

}  // namespace mcurv
