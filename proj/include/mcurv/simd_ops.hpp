#pragma once

#include <cmath>
#include <cstddef>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define MCURV_HAVE_AVX2_PACK 1
#endif

namespace mcurv::kern {

// Kernels are written once as templates over a "pack" of lanes and
// instantiated per ISA. Every op (add, mul, div, sqrt, fma, floor, abs,
// select) is correctly rounded and identical across packs, and elements map
// to accumulator lanes the same way, so scalar and AVX2 variants produce
// bit-identical results. Kernel translation units are built with
// -ffp-contract=off to keep the compiler from fusing anything on its own.

struct ScalarPack {
  static constexpr int width = 1;
  using V = double;
  using M = bool;

  static V set1(double x) { return x; }
  static V load(const double* p) { return *p; }
  static void store(double* p, V a) { *p = a; }
  static V add(V a, V b) { return a + b; }
  static V sub(V a, V b) { return a - b; }
  static V mul(V a, V b) { return a * b; }
  static V div(V a, V b) { return a / b; }
  static V sqrt(V a) { return std::sqrt(a); }
  static V abs(V a) { return std::fabs(a); }
  static V floor(V a) { return std::floor(a); }
  static V fma(V a, V b, V c) { return std::fma(a, b, c); }
  static V neg(V a) { return 0.0 - a; }  // matches the vector 0-x form on signed zeros
  static M le(V a, V b) { return a <= b; }
  static M lt(V a, V b) { return a < b; }
  static M ge(V a, V b) { return a >= b; }
  static V select(M m, V a, V b) { return m ? a : b; }
};

#ifdef MCURV_HAVE_AVX2_PACK
struct Avx2Pack {
  static constexpr int width = 4;
  using V = __m256d;
  using M = __m256d;

  static V set1(double x) { return _mm256_set1_pd(x); }
  static V load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, V a) { _mm256_storeu_pd(p, a); }
  static V add(V a, V b) { return _mm256_add_pd(a, b); }
  static V sub(V a, V b) { return _mm256_sub_pd(a, b); }
  static V mul(V a, V b) { return _mm256_mul_pd(a, b); }
  static V div(V a, V b) { return _mm256_div_pd(a, b); }
  static V sqrt(V a) { return _mm256_sqrt_pd(a); }
  static V abs(V a) {
    const V mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
    return _mm256_and_pd(a, mask);
  }
  static V floor(V a) { return _mm256_floor_pd(a); }
  static V fma(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
  static V neg(V a) { return _mm256_sub_pd(_mm256_setzero_pd(), a); }
  static M le(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
  static M lt(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
  static M ge(V a, V b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
  static V select(M m, V a, V b) { return _mm256_blendv_pd(b, a, m); }
};
#endif

}  // namespace mcurv::kern
