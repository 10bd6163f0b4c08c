#include "mcurv/kernels.hpp"
#include "mcurv/kernels_impl.hpp"

namespace mcurv::kern::detail {

#ifdef MCURV_HAVE_AVX2_PACK

double menger_pow_sum_avx2(int dim, const double* const* z, const double* w,
                           size_t n, const double* a, const double* b, double p) {
  if (dim == 2) {
    const double* zz[2] = {z[0], z[1]};
    return menger_pow_sum_impl<Avx2Pack, 2>(zz, w, n, a, b, p);
  }
  const double* zz[3] = {z[0], z[1], z[2]};
  return menger_pow_sum_impl<Avx2Pack, 3>(zz, w, n, a, b, p);
}

void saw_eval_batch_avx2(const double* x, size_t n, const saw::SawTables& tab,
                         double* f_out, double* F_out) {
  saw_eval_batch_impl<Avx2Pack>(x, n, tab, f_out, F_out);
}

#else

double menger_pow_sum_avx2(int dim, const double* const* z, const double* w,
                           size_t n, const double* a, const double* b, double p) {
  return menger_pow_sum_scalar(dim, z, w, n, a, b, p);
}

void saw_eval_batch_avx2(const double* x, size_t n, const saw::SawTables& tab,
                         double* f_out, double* F_out) {
  saw_eval_batch_scalar(x, n, tab, f_out, F_out);
}

#endif

}  // namespace mcurv::kern::detail
