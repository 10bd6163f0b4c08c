#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mcurv/kernels.hpp"

namespace mcurv::kern {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("MCURV_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa> g_isa{initial_isa()};

}  // namespace

Isa best_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2())
    throw input_error("this CPU does not support the avx2 kernel variant");
  g_isa.store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double menger_pow_sum(int dim, const double* const* z, const double* w,
                      size_t n, const double* a, const double* b, double p) {
  if (dim != 2 && dim != 3) throw input_error("menger_pow_sum: dim must be 2 or 3");
  if (active_isa() == Isa::avx2)
    return detail::menger_pow_sum_avx2(dim, z, w, n, a, b, p);
  return detail::menger_pow_sum_scalar(dim, z, w, n, a, b, p);
}

void saw_eval_batch(const double* x, size_t n, const saw::SawTables& tab,
                    double* f_out, double* F_out) {
  if (active_isa() == Isa::avx2)
    return detail::saw_eval_batch_avx2(x, n, tab, f_out, F_out);
  return detail::saw_eval_batch_scalar(x, n, tab, f_out, F_out);
}

}  // namespace mcurv::kern
