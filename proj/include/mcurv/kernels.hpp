#pragma once

#include <cstddef>

#include "mcurv/saw.hpp"

namespace mcurv::kern {

enum class Isa { scalar, avx2 };

/// Best ISA supported by the running CPU.
Isa best_isa();

/// Currently selected ISA (defaults to best_isa(); override with set_isa).
Isa active_isa();

/// Forces a variant; throws input_error if the CPU cannot run it.
void set_isa(Isa isa);

const char* isa_name(Isa isa);

/// sum_i w[i] * c(a, b, z_i)^p over a contiguous SoA batch of third points,
/// where c is the Menger curvature (0 for degenerate triples). dim is 2 or 3;
/// z holds dim coordinate arrays of length n.
double menger_pow_sum(int dim, const double* const* z, const double* w,
                      size_t n, const double* a, const double* b, double p);

/// Batch evaluation of the truncated saw f (and F when F_out != nullptr).
void saw_eval_batch(const double* x, size_t n, const saw::SawTables& tab,
                    double* f_out, double* F_out);

// Per-variant entry points (used by the equivalence tests).
namespace detail {
double menger_pow_sum_scalar(int dim, const double* const* z, const double* w,
                             size_t n, const double* a, const double* b, double p);
double menger_pow_sum_avx2(int dim, const double* const* z, const double* w,
                           size_t n, const double* a, const double* b, double p);
void saw_eval_batch_scalar(const double* x, size_t n, const saw::SawTables& tab,
                           double* f_out, double* F_out);
void saw_eval_batch_avx2(const double* x, size_t n, const saw::SawTables& tab,
                         double* f_out, double* F_out);
}  // namespace detail

}  // namespace mcurv::kern
