#include <doctest.h>

#include <cmath>

#include "mcurv/saw.hpp"

using namespace mcurv;
using namespace mcurv::saw;

namespace {

// Exact F at rational grid points x = j / N^K by integer floor/frac per
// level (independent of the double-double evaluation path).
double grid_F_oracle(long long j, int N, int K, double alpha) {
  double F = 0;
  long long nk = 1;  // N^k
  long long nK = 1;
  for (int k = 0; k < K; ++k) nK *= N;
  for (int k = 0; k <= K; ++k) {
    // N^k x = j * N^k / N^K
    long long num = j * nk;
    long long whole = num / nK;
    double frac = static_cast<double>(num % nK) / static_cast<double>(nK);
    double g0 = frac <= 0.5 ? frac * frac : (2.0 - frac) * frac - 0.5;
    F += std::pow(N, -k * (1.0 + alpha)) * (0.5 * static_cast<double>(whole) + g0);
    nk *= N;
  }
  return F;
}

}  // namespace

TEST_SUITE("saw") {

TEST_CASE("saw_base") {
  CHECK(saw_base(0.25) == doctest::Approx(0.5));
  CHECK(saw_base(0.75) == doctest::Approx(0.5));
  CHECK(saw_base(7.0) == 0.0);
  CHECK(saw_base(0.5) == 1.0);
  CHECK(saw_base(-0.25) == doctest::Approx(0.5));  // periodic extension
  CHECK(saw_base(3.1) == doctest::Approx(saw_base(0.1)).epsilon(1e-12));
}

TEST_CASE("saw params") {
  CHECK_THROWS_AS(SawParams::with_tolerance(1, 0.5), input_error);
  CHECK_THROWS_AS(SawParams::with_tolerance(10, 1.5), input_error);
  CHECK_THROWS_AS(SawParams::with_tolerance(10, 0.0), input_error);
  CHECK_THROWS_AS(SawParams::with_tolerance(10, 0.5, 0.0), input_error);

  auto p = SawParams::with_tolerance(100, 0.5, 1e-12);
  CHECK(p.tail_bound() <= 1e-12);
  CHECK(p.level() >= 1);
  // minimality: one level less violates the tolerance
  auto q = SawParams::with_level(100, 0.5, p.level() - 1);
  CHECK(q.tail_bound() > 1e-12);

  auto r = SawParams::with_level(10, 0.5, 3);
  CHECK(r.tolerance == doctest::Approx(std::pow(10.0, -2.0) / (1 - std::pow(10.0, -0.5))));
}

TEST_CASE("saw_sum values and bounds") {
  auto p0 = SawParams::with_level(10, 0.5, 0);
  auto v = saw_sum(0.25, p0);
  CHECK(v.value == doctest::Approx(0.5));
  CHECK(v.error_bound ==
        doctest::Approx(std::pow(10.0, -0.5) / (1 - std::pow(10.0, -0.5))).epsilon(1e-12));
  CHECK(v.error_bound == doctest::Approx(0.4623).epsilon(1e-3));

  auto p = SawParams::with_tolerance(10, 0.5, 1e-12);
  CHECK(saw_sum(0.0, p).value == 0.0);

  double cap = 1.0 / (1 - std::pow(10.0, -0.5));
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    double x = rng.uniform();
    CHECK(saw_sum(x, p).value <= cap);
    CHECK(saw_sum(x, p).value >= 0.0);
  }
}

TEST_CASE("saw_antiderivative closed forms") {
  auto p = SawParams::with_tolerance(10, 0.5, 1e-13);
  CHECK(saw_antiderivative(0.0, p).value == 0.0);

  // F(1) = 1/(2 (1 - N^-alpha)) for the untruncated series; the truncated
  // value differs by at most the tail bound
  double closed = 1.0 / (2.0 * (1.0 - std::pow(10.0, -0.5)));
  auto F1 = saw_antiderivative(1.0, p);
  CHECK(std::fabs(F1.value - closed) <= F1.error_bound + 1e-15);
  CHECK(F1.value == doctest::Approx(0.7312376477869).epsilon(1e-10));

  // monotone on [0,1]
  auto tab = SawTables::build(p);
  double prev = -1;
  for (int i = 0; i <= 500; ++i) {
    double F = saw_antiderivative(i / 500.0, tab).value;
    CHECK(F >= prev - 1e-15);
    prev = F;
  }
}

TEST_CASE("antiderivative is exact at truncation grid points") {
  const int N = 10, K = 3;
  auto p = SawParams::with_level(N, 0.5, K);
  auto tab = SawTables::build(p);
  long long nK = 1;
  for (int k = 0; k < K; ++k) nK *= N;
  for (long long j : {0LL, 1LL, 7LL, 123LL, 500LL, 999LL, 1000LL}) {
    double x = static_cast<double>(j) / static_cast<double>(nK);
    CHECK(saw_antiderivative(x, tab).value ==
          doctest::Approx(grid_F_oracle(j, N, K, 0.5)).epsilon(1e-13));
  }
}

TEST_CASE("antiderivative equals trapezoid integration of the truncated saw") {
  // the truncated saw is piecewise linear with kinks on the 1/(2 N^K) grid,
  // so the composite trapezoid rule on that grid integrates it exactly
  const int N = 10, K = 2;
  auto tab = SawTables::build(SawParams::with_level(N, 0.5, K));
  long long cells = 2;
  for (int k = 0; k < K; ++k) cells *= N;
  double h = 1.0 / static_cast<double>(cells);
  double acc = 0;
  double prev_f = saw_sum(0.0, tab).value;
  for (long long i = 1; i <= cells; ++i) {
    double f = saw_sum(i * h, tab).value;
    acc += 0.5 * h * (prev_f + f);
    prev_f = f;
    if (i % 40 == 0) {
      CHECK(saw_antiderivative(i * h, tab).value == doctest::Approx(acc).epsilon(1e-12));
    }
  }
}

TEST_CASE("secant_slope agrees with direct differencing at moderate separation") {
  auto tab = SawTables::build(SawParams::with_tolerance(10, 0.5, 1e-12));
  Rng rng(17);
  for (int it = 0; it < 300; ++it) {
    double x = rng.uniform(0, 0.7);
    double y = x + rng.uniform(0.05, 0.3);
    double direct = (saw_antiderivative(y, tab).value - saw_antiderivative(x, tab).value) / (y - x);
    CHECK(secant_slope(x, y, tab) == doctest::Approx(direct).epsilon(1e-11));
    CHECK(secant_slope(y, x, tab) == doctest::Approx(secant_slope(x, y, tab)));
  }
  CHECK_THROWS_AS(secant_slope(0.3, 0.3, tab), input_error);
}

TEST_CASE("derivative consistency: secant slopes approach the saw") {
  const int K = 6;
  auto p = SawParams::with_level(10, 0.5, K);
  auto tab = SawTables::build(p);
  double lip = 0;
  for (int k = 0; k <= K; ++k) lip += 2.0 * std::pow(10.0, k * 0.5);
  const double h = 1e-10;
  Rng rng(23);
  for (int it = 0; it < 1000; ++it) {
    double x = rng.uniform(0, 1.0 - h);
    double slope = secant_slope(x, x + h, tab);
    double f = saw_sum(x, tab).value;
    CHECK(std::fabs(slope - f) <= lip * h + 1e-12);
  }
}

TEST_CASE("hoelder constant") {
  auto p = SawParams::with_level(2, 0.5, 4);
  double expected = (4.0 + 2.0 * std::sqrt(2.0)) / (std::sqrt(2.0) - 1.0);
  CHECK(hoelder_constant(p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(hoelder_constant(p) == doctest::Approx(16.4853).epsilon(1e-4));

  // grows like 2 N^alpha for large N, and always exceeds 2
  double prev = 0;
  for (int N : {10, 100, 1000, 10000}) {
    double c = hoelder_constant(SawParams::with_level(N, 0.5, 1));
    CHECK(c > 2.0);
    CHECK(c > prev);
    prev = c;
  }
  double big = hoelder_constant(SawParams::with_level(1000000, 0.5, 1));
  CHECK(big == doctest::Approx(2.0 * std::pow(1e6, 0.5)).epsilon(0.01));
}

TEST_CASE("hoelder bound on the truncated saw") {
  auto p = SawParams::with_tolerance(100, 0.5, 1e-12);
  auto tab = SawTables::build(p);
  double C = hoelder_constant(p);
  Rng rng(31);
  int violations = 0;
  for (int it = 0; it < 20000; ++it) {
    double x = rng.uniform(), y = rng.uniform();
    if (x == y) continue;
    double lhs = std::fabs(saw_sum(x, tab).value - saw_sum(y, tab).value);
    double rhs = C * std::pow(std::fabs(x - y), 0.5) + 2 * tab.tail;
    if (lhs > rhs) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("levels below the truncation are affine on single tent legs") {
  // second differences of the (K = k-1)-truncated saw vanish inside a leg
  const int N = 10, k = 3;
  auto tab = SawTables::build(SawParams::with_level(N, 0.5, k - 1));
  double leg = 0.5 * std::pow(10.0, -(k - 1));  // tent leg width at level k-1
  Rng rng(37);
  for (int it = 0; it < 200; ++it) {
    long long cell = static_cast<long long>(rng.below(2 * 100));  // legs in [0,1)
    double c0 = cell * leg;
    double x = c0 + rng.uniform(0.3, 0.7) * leg;
    double h = 0.1 * leg;
    double second = saw_sum(x - h, tab).value + saw_sum(x + h, tab).value -
                    2 * saw_sum(x, tab).value;
    CHECK(std::fabs(second) <= 1e-12);
  }
}

TEST_CASE("graph_map") {
  auto p = SawParams::with_tolerance(10, 0.5, 1e-12);
  auto g = graph_map({0.0, 3.0}, p);
  CHECK(g.point.size() == 3);
  CHECK(g.point[0] == 0.0);
  CHECK(g.point[1] == 3.0);
  CHECK(g.point[2] == 0.0);
  auto g1 = graph_map({0.5}, p);
  CHECK(g1.point[1] == doctest::Approx(saw_antiderivative(0.5, p).value));
  CHECK(g1.error_bound > 0);
  CHECK_THROWS_AS(graph_map({}, p), input_error);
  CHECK_THROWS_AS(graph_map({inf}, p), input_error);
}

TEST_CASE("critical exponents") {
  auto c1 = critical_alpha(4.0, 1);
  CHECK(c1.alpha_curve == doctest::Approx(0.5));
  auto c2 = critical_alpha(12.0, 2);
  CHECK(c2.alpha_manifold == doctest::Approx(0.5));
  auto c3 = critical_alpha(8.0, 1);
  CHECK(c3.alpha_regularity == doctest::Approx(0.625));
  CHECK_THROWS_AS(critical_alpha(2.0, 1), input_error);
  CHECK_THROWS_AS(critical_alpha(6.0, 2), input_error);

  // ordering: alpha_regularity < alpha_manifold < 1 whenever p > m(m+2)
  for (double p : {3.5, 5.0, 9.0}) {
    auto c = critical_alpha(p, 1);
    CHECK(c.alpha_regularity < c.alpha_manifold);
    CHECK(c.alpha_manifold < 1.0);
  }
}

TEST_CASE("domain bound scan") {
  auto p = SawParams::with_tolerance(10, 0.5, 1e-12);
  double A = domain_bound_scan(p, 0.1);
  CHECK(A > 0.0);
  CHECK(A < 0.1);
  auto tab = SawTables::build(p);
  // everything strictly below A stays under the slope bound
  for (int i = 0; i < 500; ++i) {
    double x = A * i / 500.0;
    CHECK(saw_sum(x, tab).value <= 0.1 + 1e-9);
  }
  CHECK_THROWS_AS(domain_bound_scan(p, -1.0), input_error);
}

}  // TEST_SUITE
