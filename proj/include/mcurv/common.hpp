#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcurv {

using Vec = std::vector<double>;

/// Bad user-supplied data (dimension mismatch, out-of-range parameter, ...).
/// The CLI maps this to exit code 1.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A stated precondition of an operation does not hold (e.g. the secant-gap
/// validation failed). The CLI maps this to exit code 2.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

// ---- small vector helpers ------------------------------------------------

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline void axpy(Vec& y, double a, const Vec& x) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Angle between two nonzero vectors, in [0, pi].
inline double angle_between(const Vec& a, const Vec& b) {
  double c = dot(a, b) / (norm(a) * norm(b));
  if (c > 1) c = 1;
  if (c < -1) c = -1;
  return std::acos(c);
}

/// Volume of the unit m-ball.
inline double unit_ball_volume(int m) {
  return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

// ---- deterministic RNG ----------------------------------------------------
// std::uniform_real_distribution / normal_distribution are implementation
// defined; outputs must be reproducible across toolchains, so draws are
// built from raw engine bits.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
  return splitmix64(a ^ (0x9E3779B97F4A7C15ULL + b));
}

/// xoshiro256** with splitmix-seeded state; uniform doubles from the top 53 bits.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    for (auto& w : s_) {
      seed = splitmix64(seed);
      w = seed;
    }
  }

  uint64_t next_u64() {
    auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Integer uniform in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller.
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 == 0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  /// Uniform point in the m-ball of radius r around c, appended semantics:
  /// returns a fresh vector of dimension m.
  Vec in_ball(const Vec& c, double r) {
    const size_t m = c.size();
    Vec v(m);
    double n2 = 0;
    for (auto& x : v) {
      x = gauss();
      n2 += x * x;
    }
    double rad = r * std::pow(uniform(), 1.0 / static_cast<double>(m));
    double scale = n2 > 0 ? rad / std::sqrt(n2) : 0.0;
    for (size_t i = 0; i < m; ++i) v[i] = c[i] + v[i] * scale;
    return v;
  }

 private:
  uint64_t s_[4];
  double spare_ = 0;
  bool have_spare_ = false;
};

/// Pairwise (cascade) summation in fixed order: deterministic and accurate.
inline double pairwise_sum(const double* x, size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace mcurv
