#pragma once

#include <cmath>
#include <string>

#include "friable/bounds.hpp"
#include "friable/contour.hpp"
#include "friable/primes.hpp"
#include "friable/saddle.hpp"

namespace friable::test {

inline constexpr double kFullW0 = 179424673.0;

inline std::string cache_dir() { return FRIABLE_TEST_CACHE_DIR; }

// All primes up to the ten-millionth prime, shared across test cases.
inline const PrimeTable& full_table() {
  static const PrimeTable table = sieve_cached(static_cast<std::uint64_t>(kFullW0), cache_dir());
  return table;
}

struct Worked {
  double log10_x, log10_y, T, d;
  SmoothParams params() const { return SmoothParams::from_log10(log10_x, log10_y); }
};

inline constexpr Worked kExample1{100.0, 15.0, 4e5, 0.57};
inline constexpr Worked kExample2{500.0, 35.0, 1e9, 0.58};

inline const SaddleData& example_saddle(int which) {
  static const SaddleData s1 = compute_saddle(kExample1.params(), kFullW0, full_table());
  static const SaddleData s2 = compute_saddle(kExample2.params(), kFullW0, full_table());
  return which == 1 ? s1 : s2;
}

// Reference saddle data for the two worked examples (point value and radius).
inline TaylorEnv reference_env(int which) {
  struct D {
    double a, s1, s2, s2r, s3, s3r, s4, s4r, s5;
  };
  const D d = which == 1 ? D{0.9111581, 4.3e-4, 5763.47, 0.03, 159066.8, 0.5, 4604079, 8, 1.3725e8}
                         : D{0.94932677, 5.6e-4, 71689.2, 0.02, 4779948.5, 0.5, 330260722, 21, 2.3353e10};
  TaylorEnv e;
  e.alpha = d.a;
  e.sigma1_star = d.s1;
  e.sigma2_lo = d.s2 - d.s2r;
  e.sigma2_hi = d.s2 + d.s2r;
  e.sigma3 = d.s3;
  e.sigma3_radius = d.s3r;
  e.sigma4_lo = d.s4 - d.s4r;
  e.sigma4_hi = d.s4 + d.s4r;
  e.sigma5 = d.s5;
  return e;
}

// |a - b| within half a unit in the n-th significant digit of b.
inline bool same_digits(double a, double b, int n) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(b))) - (n - 1));
  return std::abs(a - b) <= 0.5 * unit * (1 + 1e-9);
}

// Same test on values held by their base-10 logarithm.
inline bool same_digits_log10(double la, double lb, int n) {
  const double e = std::floor(lb);
  return same_digits(std::pow(10.0, la - e), std::pow(10.0, lb - e), n);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace friable::test
