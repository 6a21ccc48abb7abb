#pragma once

#include <array>
#include <cstdint>

#include "friable/numerics.hpp"
#include "friable/primes.hpp"

namespace friable {

// x is carried by its natural log only.
struct SmoothParams {
  double log_x = 0.0;
  double y = 0.0;

  static SmoothParams from_log10(double log10_x, double log10_y);
  double log_y() const;
  double u() const { return log_x / log_y(); }
  void validate() const;
};

struct SaddleData {
  double alpha = 0.0;
  double sigma1_star = 0.0;
  std::array<BoundInterval, 5> sigma{};  // sigma_0 .. sigma_4
  double sigma5_upper = 0.0;
  BoundInterval zeta_log{};               // log zeta(alpha, y) == sigma[0]
  double w0 = 0.0;                        // cutoff used for the exact sums
};

// |summand| of phi_j at real argument a; j = 0 gives -log(1 - p^{-a}).
double phi_summand(int j, double a, double p);

// Exact sums of all six summands over the first n primes of the table.
std::array<double, 6> sigma_exact_sums(double a, std::size_t n, const PrimeTable& table);

BoundInterval sigma1_bounds(double a, double y, double w0, const PrimeTable& table);
BoundInterval sigma_j_bounds(int j, double alpha, double y, double w0, const PrimeTable& table);
// All six at once, sharing one pass over the primes.
std::array<BoundInterval, 6> sigma_all_bounds(double alpha, double y, double w0, const PrimeTable& table);

struct AlphaSolution {
  double alpha = 0.0;
  double sigma1_star = 0.0;
  BoundInterval sigma1{};
};

// Coarse bracketing uses w0 capped at `coarse_w0`, then refines at w0.
AlphaSolution solve_alpha(const SmoothParams& params, double w0, const PrimeTable& table, double tol = 1e-12,
                          double coarse_w0 = 1e6);

// Runs solve_alpha and all sigma_j bounds. w0 is clamped to y.
SaddleData compute_saddle(const SmoothParams& params, double w0, const PrimeTable& table, double tol = 1e-12);

}  // namespace friable
