#pragma once

#include <numbers>
#include <vector>

#include "friable/numerics.hpp"
#include "friable/primes.hpp"

namespace friable {

struct TailConfig {
  double L = 1e6;                       // direct-sum cutoff
  int exact_head = 30;                  // primes using the log-form summand
  double block_base = std::numbers::e;  // ratio of the blocks in W_star
  double w0_floor = 1427.0;
  // Above this height J1/J2 use the mean value of exp(-W_direct).
  double t_split = 1000.0;

  void validate(const PrimeTable& table) const;
};

// Direct part of W(y, 1, t): primes p <= min(L, y), with precomputed
// log p and p^{-alpha}. Immutable after construction.
class WKernel {
 public:
  WKernel(double alpha, double y, const TailConfig& cfg, const PrimeTable& table);

  double alpha() const noexcept { return alpha_; }
  double cutoff() const noexcept { return cutoff_; }
  std::size_t prime_count() const noexcept { return head_lp_.size() + lp_.size(); }

  double at(double t) const;
  // out[k] = at(t0 + k h) for k < n, using phase rotation.
  void grid(double t0, double h, std::size_t n, double* out) const;
  // Lower bound for the direct sum over all t in [t0, t1].
  double cell_min(double t0, double t1) const;
  // log of the mean of exp(-W_direct) over independent uniform phases.
  double log_mean_exp() const;

 private:
  double alpha_;
  double cutoff_;
  std::vector<double> head_lp_, head_k_;  // log-form coefficients
  std::vector<double> lp_, pa_;           // remaining primes
};

double W_direct(double t, double alpha, const TailConfig& cfg, const PrimeTable& table);

// (4/(alpha - 1/2) + 2 alpha + 2 sqrt(alpha^2 + t^2))^2
double w_alpha_t(double alpha, double t);
// max(L, w_alpha_t)
double w_of_t(double alpha, double t, const TailConfig& cfg);

// Lower bound W_0(v, w, t) for W(v, w, t) = sum_{w<p<=v} (1 - cos(t log p)) / p^alpha.
// [w, v] must lie within [1427, 1e19] or within [1e19, inf).
double W0(double v, double w, double t, double alpha);

// Phase-free variant used on t-cells: the cosine terms take their worst
// value, |s| is taken at t_hi and sqrt(beta^2 + t^2) at t_lo.
double W0_cell(double v, double w, double t_lo, double t_hi, double alpha);

// Sum of W_0 over blocks [v/b^{j+1}, v/b^j] and the remainder block down to w,
// each floored at 0 since W is a sum of nonnegative terms. The whole-range
// W_0 is taken instead when it is larger, so W_0 <= W_star always.
double W_star(double v, double w, double t, double alpha, double base = std::numbers::e);

// Sum of W_star over the pieces of (w(t), y] split at 1e19, e^45, e^50, e^55.
// worst_case selects the phase-free W0_cell form on [t_lo, t_hi] = [t, t].
double W_tail(double t, double y, double alpha, const TailConfig& cfg, bool worst_case = false);
// Phase-free tail bound valid on all of [t0, t1], with w fixed at w(t1).
double W_tail_cell(double t0, double t1, double y, double alpha, const TailConfig& cfg);

double W_lower_total(double t, double y, double alpha, const TailConfig& cfg, const PrimeTable& table);

struct TailIntegral {
  double value = 0.0;         // reported upper bound (estimate + error, rounded up)
  double direct = 0.0;        // part from the resolved grid or rigorous cells
  double mean_value = 0.0;    // part from the mean-value region
  double error = 0.0;         // error allowance included in value
};

// Upper bound for integral_{T0}^{T} exp(-W(y,1,t)) / sqrt(alpha^2 + t^2) dt.
TailIntegral J1(double T0, double T, double y, double alpha, const TailConfig& cfg, const PrimeTable& table,
                const QuadratureSpec& spec);

// Upper bound for integral_0^inf exp(-t^2/2z^2 - W(y,1,t)) dt.
TailIntegral J2(double z, double y, double alpha, const TailConfig& cfg, const PrimeTable& table,
                const QuadratureSpec& spec);

// Gaussian tail beyond 2 z log z: z exp(-2 log^2 z) / (2 log z).
double J2_gaussian_tail(double z);

}  // namespace friable
