#pragma once

#include <vector>

#include "friable/numerics.hpp"
#include "friable/saddle.hpp"

namespace friable {

// rho(u) with u rho'(u) + rho(u - 1) = 0 and rho = 1 on [0, 1], tabulated on
// [0, u_max] with step 2^-log2_inv_step.
class RhoTable {
 public:
  explicit RhoTable(double u_max = 40.0, int log2_inv_step = 10);

  double u_max() const noexcept { return u_max_; }
  double step() const noexcept { return h_; }
  double operator()(double u) const;

 private:
  // Degree-7 interpolation using nodes inside the unit interval holding x.
  double interpolate(double x) const;

  double u_max_;
  double h_;
  int per_unit_;
  std::vector<double> rho_;  // rho(k h)
};

double dickman_rho(double u, const RhoTable& table);

// x / (log x)^u
LogScaled kp_lower(const SmoothParams& params);
// x^alpha zeta(alpha, y) with the upper zeta endpoint
LogScaled rankin_upper(const SmoothParams& params, const SaddleData& saddle);
// 1.39 y^{1-sigma} x^sigma zeta(sigma, y) / log x, minimized over sigma in
// [alpha, 1]; alpha itself must lie in [1/log y, 1]
LogScaled gs_upper(const SmoothParams& params, const SaddleData& saddle, const PrimeTable& table);
// x rho(u)
LogScaled dd_term(const SmoothParams& params, const RhoTable& table);
// x^alpha zeta / (alpha sqrt(2 pi sigma_2)) at interval midpoints; an estimate
LogScaled ht_term(const SmoothParams& params, const SaddleData& saddle);

}  // namespace friable
