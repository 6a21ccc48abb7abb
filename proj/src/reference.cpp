#include "friable/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "friable/errors.hpp"

namespace friable {

namespace {
constexpr int kStencil = 8;
}

RhoTable::RhoTable(double u_max, int log2_inv_step) : u_max_(u_max) {
  if (!(u_max >= 2.0) || u_max > 1000.0) throw ArgumentError("rho table range must be in [2, 1000]");
  if (log2_inv_step < 4 || log2_inv_step > 16) throw ArgumentError("rho step exponent must be in 4..16");
  per_unit_ = 1 << log2_inv_step;
  h_ = 1.0 / per_unit_;
  const auto n = static_cast<std::size_t>(std::ceil(u_max * per_unit_));
  rho_.assign(n + 1, 1.0);
  // u rho(u) = integral of rho over [u - 1, u]. Every term is positive, so
  // relative accuracy survives the steep decay that ruins stepping rho'
  // directly. Trapezoid sums get the Euler-Maclaurin endpoint correction
  // with rho'(t) = -rho(t - 1) / t, known at every node; the window is split
  // at t = 1 where rho' jumps. The new endpoint enters with weight h/2.
  const std::size_t P = static_cast<std::size_t>(per_unit_);
  auto drho = [&](std::size_t i) { return i <= P ? (i == P ? -1.0 : 0.0) : -rho_[i - P] / (static_cast<double>(i) * h_); };
  const double c = h_ * h_ / 12.0;
  for (std::size_t k = P + 1; k <= n; ++k) {
    const double u = static_cast<double>(k) * h_;
    const std::size_t lo = k - P;
    double known;
    if (lo < P) {
      // rho = 1 on [u - 1, 1], then the corrected trapezoid on [1, u].
      known = static_cast<double>(P - lo) * h_ + h_ / 2;
      for (std::size_t i = P + 1; i < k; ++i) known += h_ * rho_[i];
      known -= c * (-rho_[k - P] / u - drho(P));
    } else {
      known = h_ / 2 * rho_[lo];
      for (std::size_t i = lo + 1; i < k; ++i) known += h_ * rho_[i];
      known -= c * (-rho_[k - P] / u - drho(lo));
    }
    rho_[k] = known / (u - h_ / 2);
  }
  u_max_ = static_cast<double>(n) * h_;
}

double RhoTable::interpolate(double x) const {
  if (x <= 1.0) return 1.0;
  const double pos = x * per_unit_;
  const auto cell = static_cast<long>(std::floor(x));
  const long unit_lo = cell * per_unit_;
  const long unit_hi = std::min<long>(unit_lo + per_unit_, static_cast<long>(rho_.size()) - 1);
  long i0 = static_cast<long>(std::floor(pos)) - kStencil / 2 + 1;
  i0 = std::clamp(i0, unit_lo, unit_hi - (kStencil - 1));
  double sum = 0.0;
  for (int i = 0; i < kStencil; ++i) {
    double w = 1.0;
    for (int j = 0; j < kStencil; ++j)
      if (j != i) w *= (pos - static_cast<double>(i0 + j)) / static_cast<double>(i - j);
    sum += w * rho_[static_cast<std::size_t>(i0 + i)];
  }
  return sum;
}

double RhoTable::operator()(double u) const {
  if (!(u >= 0.0)) throw ArgumentError("rho needs u >= 0");
  if (u > u_max_) throw ArgumentError("u exceeds the rho table range");
  if (u <= 1.0) return 1.0;
  const double pos = u * per_unit_;
  if (pos == std::floor(pos)) return rho_[static_cast<std::size_t>(pos)];
  return interpolate(u);
}

double dickman_rho(double u, const RhoTable& table) { return table(u); }

LogScaled kp_lower(const SmoothParams& params) {
  params.validate();
  if (!(params.log_x >= std::log(4.0))) throw ArgumentError("KP bound needs x >= 4");
  return LogScaled::from_log10(params.log_x / std::numbers::ln10 - params.u() * std::log10(params.log_x));
}

LogScaled rankin_upper(const SmoothParams& params, const SaddleData& saddle) {
  return LogScaled::from_ln(saddle.alpha * params.log_x + saddle.zeta_log.hi);
}

LogScaled gs_upper(const SmoothParams& params, const SaddleData& saddle, const PrimeTable& table) {
  const double ly = params.log_y();
  if (saddle.alpha < 1.0 / ly || saddle.alpha > 1.0) throw ValidityError("GS bound needs 1/log y <= alpha <= 1");
  // The bound holds for every sigma in [1/log y, 1]. Its log is convex in
  // sigma with derivative log(x/y) - sigma_1(sigma), so Newton steps from
  // alpha move toward the minimizer; every iterate is a valid bound.
  auto log_bound = [&](double s, double log_zeta_hi) {
    return std::log(1.39) + (1 - s) * ly + s * params.log_x + log_zeta_hi - std::log(params.log_x);
  };
  const double target = params.log_x - ly;
  double s = saddle.alpha;
  double best = log_bound(s, saddle.zeta_log.hi);
  for (int iter = 0; iter < 8; ++iter) {
    const double w0 = std::min(saddle.w0, static_cast<double>(table.limit));
    const auto sig = sigma_all_bounds(s, params.y, w0, table);
    if (s != saddle.alpha) best = std::min(best, log_bound(s, sig[0].hi));
    const double next = std::min(1.0, s + (sig[1].mid() - target) / sig[2].mid());
    if (!(next > s) || next - s < 1e-10) break;
    s = next;
  }
  return LogScaled::from_ln(best);
}

LogScaled dd_term(const SmoothParams& params, const RhoTable& table) {
  const double u = params.u();
  const double rho = u <= 1.0 ? 1.0 : table(u);
  return LogScaled::from_log10(params.log_x / std::numbers::ln10 + std::log10(rho));
}

LogScaled ht_term(const SmoothParams& params, const SaddleData& saddle) {
  const double a = saddle.alpha;
  return LogScaled::from_ln(a * params.log_x + saddle.zeta_log.mid() - std::log(a) -
                            0.5 * std::log(2 * std::numbers::pi * saddle.sigma[2].mid()));
}

}  // namespace friable
