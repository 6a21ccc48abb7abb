#include "friable/contour.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "friable/errors.hpp"

namespace friable {

namespace {

constexpr double kScanStart = 1e-6;
constexpr double kScanRatio = 1.01;
constexpr double kRootTol = 1e-10;
// Rigorous J0 cells are at most this fraction of T0 wide.
constexpr double kJ0CellFraction = 5e-5;

double least_root(const std::function<double(double)>& g, double t_max, const char* name) {
  double a = kScanStart;
  double ga = g(a);
  if (ga == 0.0) return a;
  while (a < t_max) {
    const double b = std::min(a * kScanRatio, t_max);
    const double gb = g(b);
    if ((ga > 0) != (gb > 0) || gb == 0.0) {
      double lo = a, hi = b;
      while (hi - lo > kRootTol) {
        const double m = 0.5 * (lo + hi);
        const double gm = g(m);
        if ((gm > 0) == (ga > 0) && gm != 0.0)
          lo = m;
        else
          hi = m;
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    ga = gb;
  }
  throw SolverError(std::string("breakpoint ") + name + " not bracketed within (0, " + std::to_string(t_max) + "]");
}

// Extremes of cos over the closed interval [lo, hi].
void cos_range(double lo, double hi, double& cmin, double& cmax) {
  const double two_pi = 2 * std::numbers::pi;
  const double cl = std::cos(lo), ch = std::cos(hi);
  cmax = std::max(cl, ch);
  cmin = std::min(cl, ch);
  if (std::ceil(lo / two_pi) <= std::floor(hi / two_pi)) cmax = 1.0;
  if (std::ceil((lo - std::numbers::pi) / two_pi) <= std::floor((hi - std::numbers::pi) / two_pi)) cmin = -1.0;
}

}  // namespace

TaylorEnv TaylorEnv::from_saddle(const SaddleData& s) {
  TaylorEnv e;
  e.alpha = s.alpha;
  e.sigma1_star = s.sigma1_star;
  e.sigma2_lo = s.sigma[2].lo;
  e.sigma2_hi = s.sigma[2].hi;
  e.sigma3 = s.sigma[3].mid();
  e.sigma3_radius = s.sigma[3].radius();
  e.sigma4_lo = s.sigma[4].lo;
  e.sigma4_hi = s.sigma[4].hi;
  e.sigma5 = s.sigma5_upper;
  return e;
}

double TaylorEnv::B5(double t) const {
  const double t2 = t * t;
  return sigma5 * t2 * t2 * t / 120.0;
}

double TaylorEnv::v0(double t) const { return sigma1_star * t + B5(t) + sigma3_radius * t * t * t / 6.0; }

double f_osc(double t, double v, const TaylorEnv& env) {
  const double arg = env.B3(t) + v;
  return env.alpha * std::cos(arg) + t * std::sin(arg);
}

double u_fn(double t, const TaylorEnv& env) { return std::atan(t / env.alpha) - env.B3(t); }

Breakpoints breakpoints(const TaylorEnv& env, double t_max) {
  if (!(t_max > kScanStart)) throw ArgumentError("breakpoint scan limit too small");
  const double pi = std::numbers::pi;
  Breakpoints bp;
  bp.T3 = least_root([&](double t) { return u_fn(t, env) - env.v0(t); }, t_max, "T3");
  bp.T2 = least_root([&](double t) { return u_fn(t, env) + env.v0(t); }, t_max, "T2");
  bp.T1 = least_root([&](double t) { return u_fn(t, env) + pi - env.v0(t); }, t_max, "T1");
  bp.T0 = least_root([&](double t) { return u_fn(t, env) + pi + env.v0(t); }, t_max, "T0");
  bp.Zminus = least_root([&](double t) { return f_osc(t, env.v0(t), env); }, t_max, "Z-");
  bp.Zplus = least_root([&](double t) { return f_osc(t, -env.v0(t), env); }, t_max, "Z+");
  return bp;
}

Breakpoints breakpoints_or_cutoff(const TaylorEnv& env, double t_max) {
  try {
    return breakpoints(env, t_max);
  } catch (const SolverError&) {
  }
  const double pi = std::numbers::pi;
  Breakpoints bp;
  bp.phase_cutoff = true;
  bp.T0 = least_root([&](double t) { return env.v0(t) - pi; }, t_max, "T0 (phase cutoff)");
  auto capped = [&](const std::function<double(double)>& g) {
    try {
      return std::min(least_root(g, bp.T0, ""), bp.T0);
    } catch (const SolverError&) {
      return bp.T0;
    }
  };
  bp.T3 = capped([&](double t) { return u_fn(t, env) - env.v0(t); });
  bp.T2 = capped([&](double t) { return u_fn(t, env) + env.v0(t); });
  bp.T1 = capped([&](double t) { return u_fn(t, env) + pi - env.v0(t); });
  bp.Zminus = capped([&](double t) { return f_osc(t, env.v0(t), env); });
  bp.Zplus = capped([&](double t) { return f_osc(t, -env.v0(t), env); });
  return bp;
}

Envelope I0_envelopes(double t, const TaylorEnv& env, const Breakpoints& bp) {
  if (!(t >= 0.0) || t > bp.T0 * (1 + 1e-12)) throw ArgumentError("I0 envelope evaluated outside [0, T0]");
  const double rho = std::hypot(env.alpha, t);
  const double u = u_fn(t, env);
  const double v0 = env.v0(t);
  // f(t, v) = rho cos(v - u) with v - u ranging over [-v0 - u, v0 - u].
  double cmin, cmax;
  cos_range(-v0 - u, v0 - u, cmin, cmax);
  const double fmax = rho * cmax, fmin = rho * cmin;

  const double t2 = t * t, t4 = t2 * t2;
  const double b5 = env.B5(t);
  const double e_hi = std::exp(-env.sigma2_lo * t2 / 2 + env.sigma4_hi * t4 / 24 + b5);
  const double e_lo = std::exp(-env.sigma2_hi * t2 / 2 + env.sigma4_lo * t4 / 24 - b5);
  const double denom = env.alpha * env.alpha + t2;
  Envelope out;
  out.upper = (fmax > 0 ? fmax * e_hi : fmax * e_lo) / denom;
  out.lower = (fmin > 0 ? fmin * e_lo : fmin * e_hi) / denom;
  return out;
}

J0Bounds J0_bounds(const TaylorEnv& env, const Breakpoints& bp, const QuadratureSpec& spec) {
  std::vector<double> cuts{0.0, bp.T3, bp.T2, bp.Zminus, bp.Zplus, bp.T1, bp.T0};
  std::sort(cuts.begin(), cuts.end());
  QuadratureSpec s = spec;
  if (s.mode == QuadMode::rigorous) s.mesh = std::min(s.mesh, bp.T0 * kJ0CellFraction);
  auto upper = [&](double t) { return I0_envelopes(std::min(t, bp.T0), env, bp).upper; };
  auto lower = [&](double t) { return I0_envelopes(std::min(t, bp.T0), env, bp).lower; };
  // Curvature allowance: half the second difference across the cell.
  auto slack_for = [](const Integrand& g) {
    return [g](double a, double b) { return 0.5 * std::abs(g(a) - 2 * g(0.5 * (a + b)) + g(b)); };
  };
  const CellSlack su = s.mode == QuadMode::rigorous ? CellSlack(slack_for(upper)) : CellSlack{};
  const CellSlack sl = s.mode == QuadMode::rigorous ? CellSlack(slack_for(lower)) : CellSlack{};
  CompensatedSum plus, minus;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    plus.add(integrate_upper(upper, cuts[i], cuts[i + 1], s, su));
    minus.add(integrate_lower(lower, cuts[i], cuts[i + 1], s, sl));
  }
  return {step_down(minus.value()), step_up(plus.value())};
}

}  // namespace friable
