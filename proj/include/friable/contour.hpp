#pragma once

#include "friable/numerics.hpp"
#include "friable/saddle.hpp"

namespace friable {

// Taylor data of log zeta(alpha + it, y) along the vertical line.
struct TaylorEnv {
  double alpha = 0.0;
  double sigma1_star = 0.0;
  double sigma2_lo = 0.0, sigma2_hi = 0.0;
  double sigma3 = 0.0;         // point value used inside B_3
  double sigma3_radius = 0.0;  // uncertainty of sigma3, folded into v0
  double sigma4_lo = 0.0, sigma4_hi = 0.0;
  double sigma5 = 0.0;         // upper bound

  static TaylorEnv from_saddle(const SaddleData& s);

  // B_j(t) = sigma_j t^j / j! with the point sigma_3 and upper sigma_5.
  double B3(double t) const { return sigma3 * t * t * t / 6.0; }
  double B5(double t) const;
  // Bound on |v| in f(t, v): sigma1* t + B_5(t), plus the sigma_3 spread.
  double v0(double t) const;
};

struct Breakpoints {
  double T3 = 0.0, T2 = 0.0, T1 = 0.0, T0 = 0.0;
  double Zminus = 0.0, Zplus = 0.0;
  bool phase_cutoff = false;  // T0 placed where v0 reaches pi
};

// alpha cos(B_3 + v) + t sin(B_3 + v)
double f_osc(double t, double v, const TaylorEnv& env);
// arctan(t / alpha) - B_3(t)
double u_fn(double t, const TaylorEnv& env);

Breakpoints breakpoints(const TaylorEnv& env, double t_max = 1.0);

// As breakpoints(), but when u + pi + v0 has no root below t_max the split
// T0 goes where v0 reaches pi and the other roots are capped at it. The
// envelopes hold for every t, so any split point is valid.
Breakpoints breakpoints_or_cutoff(const TaylorEnv& env, double t_max);

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

// Bounds on f(t, v) exp(-B_2 + B_4 + a_5) / (alpha^2 + t^2) over |v| <= v0, |a_5| <= B_5.
Envelope I0_envelopes(double t, const TaylorEnv& env, const Breakpoints& bp);

struct J0Bounds {
  double minus = 0.0;
  double plus = 0.0;
};

J0Bounds J0_bounds(const TaylorEnv& env, const Breakpoints& bp, const QuadratureSpec& spec);

}  // namespace friable
