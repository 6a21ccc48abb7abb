#pragma once

#include <string>

#include "friable/contour.hpp"
#include "friable/numerics.hpp"
#include "friable/reference.hpp"
#include "friable/saddle.hpp"
#include "friable/tails.hpp"

namespace friable {

struct RunParams {
  double T = 0.0;
  double d = 0.0;
  double L = 1e6;
  double w0 = 179424673.0;
  QuadratureSpec quad{.mesh = 0.1, .mode = QuadMode::fast};  // J0, J1, J2
  double z() const;
  void validate() const;
};

// (e^{2 T^{d-1}} - 1)^{-1}
double z_of(double T, double d);

struct TermBreakdown {
  double T_power = 0.0;       // T^{-d}
  double J2_term = 0.0;       // e^{alpha^2/2z^2} sqrt(2 pi e) J2 / z
  double error_sum = 0.0;     // J1 + T_power + J2_term
  double lower_paren = 0.0;   // J0^- - error_sum
  double upper_paren = 0.0;   // J0^+ + error_sum
};

struct PsiBounds {
  LogScaled psi_lo = LogScaled::from_value(1.0);
  LogScaled psi_hi = LogScaled::from_value(1.0);
  bool lower_degenerate = false;  // psi_lo fell back to the KP bound
  LogScaled main_scale = LogScaled::from_value(1.0);  // x^alpha zeta_hi / pi
  Breakpoints breakpoints{};
  J0Bounds J0{};
  TailIntegral J1{};
  TailIntegral J2{};
  double T = 0.0, d = 0.0, z = 0.0;
  TermBreakdown terms{};
};

PsiBounds psi_bounds(const SmoothParams& params, const RunParams& run, const SaddleData& saddle,
                     const Breakpoints& bp, const J0Bounds& j0, const TailIntegral& j1, const TailIntegral& j2);

// Full pipeline after the saddle point: breakpoints, J0, J1, J2, assembly.
PsiBounds compute_bounds(const SmoothParams& params, const RunParams& run, const SaddleData& saddle,
                         const PrimeTable& table);

// Heuristic (T, d) from cheap estimates; fixed choices for the two
// worked examples. L, w0 and quad are copied from `base`.
RunParams suggest_params(const SmoothParams& params, const SaddleData& saddle, const PrimeTable& table,
                         const RunParams& base = {});

}  // namespace friable
