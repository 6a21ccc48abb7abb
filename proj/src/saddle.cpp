#include "friable/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "friable/errors.hpp"

namespace friable {

namespace {

constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;
constexpr std::size_t kChunk = 1 << 16;

struct Terms {
  double v[6];
};

inline Terms summands(double a, double lp) {
  const double q = std::exp(-a * lp);
  const double d = 1.0 / (1.0 - q);
  const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
  const double l2 = lp * lp, l3 = l2 * lp, l4 = l3 * lp, l5 = l4 * lp;
  const double d2 = d * d, d3 = d2 * d, d4 = d3 * d, d5 = d4 * d;
  return {{-std::log1p(-q), lp * q * d, l2 * q * d2, l3 * (q + q2) * d3, l4 * (q + 4 * q2 + q3) * d4,
           l5 * (q + 11 * q2 + 11 * q3 + q4) * d5}};
}

// Sum of the j = 1 summand only; the hot loop of the alpha search.
double sigma1_exact(double a, std::size_t n, const PrimeTable& table) {
  const std::size_t blocks = (n + kChunk - 1) / kChunk;
  std::vector<double> part(blocks);
  parallel_for(blocks, 0, [&](std::size_t b) {
    const std::size_t lo = b * kChunk, hi = std::min(n, lo + kChunk);
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) {
      const double q = std::exp(-a * table.logs[i]);
      s.add(table.logs[i] * q / (1.0 - q));
    }
    part[b] = s.value();
  });
  CompensatedSum total;
  for (double v : part) total.add(v);
  return total.value();
}

// Tail weight exponent k for the leading form log^j p / p^a = log p * (log p)^{j-1} p^{-a}.
int tail_k(int j) { return j == 0 ? -1 : j - 1; }

double leading_form(int j, double a, double p) { return std::pow(std::log(p), j) * std::pow(p, -a); }

struct Cutoff {
  std::size_t n;      // primes summed exactly
  double w0;          // cutoff actually used
  bool has_tail;
};

Cutoff resolve_cutoff(double y, double w0, const PrimeTable& table) {
  if (!(y >= 2)) throw ArgumentError("y must be at least 2");
  if (y <= w0) {
    if (y > static_cast<double>(table.limit)) throw ArgumentError("y exceeds the sieve limit");
    return {table.count_upto(y), y, false};
  }
  if (w0 < kThetaFloor) throw ArgumentError("w0 must be at least 1427 when y > w0");
  if (w0 > static_cast<double>(table.limit)) throw ArgumentError("w0 exceeds the sieve limit");
  return {table.count_upto(w0), w0, true};
}

BoundInterval add_tail(int j, double a, double exact, const Cutoff& c, double y, double theta_w0) {
  const double slack = 64 * kUnit * std::abs(exact);
  double lo = exact - slack, hi = exact + slack;
  if (c.has_tail) {
    const BoundInterval tail = weighted_tail_bounds(a, tail_k(j), c.w0, y, theta_w0);
    const double ratio = phi_summand(j, a, c.w0) / leading_form(j, a, c.w0);
    lo += std::max(0.0, tail.lo);
    hi += tail.hi * ratio * (1 + 4 * kUnit);
  }
  return {step_down(lo), step_up(hi)};
}

}  // namespace

SmoothParams SmoothParams::from_log10(double log10_x, double log10_y) {
  SmoothParams p{log10_x * std::numbers::ln10, std::pow(10.0, log10_y)};
  p.validate();
  return p;
}

double SmoothParams::log_y() const { return std::log(y); }

void SmoothParams::validate() const {
  if (!(y >= 2) || !std::isfinite(y)) throw ArgumentError("y must be a finite number >= 2");
  if (!std::isfinite(log_x) || !(log_x >= std::log(y) * (1 - 1e-15)))
    throw ArgumentError("x must satisfy x >= y");
}

double phi_summand(int j, double a, double p) {
  if (j < 0 || j > 5) throw ArgumentError("phi_summand: j must be in 0..5");
  if (!(p >= 2)) throw ArgumentError("phi_summand: p must be >= 2");
  return summands(a, std::log(p)).v[j];
}

std::array<double, 6> sigma_exact_sums(double a, std::size_t n, const PrimeTable& table) {
  n = std::min(n, table.size());
  const std::size_t blocks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, 6>> part(blocks);
  parallel_for(blocks, 0, [&](std::size_t b) {
    const std::size_t lo = b * kChunk, hi = std::min(n, lo + kChunk);
    CompensatedSum s[6];
    for (std::size_t i = lo; i < hi; ++i) {
      const Terms t = summands(a, table.logs[i]);
      for (int j = 0; j < 6; ++j) s[j].add(t.v[j]);
    }
    for (int j = 0; j < 6; ++j) part[b][j] = s[j].value();
  });
  std::array<double, 6> out{};
  for (int j = 0; j < 6; ++j) {
    CompensatedSum total;
    for (const auto& p : part) total.add(p[j]);
    out[j] = total.value();
  }
  return out;
}

BoundInterval sigma1_bounds(double a, double y, double w0, const PrimeTable& table) {
  const Cutoff c = resolve_cutoff(y, w0, table);
  const double theta = c.has_tail ? theta_exact(c.w0, table) : 0.0;
  return add_tail(1, a, sigma1_exact(a, c.n, table), c, y, theta);
}

BoundInterval sigma_j_bounds(int j, double alpha, double y, double w0, const PrimeTable& table) {
  if (j < 0 || j > 5) throw ArgumentError("sigma_j_bounds: j must be in 0..5");
  const Cutoff c = resolve_cutoff(y, w0, table);
  const double theta = c.has_tail ? theta_exact(c.w0, table) : 0.0;
  return add_tail(j, alpha, sigma_exact_sums(alpha, c.n, table)[j], c, y, theta);
}

std::array<BoundInterval, 6> sigma_all_bounds(double alpha, double y, double w0, const PrimeTable& table) {
  const Cutoff c = resolve_cutoff(y, w0, table);
  const double theta = c.has_tail ? theta_exact(c.w0, table) : 0.0;
  const auto sums = sigma_exact_sums(alpha, c.n, table);
  std::array<BoundInterval, 6> out;
  for (int j = 0; j < 6; ++j) out[j] = add_tail(j, alpha, sums[j], c, y, theta);
  return out;
}

namespace {

struct Sigma1Eval {
  const PrimeTable& table;
  Cutoff cut;
  double y;
  double theta;
  double log_x;

  BoundInterval interval(double a) const { return add_tail(1, a, sigma1_exact(a, cut.n, table), cut, y, theta); }
  // Centered residual: midpoint of the certified interval minus log x.
  double residual(double a) const { return interval(a).mid() - log_x; }
};

// Illinois variant of regula falsi on a bracket with g(lo) > 0 > g(hi).
double illinois(const Sigma1Eval& ev, double lo, double glo, double hi, double ghi, double tol) {
  int side = 0;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    double m = (lo * ghi - hi * glo) / (ghi - glo);
    if (!(m > lo && m < hi)) m = 0.5 * (lo + hi);
    const double gm = ev.residual(m);
    if (gm == 0.0) return m;
    if (gm > 0) {
      lo = m;
      glo = gm;
      if (side == 1) ghi *= 0.5;
      side = 1;
    } else {
      hi = m;
      ghi = gm;
      if (side == -1) glo *= 0.5;
      side = -1;
    }
  }
  return std::abs(glo) < std::abs(ghi) ? lo : hi;
}

double solve_stage(const Sigma1Eval& ev, double guess, double step, double tol) {
  double lo = guess - step, hi = guess + step;
  lo = std::max(lo, 1e-4);
  double glo = ev.residual(lo), ghi = ev.residual(hi);
  for (int i = 0; glo <= 0 && i < 60; ++i) {
    hi = lo;
    ghi = glo;
    lo = std::max(1e-4, lo - step * (2 << std::min(i, 20)));
    glo = ev.residual(lo);
    if (lo == 1e-4 && glo <= 0) break;
  }
  for (int i = 0; ghi >= 0 && i < 60; ++i) {
    lo = hi;
    glo = ghi;
    hi += step * (2 << std::min(i, 20));
    ghi = ev.residual(hi);
  }
  if (!(glo > 0 && ghi < 0)) throw SolverError("saddle point could not be bracketed");
  return illinois(ev, lo, glo, hi, ghi, tol);
}

}  // namespace

AlphaSolution solve_alpha(const SmoothParams& params, double w0, const PrimeTable& table, double tol,
                          double coarse_w0) {
  params.validate();
  if (!(tol > 0)) throw ArgumentError("solve_alpha: tolerance must be positive");
  const Cutoff fine = resolve_cutoff(params.y, w0, table);
  const double theta_fine = fine.has_tail ? theta_exact(fine.w0, table) : 0.0;
  const Sigma1Eval fine_ev{table, fine, params.y, theta_fine, params.log_x};

  double guess = 0.5;
  if (fine.has_tail && coarse_w0 < fine.w0 && coarse_w0 >= kThetaFloor) {
    const Cutoff coarse = resolve_cutoff(params.y, coarse_w0, table);
    const Sigma1Eval coarse_ev{table, coarse, params.y, theta_exact(coarse.w0, table), params.log_x};
    guess = solve_stage(coarse_ev, 0.5, 0.05, 1e-8);
  }
  const double step = guess == 0.5 ? 0.05 : 1e-5;
  const double alpha = solve_stage(fine_ev, guess, step, tol);
  AlphaSolution out;
  out.alpha = alpha;
  out.sigma1 = fine_ev.interval(alpha);
  out.sigma1_star = std::max(std::abs(out.sigma1.lo - params.log_x), std::abs(out.sigma1.hi - params.log_x));
  return out;
}

SaddleData compute_saddle(const SmoothParams& params, double w0, const PrimeTable& table, double tol) {
  const AlphaSolution sol = solve_alpha(params, w0, table, tol);
  const Cutoff c = resolve_cutoff(params.y, w0, table);
  const double theta = c.has_tail ? theta_exact(c.w0, table) : 0.0;
  const auto sums = sigma_exact_sums(sol.alpha, c.n, table);
  SaddleData d;
  d.alpha = sol.alpha;
  d.sigma1_star = sol.sigma1_star;
  d.w0 = c.w0;
  for (int j = 0; j < 5; ++j) d.sigma[j] = add_tail(j, sol.alpha, sums[j], c, params.y, theta);
  d.sigma5_upper = add_tail(5, sol.alpha, sums[5], c, params.y, theta).hi;
  d.zeta_log = d.sigma[0];
  return d;
}

}  // namespace friable
