#include "friable/tails.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "friable/errors.hpp"

namespace friable {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr std::size_t kLanes = 8;
constexpr std::size_t kPrimeBlock = 512;
constexpr std::size_t kReseed = 256;
// Grid chunk: intervals per Simpson chunk (multiple of 4).
constexpr std::size_t kChunk = 4096;
// Phase margin in radians when bounding cos over a t-cell.
constexpr double kPhaseMargin = 1e-9;

// Relative error of the theta estimate used in W_0 on [w, ...), w >= 1e19.
double eps_for_block(double w) { return theta_epsilon(std::max(w, std::nextafter(kAdditiveCeiling, HUGE_VAL))); }

// (v^b - w^b) / b without cancellation for small b.
double power_gap(double v, double w, double b) { return std::pow(w, b) * std::expm1(b * std::log(v / w)) / b; }

// Shared body of W_0 once the oscillating term is fixed.
double W0_core(double v, double w, double alpha, double s_abs, double osc) {
  if (!(w < v)) return 0.0;
  if (!(w >= kThetaFloor)) throw ArgumentError("W0 requires w >= 1427");
  const double b = 1.0 - alpha;
  const double main = power_gap(v, w, b) - osc;
  double err;
  if (v <= kAdditiveCeiling) {
    if (!(alpha > 0.5)) throw ValidityError("W0 needs alpha > 1/2 below 1e19");
    const double e = 0.5 - alpha;
    const double pv = std::pow(v, e), pw = std::pow(w, e);
    err = 4 * (pv + pw) + 2 * (alpha + s_abs) * (pw - pv) / (alpha - 0.5);
  } else if (w >= kAdditiveCeiling) {
    const double eps = eps_for_block(w);
    err = 2 * eps * (std::pow(v, b) + std::pow(w, b)) + eps * (alpha + s_abs) * power_gap(v, w, b);
  } else {
    throw ArgumentError("W0 range straddles 1e19; split it first");
  }
  return (main - err) / std::log(v);
}

double delta_z(double t, double z, double b) { return t * std::log(z) - std::atan(t / b); }

// Sum of floored block values over [w, v] in ratio-`base` blocks from the top,
// or the single whole-range value when that is larger. Both lower-bound W.
template <class Block>
double blocks_sum(double v, double w, double base, Block&& block) {
  if (!(v > w)) return 0.0;
  if (!(base > 1.0)) throw ArgumentError("block base must exceed 1");
  const double lb = std::log(base);
  const auto n = static_cast<long>(std::floor(std::log(v / w) / lb));
  double total = 0.0;
  double hi = v;
  for (long j = 0; j < n; ++j) {
    const double lo = std::max(w, v * std::exp(-(j + 1) * lb));
    total += std::max(0.0, block(hi, lo));
    hi = lo;
  }
  if (hi > w * (1 + 1e-12)) total += std::max(0.0, block(hi, w));
  return n == 0 ? total : std::max(total, block(v, w));
}

template <class Block>
double segments_sum(double w, double y, Block&& block_star) {
  static const double cuts[] = {kAdditiveCeiling, std::exp(45.0), std::exp(50.0), std::exp(55.0), HUGE_VAL};
  double total = 0.0, lo = w;
  for (double c : cuts) {
    const double hi = std::min(c, y);
    if (hi > lo) {
      total += block_star(hi, lo);
      lo = hi;
    }
    if (hi >= y) break;
  }
  return total;
}

// log I0(c) - c for 0 <= c <= 1.
double log_i0_scaled(double c) {
  const double q = c * c / 4;
  double term = 1.0, sum = 0.0;
  for (int m = 1; m < 30; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::log1p(sum) - c;
}

double min_one_minus_cos(double a, double b) {
  const double k = std::ceil((a - kPhaseMargin) / kTwoPi);
  if (k * kTwoPi <= b + kPhaseMargin) return 0.0;
  return std::max(0.0, std::min(1 - std::cos(a), 1 - std::cos(b)) - 1e-15);
}

}  // namespace

void TailConfig::validate(const PrimeTable& table) const {
  if (!(L >= w0_floor)) throw ArgumentError("L must be at least 1427");
  if (L > static_cast<double>(table.limit)) throw ArgumentError("L exceeds the sieve limit");
  if (exact_head < 0 || static_cast<std::size_t>(exact_head) > table.count_upto(L))
    throw ArgumentError("exact_head exceeds pi(L)");
  if (!(block_base > 1.0)) throw ArgumentError("block base must exceed 1");
  if (!(t_split > 0.0)) throw ArgumentError("t_split must be positive");
}

WKernel::WKernel(double alpha, double y, const TailConfig& cfg, const PrimeTable& table)
    : alpha_(alpha), cutoff_(std::min(cfg.L, y)) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (cutoff_ > static_cast<double>(table.limit)) throw ArgumentError("direct range exceeds the sieve limit");
  const std::size_t n = table.count_upto(cutoff_);
  const std::size_t head = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(0, cfg.exact_head)));
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = table.logs[i];
    const double pa = std::exp(-alpha * lp);
    if (i < head) {
      head_lp_.push_back(lp);
      head_k_.push_back(2.0 / (std::exp(alpha * lp) * (1 - pa) * (1 - pa)));
    } else {
      lp_.push_back(lp);
      pa_.push_back(pa);
    }
  }
}

double WKernel::at(double t) const {
  double head = 0.0;
  for (std::size_t i = 0; i < head_lp_.size(); ++i) head += 0.5 * std::log1p(head_k_[i] * (1 - std::cos(t * head_lp_[i])));
  double acc = 0.0;
  for (std::size_t i = 0; i < lp_.size(); ++i) acc += pa_[i] * (1 - std::cos(t * lp_[i]));
  return head + acc;
}

void WKernel::grid(double t0, double h, std::size_t n, double* out) const {
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    double head = 0.0;
    for (std::size_t i = 0; i < head_lp_.size(); ++i)
      head += 0.5 * std::log1p(head_k_[i] * (1 - std::cos(t * head_lp_[i])));
    out[k] = head;
  }
  alignas(64) std::array<double, kPrimeBlock> c, s, rc, rs, pa;
  for (std::size_t p0 = 0; p0 < lp_.size(); p0 += kPrimeBlock) {
    const std::size_t m = std::min(kPrimeBlock, lp_.size() - p0);
    const std::size_t mp = (m + kLanes - 1) / kLanes * kLanes;
    double pa_sum = 0.0;
    for (std::size_t i = 0; i < mp; ++i) {
      const bool real = i < m;
      pa[i] = real ? pa_[p0 + i] : 0.0;
      rc[i] = real ? std::cos(h * lp_[p0 + i]) : 1.0;
      rs[i] = real ? std::sin(h * lp_[p0 + i]) : 0.0;
      pa_sum += pa[i];
    }
    for (std::size_t k0 = 0; k0 < n; k0 += kReseed) {
      const double ts = t0 + static_cast<double>(k0) * h;
      for (std::size_t i = 0; i < mp; ++i) {
        const double ang = i < m ? ts * lp_[p0 + i] : 0.0;
        c[i] = std::cos(ang);
        s[i] = std::sin(ang);
      }
      const std::size_t k1 = std::min(n, k0 + kReseed);
      for (std::size_t k = k0; k < k1; ++k) {
        double acc[kLanes] = {};
        for (std::size_t i = 0; i < mp; i += kLanes)
          for (std::size_t j = 0; j < kLanes; ++j) acc[j] += pa[i + j] * c[i + j];
        for (std::size_t i = 0; i < mp; ++i) {
          const double cn = c[i] * rc[i] - s[i] * rs[i];
          s[i] = s[i] * rc[i] + c[i] * rs[i];
          c[i] = cn;
        }
        double dot = 0.0;
        for (double a : acc) dot += a;
        out[k] += pa_sum - dot;
      }
    }
  }
}

double WKernel::cell_min(double t0, double t1) const {
  double head = 0.0;
  for (std::size_t i = 0; i < head_lp_.size(); ++i)
    head += 0.5 * std::log1p(head_k_[i] * min_one_minus_cos(t0 * head_lp_[i], t1 * head_lp_[i]));
  double acc = 0.0;
  for (std::size_t i = 0; i < lp_.size(); ++i) acc += pa_[i] * min_one_minus_cos(t0 * lp_[i], t1 * lp_[i]);
  // Rounding in the accumulated sums.
  return std::max(0.0, (head + acc) * (1 - 1e-12));
}

double WKernel::log_mean_exp() const {
  double total = 0.0;
  for (double c : pa_) total += log_i0_scaled(c);
  // Head factors: mean over a uniform phase of (1 + k(1 - cos))^{-1/2};
  // the trapezoid rule is spectrally accurate for periodic integrands.
  constexpr int kNodes = 4096;
  for (double k : head_k_) {
    CompensatedSum m;
    for (int i = 0; i < kNodes; ++i) m.add(1.0 / std::sqrt(1 + k * (1 - std::cos(kTwoPi * i / kNodes))));
    total += std::log(m.value() / kNodes);
  }
  return total;
}

double W_direct(double t, double alpha, const TailConfig& cfg, const PrimeTable& table) {
  if (cfg.L > static_cast<double>(table.limit)) throw ArgumentError("L exceeds the sieve limit");
  return WKernel(alpha, cfg.L, cfg, table).at(t);
}

double w_alpha_t(double alpha, double t) {
  if (!(alpha > 0.5)) throw ValidityError("w(alpha, t) needs alpha > 1/2");
  const double r = 4 / (alpha - 0.5) + 2 * alpha + 2 * std::hypot(alpha, t);
  return r * r;
}

double w_of_t(double alpha, double t, const TailConfig& cfg) { return std::max(cfg.L, w_alpha_t(alpha, t)); }

double W0(double v, double w, double t, double alpha) {
  const double b = 1.0 - alpha;
  const double r = std::hypot(b, t);
  const double osc = (std::pow(v, b) * std::cos(delta_z(t, v, b)) - std::pow(w, b) * std::cos(delta_z(t, w, b))) / r;
  return W0_core(v, w, alpha, std::hypot(alpha, t), osc);
}

double W0_cell(double v, double w, double t_lo, double t_hi, double alpha) {
  const double b = 1.0 - alpha;
  const double osc = (std::pow(v, b) + std::pow(w, b)) / std::hypot(b, t_lo);
  return W0_core(v, w, alpha, std::hypot(alpha, t_hi), osc);
}

double W_star(double v, double w, double t, double alpha, double base) {
  return blocks_sum(v, w, base, [&](double hi, double lo) { return W0(hi, lo, t, alpha); });
}

double W_tail(double t, double y, double alpha, const TailConfig& cfg, bool worst_case) {
  if (y <= cfg.L) return 0.0;
  const double w = w_of_t(alpha, t, cfg);
  return segments_sum(w, y, [&](double hi, double lo) {
    return blocks_sum(hi, lo, cfg.block_base, [&](double bh, double bl) {
      return worst_case ? W0_cell(bh, bl, t, t, alpha) : W0(bh, bl, t, alpha);
    });
  });
}

double W_tail_cell(double t0, double t1, double y, double alpha, const TailConfig& cfg) {
  if (y <= cfg.L) return 0.0;
  const double w = w_of_t(alpha, t1, cfg);
  return segments_sum(w, y, [&](double hi, double lo) {
    return blocks_sum(hi, lo, cfg.block_base, [&](double bh, double bl) { return W0_cell(bh, bl, t0, t1, alpha); });
  });
}

double W_lower_total(double t, double y, double alpha, const TailConfig& cfg, const PrimeTable& table) {
  return WKernel(alpha, y, cfg, table).at(t) + W_tail(t, y, alpha, cfg);
}

double J2_gaussian_tail(double z) {
  if (!(z > 1.0)) throw ArgumentError("J2 needs z > 1");
  const double lz = std::log(z);
  // Mills ratio: int_X^inf e^{-t^2/2z^2} dt <= (z^2/X) e^{-X^2/2z^2}, X = 2 z log z.
  return z * std::exp(-2 * lz * lz) / (2 * lz);
}

namespace {

struct Segment {
  double a, b, h;
};

struct GridSum {
  double value = 0.0;
  double error = 0.0;
};

// Composite Simpson of weight(t) * exp(-W_direct(t) - W_tail(t)) over the segments.
template <class Weight>
GridSum resolved_grid(const std::vector<Segment>& segs, const WKernel& kernel, double y, const TailConfig& cfg,
                      unsigned threads, Weight&& weight) {
  struct Job {
    double t0, h;
    std::size_t intervals;
  };
  std::vector<Job> jobs;
  for (const Segment& sg : segs) {
    if (!(sg.b > sg.a)) continue;
    auto n = static_cast<std::size_t>(std::ceil((sg.b - sg.a) / sg.h));
    n = std::max<std::size_t>(4, (n + 3) / 4 * 4);
    const double h = (sg.b - sg.a) / static_cast<double>(n);
    for (std::size_t s = 0; s < n; s += kChunk) jobs.push_back({sg.a + static_cast<double>(s) * h, h, std::min(kChunk, n - s)});
  }
  std::vector<GridEstimate> parts(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const Job& jb = jobs[j];
    std::vector<double> buf(jb.intervals + 1);
    kernel.grid(jb.t0, jb.h, buf.size(), buf.data());
    for (std::size_t k = 0; k < buf.size(); ++k) {
      const double t = jb.t0 + static_cast<double>(k) * jb.h;
      const double W = std::max(0.0, buf[k]) + W_tail(t, y, kernel.alpha(), cfg);
      buf[k] = weight(t) * std::exp(-W);
    }
    parts[j] = simpson_with_error(buf, jb.h);
  });
  CompensatedSum v, e;
  for (const auto& p : parts) {
    v.add(p.value);
    e.add(p.error);
  }
  return {v.value(), e.value()};
}

// Largest relative gap between windowed means of exp(-W_direct) and the
// phase-average prediction, over windows spread log-uniformly on [a, b].
double mean_value_deviation(const WKernel& kernel, double a, double b, unsigned threads) {
  constexpr int kWindows = 6;
  constexpr double kWidth = 100.0;
  constexpr double kStep = 0.01;
  const double m = std::exp(kernel.log_mean_exp());
  std::vector<double> dev(kWindows);
  parallel_for(kWindows, threads, [&](std::size_t i) {
    const double t = a * std::pow(b / a, (static_cast<double>(i) + 0.5) / kWindows);
    const auto n = static_cast<std::size_t>(kWidth / kStep);
    std::vector<double> buf(n);
    kernel.grid(t, kStep, n, buf.data());
    CompensatedSum s;
    for (double w : buf) s.add(std::exp(-std::max(0.0, w)));
    dev[i] = std::abs(s.value() / static_cast<double>(n) / m - 1.0);
  });
  return *std::max_element(dev.begin(), dev.end());
}

// M * integral_a^b weight(t) exp(-W_tail worst case) dt, with its error allowance.
template <class Weight>
GridSum mean_region(const WKernel& kernel, double a, double b, double y, const TailConfig& cfg, unsigned threads,
                    Weight&& weight) {
  if (!(b > a)) return {};
  const double la = std::log(a), lb = std::log(b);
  auto g = [&](double u) {
    const double t = std::exp(u);
    return weight(t) * std::exp(-W_tail(t, y, kernel.alpha(), cfg, true)) * t;
  };
  const int panels = static_cast<int>(std::ceil((lb - la) / 0.05)) + 1;
  const double coarse = gauss_legendre_integral(g, la, lb, panels, 20);
  const double fine = gauss_legendre_integral(g, la, lb, 2 * panels, 20);
  const double m = std::exp(kernel.log_mean_exp());
  const double value = m * fine;
  const double dev = mean_value_deviation(kernel, a, b, threads);
  return {value, m * std::abs(fine - coarse) + dev * value};
}

TailIntegral finish(const GridSum& direct, const GridSum& mean, double extra = 0.0) {
  TailIntegral r;
  r.direct = direct.value;
  r.mean_value = mean.value;
  r.error = direct.error + mean.error;
  const double total = direct.value + mean.value + extra + r.error;
  r.value = step_up(total * (1 + 1e-12));
  return r;
}

// Rigorous cells: per-cell upper bound of weight * exp(-W) from cell minima of W.
template <class Weight>
double rigorous_cells(double a, double b, double mesh, const WKernel& kernel, double y, const TailConfig& cfg,
                      unsigned threads, Weight&& cell_weight) {
  if (!(b > a)) return 0.0;
  const auto cells = static_cast<std::size_t>(std::ceil((b - a) / mesh));
  const double h = (b - a) / static_cast<double>(cells);
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (cells + kBlock - 1) / kBlock;
  std::vector<double> part(blocks);
  parallel_for(blocks, threads, [&](std::size_t blk) {
    CompensatedSum s;
    for (std::size_t i = blk * kBlock; i < std::min(cells, (blk + 1) * kBlock); ++i) {
      const double t0 = a + h * static_cast<double>(i);
      const double t1 = i + 1 == cells ? b : a + h * static_cast<double>(i + 1);
      const double W = kernel.cell_min(t0, t1) + W_tail_cell(t0, t1, y, kernel.alpha(), cfg);
      s.add(cell_weight(t0, t1) * std::exp(-W) * (t1 - t0));
    }
    part[blk] = s.value();
  });
  CompensatedSum total;
  for (double p : part) total.add(p);
  return step_up(total.value() * (1 + 1e-12));
}

}  // namespace

TailIntegral J1(double T0, double T, double y, double alpha, const TailConfig& cfg, const PrimeTable& table,
                const QuadratureSpec& spec) {
  spec.validate();
  cfg.validate(table);
  if (!(T0 < T)) throw ArgumentError("J1 needs T0 < T");
  const WKernel kernel(alpha, y, cfg, table);
  const double a2 = alpha * alpha;
  if (spec.mode == QuadMode::rigorous) {
    TailIntegral r;
    r.value = r.direct = rigorous_cells(T0, T, spec.mesh, kernel, y, cfg, spec.threads,
                                        [&](double t0, double) { return 1.0 / std::sqrt(a2 + t0 * t0); });
    return r;
  }
  const double split = std::min(T, std::max(T0, cfg.t_split));
  auto weight = [&](double t) { return 1.0 / std::sqrt(a2 + t * t); };
  const double mid = std::clamp(10.0, T0, split);
  const GridSum direct = resolved_grid({{T0, mid, 1e-3}, {mid, split, 1e-2}}, kernel, y, cfg, spec.threads, weight);
  const GridSum mean = mean_region(kernel, split, T, y, cfg, spec.threads, weight);
  return finish(direct, mean);
}

TailIntegral J2(double z, double y, double alpha, const TailConfig& cfg, const PrimeTable& table,
                const QuadratureSpec& spec) {
  spec.validate();
  cfg.validate(table);
  if (!(z > 1.0)) throw ArgumentError("J2 needs z > 1");
  const WKernel kernel(alpha, y, cfg, table);
  const double X = 2 * z * std::log(z);
  const double tail = J2_gaussian_tail(z);
  const double inv2z2 = 1.0 / (2 * z * z);
  if (spec.mode == QuadMode::rigorous) {
    TailIntegral r;
    r.direct = rigorous_cells(0.0, X, spec.mesh, kernel, y, cfg, spec.threads,
                              [&](double t0, double) { return std::exp(-t0 * t0 * inv2z2); });
    r.value = step_up(r.direct + tail);
    return r;
  }
  auto weight = [&](double t) { return std::exp(-t * t * inv2z2); };
  const double split = std::min(X, cfg.t_split);
  const double c1 = std::min(0.1, split), c2 = std::min(10.0, split);
  const GridSum direct =
      resolved_grid({{0.0, c1, 2e-4}, {c1, c2, 1e-3}, {c2, split, 1e-2}}, kernel, y, cfg, spec.threads, weight);
  const GridSum mean = mean_region(kernel, split, X, y, cfg, spec.threads, weight);
  return finish(direct, mean, tail);
}

}  // namespace friable
