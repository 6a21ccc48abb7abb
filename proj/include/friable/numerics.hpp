#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace friable {

// Neumaier-compensated running sum. Order of add() calls is the order of
// summation; callers that need reproducibility keep that order fixed.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }
  // Sum of |x| over all added terms; used for float-rounding slack.
  double magnitude() const noexcept { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

// Smallest double above / below x.
double step_up(double x) noexcept;
double step_down(double x) noexcept;

// A positive magnitude stored by its base-10 logarithm, so that numbers
// like 10^482 survive arithmetic.
class LogScaled {
 public:
  static LogScaled from_value(double v);
  static LogScaled from_log10(double l);
  static LogScaled from_ln(double l);

  double log10() const noexcept { return log10_; }
  double ln() const noexcept;
  // value = mantissa * 10^exponent with 1 <= mantissa < 10
  double mantissa() const noexcept;
  long exponent() const noexcept;
  // Scientific notation with `digits` significant digits, e.g. "2.3302e94".
  std::string scientific(int digits) const;

  LogScaled operator*(const LogScaled& o) const noexcept { return LogScaled(log10_ + o.log10_); }
  LogScaled operator/(const LogScaled& o) const noexcept { return LogScaled(log10_ - o.log10_); }
  // Multiplies by a positive finite factor.
  LogScaled scaled(double factor) const;

  auto operator<=>(const LogScaled&) const = default;

 private:
  explicit LogScaled(double l) noexcept : log10_(l) {}
  double log10_ = 0.0;
};

// Closed interval [lo, hi] certified to contain some true value. Arithmetic
// rounds outward by one ulp per operation.
struct BoundInterval {
  double lo = 0.0;
  double hi = 0.0;

  BoundInterval() = default;
  BoundInterval(double lo_, double hi_);
  static BoundInterval point(double x) { return {x, x}; }

  double mid() const noexcept { return 0.5 * (lo + hi); }
  double width() const noexcept { return hi - lo; }
  double radius() const noexcept { return 0.5 * (hi - lo); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool overlaps(const BoundInterval& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
  // Widen by an absolute amount on both sides.
  BoundInterval inflated(double r) const;

  friend BoundInterval operator+(const BoundInterval& a, const BoundInterval& b);
  friend BoundInterval operator-(const BoundInterval& a, const BoundInterval& b);
  friend BoundInterval operator*(const BoundInterval& a, const BoundInterval& b);
  friend bool operator==(const BoundInterval&, const BoundInterval&) = default;
};

enum class QuadMode { fast, rigorous };

struct QuadratureSpec {
  double mesh = 0.1;                 // cell width (rigorous) or initial panel width (fast)
  QuadMode mode = QuadMode::rigorous;
  bool add_error = true;             // fast mode: add the reported error estimate
  double rel_tol = 1e-10;            // fast mode target
  double abs_tol = 0.0;
  unsigned threads = 0;              // 0: hardware concurrency

  void validate() const;
};

using Integrand = std::function<double(double)>;
// Per-cell additive bound on how far the integrand can stray from its
// sampled extreme on [t0, t1]. Empty means zero.
using CellSlack = std::function<double(double t0, double t1)>;

// U >= integral of f over [a, b]. Rigorous mode takes, per cell, the largest
// of the two endpoint samples and the midpoint sample plus `slack`; fast mode
// runs adaptive Gauss-Kronrod and adds the reported error.
double integrate_upper(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                       const CellSlack& slack = {});
// V <= integral of f over [a, b]; mirror of integrate_upper.
double integrate_lower(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                       const CellSlack& slack = {});

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over `panels` equal panels; for smooth integrands.
double gauss_legendre_integral(const Integrand& f, double a, double b, int panels, int order = 20);

// Composite Simpson on equally spaced samples (odd count >= 3) with a
// Richardson-style error estimate |S_h - S_2h| (the 2h rule needs a count
// of the form 4k+1; otherwise a trapezoid comparison is used).
struct GridEstimate {
  double value = 0.0;
  double error = 0.0;
};
GridEstimate simpson_with_error(std::span<const double> samples, double h);

unsigned worker_count(unsigned requested) noexcept;

// Runs body(i) for i in [0, n) on up to `threads` workers. Work items are
// claimed in index order; results must be written to per-index slots so that
// any reduction happens afterwards in index order.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace friable
