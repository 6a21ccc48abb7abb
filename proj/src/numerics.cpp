#include "friable/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "friable/errors.hpp"

namespace friable {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

double checked(const Integrand& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) throw EvaluationError("non-finite integrand value", t);
  return v;
}

// Gauss-Kronrod 7-15 on [a, b].
struct KronrodResult {
  double value;
  double error;
};

KronrodResult gk15(const Integrand& f, double a, double b) {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  const double fc = checked(f, c);
  double k = fc * wgk[7];
  double g = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = r * xgk[j];
    const double s = checked(f, c - x) + checked(f, c + x);
    k += wgk[j] * s;
    if (j % 2 == 1) g += wg[j / 2] * s;
  }
  return {k * r, std::abs((k - g) * r)};
}

struct Adaptive {
  double value = 0.0;
  double error = 0.0;
};

Adaptive adaptive_gk(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  struct Piece {
    double a, b;
    KronrodResult r;
  };
  std::vector<Piece> done;
  std::vector<Piece> todo{{a, b, gk15(f, a, b)}};
  constexpr int kMaxPieces = 4000;
  while (!todo.empty()) {
    Piece p = todo.back();
    todo.pop_back();
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(p.r.value));
    const bool tiny = (p.b - p.a) <= 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(p.a));
    if (p.r.error <= tol || tiny || static_cast<int>(done.size() + todo.size()) >= kMaxPieces) {
      done.push_back(p);
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    todo.push_back({m, p.b, gk15(f, m, p.b)});
    todo.push_back({p.a, m, gk15(f, p.a, m)});
  }
  std::sort(done.begin(), done.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  CompensatedSum v, e;
  for (const auto& p : done) {
    v.add(p.r.value);
    e.add(p.r.error);
  }
  return {v.value(), e.value() + 8 * kUnitRoundoff * v.magnitude()};
}

// sign = +1 for the upper bound, -1 for the lower one.
double integrate_directed(const Integrand& f, double a, double b, const QuadratureSpec& spec,
                          const CellSlack& slack, int sign) {
  spec.validate();
  if (!(a <= b)) throw ArgumentError("integration bounds must satisfy a <= b");
  if (a == b) return 0.0;

  if (spec.mode == QuadMode::fast) {
    const auto n = static_cast<std::size_t>(std::min(1.0e6, std::max(1.0, std::ceil((b - a) / spec.mesh))));
    const double h = (b - a) / static_cast<double>(n);
    std::vector<Adaptive> parts(n);
    parallel_for(n, spec.threads, [&](std::size_t i) {
      const double lo = a + h * static_cast<double>(i);
      const double hi = (i + 1 == n) ? b : a + h * static_cast<double>(i + 1);
      parts[i] = adaptive_gk(f, lo, hi, spec);
    });
    CompensatedSum v, e;
    for (const auto& p : parts) {
      v.add(p.value);
      e.add(p.error);
    }
    const double err = (spec.add_error ? e.value() : 0.0) + 4 * kUnitRoundoff * v.magnitude();
    return sign > 0 ? step_up(v.value() + err) : step_down(v.value() - err);
  }

  // Rigorous: fixed cells, blocks reduced in index order.
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / spec.mesh)));
  const double h = (b - a) / static_cast<double>(cells);
  constexpr std::size_t kBlock = 2048;
  const std::size_t blocks = (cells + kBlock - 1) / kBlock;
  std::vector<CompensatedSum> partial(blocks);
  parallel_for(blocks, spec.threads, [&](std::size_t blk) {
    const std::size_t first = blk * kBlock;
    const std::size_t last = std::min(cells, first + kBlock);
    CompensatedSum acc;
    double t0 = a + h * static_cast<double>(first);
    double f0 = checked(f, t0);
    for (std::size_t i = first; i < last; ++i) {
      const double t1 = (i + 1 == cells) ? b : a + h * static_cast<double>(i + 1);
      const double f1 = checked(f, t1);
      const double fm = checked(f, 0.5 * (t0 + t1));
      const double s = slack ? slack(t0, t1) : 0.0;
      const double ext = sign > 0 ? std::max({f0, f1, fm}) + s : std::min({f0, f1, fm}) - s;
      acc.add(ext * (t1 - t0));
      t0 = t1;
      f0 = f1;
    }
    partial[blk] = acc;
  });
  CompensatedSum total;
  double mag = 0.0;
  for (const auto& p : partial) {
    total.add(p.value());
    mag += p.magnitude();
  }
  const double err = 4 * kUnitRoundoff * mag;
  return sign > 0 ? step_up(total.value() + err) : step_down(total.value() - err);
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
  abs_ += std::abs(x);
}

double step_up(double x) noexcept { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
double step_down(double x) noexcept { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

LogScaled LogScaled::from_value(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError("LogScaled requires a positive finite magnitude");
  return LogScaled(std::log10(v));
}

LogScaled LogScaled::from_log10(double l) {
  if (!std::isfinite(l)) throw ArgumentError("LogScaled requires a finite logarithm");
  return LogScaled(l);
}

LogScaled LogScaled::from_ln(double l) { return from_log10(l / std::numbers::ln10); }

double LogScaled::ln() const noexcept { return log10_ * std::numbers::ln10; }

long LogScaled::exponent() const noexcept { return static_cast<long>(std::floor(log10_)); }

double LogScaled::mantissa() const noexcept { return std::pow(10.0, log10_ - std::floor(log10_)); }

std::string LogScaled::scientific(int digits) const {
  digits = std::clamp(digits, 1, 17);
  long e = exponent();
  double m = mantissa();
  // Rounding can carry the mantissa to 10.
  const double scale = std::pow(10.0, digits - 1);
  if (std::round(m * scale) / scale >= 10.0) {
    m /= 10.0;
    ++e;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*fe%ld", digits - 1, m, e);
  return buf;
}

LogScaled LogScaled::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ArgumentError("LogScaled scale factor must be positive");
  return LogScaled(log10_ + std::log10(factor));
}

BoundInterval::BoundInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi)) throw ArgumentError("BoundInterval requires lo <= hi");
}

BoundInterval BoundInterval::inflated(double r) const {
  if (!(r >= 0.0)) throw ArgumentError("inflation radius must be nonnegative");
  return {step_down(lo - r), step_up(hi + r)};
}

BoundInterval operator+(const BoundInterval& a, const BoundInterval& b) {
  return {step_down(a.lo + b.lo), step_up(a.hi + b.hi)};
}

BoundInterval operator-(const BoundInterval& a, const BoundInterval& b) {
  return {step_down(a.lo - b.hi), step_up(a.hi - b.lo)};
}

BoundInterval operator*(const BoundInterval& a, const BoundInterval& b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {step_down(*std::min_element(p, p + 4)), step_up(*std::max_element(p, p + 4))};
}

void QuadratureSpec::validate() const {
  if (!(mesh > 0.0) || !std::isfinite(mesh)) throw ArgumentError("quadrature mesh must be positive");
  if (!(rel_tol >= 0.0) || !(abs_tol >= 0.0)) throw ArgumentError("quadrature tolerances must be nonnegative");
}

double integrate_upper(const Integrand& f, double a, double b, const QuadratureSpec& spec, const CellSlack& slack) {
  return integrate_directed(f, a, b, spec, slack, +1);
}

double integrate_lower(const Integrand& f, double a, double b, const QuadratureSpec& spec, const CellSlack& slack) {
  return integrate_directed(f, a, b, spec, slack, -1);
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 200) throw ArgumentError("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0, p1 = x;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (order == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = order == 1 ? 2.0 : 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double gauss_legendre_integral(const Integrand& f, double a, double b, int panels, int order) {
  if (panels < 1) throw ArgumentError("panel count must be positive");
  const GaussRule& rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  CompensatedSum acc;
  for (int k = 0; k < panels; ++k) {
    const double c = a + h * (k + 0.5);
    for (int i = 0; i < order; ++i) acc.add(0.5 * h * rule.weights[i] * checked(f, c + 0.5 * h * rule.nodes[i]));
  }
  return acc.value();
}

GridEstimate simpson_with_error(std::span<const double> s, double h) {
  const std::size_t n = s.size();
  if (n < 3 || n % 2 == 0) throw ArgumentError("Simpson rule needs an odd sample count >= 3");
  auto simpson = [&](std::size_t stride) {
    CompensatedSum acc;
    const std::size_t m = (n - 1) / stride;
    for (std::size_t i = 0; i <= m; ++i) {
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc.add(w * s[i * stride]);
    }
    return acc.value() * h * static_cast<double>(stride) / 3.0;
  };
  GridEstimate out;
  out.value = simpson(1);
  if ((n - 1) % 4 == 0) {
    out.error = std::abs(out.value - simpson(2));
  } else {
    CompensatedSum trap;
    for (std::size_t i = 0; i < n; ++i) trap.add((i == 0 || i + 1 == n) ? 0.5 * s[i] : s[i]);
    out.error = std::abs(out.value - trap.value() * h);
  }
  return out;
}

unsigned worker_count(unsigned requested) noexcept {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return requested == 0 ? hw : std::min(requested, std::max(hw, requested));
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(fail_mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace friable
