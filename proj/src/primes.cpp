#include "friable/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "friable/errors.hpp"

namespace friable {

namespace {

// Relative slack added to every quadrature-based integral.
constexpr double kIntegralSlack = 1e-12;

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

double piece_integral(double a, int k, double lo, double hi) {
  return hi > lo ? log_power_integral(a, k, lo, hi) : 0.0;
}

double weight(double a, int k, double t) { return std::pow(std::log(t), k) * std::pow(t, -a); }

// |theta(x) - x| bound at a single point.
double theta_error_at(double x) {
  const BoundInterval b = theta_bounds(x);
  return std::max(x - b.lo, b.hi - x);
}

}  // namespace

std::size_t PrimeTable::count_upto(double v) const noexcept {
  if (v < 2) return 0;
  const auto key = v >= static_cast<double>(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(std::floor(v));
  return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), key) - primes.begin());
}

PrimeTable sieve(std::uint64_t limit) {
  if (limit < 2) throw ArgumentError("sieve limit must be at least 2");
  PrimeTable t;
  t.limit = limit;
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const std::vector<std::uint64_t> base = small_primes(root);

  // Rough count from the prime number theorem to avoid regrowth.
  const double ld = static_cast<double>(limit);
  t.primes.reserve(static_cast<std::size_t>(ld / std::max(1.0, std::log(ld) - 1.1)) + 16);
  t.primes.push_back(2);

  // Odd-only segmented sieve; bit i of a segment stands for lo + 2i.
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<std::uint8_t> seg(kSegment);
  std::vector<std::uint64_t> next;  // next odd multiple per base prime
  for (std::size_t i = 1; i < base.size(); ++i) next.push_back(base[i] * base[i]);
  for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(limit, lo + 2 * kSegment - 1);
    std::fill(seg.begin(), seg.end(), 0);
    for (std::size_t i = 1; i < base.size(); ++i) {
      const std::uint64_t p = base[i];
      std::uint64_t m = next[i - 1];
      for (; m <= hi; m += 2 * p) seg[(m - lo) / 2] = 1;
      next[i - 1] = m;
    }
    for (std::uint64_t n = lo; n <= hi; n += 2)
      if (!seg[(n - lo) / 2]) t.primes.push_back(n);
  }
  t.logs.resize(t.primes.size());
  for (std::size_t i = 0; i < t.primes.size(); ++i) t.logs[i] = std::log(static_cast<double>(t.primes[i]));
  return t;
}

std::filesystem::path prime_cache_path(const std::filesystem::path& dir, std::uint64_t limit) {
  return dir / ("primes-" + std::to_string(limit) + ".bin");
}

void save_prime_cache(const PrimeTable& table, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write prime cache " + file.string());
  for (std::uint64_t p : table.primes) {
    if constexpr (std::endian::native == std::endian::big) p = __builtin_bswap64(p);
    out.write(reinterpret_cast<const char*>(&p), sizeof p);
  }
}

PrimeTable load_prime_cache(const std::filesystem::path& file, std::uint64_t limit) {
  PrimeTable t;
  std::ifstream in(file, std::ios::binary);
  if (!in) return t;
  std::uint64_t p = 0, prev = 1;
  while (in.read(reinterpret_cast<char*>(&p), sizeof p)) {
    if constexpr (std::endian::native == std::endian::big) p = __builtin_bswap64(p);
    if (p <= prev || p > limit) return {};
    t.primes.push_back(p);
    prev = p;
  }
  if (t.primes.empty() || t.primes.front() != 2) return {};
  t.limit = limit;
  t.logs.resize(t.primes.size());
  for (std::size_t i = 0; i < t.primes.size(); ++i) t.logs[i] = std::log(static_cast<double>(t.primes[i]));
  return t;
}

PrimeTable sieve_cached(std::uint64_t limit, const std::filesystem::path& dir) {
  if (dir.empty()) return sieve(limit);
  const auto file = prime_cache_path(dir, limit);
  PrimeTable t = load_prime_cache(file, limit);
  if (t.limit == limit) return t;
  t = sieve(limit);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) save_prime_cache(t, file);
  return t;
}

double theta_exact(double w, const PrimeTable& table) {
  if (w > static_cast<double>(table.limit)) throw ArgumentError("theta_exact: w exceeds the sieve limit");
  const std::size_t n = table.count_upto(w);
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) s.add(table.logs[i]);
  return s.value();
}

double theta_epsilon(double x) {
  if (!(x > kAdditiveCeiling)) throw ArgumentError("relative theta bound applies only above 1e19");
  if (x <= std::exp(45.0)) return 2.3e-8;
  if (x <= std::exp(50.0)) return 1.2e-8;
  if (x <= std::exp(55.0)) return 1.2e-9;
  return 2.9e-10;
}

BoundInterval theta_bounds(double x) {
  if (!(x >= kThetaFloor)) throw ValidityError("theta bounds need x >= 1427");
  if (x <= kAdditiveCeiling) {
    const double r = std::sqrt(x);
    return {step_down(x - 1.95 * r), step_up(x - 0.05 * r)};
  }
  const double e = theta_epsilon(x);
  return {step_down(x * (1 - e)), step_up(x * (1 + e))};
}

double log_power_integral(double a, int k, double lo, double hi) {
  if (!(lo >= 2.0) || !(hi >= lo)) throw ArgumentError("log_power_integral needs 2 <= lo <= hi");
  if (hi == lo) return 0.0;
  const double s0 = std::log(lo), s1 = std::log(hi);
  const double b = 1.0 - a;
  // t = e^s: integrand s^k e^{(1-a)s}
  const int panels = static_cast<int>(std::ceil((s1 - s0) * (1.0 + std::abs(b)) / 2.0)) + 2;
  return gauss_legendre_integral([&](double s) { return std::pow(s, k) * std::exp(b * s); }, s0, s1, panels, 20);
}

BoundInterval weighted_tail_bounds(double a, int k, double w0, double w1, double theta_w0) {
  if (k < -1) throw ArgumentError("weighted_tail_bounds: k must be >= -1");
  if (!(w0 >= kThetaFloor)) throw ArgumentError("weighted_tail_bounds: w0 must be >= 1427");
  if (!(w1 > w0)) return {0.0, 0.0};
  if (!(a > 0.0)) throw ArgumentError("weighted_tail_bounds: exponent must be positive");
  if (k > 0 && !(std::log(w0) > k / a)) throw ArgumentError("weighted_tail_bounds: weight not decreasing on range");

  CompensatedSum lo_sum, hi_sum;
  double start = w0;
  if (w0 < kAdditiveCeiling) {
    const double end = std::min(w1, kAdditiveCeiling);
    const double e0 = w0 - theta_w0;
    const double f0 = weight(a, k, w0);
    const double main = piece_integral(a, k, w0, end);
    const double damp = piece_integral(a + 0.5, k, w0, end);
    hi_sum.add(main * (1 + kIntegralSlack) + e0 * f0);
    lo_sum.add(main * (1 - kIntegralSlack) - damp * (1 + kIntegralSlack) + (e0 - 2 * std::sqrt(w0)) * f0);
    start = end;
  }
  static const double cuts[] = {kAdditiveCeiling, std::exp(45.0), std::exp(50.0), std::exp(55.0), HUGE_VAL};
  for (std::size_t c = 1; c < std::size(cuts) && start < w1; ++c) {
    if (cuts[c] <= start) continue;
    const double A = start, B = std::min(w1, cuts[c]);
    const double eps = theta_epsilon(B);
    const double fA = weight(a, k, A), fB = weight(a, k, B);
    const double main = piece_integral(a, k, A, B);
    const double ea = A == w0 ? std::abs(w0 - theta_w0) : theta_error_at(A);
    // Partial summation with |theta(t) - t| <= eps t on (A, B].
    const double err = ea * fA + eps * B * fB + eps * (A * fA - B * fB + main);
    hi_sum.add(main * (1 + kIntegralSlack) + err);
    lo_sum.add(main * (1 - kIntegralSlack) - err);
    start = B;
  }
  const double slack = 8 * std::numeric_limits<double>::epsilon() * (std::abs(hi_sum.value()) + std::abs(lo_sum.value()));
  return {step_down(lo_sum.value() - slack), step_up(hi_sum.value() + slack)};
}

}  // namespace friable
