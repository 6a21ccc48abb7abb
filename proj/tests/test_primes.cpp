#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "friable/errors.hpp"
#include "friable/primes.hpp"
#include "support.hpp"

using namespace friable;

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("sieve small limits") {
  const PrimeTable t = sieve(30);
  CHECK(t.primes == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(t.logs[1] == doctest::Approx(std::log(3.0)));
  CHECK(t.count_upto(28.5) == 9);
  CHECK(t.count_upto(29) == 10);
  CHECK(sieve(2).size() == 1);
  CHECK_THROWS_AS(sieve(1), ArgumentError);
}

TEST_CASE("sieve counts and trial-division spot checks") {
  const PrimeTable t = sieve(1'000'000);
  CHECK(t.size() == 78498);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
  for (int i = 0; i < 200; ++i) CHECK(is_prime(t.primes[pick(rng)]));
  std::uniform_int_distribution<std::uint64_t> any(2, 1'000'000);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t n = any(rng);
    const bool listed = std::binary_search(t.primes.begin(), t.primes.end(), n);
    CHECK(listed == is_prime(n));
  }
}

TEST_CASE("segment boundaries do not drop primes") {
  const PrimeTable t = sieve(3'000'000);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK_UNARY(t.primes[i] > t.primes[i - 1]);
  CHECK(t.size() == 216816);
}

TEST_CASE("the ten-millionth prime") {
  const PrimeTable& t = test::full_table();
  CHECK(t.size() == 10'000'000);
  CHECK(t.primes.back() == 179424673ULL);
}

TEST_CASE("prime cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "friable-cache-test";
  std::filesystem::remove_all(dir);
  const PrimeTable a = sieve_cached(50'000, dir);
  CHECK(std::filesystem::exists(prime_cache_path(dir, 50'000)));
  const PrimeTable b = sieve_cached(50'000, dir);
  CHECK(a.primes == b.primes);
  CHECK(load_prime_cache(dir / "missing.bin", 10).limit == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("theta_exact") {
  const PrimeTable t = sieve(2000);
  CHECK(theta_exact(2, t) == doctest::Approx(std::log(2.0)));
  CHECK(theta_exact(10, t) == doctest::Approx(std::log(210.0)));
  CHECK(theta_exact(100, t) == doctest::Approx(83.7284).epsilon(1e-6));
  CHECK_THROWS_AS(theta_exact(5000, t), ArgumentError);
}

TEST_CASE("theta_bounds") {
  const BoundInterval b = theta_bounds(1e6);
  CHECK(b.lo == doctest::Approx(998050.0));
  CHECK(b.hi == doctest::Approx(999950.0));
  const BoundInterval c = theta_bounds(1e20);
  CHECK(c.lo == doctest::Approx(1e20 * (1 - 2.3e-8)));
  CHECK(c.hi == doctest::Approx(1e20 * (1 + 2.3e-8)));
  CHECK_THROWS_AS(theta_bounds(1000.0), ValidityError);
  CHECK(theta_epsilon(std::exp(47.0)) == 1.2e-8);
  CHECK(theta_epsilon(std::exp(52.0)) == 1.2e-9);
  CHECK(theta_epsilon(std::exp(60.0)) == 2.9e-10);
  CHECK_THROWS(theta_epsilon(1e18));
}

TEST_CASE("theta_bounds contains the exact value at random points") {
  const PrimeTable t = sieve(20'000'000);
  CHECK(theta_bounds(1427).contains(theta_exact(1427, t)));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lx(std::log(1427.0), std::log(2e7));
  for (int i = 0; i < 1000; ++i) {
    const double x = std::floor(std::exp(lx(rng)));
    CHECK(theta_bounds(x).contains(theta_exact(x, t)));
  }
}

TEST_CASE("weighted_tail_bounds") {
  const PrimeTable t = sieve(2'000'000);
  CHECK(weighted_tail_bounds(1.0, 0, 1e4, 1e4, theta_exact(1e4, t)).width() == 0.0);

  double direct = 0.0;
  for (std::size_t i = 0; i < t.size() && t.primes[i] <= 2000; ++i)
    if (t.primes[i] > 1500) direct += t.logs[i] / std::sqrt(static_cast<double>(t.primes[i]));
  CHECK(weighted_tail_bounds(0.5, 0, 1500, 2000, theta_exact(1500, t)).contains(direct));

  // f must decrease on the range.
  CHECK_THROWS(weighted_tail_bounds(0.5, 10, 1500, 2000, theta_exact(1500, t)));
}

TEST_CASE("weighted_tail_bounds contains direct sums (random)") {
  const PrimeTable t = sieve(2'000'000);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.6, 1.2);
  std::uniform_int_distribution<int> uk(-1, 3);
  std::uniform_real_distribution<double> lw(std::log(1500.0), std::log(2e6));
  int tested = 0;
  while (tested < 60) {
    const double a = ua(rng);
    const int k = uk(rng);
    double w0 = std::floor(std::exp(lw(rng))), w1 = std::floor(std::exp(lw(rng)));
    if (w0 > w1) std::swap(w0, w1);
    if (k > 0 && w0 <= std::exp(k / a)) continue;
    double direct = 0.0;
    for (std::size_t i = t.count_upto(w0); i < t.size() && t.primes[i] <= w1; ++i)
      direct += std::pow(t.logs[i], k + 1) * std::pow(static_cast<double>(t.primes[i]), -a);
    const BoundInterval b = weighted_tail_bounds(a, k, w0, w1, theta_exact(w0, t));
    CHECK(b.contains(direct));
    ++tested;
  }
}

TEST_CASE("weighted_tail_bounds narrow relative to the sum as w0 grows") {
  const PrimeTable t = sieve(2'000'000);
  double prev = HUGE_VAL;
  for (double w0 : {2e3, 2e4, 2e5, 2e6}) {
    const BoundInterval b = weighted_tail_bounds(0.9, 0, w0, 1e12, theta_exact(w0, t));
    CHECK(b.width() <= prev);
    prev = b.width();
  }
}

TEST_CASE("log_power_integral against closed forms") {
  CHECK(log_power_integral(2.0, 0, 2.0, 10.0) == doctest::Approx(0.5 - 0.1).epsilon(1e-12));
  CHECK(log_power_integral(1.0, -1, std::exp(1.0), std::exp(2.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
