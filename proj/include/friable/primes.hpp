#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "friable/numerics.hpp"

namespace friable {

// All primes up to `limit`, with their natural logs.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;
  std::vector<double> logs;

  std::size_t size() const noexcept { return primes.size(); }
  // Number of primes <= v (v may exceed limit only if v < next prime).
  std::size_t count_upto(double v) const noexcept;
};

PrimeTable sieve(std::uint64_t limit);

// Flat little-endian uint64 file of the primes <= limit, named by limit.
std::filesystem::path prime_cache_path(const std::filesystem::path& dir, std::uint64_t limit);
void save_prime_cache(const PrimeTable& table, const std::filesystem::path& file);
// Returns an empty table (limit 0) when the file is missing or malformed.
PrimeTable load_prime_cache(const std::filesystem::path& file, std::uint64_t limit);
// Loads from `dir` when cached, otherwise sieves and writes the cache.
// An empty dir disables caching.
PrimeTable sieve_cached(std::uint64_t limit, const std::filesystem::path& dir);

// Sum of log p over p <= w.
double theta_exact(double w, const PrimeTable& table);

inline constexpr double kThetaFloor = 1427.0;
inline constexpr double kAdditiveCeiling = 1e19;

// Relative bound |theta(x) - x| <= eps * x valid for x > 1e19.
double theta_epsilon(double x);

// Certified interval containing theta(x), x >= 1427.
BoundInterval theta_bounds(double x);

// Certified interval for sum_{w0 < p <= w1} f(p) log p where
// f(t) = (log t)^k t^{-a}, k >= -1, f decreasing on [w0, w1].
// theta_w0 is the exact value of theta(w0).
BoundInterval weighted_tail_bounds(double a, int k, double w0, double w1, double theta_w0);

// Integral of (log t)^k t^{-a} over [lo, hi], lo >= 2.
double log_power_integral(double a, int k, double lo, double hi);

}  // namespace friable
