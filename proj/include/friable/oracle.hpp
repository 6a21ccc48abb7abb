#pragma once

#include <cstdint>

namespace friable {

struct OracleLimits {
  std::uint64_t max_x = 100'000'000'000ULL;
};

// Exact count of n <= x whose prime factors are all <= y.
std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, const OracleLimits& limits = {});

// Trial-division count; for cross-checking at small x.
std::uint64_t psi_brute(std::uint64_t x, std::uint64_t y);

}  // namespace friable
