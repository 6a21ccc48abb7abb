#include "friable/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "friable/errors.hpp"
#include "friable/primes.hpp"

namespace friable {

namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

struct Leaf {
  std::uint64_t v;
  std::uint32_t k;  // count n <= v with largest prime factor among the first k primes
};

// Psi(v, p_k) = 1 + sum_{j<=k} Psi(v / p_j, p_j). Values at or below `small`
// are deferred as leaves and counted in one sweep afterwards.
class Counter {
 public:
  Counter(const PrimeTable& table, std::uint64_t small) : table_(table), small_(small) {}

  std::uint64_t expand(std::uint64_t v, std::uint32_t k, std::vector<Leaf>& leaves) const {
    if (k == 0) return 1;
    if (table_.primes[k - 1] >= v) return v;
    std::uint64_t total = 1;
    const std::uint64_t r = isqrt(v);
    const auto below = static_cast<std::uint32_t>(std::min<std::size_t>(k, table_.count_upto(static_cast<double>(r))));
    for (std::uint32_t j = 1; j <= below; ++j) {
      const std::uint64_t child = v / table_.primes[j - 1];
      if (child <= small_)
        leaves.push_back({child, j});
      else
        total += expand(child, j, leaves);
    }
    // Primes above sqrt(v): the cofactor is below p, so it is automatically smooth.
    std::uint32_t j = below + 1;
    while (j <= k) {
      const std::uint64_t q = v / table_.primes[j - 1];
      if (q == 0) break;
      const auto last = static_cast<std::uint32_t>(
          std::min<std::size_t>(k, count_upto_int(v / q)));
      total += q * (last - j + 1);
      j = last + 1;
    }
    return total;
  }

 private:
  std::size_t count_upto_int(std::uint64_t v) const {
    return static_cast<std::size_t>(std::upper_bound(table_.primes.begin(), table_.primes.end(), v) -
                                    table_.primes.begin());
  }

  const PrimeTable& table_;
  std::uint64_t small_;
};

}  // namespace

std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, const OracleLimits& limits) {
  if (x < 1) throw ArgumentError("psi_exact needs x >= 1");
  if (x > limits.max_x) throw ArgumentError("x exceeds the oracle limit " + std::to_string(limits.max_x));
  if (y >= x) return x;
  if (y < 2) return 1;

  const double xd = static_cast<double>(x);
  const std::uint64_t small = std::min<std::uint64_t>(x, std::max(1000.0, std::ceil(std::pow(xd, 2.0 / 3.0))));
  const PrimeTable table = sieve(std::max<std::uint64_t>({2, y, small}));
  const auto k = static_cast<std::uint32_t>(table.count_upto(static_cast<double>(y)));

  std::vector<Leaf> leaves;
  std::uint64_t total = 0;
  if (x <= small)
    leaves.push_back({x, k});
  else
    total = Counter(table, small).expand(x, k, leaves);

  // Index (1-based) of the largest prime factor of every n <= small.
  std::vector<std::uint32_t> gpf(small + 1, 0);
  for (std::size_t i = 0; i < table.size() && table.primes[i] <= small; ++i)
    for (std::uint64_t m = table.primes[i]; m <= small; m += table.primes[i]) gpf[m] = static_cast<std::uint32_t>(i + 1);

  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) { return a.v < b.v; });
  std::vector<std::uint64_t> fenwick(k + 1, 0);
  std::uint64_t n = 1;
  for (const Leaf& leaf : leaves) {
    for (; n < leaf.v;) {
      ++n;
      const std::uint32_t idx = gpf[n];
      if (idx <= k)
        for (std::uint32_t i = idx; i <= k; i += i & (~i + 1)) ++fenwick[i];
    }
    std::uint64_t count = 1;
    for (std::uint32_t i = leaf.k; i > 0; i -= i & (~i + 1)) count += fenwick[i];
    total += count;
  }
  return total;
}

std::uint64_t psi_brute(std::uint64_t x, std::uint64_t y) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    std::uint64_t m = n, largest = 1;
    for (std::uint64_t p = 2; p * p <= m; ++p)
      while (m % p == 0) {
        m /= p;
        largest = p;
      }
    if (m > 1) largest = std::max(largest, m);
    if (largest <= y) ++count;
  }
  return count;
}

}  // namespace friable
