#include "motifcc/combinatorics.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace motifcc {

using boost::multiprecision::cpp_rational;
using boost::multiprecision::msb;

BigCount binom(long n, long k) {
  if (n < 0) throw std::domain_error("binom: n must be >= 0");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: r is binom(n-k+i, i) after this step
  }
  return r;
}

BigCount factorial(long n) {
  if (n < 0) throw std::domain_error("factorial: n must be >= 0");
  BigCount r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<BigCount> stirling_row(long r, long lmax) {
  if (r < 0 || lmax < 0) throw std::domain_error("stirling_row: negative argument");
  // row[l] = S(i, l), built up over i = 0..r. Update in place from high l to
  // low so the previous row's values are still intact when read. Entries with
  // l > r stay zero.
  std::vector<BigCount> row(static_cast<std::size_t>(lmax) + 1);
  row[0] = 1;  // S(0,0) = 1
  const long ltop = std::min(lmax, r);
  for (long i = 1; i <= r; ++i) {
    for (long l = std::min<long>(ltop, i); l >= 1; --l)
      row[l] = l * row[l] + row[l - 1];
    row[0] = 0;  // S(i, 0) = 0 for i >= 1
  }
  return row;
}

BigCount stirling2(long r, long l) {
  if (r < 0 || l < 0) throw std::domain_error("stirling2: negative argument");
  if (l > r) return 0;
  return stirling_row(r, l)[static_cast<std::size_t>(l)];
}

double coupon_cdf(long k, long r) {
  if (k <= 0) throw std::domain_error("coupon_cdf: k must be >= 1");
  if (r < 0) throw std::domain_error("coupon_cdf: r must be >= 0");
  if (r < k) return 0.0;
  BigCount num = stirling2(r, k) * factorial(k);
  BigCount den = boost::multiprecision::pow(BigCount(k), static_cast<unsigned>(r));
  return big_ratio_to_double(num, den);
}

BigCount partition_size(long n, long k, long r, long l) {
  if (k < 0 || k > n) throw std::domain_error("partition_size: need 0 <= k <= n");
  if (l < 0 || r < 0) return 0;
  if (l > std::min(k, r)) return 0;
  return binom(k, l) * stirling2(r, l) * factorial(l);
}

SubsetRank rank_subset(const std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  if (k > n) throw std::domain_error("rank_subset: k > n");
  for (int i = 0; i < k; ++i) {
    if (subset[i] < 0 || subset[i] >= n)
      throw std::domain_error("rank_subset: element out of range");
    if (i > 0 && subset[i] <= subset[i - 1])
      throw std::domain_error("rank_subset: subset must be strictly increasing");
  }
  (void)binom_u64(n, k);  // domain check: whole code space must be indexable
  // Lexicographic rank: count subsets that precede by choosing a smaller
  // element at the first differing position.
  std::uint64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int c = prev + 1; c < subset[i]; ++c)
      rank += static_cast<std::uint64_t>(binom(n - 1 - c, k - 1 - i).convert_to<std::uint64_t>());
    prev = subset[i];
  }
  return SubsetRank{rank, n, k};
}

std::vector<int> unrank_subset(std::uint64_t rank, int n, int k) {
  if (k < 0 || k > n) throw std::domain_error("unrank_subset: need 0 <= k <= n");
  const std::uint64_t total = binom_u64(n, k);
  if (rank >= total) throw std::domain_error("unrank_subset: rank out of range");
  std::vector<int> subset;
  subset.reserve(static_cast<std::size_t>(k));
  int c = 0;
  for (int i = 0; i < k; ++i) {
    for (;; ++c) {
      const std::uint64_t block = binom(n - 1 - c, k - 1 - i).convert_to<std::uint64_t>();
      if (rank < block) break;
      rank -= block;
    }
    subset.push_back(c++);
  }
  return subset;
}

long largest_prime_leq(long m) {
  if (m < 2) throw std::domain_error("largest_prime_leq: m must be >= 2");
  auto is_prime = [](long v) {
    if (v < 2) return false;
    if (v % 2 == 0) return v == 2;
    for (long d = 3; d * d <= v; d += 2)
      if (v % d == 0) return false;
    return true;
  };
  for (long v = m;; --v)
    if (is_prime(v)) return v;
}

double log2_big(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log2_big: argument must be positive");
  const unsigned bits = msb(v);  // floor(log2 v)
  if (bits <= 52) return std::log2(v.convert_to<double>());
  // Keep the top 53 bits; the discarded tail perturbs log2 by < 2^-52.
  const BigCount top = v >> (bits - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

double big_ratio_to_double(const BigCount& num, const BigCount& den) {
  if (den <= 0) throw std::domain_error("big_ratio_to_double: den must be positive");
  if (num < 0) throw std::domain_error("big_ratio_to_double: num must be >= 0");
  if (num == 0) return 0.0;
  return cpp_rational(num, den).convert_to<double>();
}

std::uint64_t binom_u64(int n, int k) {
  const BigCount b = binom(n, k);
  if (b > BigCount(std::numeric_limits<std::uint64_t>::max()))
    throw std::domain_error("binom_u64: count exceeds 64-bit range");
  return b.convert_to<std::uint64_t>();
}

}  // namespace motifcc
