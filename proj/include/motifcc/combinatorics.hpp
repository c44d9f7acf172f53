#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace motifcc {

// Exact integer type for combinatorial counts (these overflow u64 well within
// the supported parameter ranges, e.g. binom(80,40) or Stirling numbers at
// R ~ hundreds).
using BigCount = boost::multiprecision::cpp_int;

// binom(n, k): exact binomial coefficient; 0 when k < 0 or k > n. n >= 0.
BigCount binom(long n, long k);

// factorial(n), n >= 0.
BigCount factorial(long n);

// stirling2(r, l): Stirling number of the second kind S(r, l) — partitions of
// an r-set into l nonempty unlabeled blocks. Recurrence S(r,l) =
// l*S(r-1,l) + S(r-1,l-1); S(0,0)=1.
BigCount stirling2(long r, long l);

// Full row S(r, 0..lmax) computed in one pass (cheaper than repeated calls).
std::vector<BigCount> stirling_row(long r, long lmax);

// Coupon-collector CDF: probability that r uniform draws from a k-set cover
// all k elements = S(r,k) * k! / k^r. Exact rational evaluated to double.
double coupon_cdf(long k, long r);

// Number of length-r sequences over a k-alphabet that use exactly l distinct
// symbols = binom(k,l) * S(r,l) * l!.
BigCount partition_size(long n, long k, long r, long l);

// Lexicographic rank of a sorted k-subset of {0..n-1} within the
// combinatorial number system ordering; total count binom(n,k) must fit u64.
struct SubsetRank {
  std::uint64_t rank;
  int n;
  int k;
};
SubsetRank rank_subset(const std::vector<int>& subset, int n);
std::vector<int> unrank_subset(std::uint64_t rank, int n, int k);

// Largest prime <= m (m >= 2). Trial division; intended for alphabet sizing.
long largest_prime_leq(long m);

// log2 of a positive big integer, accurate to ~1 ulp (53-bit mantissa plus
// exact exponent).
double log2_big(const BigCount& v);

// Exact rational num/den (den > 0, num >= 0) rounded to nearest double.
double big_ratio_to_double(const BigCount& num, const BigCount& den);

// binom(n,k) narrowed to u64; throws std::domain_error if it does not fit.
std::uint64_t binom_u64(int n, int k);

}  // namespace motifcc
