#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "motifcc/combinatorics.hpp"
#include "motifcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

using namespace motifcc;

namespace {

// Independent Stirling oracle: S(r,l) = (1/l!) sum_j (-1)^j binom(l,j) (l-j)^r.
BigCount stirling2_alternating(int r, int l) {
  BigCount sum = 0;
  for (int j = 0; j <= l; ++j) {
    const BigCount term = binom(l, j) * boost::multiprecision::pow(BigCount(l - j),
                                                                   static_cast<unsigned>(r));
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum / factorial(l);
}

}  // namespace

TEST_CASE("binomial coefficients") {
  CHECK(binom(8, 4) == 70);
  CHECK(binom(0, 0) == 1);
  CHECK(binom(5, 0) == 1);
  CHECK(binom(5, 5) == 1);
  CHECK(binom(5, 6) == 0);
  CHECK(binom(100, 50) == BigCount("100891344545564193334812497256"));
  // Pascal identity on a grid.
  for (int n = 1; n <= 20; ++n)
    for (int k = 1; k <= n; ++k) CHECK(binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k));
}

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(factorial(20) == BigCount("2432902008176640000"));
}

TEST_CASE("Stirling numbers of the second kind") {
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(6, 3) == 90);
  CHECK(stirling2(6, 4) == 65);
  for (int r = 0; r <= 12; ++r) {
    const std::vector<BigCount> row = stirling_row(r, 12);
    for (int l = 0; l <= 12; ++l) {
      CHECK(row[static_cast<std::size_t>(l)] == stirling2(r, l));
      if (l >= 1) CHECK(stirling2(r, l) == stirling2_alternating(r, l));
    }
  }
  // Partition classes of [k]^r by image size: k^r = sum_l binom(k,l) S(r,l) l!.
  for (int k = 1; k <= 6; ++k)
    for (int r = 0; r <= 8; ++r) {
      BigCount total = 0;
      for (int l = 0; l <= k; ++l) total += binom(k, l) * stirling2(r, l) * factorial(l);
      CHECK(total == boost::multiprecision::pow(BigCount(k), static_cast<unsigned>(r)));
    }
}

TEST_CASE("coupon collector CDF") {
  // Exhaustive enumeration of all 4^6 draw sequences.
  int covered = 0;
  for (int seq = 0; seq < 4096; ++seq) {
    int s = seq, mask = 0;
    for (int d = 0; d < 6; ++d) {
      mask |= 1 << (s & 3);
      s >>= 2;
    }
    if (mask == 0xF) ++covered;
  }
  CHECK(coupon_cdf(4, 6) == doctest::Approx(covered / 4096.0).epsilon(1e-15));
  CHECK(coupon_cdf(4, 6) == doctest::Approx(1560.0 / 4096.0).epsilon(1e-15));

  CHECK(coupon_cdf(1, 1) == doctest::Approx(1.0));
  CHECK(coupon_cdf(4, 3) == 0.0);
  for (int R = 1; R < 40; ++R) CHECK(coupon_cdf(4, R) <= coupon_cdf(4, R + 1) + 1e-15);
  CHECK(coupon_cdf(4, 200) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partition sizes") {
  CHECK(partition_size(8, 4, 6, 3) == 2160);  // binom(4,3)*S(6,3)*3! = 4*90*6
  for (int R = 1; R <= 8; ++R) {
    BigCount total = 0;
    for (int l = 0; l <= 4; ++l) total += partition_size(8, 4, R, l);
    CHECK(total == boost::multiprecision::pow(BigCount(4), static_cast<unsigned>(R)));
  }
}

TEST_CASE("subset rank and unrank") {
  CHECK(rank_subset({0, 1, 2, 3}, 8).rank == 0);
  CHECK(rank_subset({4, 5, 6, 7}, 8).rank == 69);
  for (int n : {6, 8}) {
    for (int k = 1; k < n; ++k) {
      const std::uint64_t total = binom_u64(n, k);
      std::vector<int> prev;
      for (std::uint64_t r = 0; r < total; ++r) {
        const std::vector<int> s = unrank_subset(r, n, k);
        CHECK(static_cast<int>(s.size()) == k);
        CHECK(std::is_sorted(s.begin(), s.end()));
        CHECK(rank_subset(s, n).rank == r);
        if (!prev.empty()) CHECK(std::lexicographical_compare(prev.begin(), prev.end(),
                                                              s.begin(), s.end()));
        prev = s;
      }
    }
  }
  CHECK_THROWS_AS(unrank_subset(70, 8, 4), std::domain_error);
}

TEST_CASE("largest prime below") {
  CHECK(largest_prime_leq(70) == 67);
  CHECK(largest_prime_leq(2) == 2);
  CHECK(largest_prime_leq(97) == 97);
  CHECK(largest_prime_leq(100) == 97);
  CHECK_THROWS_AS(largest_prime_leq(1), std::domain_error);
}

TEST_CASE("big-integer logarithms and ratios") {
  CHECK(log2_big(BigCount(1) << 100) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(log2_big(BigCount(70)) == doctest::Approx(std::log2(70.0)).epsilon(1e-14));
  const double lg_oracle =
      (std::lgamma(81.0) - 2.0 * std::lgamma(41.0)) / std::log(2.0);
  CHECK(log2_big(binom(80, 40)) == doctest::Approx(lg_oracle).epsilon(1e-12));
  CHECK(big_ratio_to_double(BigCount(1560), BigCount(4096)) ==
        doctest::Approx(1560.0 / 4096.0).epsilon(1e-15));
}

TEST_CASE("binom_u64 overflow guard") {
  CHECK(binom_u64(60, 30) == 118264581564861424ULL);
  CHECK_THROWS_AS(binom_u64(70, 35), std::domain_error);
}

TEST_CASE("random streams are counter-based and deterministic") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) all_equal = false;
    if (va != c.next_u64()) any_diff = true;
  }
  CHECK(all_equal);
  CHECK(any_diff);

  RandomStream d(1, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(d.uniform_below(7) < 7);
    const double u = d.uniform_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // Rough uniformity of uniform_below (chi-square-free sanity bound).
  RandomStream e(3, 1);
  std::vector<int> hist(10, 0);
  for (int i = 0; i < 100000; ++i) ++hist[static_cast<std::size_t>(e.uniform_below(10))];
  for (const int h : hist) {
    CHECK(h > 9000);
    CHECK(h < 11000);
  }
  CHECK(derive_seed(5, 1) != derive_seed(5, 2));
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
}
