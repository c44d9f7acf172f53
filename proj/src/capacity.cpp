#include "motifcc/capacity.hpp"

#include "motifcc/channel.hpp"
#include "motifcc/combinatorics.hpp"
#include "motifcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace motifcc {

namespace {

void check_cc_domain(int n, int k, int R) {
  if (!(1 <= k && k < n)) throw std::domain_error("capacity: need 1 <= k < n");
  if (R < 1) throw std::domain_error("capacity: need R >= 1");
}

// Runs body(trial) for trial = 0..trials-1, possibly across OpenMP workers.
// Each body call must write only trial-indexed state (counter-based streams),
// so the schedule cannot affect results.
template <typename Body>
void parallel_trials(std::int64_t trials, int threads, Body&& body) {
#ifdef _OPENMP
  if (threads == 1) {
    for (std::int64_t i = 0; i < trials; ++i) body(i);
    return;
  }
  if (threads > 0) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t i = 0; i < trials; ++i) body(i);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < trials; ++i) body(i);
  }
#else
  (void)threads;
  for (std::int64_t i = 0; i < trials; ++i) body(i);
#endif
}

// Deterministic two-pass mean/sd reduction in trial order.
McEstimate reduce_mean_ci(const std::vector<double>& values) {
  const std::int64_t m = static_cast<std::int64_t>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double var = m > 1 ? ss / static_cast<double>(m - 1) : 0.0;
  McEstimate e;
  e.value = mean;
  e.ci95 = 1.96 * std::sqrt(var / static_cast<double>(m));
  return e;
}

bool nbec_t_trial_ok(int k, int R, int t, RandomStream& stream, std::vector<int>& counts) {
  counts.assign(static_cast<std::size_t>(k), 0);
  for (int r = 0; r < R; ++r)
    ++counts[stream.uniform_below(static_cast<std::uint64_t>(k))];
  for (int j = 0; j < k; ++j)
    if (counts[static_cast<std::size_t>(j)] < t) return false;
  return true;
}

McEstimate nbec_t_impl(int n, int k, int R, int t, std::int64_t trials, std::uint64_t seed,
                       int threads, bool serial) {
  check_cc_domain(n, k, R);
  if (t < 1) throw std::domain_error("capacity_nbec_t: t must be >= 1");
  if (trials < 1) throw std::domain_error("capacity_nbec_t: trials must be >= 1");
  std::vector<unsigned char> ok(static_cast<std::size_t>(trials));
  auto body = [&](std::int64_t i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    std::vector<int> counts;
    ok[static_cast<std::size_t>(i)] = nbec_t_trial_ok(k, R, t, stream, counts) ? 1 : 0;
  };
  if (serial) {
    for (std::int64_t i = 0; i < trials; ++i) body(i);
  } else {
    parallel_trials(trials, threads, body);
  }
  std::int64_t erased = 0;
  for (const unsigned char v : ok) erased += (v == 0);
  const double eps = static_cast<double>(erased) / static_cast<double>(trials);
  const double bits = log2_big(binom(n, k));
  McEstimate e;
  e.value = bits * (1.0 - eps);
  e.ci95 = bits * 1.96 * std::sqrt(eps * (1.0 - eps) / static_cast<double>(trials));
  return e;
}

McEstimate interference_impl(int n, int k, int R, double p_inter, std::int64_t samples,
                             std::uint64_t seed, int threads, bool serial) {
  check_cc_domain(n, k, R);
  if (samples < 1) throw std::domain_error("capacity_cc_interference: samples must be >= 1");
  ChannelParams params{n, k, R, p_inter};
  params.validate();
  const auto space = SymbolSpace::shared(n, k);
  std::vector<double> cond_entropy(static_cast<std::size_t>(samples));
  auto body = [&](std::int64_t i) {
    RandomStream stream(seed, static_cast<std::uint64_t>(i));
    const std::uint64_t x = stream.uniform_below(space->size());
    const ReadObservation y = sample_reads(space->symbol(x), params, stream);
    const PosteriorVector post = posterior(y, params, *space);
    cond_entropy[static_cast<std::size_t>(i)] = entropy_bits(post.probs);
  };
  if (serial) {
    for (std::int64_t i = 0; i < samples; ++i) body(i);
  } else {
    parallel_trials(samples, threads, body);
  }
  McEstimate h = reduce_mean_ci(cond_entropy);
  McEstimate e;
  e.value = log2_big(binom(n, k)) - h.value;
  e.ci95 = h.ci95;
  return e;
}

}  // namespace

void CostModel::validate() const {
  if (!(lambda >= 0.0)) throw std::domain_error("CostModel: lambda must be >= 0");
  if (!(p_read > 0.0)) throw std::domain_error("CostModel: p_read must be > 0");
}

double capacity_cc(int n, int k, int R) {
  check_cc_domain(n, k, R);
  const long lmax = std::min<long>(k, R);
  const std::vector<BigCount> srow = stirling_row(R, lmax);
  const BigCount kR = boost::multiprecision::pow(BigCount(k), static_cast<unsigned>(R));
  double cond = 0.0;
  for (long l = 1; l <= lmax; ++l) {
    const BigCount count = binom(k, l) * srow[static_cast<std::size_t>(l)] * factorial(l);
    const BigCount remaining = binom(n - l, static_cast<long>(k) - l);
    if (remaining == 1) continue;  // log2(1) = 0; also covers l = k
    cond += big_ratio_to_double(count, kR) * log2_big(remaining);
  }
  return log2_big(binom(n, k)) - cond;
}

double capacity_nbec(int n, int k, int R) {
  check_cc_domain(n, k, R);
  return log2_big(binom(n, k)) * coupon_cdf(k, R);
}

McEstimate capacity_nbec_t(int n, int k, int R, int t, std::int64_t trials, std::uint64_t seed,
                           int threads) {
  return nbec_t_impl(n, k, R, t, trials, seed, threads, /*serial=*/false);
}

McEstimate capacity_nbec_t_serial(int n, int k, int R, int t, std::int64_t trials,
                                  std::uint64_t seed) {
  return nbec_t_impl(n, k, R, t, trials, seed, 1, /*serial=*/true);
}

McEstimate capacity_cc_interference(int n, int k, int R, double p_inter, std::int64_t samples,
                                    std::uint64_t seed, int threads) {
  return interference_impl(n, k, R, p_inter, samples, seed, threads, /*serial=*/false);
}

McEstimate capacity_cc_interference_serial(int n, int k, int R, double p_inter,
                                           std::int64_t samples, std::uint64_t seed) {
  return interference_impl(n, k, R, p_inter, samples, seed, 1, /*serial=*/true);
}

double capacity_split(int n_sub, int k_sub, int a, int R) {
  if (a < 1) throw std::domain_error("capacity_split: a must be >= 1");
  check_cc_domain(n_sub, k_sub, R);
  if (a == 1) return capacity_cc(n_sub, k_sub, R);  // degenerate mixture, bit-exact
  const BigCount aR = boost::multiprecision::pow(BigCount(a), static_cast<unsigned>(R));
  double total = 0.0;
  for (int r = 1; r <= R; ++r) {
    // Exact Binomial(R, 1/a) pmf at r: binom(R,r)·(a-1)^(R-r) / a^R.
    const BigCount w =
        binom(R, r) * boost::multiprecision::pow(BigCount(a - 1), static_cast<unsigned>(R - r));
    total += capacity_cc(n_sub, k_sub, r) * big_ratio_to_double(w, aR);
  }
  return static_cast<double>(a) * total;
}

double max_density(int n, int k) {
  if (!(1 <= k && k <= n)) throw std::domain_error("max_density: need 1 <= k <= n");
  return log2_big(binom(n, k));
}

double split_density(int n_sub, int k_sub, int n) {
  if (!(1 <= k_sub && k_sub <= n_sub)) throw std::domain_error("split_density: bad sub-library");
  if (n < 1) throw std::domain_error("split_density: n must be >= 1");
  return static_cast<double>(n) * log2_big(binom(n_sub, k_sub)) / static_cast<double>(n_sub);
}

RwOptimum rw_optimize(const CapacityCurve& curve, const CostModel& cost) {
  cost.validate();
  if (curve.points.empty()) throw std::domain_error("rw_optimize: empty curve");
  const auto& pts = curve.points;
  int best = -1;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].bits_per_cycle > 0.0)) continue;
    const double p =
        cost.p_read * (cost.lambda + static_cast<double>(pts[i].R)) / pts[i].bits_per_cycle;
    if (best < 0 || p < best_cost) {  // strict <: ties go to the smaller R seen first
      best = static_cast<int>(i);
      best_cost = p;
    }
  }
  if (best < 0) throw std::domain_error("rw_optimize: no point with positive capacity");

  // Tangency diagnostic C(R*) = (lambda+R*)·C'(R*) with a central-difference
  // slope on the grid (one-sided at the ends).
  const std::size_t i = static_cast<std::size_t>(best);
  const std::size_t lo = i > 0 ? i - 1 : i;
  const std::size_t hi = i + 1 < pts.size() ? i + 1 : i;
  double slope = 0.0;
  if (hi != lo)
    slope = (pts[hi].bits_per_cycle - pts[lo].bits_per_cycle) /
            static_cast<double>(pts[hi].R - pts[lo].R);
  RwOptimum out;
  out.R_star = pts[i].R;
  out.total_cost = best_cost;
  out.stationarity_residual =
      std::abs(pts[i].bits_per_cycle -
               (cost.lambda + static_cast<double>(pts[i].R)) * slope);
  return out;
}

}  // namespace motifcc
