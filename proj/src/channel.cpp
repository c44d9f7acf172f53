#include "motifcc/channel.hpp"

#include "motifcc/combinatorics.hpp"
#include "motifcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace motifcc {

void ChannelParams::validate() const {
  if (k < 1 || k >= n) throw std::domain_error("ChannelParams: need 1 <= k < n");
  if (R < 1) throw std::domain_error("ChannelParams: R must be >= 1");
  if (!(p_inter >= 0.0 && p_inter <= 1.0))
    throw std::domain_error("ChannelParams: p_inter must be in [0,1]");
}

SymbolSpace::SymbolSpace(int n, int k) : n_(n), k_(k) {
  if (k < 0 || k > n) throw std::domain_error("SymbolSpace: need 0 <= k <= n");
  size_ = binom_u64(n, k);
  flat_.resize(size_ * static_cast<std::uint64_t>(k));
  // Lex enumeration: start at {0..k-1}, advance like an odometer.
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  for (std::uint64_t r = 0; r < size_; ++r) {
    std::copy(cur.begin(), cur.end(), flat_.begin() + static_cast<std::size_t>(r * k));
    // next combination
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
}

CombinatorialSymbol SymbolSpace::symbol(std::uint64_t rank) const {
  if (rank >= size_) throw std::domain_error("SymbolSpace::symbol: rank out of range");
  const int* m = motifs_of(rank);
  return CombinatorialSymbol{std::vector<int>(m, m + k_)};
}

std::shared_ptr<const SymbolSpace> SymbolSpace::shared(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymbolSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<SymbolSpace>(n, k);
  return slot;
}

ReadObservation sample_reads(const CombinatorialSymbol& x, const ChannelParams& params,
                             RandomStream& stream) {
  params.validate();
  if (static_cast<int>(x.motifs.size()) != params.k)
    throw std::domain_error("sample_reads: symbol size does not match params.k");
  ReadObservation y;
  y.counts.assign(static_cast<std::size_t>(params.n), 0);
  for (int r = 0; r < params.R; ++r) {
    int m;
    if (params.p_inter > 0.0 && stream.bernoulli(params.p_inter)) {
      m = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(params.n)));
    } else {
      m = x.motifs[stream.uniform_below(static_cast<std::uint64_t>(params.k))];
    }
    ++y.counts[static_cast<std::size_t>(m)];
  }
  y.total = params.R;
  return y;
}

std::vector<std::uint64_t> compatible_set(const ReadObservation& y, int n, int k) {
  std::vector<int> observed;
  for (int m = 0; m < n; ++m)
    if (y.counts[static_cast<std::size_t>(m)] > 0) observed.push_back(m);
  const int l = static_cast<int>(observed.size());
  if (l > k) return {};
  // Complement motifs, in order; choose k-l of them and merge with observed.
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n - l));
  for (int m = 0; m < n; ++m)
    if (y.counts[static_cast<std::size_t>(m)] == 0) rest.push_back(m);

  std::vector<std::uint64_t> ranks;
  const int need = k - l;
  std::vector<int> pick(static_cast<std::size_t>(need));
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<int> subset(static_cast<std::size_t>(k));
  const int nrest = static_cast<int>(rest.size());
  for (;;) {
    std::size_t a = 0, b = 0, w = 0;
    while (a < observed.size() && b < pick.size()) {
      const int cand = rest[static_cast<std::size_t>(pick[b])];
      if (observed[a] < cand) subset[w++] = observed[a++];
      else subset[w++] = cand, ++b;
    }
    while (a < observed.size()) subset[w++] = observed[a++];
    while (b < pick.size()) subset[w++] = rest[static_cast<std::size_t>(pick[b++])];
    ranks.push_back(rank_subset(subset, n).rank);
    if (need == 0) break;
    int i = need - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == nrest - need + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < need; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

PosteriorVector posterior(const ReadObservation& y, const ChannelParams& params) {
  return posterior(y, params, *SymbolSpace::shared(params.n, params.k));
}

PosteriorVector posterior(const ReadObservation& y, const ChannelParams& params,
                          const SymbolSpace& space) {
  params.validate();
  if (space.n() != params.n || space.k() != params.k)
    throw std::domain_error("posterior: symbol space does not match params");
  const double log_in = std::log(params.pi_in());    // finite: pi_in >= 1/k > 0
  const double log_out = std::log(params.pi_out());  // -inf when p_inter = 0
  const std::uint64_t count = space.size();
  const int total = y.total;

  std::vector<double> logw(count);
  double maxw = -std::numeric_limits<double>::infinity();
  for (std::uint64_t r = 0; r < count; ++r) {
    const int s = space.match_count(r, y.counts);
    // Avoid 0 * (-inf) when all reads match.
    double w = s * log_in;
    if (total - s > 0) w += (total - s) * log_out;
    logw[r] = w;
    maxw = std::max(maxw, w);
  }
  if (!(maxw > -std::numeric_limits<double>::infinity()))
    throw InconsistencyError("posterior: observation incompatible with every symbol");

  PosteriorVector out;
  out.probs.resize(count);
  double sum = 0.0;
  for (std::uint64_t r = 0; r < count; ++r) {
    const double p = std::exp(logw[r] - maxw);
    out.probs[r] = p;
    sum += p;
  }
  const double inv = 1.0 / sum;
  for (double& p : out.probs) p *= inv;
  return out;
}

double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (const double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

std::optional<CombinatorialSymbol> hard_decision_demap(const ReadObservation& y, int k, int t) {
  if (t < 1) throw std::domain_error("hard_decision_demap: t must be >= 1");
  const int n = static_cast<int>(y.counts.size());
  if (k < 1 || k > n) throw std::domain_error("hard_decision_demap: need 1 <= k <= n");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return y.counts[static_cast<std::size_t>(a)] > y.counts[static_cast<std::size_t>(b)];
  });
  const int kth = y.counts[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
  if (kth < t) return std::nullopt;  // not enough well-supported motifs
  if (k < n && y.counts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] == kth)
    return std::nullopt;  // ambiguous top-k boundary
  CombinatorialSymbol x;
  x.motifs.assign(order.begin(), order.begin() + k);
  std::sort(x.motifs.begin(), x.motifs.end());
  return x;
}

std::vector<ReadObservation> pipeline_sample(const std::vector<CombinatorialSymbol>& block,
                                             int n, int reads, const VisibilityProfile& profile,
                                             double p_inter, RandomStream& stream) {
  if (profile.size() != block.size())
    throw std::domain_error("pipeline_sample: profile length must equal block length");
  if (!(p_inter >= 0.0 && p_inter <= 1.0))
    throw std::domain_error("pipeline_sample: p_inter must be in [0,1]");
  for (const auto& x : block)
    for (const int m : x.motifs)
      if (m < 0 || m >= n) throw std::domain_error("pipeline_sample: motif outside library");
  std::vector<ReadObservation> out(block.size());
  for (auto& y : out) y.counts.assign(static_cast<std::size_t>(n), 0);

  for (int r = 0; r < reads; ++r) {
    for (std::size_t j = 0; j < block.size(); ++j) {
      const auto& motifs = block[j].motifs;
      int m = motifs[stream.uniform_below(motifs.size())];
      if (!stream.bernoulli(profile[j])) continue;  // cycle invisible in this read
      if (p_inter > 0.0 && stream.bernoulli(p_inter))
        m = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(n)));
      ++out[j].counts[static_cast<std::size_t>(m)];
      ++out[j].total;
    }
  }
  return out;
}

}  // namespace motifcc
