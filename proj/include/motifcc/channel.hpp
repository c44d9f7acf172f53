#pragma once

#include "motifcc/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace motifcc {

// Channel CC(n,k,R) with optional interference: each of R reads draws
// uniformly from the k motifs of the input symbol, except that with
// probability p_inter the read is drawn uniformly from the whole n-motif
// library (input motifs included).
struct ChannelParams {
  int n = 8;
  int k = 4;
  int R = 1;
  double p_inter = 0.0;

  void validate() const;
  // Per-read probability of seeing a specific motif inside / outside x.
  double pi_in() const { return p_inter / n + (1.0 - p_inter) / k; }
  double pi_out() const { return p_inter / n; }
};

// A k-subset of the n-motif library; motifs sorted ascending.
struct CombinatorialSymbol {
  std::vector<int> motifs;
};

// Channel output stored as per-motif counts (the decoders and posteriors
// depend on y only through counts, and R can dwarf n).
struct ReadObservation {
  std::vector<int> counts;  // length n
  int total = 0;            // sum of counts
};

// Posterior over all binom(n,k) symbols in lexicographic (rank) order.
struct PosteriorVector {
  std::vector<double> probs;
};

// Per-cycle visibility probabilities for the pipeline simulator.
using VisibilityProfile = std::vector<double>;

// Enumeration of all k-subsets of [0,n) in lex order, with flat storage for
// cheap per-symbol match counting. Immutable, shareable across threads.
class SymbolSpace {
 public:
  SymbolSpace(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t size() const { return size_; }

  CombinatorialSymbol symbol(std::uint64_t rank) const;
  const int* motifs_of(std::uint64_t rank) const { return flat_.data() + rank * k_; }

  // s(x, y) = number of reads in y that landed on motifs of x.
  int match_count(std::uint64_t rank, const std::vector<int>& counts) const {
    const int* m = motifs_of(rank);
    int s = 0;
    for (int j = 0; j < k_; ++j) s += counts[static_cast<std::size_t>(m[j])];
    return s;
  }

  // Process-wide cache keyed by (n, k).
  static std::shared_ptr<const SymbolSpace> shared(int n, int k);

 private:
  int n_;
  int k_;
  std::uint64_t size_;
  std::vector<int> flat_;  // size_ * k_ motif ids
};

// Draw one channel observation for symbol x.
ReadObservation sample_reads(const CombinatorialSymbol& x, const ChannelParams& params,
                             RandomStream& stream);

// Ranks of all k-subsets containing every motif observed in y. Empty when y
// shows more than k distinct motifs (interference or misuse; caller decides).
std::vector<std::uint64_t> compatible_set(const ReadObservation& y, int n, int k);

// Exact symbol posterior P(x|y) under the interference channel, computed in
// log domain. Throws InconsistencyError when no symbol can explain y
// (possible only for p_inter = 0).
PosteriorVector posterior(const ReadObservation& y, const ChannelParams& params);
PosteriorVector posterior(const ReadObservation& y, const ChannelParams& params,
                          const SymbolSpace& space);

// Entropy (bits) of a probability vector; 0·log 0 = 0.
double entropy_bits(const std::vector<double>& probs);

// Threshold demapper: the k most frequent motifs, provided each occurs >= t
// times and the selection is unambiguous (no tie across the k-th/(k+1)-th
// boundary); std::nullopt is an erasure.
std::optional<CombinatorialSymbol> hard_decision_demap(const ReadObservation& y, int k, int t);

// Block-level simulator: `reads` strands, each visiting every cycle of the
// block. Per cycle: draw a motif uniformly from that cycle's symbol, keep it
// with the cycle's visibility probability, then (visibility first,
// interference second) replace it with a uniform draw from the n-motif
// library. Invisible cycles record nothing.
std::vector<ReadObservation> pipeline_sample(const std::vector<CombinatorialSymbol>& block,
                                             int n, int reads, const VisibilityProfile& profile,
                                             double p_inter, RandomStream& stream);

}  // namespace motifcc
