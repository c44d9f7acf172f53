#pragma once

#include "motifcc/code.hpp"
#include "motifcc/conv.hpp"

#include <cstdint>
#include <vector>

namespace motifcc {

enum class DecodeStatus { Decoded, Stalled, MaxIters };

struct DecodeResult {
  DecodeStatus status;
  std::vector<int> codeword;  // final tentative word (valid iff status == Decoded)
  int iterations;
};

// Subset of [0,q) stored as a bitset, with the modular set algebra the
// set-based decoder needs.
class PossibilitySet {
 public:
  PossibilitySet() = default;
  explicit PossibilitySet(int q) : q_(q), bits_((static_cast<std::size_t>(q) + 63) / 64, 0) {}

  static PossibilitySet full(int q);
  static PossibilitySet from_labels(const std::vector<int>& labels, int q);

  int q() const { return q_; }
  int size() const;
  bool empty() const;
  bool is_full() const { return size() == q_; }
  bool contains(int a) const {
    return (bits_[static_cast<std::size_t>(a) >> 6] >> (a & 63)) & 1;
  }
  void insert(int a) { bits_[static_cast<std::size_t>(a) >> 6] |= std::uint64_t{1} << (a & 63); }
  // Returns -1 unless the set is a singleton {a}, in which case a.
  int singleton_value() const;
  std::vector<int> labels() const;

  void intersect_with(const PossibilitySet& other);
  void union_with_rotated(const PossibilitySet& other, int shift);  // this |= (other + shift)
  PossibilitySet negated() const;  // {(q - a) mod q}

  bool operator==(const PossibilitySet& other) const {
    return q_ == other.q_ && bits_ == other.bits_;
  }

 private:
  int q_ = 0;
  std::vector<std::uint64_t> bits_;
};

// {a + b mod q : a in A, b in B}; empty if either is empty.
PossibilitySet sumset(const PossibilitySet& A, const PossibilitySet& B);
// {c·a mod q : a in A}, c in GF(q) \ {0}.
PossibilitySet scale_set(int c, const PossibilitySet& A);

// Per-iteration state snapshots for cross-validation of the two decoders.
struct SetBpTrace {
  // vn_sets[m][j]: S_j after the VN update of iteration m+1.
  std::vector<std::vector<PossibilitySet>> vn_sets;
};
struct QspaTrace {
  // beliefs[m][j]: unnormalized P_j ⊙ Π_i S_ij after the CN update of
  // iteration m+1 (the tentative-decision vector).
  std::vector<std::vector<std::vector<double>>> beliefs;
};

// Set-based BP: CN messages are scaled sumsets of the neighbors' sets, VN
// update intersects. Decoded when all sets are singletons satisfying H;
// Stalled when an iteration changes no set size.
DecodeResult set_bp_decode(const ParityCheckMatrix& H,
                           const std::vector<PossibilitySet>& initial_sets, int max_iters,
                           SetBpTrace* trace = nullptr);

using BeliefMessage = std::vector<double>;

// q-ary sum-product decoder; CN updates via circular convolution (prefix/
// suffix products per check), VN updates renormalized, tentative decision
// each iteration with ties toward the smallest element.
DecodeResult qspa_decode(const ParityCheckMatrix& H, const std::vector<BeliefMessage>& priors,
                         int max_iters, ConvMode conv_mode = ConvMode::Auto,
                         QspaTrace* trace = nullptr);

// Standalone CN update: permute each incoming message by its coefficient,
// circularly convolve, and read out through the output edge's coefficient.
BeliefMessage cn_update_conv(const std::vector<BeliefMessage>& incoming,
                             const std::vector<int>& h_in, int h_out, int q,
                             ConvMode mode = ConvMode::Auto);

}  // namespace motifcc
