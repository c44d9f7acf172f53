#pragma once

#include "motifcc/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace motifcc {

// Coupled-chain template: one CN group and d_c/d_v VN slots per spatial
// position; a VN at position i sends one edge to each CN position i..i+d_v-1.
struct Protograph {
  int d_v;
  int d_c;
  int L_p;

  Protograph(int dv, int dc, int lp);
  int vn_positions() const { return L_p; }
  int cn_positions() const { return L_p + d_v - 1; }
  std::vector<int> vn_connections(int pos) const;  // CN positions reached from VN position pos
  std::vector<int> cn_sources(int pos) const;      // VN positions feeding CN position pos
};

// Immutable sparse parity-check matrix over GF(q) with both adjacency
// directions precomputed (entries sorted row-major; per-column edge lists).
class ParityCheckMatrix {
 public:
  struct Entry {
    int row;
    int col;
    int val;  // in [1, q)
  };

  ParityCheckMatrix(int q, int M, int N, std::vector<Entry> entries);

  int q() const { return q_; }
  int rows() const { return M_; }
  int cols() const { return N_; }
  std::size_t num_edges() const { return entries_.size(); }

  const std::vector<Entry>& entries() const { return entries_; }
  // Row-major CSR: edges of row i are entries_[row_ptr[i] .. row_ptr[i+1]).
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  // Edge ids (indices into entries_) incident to column j.
  const std::vector<std::size_t>& col_edges(int j) const {
    return col_edges_[static_cast<std::size_t>(j)];
  }
  int row_degree(int i) const {
    return static_cast<int>(row_ptr_[static_cast<std::size_t>(i) + 1] -
                            row_ptr_[static_cast<std::size_t>(i)]);
  }
  int col_degree(int j) const { return static_cast<int>(col_edges_[static_cast<std::size_t>(j)].size()); }

  // H·word == 0 over GF(q)?
  bool satisfies(const std::vector<int>& word) const;

  // Line-oriented text: `q M N`, then `row col value` ascending (row, col).
  void save(std::ostream& out) const;
  static ParityCheckMatrix load(std::istream& in);

 private:
  int q_;
  int M_;
  int N_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::vector<std::size_t>> col_edges_;
};

// Copy-and-permute lifting of the coupled protograph. All entries are 1
// (binary H viewed over GF(q)); lifting factor is N_p·d_v/d_c. Optional
// girth conditioning re-draws slot assignments to remove 4-cycles
// (best-effort, bounded passes).
ParityCheckMatrix build_sc_ldpc(int d_v, int d_c, int L_p, int N_p, int q, RandomStream& stream,
                                bool girth_conditioning = false);

// Count distinct column pairs sharing at least two rows (4-cycles).
std::size_t count_4cycles(const ParityCheckMatrix& H);

// 1 − (d_v/d_c)(1 + (d_v−1)/L_p); may be negative for short chains.
double design_rate(int d_v, int d_c, int L_p);

// Transmitted-symbol view of a codeword: symbols[j] = (c_j + mask_j) mod
// alphabet, with the mask drawn from the seed.
struct MaskedCodeword {
  std::vector<std::uint64_t> symbols;
  std::vector<std::uint64_t> mask;
};

MaskedCodeword apply_mask(const std::vector<int>& codeword, int q, std::uint64_t alphabet,
                          std::uint64_t mask_seed);

// Posterior relabelling after mask removal: out[c] = probs[(c + mask) mod
// alphabet] for c in [0,q), renormalized. Throws InconsistencyError when all
// surviving mass is zero (everything landed on unassigned labels).
std::vector<double> unmask_posterior(const std::vector<double>& probs, std::uint64_t mask, int q);

// Set relabelling: (rank − mask) mod alphabet, keeping labels < q.
std::vector<int> unmask_labels(const std::vector<std::uint64_t>& ranks, std::uint64_t mask,
                               int q, std::uint64_t alphabet);

// Systematic-up-to-permutation encoder built by Gaussian elimination over
// GF(q). Rank deficiency lengthens the message (reported via
// message_length()), never fails.
class Encoder {
 public:
  explicit Encoder(const ParityCheckMatrix& H);

  int rank() const { return rank_; }
  int message_length() const { return static_cast<int>(free_cols_.size()); }
  const std::vector<int>& free_columns() const { return free_cols_; }

  std::vector<int> encode(const std::vector<int>& message) const;
  std::vector<int> extract_message(const std::vector<int>& codeword) const;

 private:
  int q_;
  int n_;
  int rank_;
  std::vector<int> pivot_cols_;                        // ascending
  std::vector<int> free_cols_;                         // ascending
  std::vector<std::vector<std::pair<int, int>>> rows_; // echelon rows, (col,val) sorted
};

// One-shot convenience wrapper around Encoder.
std::vector<int> encode(const ParityCheckMatrix& H, const std::vector<int>& message);

}  // namespace motifcc
