#include "motifcc/code.hpp"

#include "motifcc/errors.hpp"
#include "motifcc/gf.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace motifcc {

Protograph::Protograph(int dv, int dc, int lp) : d_v(dv), d_c(dc), L_p(lp) {
  if (d_v < 2) throw std::domain_error("Protograph: d_v must be >= 2");
  if (d_c % d_v != 0) throw std::domain_error("Protograph: d_c must be divisible by d_v");
  if (L_p < 1) throw std::domain_error("Protograph: L_p must be >= 1");
}

std::vector<int> Protograph::vn_connections(int pos) const {
  if (pos < 0 || pos >= L_p) throw std::domain_error("Protograph: VN position out of range");
  std::vector<int> out;
  for (int s = 0; s < d_v; ++s) out.push_back(pos + s);
  return out;
}

std::vector<int> Protograph::cn_sources(int pos) const {
  if (pos < 0 || pos >= cn_positions()) throw std::domain_error("Protograph: CN position out of range");
  std::vector<int> out;
  for (int s = d_v - 1; s >= 0; --s) {
    const int vp = pos - s;
    if (vp >= 0 && vp < L_p) out.push_back(vp);
  }
  return out;
}

ParityCheckMatrix::ParityCheckMatrix(int q, int M, int N, std::vector<Entry> entries)
    : q_(q), M_(M), N_(N), entries_(std::move(entries)) {
  if (!is_prime(q_)) throw std::domain_error("ParityCheckMatrix: q must be prime");
  if (M_ < 1 || N_ < 1) throw std::domain_error("ParityCheckMatrix: bad dimensions");
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(static_cast<std::size_t>(M_) + 1, 0);
  col_edges_.assign(static_cast<std::size_t>(N_), {});
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const Entry& en = entries_[e];
    if (en.row < 0 || en.row >= M_ || en.col < 0 || en.col >= N_)
      throw std::domain_error("ParityCheckMatrix: entry out of range");
    if (en.val < 1 || en.val >= q_)
      throw std::domain_error("ParityCheckMatrix: entry value must be in [1, q)");
    if (e > 0 && entries_[e - 1].row == en.row && entries_[e - 1].col == en.col)
      throw std::domain_error("ParityCheckMatrix: duplicate entry");
    ++row_ptr_[static_cast<std::size_t>(en.row) + 1];
    col_edges_[static_cast<std::size_t>(en.col)].push_back(e);
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(M_); ++i) row_ptr_[i + 1] += row_ptr_[i];
}

bool ParityCheckMatrix::satisfies(const std::vector<int>& word) const {
  if (static_cast<int>(word.size()) != N_)
    throw std::domain_error("ParityCheckMatrix::satisfies: word length mismatch");
  for (int i = 0; i < M_; ++i) {
    long long acc = 0;
    for (std::size_t e = row_ptr_[static_cast<std::size_t>(i)];
         e < row_ptr_[static_cast<std::size_t>(i) + 1]; ++e) {
      const Entry& en = entries_[e];
      acc += static_cast<long long>(en.val) * word[static_cast<std::size_t>(en.col)];
    }
    if (acc % q_ != 0) return false;
  }
  return true;
}

void ParityCheckMatrix::save(std::ostream& out) const {
  out << q_ << ' ' << M_ << ' ' << N_ << '\n';
  for (const Entry& en : entries_) out << en.row << ' ' << en.col << ' ' << en.val << '\n';
}

ParityCheckMatrix ParityCheckMatrix::load(std::istream& in) {
  int q = 0, M = 0, N = 0;
  if (!(in >> q >> M >> N)) throw std::runtime_error("ParityCheckMatrix::load: bad header");
  std::vector<Entry> entries;
  Entry en;
  while (in >> en.row >> en.col >> en.val) entries.push_back(en);
  return ParityCheckMatrix(q, M, N, std::move(entries));
}

namespace {

// Slot table for one (VN position, offset) group: each of the Z check nodes
// at the target position takes d_c/d_v consecutive slots before shuffling.
void fill_and_shuffle_slots(std::vector<int>& slots, int Z, int per_cn, RandomStream& stream) {
  slots.resize(static_cast<std::size_t>(Z) * per_cn);
  for (int z = 0; z < Z; ++z)
    for (int t = 0; t < per_cn; ++t) slots[static_cast<std::size_t>(z) * per_cn + t] = z;
  for (std::size_t i = slots.size() - 1; i > 0; --i) {
    const std::size_t j = stream.uniform_below(i + 1);
    std::swap(slots[i], slots[j]);
  }
}

}  // namespace

ParityCheckMatrix build_sc_ldpc(int d_v, int d_c, int L_p, int N_p, int q, RandomStream& stream,
                                bool girth_conditioning) {
  Protograph proto(d_v, d_c, L_p);
  const int per_cn = d_c / d_v;
  if (N_p % per_cn != 0)
    throw std::domain_error("build_sc_ldpc: N_p must be divisible by d_c/d_v");
  const int Z = N_p / per_cn;  // CNs per position = N_p·d_v/d_c
  const int M = Z * proto.cn_positions();
  const int N = N_p * L_p;

  // slot_of[group][v]: which CN (within the target position) VN v of the
  // position uses for this offset. group = pos*d_v + offset.
  std::vector<std::vector<int>> slot_of(static_cast<std::size_t>(L_p) * d_v);
  for (int pos = 0; pos < L_p; ++pos)
    for (int s = 0; s < d_v; ++s)
      fill_and_shuffle_slots(slot_of[static_cast<std::size_t>(pos) * d_v + s], Z, per_cn, stream);

  if (girth_conditioning) {
    // Remove 4-cycles (two columns sharing two rows) by re-assigning one of
    // the offending slots to a random partner in the same group; bounded
    // passes, best effort.
    for (int pass = 0; pass < 50; ++pass) {
      std::map<std::pair<int, int>, std::pair<int, int>> seen;  // (r1,r2) -> (pos, v)
      bool any = false;
      for (int pos = 0; pos < L_p; ++pos) {
        for (int v = 0; v < N_p; ++v) {
          std::vector<int> rows(static_cast<std::size_t>(d_v));
          for (int s = 0; s < d_v; ++s)
            rows[static_cast<std::size_t>(s)] =
                (pos + s) * Z + slot_of[static_cast<std::size_t>(pos) * d_v + s][static_cast<std::size_t>(v)];
          std::sort(rows.begin(), rows.end());
          bool collided = false;
          for (int a = 0; a < d_v && !collided; ++a)
            for (int b = a + 1; b < d_v && !collided; ++b) {
              auto [it, inserted] = seen.try_emplace({rows[static_cast<std::size_t>(a)],
                                                      rows[static_cast<std::size_t>(b)]},
                                                     std::pair<int, int>{pos, v});
              if (!inserted && it->second != std::pair<int, int>{pos, v}) collided = true;
            }
          if (collided) {
            any = true;
            // Swap a uniformly chosen offset's slot with a random other VN in
            // the same group (preserves per-CN multiplicities).
            const int s = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(d_v)));
            auto& g = slot_of[static_cast<std::size_t>(pos) * d_v + s];
            const std::size_t other = stream.uniform_below(static_cast<std::uint64_t>(N_p));
            std::swap(g[static_cast<std::size_t>(v)], g[other]);
          }
        }
      }
      if (!any) break;
    }
  }

  std::vector<ParityCheckMatrix::Entry> entries;
  entries.reserve(static_cast<std::size_t>(N) * d_v);
  for (int pos = 0; pos < L_p; ++pos)
    for (int s = 0; s < d_v; ++s) {
      const auto& g = slot_of[static_cast<std::size_t>(pos) * d_v + s];
      for (int v = 0; v < N_p; ++v)
        entries.push_back({(pos + s) * Z + g[static_cast<std::size_t>(v)], pos * N_p + v, 1});
    }
  return ParityCheckMatrix(q, M, N, std::move(entries));
}

std::size_t count_4cycles(const ParityCheckMatrix& H) {
  // Column pairs sharing >= 2 rows, counted via row-pair keys per column.
  std::map<std::pair<int, int>, std::vector<int>> by_rowpair;
  for (int j = 0; j < H.cols(); ++j) {
    const auto& edges = H.col_edges(j);
    for (std::size_t a = 0; a < edges.size(); ++a)
      for (std::size_t b = a + 1; b < edges.size(); ++b) {
        int r1 = H.entries()[edges[a]].row;
        int r2 = H.entries()[edges[b]].row;
        if (r1 > r2) std::swap(r1, r2);
        by_rowpair[{r1, r2}].push_back(j);
      }
  }
  std::size_t cycles = 0;
  for (const auto& [key, cols] : by_rowpair)
    cycles += cols.size() * (cols.size() - 1) / 2;
  return cycles;
}

double design_rate(int d_v, int d_c, int L_p) {
  if (d_v < 1 || d_c < 1 || L_p < 1) throw std::domain_error("design_rate: bad arguments");
  return 1.0 - (static_cast<double>(d_v) / d_c) *
                   (1.0 + static_cast<double>(d_v - 1) / static_cast<double>(L_p));
}

MaskedCodeword apply_mask(const std::vector<int>& codeword, int q, std::uint64_t alphabet,
                          std::uint64_t mask_seed) {
  if (static_cast<std::uint64_t>(q) > alphabet)
    throw std::domain_error("apply_mask: q exceeds alphabet size");
  MaskedCodeword out;
  out.symbols.resize(codeword.size());
  out.mask.resize(codeword.size());
  RandomStream stream(mask_seed, 0);
  for (std::size_t j = 0; j < codeword.size(); ++j) {
    if (codeword[j] < 0 || codeword[j] >= q)
      throw std::domain_error("apply_mask: codeword entry outside [0,q)");
    const std::uint64_t m = stream.uniform_below(alphabet);
    out.mask[j] = m;
    out.symbols[j] = (static_cast<std::uint64_t>(codeword[j]) + m) % alphabet;
  }
  return out;
}

std::vector<double> unmask_posterior(const std::vector<double>& probs, std::uint64_t mask, int q) {
  const std::uint64_t alphabet = probs.size();
  if (static_cast<std::uint64_t>(q) > alphabet)
    throw std::domain_error("unmask_posterior: q exceeds alphabet size");
  std::vector<double> out(static_cast<std::size_t>(q));
  double sum = 0.0;
  for (int c = 0; c < q; ++c) {
    const std::uint64_t src = (static_cast<std::uint64_t>(c) + mask) % alphabet;
    out[static_cast<std::size_t>(c)] = probs[static_cast<std::size_t>(src)];
    sum += out[static_cast<std::size_t>(c)];
  }
  if (sum <= 0.0)
    throw InconsistencyError("unmask_posterior: all mass on unassigned labels");
  const double inv = 1.0 / sum;
  for (double& p : out) p *= inv;
  return out;
}

std::vector<int> unmask_labels(const std::vector<std::uint64_t>& ranks, std::uint64_t mask,
                               int q, std::uint64_t alphabet) {
  if (static_cast<std::uint64_t>(q) > alphabet)
    throw std::domain_error("unmask_labels: q exceeds alphabet size");
  const std::uint64_t m = mask % alphabet;
  std::vector<int> out;
  out.reserve(ranks.size());
  for (const std::uint64_t r : ranks) {
    if (r >= alphabet) throw std::domain_error("unmask_labels: rank outside alphabet");
    const std::uint64_t shifted = (r + alphabet - m) % alphabet;
    if (shifted < static_cast<std::uint64_t>(q)) out.push_back(static_cast<int>(shifted));
  }
  return out;
}

Encoder::Encoder(const ParityCheckMatrix& H) : q_(H.q()), n_(H.cols()) {
  const PrimeField gf(q_);
  // Forward elimination on sparse rows, pivoting column by column. Rows are
  // kept sorted by column; the SC band structure keeps fill-in local.
  std::vector<std::vector<std::pair<int, int>>> rows(static_cast<std::size_t>(H.rows()));
  for (const auto& en : H.entries())
    rows[static_cast<std::size_t>(en.row)].emplace_back(en.col, en.val);
  // Bucket rows by leading column.
  std::vector<std::vector<int>> lead_bucket(static_cast<std::size_t>(n_));
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].empty()) lead_bucket[static_cast<std::size_t>(rows[i][0].first)].push_back(static_cast<int>(i));

  auto add_scaled = [&](std::vector<std::pair<int, int>>& dst,
                        const std::vector<std::pair<int, int>>& src, int factor) {
    // dst += factor·src over GF(q), both sorted by column.
    std::vector<std::pair<int, int>> merged;
    merged.reserve(dst.size() + src.size());
    std::size_t a = 0, b = 0;
    while (a < dst.size() || b < src.size()) {
      if (b == src.size() || (a < dst.size() && dst[a].first < src[b].first)) {
        merged.push_back(dst[a++]);
      } else if (a == dst.size() || src[b].first < dst[a].first) {
        const int v = gf.mul(factor, src[b].second);
        if (v != 0) merged.emplace_back(src[b].first, v);
        ++b;
      } else {
        const int v = gf.add(dst[a].second, gf.mul(factor, src[b].second));
        if (v != 0) merged.emplace_back(dst[a].first, v);
        ++a, ++b;
      }
    }
    dst = std::move(merged);
  };

  std::vector<char> is_pivot_col(static_cast<std::size_t>(n_), 0);
  for (int c = 0; c < n_; ++c) {
    auto& bucket = lead_bucket[static_cast<std::size_t>(c)];
    if (bucket.empty()) continue;
    // Deterministic pivot: smallest row index.
    std::sort(bucket.begin(), bucket.end());
    const int pr = bucket[0];
    auto& prow = rows[static_cast<std::size_t>(pr)];
    // Normalize the pivot row to leading 1.
    const int scale = gf.inv(prow[0].second);
    if (scale != 1)
      for (auto& [col, val] : prow) val = gf.mul(val, scale);
    // Eliminate c from the other rows in this bucket.
    for (std::size_t t = 1; t < bucket.size(); ++t) {
      auto& row = rows[static_cast<std::size_t>(bucket[t])];
      add_scaled(row, prow, gf.neg(row[0].second));
      if (!row.empty()) lead_bucket[static_cast<std::size_t>(row[0].first)].push_back(bucket[t]);
    }
    bucket.clear();
    is_pivot_col[static_cast<std::size_t>(c)] = 1;
    pivot_cols_.push_back(c);
    rows_.push_back(std::move(prow));
  }
  rank_ = static_cast<int>(pivot_cols_.size());
  for (int c = 0; c < n_; ++c)
    if (!is_pivot_col[static_cast<std::size_t>(c)]) free_cols_.push_back(c);
}

std::vector<int> Encoder::encode(const std::vector<int>& message) const {
  if (static_cast<int>(message.size()) != message_length())
    throw std::domain_error("Encoder::encode: message length mismatch");
  const PrimeField gf(q_);
  std::vector<int> x(static_cast<std::size_t>(n_), 0);
  for (std::size_t i = 0; i < free_cols_.size(); ++i) {
    const int v = message[i];
    if (v < 0 || v >= q_) throw std::domain_error("Encoder::encode: symbol outside [0,q)");
    x[static_cast<std::size_t>(free_cols_[i])] = v;
  }
  // Echelon rows have all entries in columns >= their pivot; solve backwards.
  for (std::size_t i = rows_.size(); i-- > 0;) {
    const auto& row = rows_[i];
    long long acc = 0;
    for (std::size_t t = 1; t < row.size(); ++t)
      acc += static_cast<long long>(row[t].second) * x[static_cast<std::size_t>(row[t].first)];
    const int rhs = static_cast<int>(acc % q_);
    x[static_cast<std::size_t>(row[0].first)] = gf.neg(rhs);  // leading coefficient is 1
  }
  return x;
}

std::vector<int> Encoder::extract_message(const std::vector<int>& codeword) const {
  if (static_cast<int>(codeword.size()) != n_)
    throw std::domain_error("Encoder::extract_message: codeword length mismatch");
  std::vector<int> msg;
  msg.reserve(free_cols_.size());
  for (const int c : free_cols_) msg.push_back(codeword[static_cast<std::size_t>(c)]);
  return msg;
}

std::vector<int> encode(const ParityCheckMatrix& H, const std::vector<int>& message) {
  return Encoder(H).encode(message);
}

}  // namespace motifcc
