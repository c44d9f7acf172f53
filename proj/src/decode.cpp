#include "motifcc/decode.hpp"

#include "motifcc/errors.hpp"
#include "motifcc/gf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <stdexcept>

namespace motifcc {

namespace {

constexpr double kClampFloor = 1e-300;

std::uint64_t top_word_mask(int q) {
  const int rem = q & 63;
  return rem == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
}

}  // namespace

PossibilitySet PossibilitySet::full(int q) {
  PossibilitySet s(q);
  for (auto& w : s.bits_) w = ~std::uint64_t{0};
  s.bits_.back() &= top_word_mask(q);
  return s;
}

PossibilitySet PossibilitySet::from_labels(const std::vector<int>& labels, int q) {
  PossibilitySet s(q);
  for (const int a : labels) {
    if (a < 0 || a >= q) throw std::domain_error("PossibilitySet: label outside [0,q)");
    s.insert(a);
  }
  return s;
}

int PossibilitySet::size() const {
  int c = 0;
  for (const auto w : bits_) c += __builtin_popcountll(w);
  return c;
}

bool PossibilitySet::empty() const {
  for (const auto w : bits_)
    if (w) return false;
  return true;
}

int PossibilitySet::singleton_value() const {
  int found = -1;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if (!bits_[w]) continue;
    if (found >= 0 || (bits_[w] & (bits_[w] - 1))) return -1;  // more than one bit
    found = static_cast<int>(w * 64) + __builtin_ctzll(bits_[w]);
  }
  return found;
}

std::vector<int> PossibilitySet::labels() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t v = bits_[w];
    while (v) {
      out.push_back(static_cast<int>(w * 64) + __builtin_ctzll(v));
      v &= v - 1;
    }
  }
  return out;
}

void PossibilitySet::intersect_with(const PossibilitySet& other) {
  if (q_ != other.q_) throw std::domain_error("PossibilitySet: width mismatch");
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= other.bits_[w];
}

void PossibilitySet::union_with_rotated(const PossibilitySet& other, int shift) {
  if (q_ != other.q_) throw std::domain_error("PossibilitySet: width mismatch");
  shift %= q_;
  if (shift < 0) shift += q_;
  const auto& src = other.bits_;
  const std::size_t words = bits_.size();
  auto or_shifted_left = [&](int s) {
    // bits_ |= (src << s), bits above q masked afterward by caller
    const std::size_t ws = static_cast<std::size_t>(s) >> 6;
    const int bs = s & 63;
    for (std::size_t w = words; w-- > ws;) {
      std::uint64_t v = src[w - ws] << bs;
      if (bs && w > ws) v |= src[w - ws - 1] >> (64 - bs);
      bits_[w] |= v;
    }
  };
  auto or_shifted_right = [&](int s) {
    // bits_ |= (src >> s)
    const std::size_t ws = static_cast<std::size_t>(s) >> 6;
    const int bs = s & 63;
    for (std::size_t w = 0; w + ws < words; ++w) {
      std::uint64_t v = src[w + ws] >> bs;
      if (bs && w + ws + 1 < words) v |= src[w + ws + 1] << (64 - bs);
      bits_[w] |= v;
    }
  };
  if (shift == 0) {
    for (std::size_t w = 0; w < words; ++w) bits_[w] |= src[w];
    return;
  }
  // (a + shift) mod q: members below q-shift move up by shift, the rest wrap
  // down by q-shift.
  or_shifted_left(shift);
  or_shifted_right(q_ - shift);
  bits_.back() &= top_word_mask(q_);
}

PossibilitySet sumset(const PossibilitySet& A, const PossibilitySet& B) {
  if (A.q() != B.q()) throw std::domain_error("sumset: width mismatch");
  PossibilitySet out(A.q());
  if (A.empty() || B.empty()) return out;
  // Iterate the smaller operand's members, OR-ing rotated copies of the other.
  const PossibilitySet& iter = A.size() <= B.size() ? A : B;
  const PossibilitySet& base = A.size() <= B.size() ? B : A;
  for (const int a : iter.labels()) {
    out.union_with_rotated(base, a);
    if (out.is_full()) break;
  }
  return out;
}

PossibilitySet scale_set(int c, const PossibilitySet& A) {
  if (c <= 0 || c >= A.q()) throw std::domain_error("scale_set: coefficient outside GF(q)*");
  if (c == 1) return A;
  PossibilitySet out(A.q());
  const long long q = A.q();
  for (const int a : A.labels()) out.insert(static_cast<int>(static_cast<long long>(c) * a % q));
  return out;
}

PossibilitySet PossibilitySet::negated() const {
  PossibilitySet out(q_);
  for (const int a : labels()) out.insert(a == 0 ? 0 : q_ - a);
  return out;
}

namespace {

std::optional<std::vector<int>> all_singletons_codeword(const ParityCheckMatrix& H,
                                                        const std::vector<PossibilitySet>& sets) {
  std::vector<int> z(sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const int v = sets[j].singleton_value();
    if (v < 0) return std::nullopt;
    z[j] = v;
  }
  if (!H.satisfies(z)) return std::nullopt;
  return z;
}

}  // namespace

DecodeResult set_bp_decode(const ParityCheckMatrix& H,
                           const std::vector<PossibilitySet>& initial_sets, int max_iters,
                           SetBpTrace* trace) {
  const int q = H.q();
  const int N = H.cols();
  const int M = H.rows();
  if (static_cast<int>(initial_sets.size()) != N)
    throw std::domain_error("set_bp_decode: need one set per column");
  for (const auto& s : initial_sets) {
    if (s.q() != q) throw std::domain_error("set_bp_decode: set width mismatch");
    if (s.empty()) throw InconsistencyError("set_bp_decode: empty initial set");
  }
  const PrimeField gf(q);
  std::vector<PossibilitySet> sets = initial_sets;

  if (auto z = all_singletons_codeword(H, sets))
    return DecodeResult{DecodeStatus::Decoded, std::move(*z), 0};

  int max_deg = 0;
  for (int i = 0; i < M; ++i) max_deg = std::max(max_deg, H.row_degree(i));

  std::vector<PossibilitySet> next = sets;
  std::vector<PossibilitySet> scaled(static_cast<std::size_t>(max_deg)),
      prefix(static_cast<std::size_t>(max_deg)), suffix(static_cast<std::size_t>(max_deg));
  PossibilitySet zero_only(q);
  zero_only.insert(0);

  const auto& entries = H.entries();
  const auto& row_ptr = H.row_ptr();

  for (int iter = 1; iter <= max_iters; ++iter) {
    for (int j = 0; j < N; ++j) next[static_cast<std::size_t>(j)] = sets[static_cast<std::size_t>(j)];

    for (int i = 0; i < M; ++i) {
      const std::size_t lo = row_ptr[static_cast<std::size_t>(i)];
      const int d = static_cast<int>(row_ptr[static_cast<std::size_t>(i) + 1] - lo);
      if (d == 0) continue;
      if (d == 1) {
        // Single-VN check forces h·x = 0, i.e. x = 0.
        next[static_cast<std::size_t>(entries[lo].col)].intersect_with(zero_only);
        continue;
      }
      for (int t = 0; t < d; ++t) {
        const auto& en = entries[lo + static_cast<std::size_t>(t)];
        scaled[static_cast<std::size_t>(t)] =
            en.val == 1 ? sets[static_cast<std::size_t>(en.col)]
                        : scale_set(en.val, sets[static_cast<std::size_t>(en.col)]);
      }
      prefix[0] = scaled[0];
      for (int t = 1; t <= d - 2; ++t)
        prefix[static_cast<std::size_t>(t)] =
            sumset(prefix[static_cast<std::size_t>(t - 1)], scaled[static_cast<std::size_t>(t)]);
      suffix[static_cast<std::size_t>(d - 1)] = scaled[static_cast<std::size_t>(d - 1)];
      for (int t = d - 2; t >= 1; --t)
        suffix[static_cast<std::size_t>(t)] =
            sumset(scaled[static_cast<std::size_t>(t)], suffix[static_cast<std::size_t>(t + 1)]);
      for (int t = 0; t < d; ++t) {
        const auto& en = entries[lo + static_cast<std::size_t>(t)];
        const PossibilitySet& others =
            t == 0 ? suffix[1]
                   : (t == d - 1 ? prefix[static_cast<std::size_t>(d - 2)]
                                 : sumset(prefix[static_cast<std::size_t>(t - 1)],
                                          suffix[static_cast<std::size_t>(t + 1)]));
        // S_ij = (−h_ij^{-1})·sum_others; for h_ij = 1 that is plain negation.
        const PossibilitySet msg =
            en.val == 1 ? others.negated()
                        : scale_set(gf.neg(gf.inv(en.val)), others);
        next[static_cast<std::size_t>(en.col)].intersect_with(msg);
      }
    }

    bool changed = false;
    for (int j = 0; j < N; ++j) {
      const auto& s = next[static_cast<std::size_t>(j)];
      if (s.empty())
        throw InconsistencyError("set_bp_decode: possibility set emptied at iteration " +
                                 std::to_string(iter));
      if (!changed && s.size() != sets[static_cast<std::size_t>(j)].size()) changed = true;
    }
    std::swap(sets, next);
    if (trace) trace->vn_sets.push_back(sets);

    if (auto z = all_singletons_codeword(H, sets))
      return DecodeResult{DecodeStatus::Decoded, std::move(*z), iter};
    if (!changed) return DecodeResult{DecodeStatus::Stalled, {}, iter};
  }
  return DecodeResult{DecodeStatus::MaxIters, {}, max_iters};
}

namespace {

// Scratch matrix: rows of qpad-aligned doubles.
struct PaddedRows {
  int qpad = 0;
  std::vector<double> data;
  void resize(int rows, int qpad_) {
    qpad = qpad_;
    data.assign(static_cast<std::size_t>(rows) * qpad_, 0.0);
  }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * qpad; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * qpad; }
};

inline void permute_by_coeff(const double* src, double* dst, int q, int h) {
  if (h == 1) {
    std::memcpy(dst, src, sizeof(double) * static_cast<std::size_t>(q));
    return;
  }
  // dst[(h·a) mod q] = src[a]: dst is the pmf of h·X.
  long long idx = 0;
  for (int a = 0; a < q; ++a) {
    dst[idx] = src[a];
    idx += h;
    if (idx >= q) idx -= q;
  }
}

inline void readout_negated(const double* conv, double* dst, int q, int h) {
  if (h == 1) {
    dst[0] = conv[0];
    for (int b = 1; b < q; ++b) dst[b] = conv[q - b];
    return;
  }
  // dst[b] = conv[(−h·b) mod q]
  long long idx = 0;
  for (int b = 0; b < q; ++b) {
    dst[b] = conv[idx == 0 ? 0 : q - idx];
    idx += h;
    if (idx >= q) idx -= q;
  }
}

}  // namespace

DecodeResult qspa_decode(const ParityCheckMatrix& H, const std::vector<BeliefMessage>& priors,
                         int max_iters, ConvMode conv_mode, QspaTrace* trace) {
  const int q = H.q();
  const int N = H.cols();
  const int M = H.rows();
  if (static_cast<int>(priors.size()) != N)
    throw std::domain_error("qspa_decode: need one prior per column");
  const int qpad = (q + 7) & ~7;
  const std::size_t E = H.num_edges();
  const auto& entries = H.entries();
  const auto& row_ptr = H.row_ptr();

  PaddedRows prior;
  prior.resize(N, qpad);
  for (int j = 0; j < N; ++j) {
    const auto& p = priors[static_cast<std::size_t>(j)];
    if (static_cast<int>(p.size()) != q)
      throw std::domain_error("qspa_decode: prior length mismatch");
    double sum = 0.0;
    for (const double v : p) {
      if (!(v >= 0.0)) throw std::domain_error("qspa_decode: negative prior entry");
      sum += v;
    }
    if (sum <= 0.0) throw InconsistencyError("qspa_decode: zero prior");
    double* dst = prior.row(j);
    for (int a = 0; a < q; ++a) dst[a] = p[static_cast<std::size_t>(a)] / sum;
  }

  PaddedRows Q, S;
  Q.resize(static_cast<int>(E), qpad);
  S.resize(static_cast<int>(E), qpad);
  for (std::size_t e = 0; e < E; ++e)
    std::memcpy(Q.row(static_cast<int>(e)), prior.row(entries[e].col),
                sizeof(double) * static_cast<std::size_t>(q));

  int max_row_deg = 0, max_col_deg = 0;
  for (int i = 0; i < M; ++i) max_row_deg = std::max(max_row_deg, H.row_degree(i));
  for (int j = 0; j < N; ++j) max_col_deg = std::max(max_col_deg, H.col_degree(j));

  PaddedRows perm, cpre, csuf, vpre, vsuf;
  perm.resize(max_row_deg, qpad);
  cpre.resize(std::max(max_row_deg - 1, 1), qpad);
  csuf.resize(max_row_deg, qpad);
  vpre.resize(std::max(max_col_deg, 1), qpad);
  vsuf.resize(std::max(max_col_deg, 1), qpad);
  std::vector<double> tmp(static_cast<std::size_t>(qpad), 0.0);
  std::vector<double> belief(static_cast<std::size_t>(qpad), 0.0);
  std::vector<int> z(static_cast<std::size_t>(N), 0);

  for (int iter = 1; iter <= max_iters; ++iter) {
    // ---- CN phase: S from Q ----
    for (int i = 0; i < M; ++i) {
      const std::size_t lo = row_ptr[static_cast<std::size_t>(i)];
      const int d = static_cast<int>(row_ptr[static_cast<std::size_t>(i) + 1] - lo);
      if (d == 0) continue;
      if (d == 1) {
        double* s = S.row(static_cast<int>(lo));
        std::fill(s, s + q, 0.0);
        s[0] = 1.0;  // h·x = 0 forces x = 0
        continue;
      }
      for (int t = 0; t < d; ++t) {
        const auto& en = entries[lo + static_cast<std::size_t>(t)];
        permute_by_coeff(Q.row(static_cast<int>(lo) + t), perm.row(t), q, en.val);
      }
      std::memcpy(cpre.row(0), perm.row(0), sizeof(double) * static_cast<std::size_t>(q));
      for (int t = 1; t <= d - 2; ++t)
        circular_convolve(cpre.row(t - 1), perm.row(t), cpre.row(t), q, conv_mode);
      std::memcpy(csuf.row(d - 1), perm.row(d - 1), sizeof(double) * static_cast<std::size_t>(q));
      for (int t = d - 2; t >= 1; --t)
        circular_convolve(perm.row(t), csuf.row(t + 1), csuf.row(t), q, conv_mode);
      for (int t = 0; t < d; ++t) {
        const double* others;
        if (t == 0) {
          others = csuf.row(1);
        } else if (t == d - 1) {
          others = cpre.row(d - 2);
        } else {
          circular_convolve(cpre.row(t - 1), csuf.row(t + 1), tmp.data(), q, conv_mode);
          others = tmp.data();
        }
        const auto& en = entries[lo + static_cast<std::size_t>(t)];
        readout_negated(others, S.row(static_cast<int>(lo) + t), q, en.val);
      }
    }

    // ---- VN phase: Q from prior and S; tentative decision ----
    if (trace) trace->beliefs.emplace_back();
    for (int j = 0; j < N; ++j) {
      const auto& edges = H.col_edges(j);
      const int d = static_cast<int>(edges.size());
      const double* pj = prior.row(j);
      if (d == 0) {
        int best = 0;
        for (int a = 1; a < q; ++a)
          if (pj[a] > pj[best]) best = a;
        z[static_cast<std::size_t>(j)] = best;
        if (trace) trace->beliefs.back().emplace_back(pj, pj + q);
        continue;
      }
      for (int t = 0; t < d; ++t) {
        const double* s = S.row(static_cast<int>(edges[static_cast<std::size_t>(t)]));
        if (t == 0) {
          std::memcpy(vpre.row(0), s, sizeof(double) * static_cast<std::size_t>(q));
        } else {
          const double* prev = vpre.row(t - 1);
          double* dst = vpre.row(t);
          for (int a = 0; a < q; ++a) dst[a] = prev[a] * s[a];
        }
      }
      for (int t = d - 1; t >= 0; --t) {
        const double* s = S.row(static_cast<int>(edges[static_cast<std::size_t>(t)]));
        if (t == d - 1) {
          std::memcpy(vsuf.row(t), s, sizeof(double) * static_cast<std::size_t>(q));
        } else {
          const double* nxt = vsuf.row(t + 1);
          double* dst = vsuf.row(t);
          for (int a = 0; a < q; ++a) dst[a] = nxt[a] * s[a];
        }
      }
      for (int t = 0; t < d; ++t) {
        double* qmsg = Q.row(static_cast<int>(edges[static_cast<std::size_t>(t)]));
        const double* a1 = t == 0 ? nullptr : vpre.row(t - 1);
        const double* a2 = t == d - 1 ? nullptr : vsuf.row(t + 1);
        double sum = 0.0;
        for (int a = 0; a < q; ++a) {
          double v = pj[a];
          if (a1) v *= a1[a];
          if (a2) v *= a2[a];
          if (v < kClampFloor) v = 0.0;
          qmsg[a] = v;
          sum += v;
        }
        if (sum <= 0.0)
          throw NumericalCollapseError(
              "qspa_decode: message collapsed to zero at iteration " + std::to_string(iter),
              iter);
        const double inv = 1.0 / sum;
        for (int a = 0; a < q; ++a) qmsg[a] *= inv;
      }
      // Tentative decision from the full product (prior times all checks).
      {
        const double* all = vpre.row(d - 1);
        double bsum = 0.0;
        int best = 0;
        double bestv = -1.0;
        for (int a = 0; a < q; ++a) {
          double v = pj[a] * all[a];
          if (v < kClampFloor) v = 0.0;
          belief[static_cast<std::size_t>(a)] = v;
          bsum += v;
          if (v > bestv) {
            bestv = v;
            best = a;
          }
        }
        if (bsum <= 0.0)
          throw NumericalCollapseError(
              "qspa_decode: belief collapsed to zero at iteration " + std::to_string(iter),
              iter);
        z[static_cast<std::size_t>(j)] = best;
        if (trace)
          trace->beliefs.back().emplace_back(belief.begin(), belief.begin() + q);
      }
    }

    if (H.satisfies(z)) return DecodeResult{DecodeStatus::Decoded, z, iter};
  }
  return DecodeResult{DecodeStatus::MaxIters, z, max_iters};
}

BeliefMessage cn_update_conv(const std::vector<BeliefMessage>& incoming,
                             const std::vector<int>& h_in, int h_out, int q, ConvMode mode) {
  if (incoming.empty()) throw std::domain_error("cn_update_conv: need at least one message");
  if (incoming.size() != h_in.size())
    throw std::domain_error("cn_update_conv: one coefficient per message");
  if (h_out < 1 || h_out >= q) throw std::domain_error("cn_update_conv: bad output coefficient");
  std::vector<double> acc(static_cast<std::size_t>(q)), perm(static_cast<std::size_t>(q)),
      tmp(static_cast<std::size_t>(q));
  for (std::size_t t = 0; t < incoming.size(); ++t) {
    if (static_cast<int>(incoming[t].size()) != q)
      throw std::domain_error("cn_update_conv: message length mismatch");
    if (h_in[t] < 1 || h_in[t] >= q) throw std::domain_error("cn_update_conv: bad coefficient");
    permute_by_coeff(incoming[t].data(), perm.data(), q, h_in[t]);
    if (t == 0) {
      acc = perm;
    } else {
      circular_convolve(acc.data(), perm.data(), tmp.data(), q, mode);
      std::swap(acc, tmp);
    }
  }
  BeliefMessage out(static_cast<std::size_t>(q));
  readout_negated(acc.data(), out.data(), q, h_out);
  return out;
}

}  // namespace motifcc
