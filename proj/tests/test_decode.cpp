#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "motifcc/channel.hpp"
#include "motifcc/code.hpp"
#include "motifcc/combinatorics.hpp"
#include "motifcc/decode.hpp"
#include "motifcc/errors.hpp"
#include "motifcc/gf.hpp"
#include "motifcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace motifcc;

namespace {

std::set<int> to_set(const PossibilitySet& s) {
  const auto v = s.labels();
  return {v.begin(), v.end()};
}

PossibilitySet random_set(int q, RandomStream& s, double density = 0.45) {
  PossibilitySet out(q);
  for (int a = 0; a < q; ++a)
    if (s.uniform_double() < density) out.insert(a);
  return out;
}

std::set<int> naive_sumset(const std::set<int>& A, const std::set<int>& B, int q) {
  std::set<int> out;
  for (const int a : A)
    for (const int b : B) out.insert((a + b) % q);
  return out;
}

std::set<int> naive_scale(int c, const std::set<int>& A, int q) {
  std::set<int> out;
  for (const int a : A) out.insert(static_cast<int>((static_cast<long long>(c) * a) % q));
  return out;
}

ParityCheckMatrix single_check_q5() {
  return ParityCheckMatrix(5, 1, 2, {{0, 0, 1}, {0, 1, 1}});
}

PossibilitySet singleton(int a, int q) {
  PossibilitySet s(q);
  s.insert(a);
  return s;
}

BeliefMessage delta(int a, int q) {
  BeliefMessage m(static_cast<std::size_t>(q), 0.0);
  m[static_cast<std::size_t>(a)] = 1.0;
  return m;
}

std::set<int> belief_support(const std::vector<double>& b, double rel_threshold = 1e-12) {
  double mx = 0.0;
  for (const double v : b) mx = std::max(mx, v);
  std::set<int> out;
  for (std::size_t a = 0; a < b.size(); ++a)
    if (b[a] > rel_threshold * mx) out.insert(static_cast<int>(a));
  return out;
}

// Channel front end shared by the lockstep tests: transmit codeword cw over
// CC(8,4,R) through a fresh mask, and return per-symbol possibility sets and
// matching q-ary priors (same support by construction).
struct ChannelOutputs {
  std::vector<PossibilitySet> sets;
  std::vector<BeliefMessage> priors;
};

ChannelOutputs pass_through_channel(const std::vector<int>& cw, int q, int R,
                                    std::uint64_t mask_seed, RandomStream& stream) {
  ChannelParams params;
  params.n = 8;
  params.k = 4;
  params.R = R;
  params.p_inter = 0.0;
  const auto space = SymbolSpace::shared(8, 4);
  const std::uint64_t alphabet = space->size();
  const MaskedCodeword mc = apply_mask(cw, q, alphabet, mask_seed);

  ChannelOutputs out;
  for (std::size_t j = 0; j < cw.size(); ++j) {
    const CombinatorialSymbol x = space->symbol(mc.symbols[j]);
    const ReadObservation y = sample_reads(x, params, stream);
    const std::vector<std::uint64_t> compat = compatible_set(y, 8, 4);
    out.sets.push_back(PossibilitySet::from_labels(
        unmask_labels(compat, mc.mask[j], q, alphabet), q));
    const PosteriorVector post = posterior(y, params, *space);
    out.priors.push_back(unmask_posterior(post.probs, mc.mask[j], q));
  }
  return out;
}

}  // namespace

TEST_CASE("possibility set operations against naive set arithmetic") {
  RandomStream s(2024, 0);
  for (const int q : {5, 31, 64, 67, 128, 131}) {
    CHECK(PossibilitySet::full(q).size() == q);
    CHECK(PossibilitySet::full(q).is_full());
    CHECK(PossibilitySet(q).empty());
    CHECK(PossibilitySet(q).singleton_value() == -1);
    CHECK(PossibilitySet::full(q).singleton_value() == (q == 1 ? 0 : -1));
    CHECK(singleton(q - 1, q).singleton_value() == q - 1);

    for (int rep = 0; rep < 8; ++rep) {
      const PossibilitySet A = random_set(q, s);
      const PossibilitySet B = random_set(q, s);
      const std::set<int> a = to_set(A), b = to_set(B);

      CHECK(A.size() == static_cast<int>(a.size()));
      for (int v = 0; v < q; ++v) CHECK(A.contains(v) == (a.count(v) > 0));

      PossibilitySet inter = A;
      inter.intersect_with(B);
      std::set<int> iref;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::inserter(iref, iref.begin()));
      CHECK(to_set(inter) == iref);

      const int shift = static_cast<int>(s.uniform_below(static_cast<std::uint64_t>(q)));
      PossibilitySet uni = A;
      uni.union_with_rotated(B, shift);
      std::set<int> uref = a;
      for (const int v : b) uref.insert((v + shift) % q);
      CHECK(to_set(uni) == uref);

      std::set<int> nref;
      for (const int v : a) nref.insert((q - v) % q);
      CHECK(to_set(A.negated()) == nref);

      CHECK(to_set(sumset(A, B)) == naive_sumset(a, b, q));
      CHECK(sumset(PossibilitySet(q), B).empty());
      CHECK(sumset(A, PossibilitySet(q)).empty());

      const int c = 1 + static_cast<int>(s.uniform_below(static_cast<std::uint64_t>(q - 1)));
      CHECK(to_set(scale_set(c, A)) == naive_scale(c, a, q));
      CHECK(scale_set(1, A) == A);
    }

    // Full stays full under the closure operations (scaling needs a unit of
    // Z_q, which every nonzero scalar is when q is prime).
    const PossibilitySet F = PossibilitySet::full(q);
    CHECK(F.negated().is_full());
    CHECK(sumset(F, singleton(3 % q, q)).is_full());
    if (q > 2 && q % 2 == 1) CHECK(scale_set(2, F).is_full());
  }

  // from_labels/labels round trip.
  const std::vector<int> labels{0, 3, 9, 66};
  const PossibilitySet P = PossibilitySet::from_labels(labels, 67);
  CHECK(P.labels() == labels);
}

TEST_CASE("set decoder: all-singleton codeword input decodes in zero iterations") {
  const ParityCheckMatrix H = single_check_q5();
  const DecodeResult r = set_bp_decode(H, {singleton(2, 5), singleton(3, 5)}, 10);
  CHECK(r.status == DecodeStatus::Decoded);
  CHECK(r.iterations == 0);
  CHECK(r.codeword == std::vector<int>{2, 3});
}

TEST_CASE("set decoder: a single known symbol pins its check partner") {
  const ParityCheckMatrix H = single_check_q5();
  SetBpTrace trace;
  const DecodeResult r =
      set_bp_decode(H, {singleton(2, 5), PossibilitySet::full(5)}, 10, &trace);
  CHECK(r.status == DecodeStatus::Decoded);
  CHECK(r.iterations == 1);
  CHECK(r.codeword == std::vector<int>{2, 3});
  REQUIRE(trace.vn_sets.size() == 1);
  CHECK(trace.vn_sets[0][1].singleton_value() == 3);
}

TEST_CASE("set decoder: uninformative input stalls") {
  const ParityCheckMatrix H = single_check_q5();
  const DecodeResult r =
      set_bp_decode(H, {PossibilitySet::full(5), PossibilitySet::full(5)}, 10);
  CHECK(r.status == DecodeStatus::Stalled);
  CHECK(r.iterations == 1);
}

TEST_CASE("set decoder: contradictory singletons raise an inconsistency") {
  const ParityCheckMatrix H = single_check_q5();
  CHECK_THROWS_AS(set_bp_decode(H, {singleton(1, 5), singleton(1, 5)}, 10),
                  InconsistencyError);
  CHECK_THROWS_AS(set_bp_decode(H, {PossibilitySet(5), PossibilitySet::full(5)}, 10),
                  InconsistencyError);  // empty initial set
}

TEST_CASE("set decoder: coefficient handling on a GF(7) check") {
  // 3·x0 + 2·x1 = 0 with x0 = 3 forces x1 = −9·inv(2) = −2·4 = −8 = 6 mod 7.
  const ParityCheckMatrix H(7, 1, 2, {{0, 0, 3}, {0, 1, 2}});
  const DecodeResult r = set_bp_decode(H, {singleton(3, 7), PossibilitySet::full(7)}, 10);
  CHECK(r.status == DecodeStatus::Decoded);
  REQUIRE(r.codeword.size() == 2);
  CHECK(r.codeword[0] == 3);
  CHECK((3 * r.codeword[0] + 2 * r.codeword[1]) % 7 == 0);
  CHECK(r.codeword[1] == 6);
}

TEST_CASE("set decoder: soundness and monotone contraction on random codes") {
  RandomStream build(11, 0);
  const ParityCheckMatrix H = build_sc_ldpc(2, 4, 6, 4, 5, build);
  const Encoder enc(H);
  RandomStream s(12, 0);
  int decoded = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> msg(static_cast<std::size_t>(enc.message_length()));
    for (auto& m : msg) m = static_cast<int>(s.uniform_below(5));
    const std::vector<int> cw = enc.encode(msg);

    std::vector<PossibilitySet> init;
    for (const int c : cw) {
      PossibilitySet p(5);
      p.insert(c);
      for (int a = 0; a < 5; ++a)
        if (s.uniform_double() < 0.35) p.insert(a);
      init.push_back(p);
    }

    SetBpTrace trace;
    const DecodeResult r = set_bp_decode(H, init, 50, &trace);
    REQUIRE(trace.vn_sets.size() == static_cast<std::size_t>(r.iterations));

    const std::vector<PossibilitySet>* prev = &init;
    for (const auto& snapshot : trace.vn_sets) {
      for (std::size_t j = 0; j < snapshot.size(); ++j) {
        CHECK(snapshot[j].contains(cw[j]));  // true symbol never discarded
        PossibilitySet widened = snapshot[j];
        widened.intersect_with((*prev)[j]);
        CHECK(widened == snapshot[j]);  // S_j^(m) subseteq S_j^(m-1)
      }
      prev = &snapshot;
    }
    if (r.status == DecodeStatus::Decoded) {
      ++decoded;
      CHECK(r.codeword == cw);  // soundness: the only all-singleton state is the truth
      CHECK(H.satisfies(r.codeword));
    }
  }
  CHECK(decoded > 0);  // the ensemble is easy enough that some trials resolve
}

TEST_CASE("qspa: codeword deltas decode in one iteration") {
  RandomStream build(21, 0);
  const ParityCheckMatrix H = build_sc_ldpc(2, 4, 6, 4, 5, build);
  const Encoder enc(H);
  RandomStream s(22, 0);
  std::vector<int> msg(static_cast<std::size_t>(enc.message_length()));
  for (auto& m : msg) m = static_cast<int>(s.uniform_below(5));
  const std::vector<int> cw = enc.encode(msg);

  std::vector<BeliefMessage> priors;
  for (const int c : cw) priors.push_back(delta(c, 5));
  const DecodeResult r = qspa_decode(H, priors, 10);
  CHECK(r.status == DecodeStatus::Decoded);
  CHECK(r.iterations == 1);
  CHECK(r.codeword == cw);
}

TEST_CASE("qspa: a delta pins its uniform check partner") {
  const ParityCheckMatrix H = single_check_q5();
  const DecodeResult r = qspa_decode(H, {delta(2, 5), BeliefMessage(5, 0.2)}, 10);
  CHECK(r.status == DecodeStatus::Decoded);
  CHECK(r.iterations == 1);
  CHECK(r.codeword == std::vector<int>{2, 3});
}

TEST_CASE("qspa: conflicting deltas collapse with the iteration recorded") {
  const ParityCheckMatrix H = single_check_q5();
  try {
    qspa_decode(H, {delta(0, 5), delta(1, 5)}, 10);
    FAIL("expected NumericalCollapseError");
  } catch (const NumericalCollapseError& e) {
    CHECK(e.iteration == 1);
  }
}

TEST_CASE("qspa: fft and direct convolution modes agree") {
  RandomStream build(31, 0);
  const ParityCheckMatrix H = build_sc_ldpc(2, 4, 4, 4, 11, build);
  RandomStream s(32, 0);
  std::vector<BeliefMessage> priors;
  for (int j = 0; j < H.cols(); ++j) {
    BeliefMessage m(11);
    double sum = 0.0;
    for (auto& v : m) {
      v = 0.05 + s.uniform_double();
      sum += v;
    }
    for (auto& v : m) v /= sum;
    priors.push_back(m);
  }
  QspaTrace td, tf;
  const DecodeResult rd = qspa_decode(H, priors, 5, ConvMode::Direct, &td);
  const DecodeResult rf = qspa_decode(H, priors, 5, ConvMode::Fft, &tf);
  CHECK(rd.status == rf.status);
  CHECK(rd.iterations == rf.iterations);
  CHECK(rd.codeword == rf.codeword);
  REQUIRE(td.beliefs.size() == tf.beliefs.size());
  for (std::size_t m = 0; m < td.beliefs.size(); ++m)
    for (std::size_t j = 0; j < td.beliefs[m].size(); ++j)
      for (std::size_t a = 0; a < td.beliefs[m][j].size(); ++a)
        CHECK(td.beliefs[m][j][a] ==
              doctest::Approx(tf.beliefs[m][j][a]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("lockstep: qspa belief supports equal set-decoder sets on channel data") {
  // Matching-support inputs (possibility sets vs exact posteriors) must keep
  // the two decoders' per-iteration state aligned: the support of the q-ary
  // belief equals the possibility set at every common iteration.
  RandomStream seeds(404, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int q = trial % 2 == 0 ? 5 : 11;
    RandomStream build(seeds.next_u64(), 0);
    const ParityCheckMatrix H = build_sc_ldpc(2, 4, 5, 4, q, build);
    const Encoder enc(H);
    RandomStream s(seeds.next_u64(), 1);
    std::vector<int> msg(static_cast<std::size_t>(enc.message_length()));
    for (auto& m : msg) m = static_cast<int>(s.uniform_below(static_cast<std::uint64_t>(q)));
    const std::vector<int> cw = enc.encode(msg);

    const ChannelOutputs ch = pass_through_channel(cw, q, 6, seeds.next_u64(), s);
    for (std::size_t j = 0; j < ch.sets.size(); ++j)
      CHECK(to_set(ch.sets[j]) == belief_support(ch.priors[j]));  // same front end

    SetBpTrace st;
    QspaTrace qt;
    DecodeStatus set_status;
    try {
      set_status = set_bp_decode(H, ch.sets, 30, &st).status;
    } catch (const InconsistencyError&) {
      continue;  // p=0 data cannot be inconsistent; defensive only
    }
    (void)set_status;
    qspa_decode(H, ch.priors, 30, ConvMode::Auto, &qt);

    const std::size_t common = std::min(st.vn_sets.size(), qt.beliefs.size());
    CHECK(common >= 1);
    for (std::size_t m = 0; m < common; ++m)
      for (std::size_t j = 0; j < st.vn_sets[m].size(); ++j)
        CHECK(to_set(st.vn_sets[m][j]) == belief_support(qt.beliefs[m][j]));
  }
}

TEST_CASE("cn_update_conv: single-message checks reindex through both coefficients") {
  const int q = 7;
  RandomStream s(51, 0);
  BeliefMessage m(static_cast<std::size_t>(q));
  for (auto& v : m) v = s.uniform_double();
  const PrimeField gf(q);
  for (int h_in = 1; h_in < q; ++h_in)
    for (int h_out = 1; h_out < q; ++h_out) {
      const BeliefMessage out = cn_update_conv({m}, {h_in}, h_out, q);
      for (int b = 0; b < q; ++b) {
        // h_in·a + h_out·b = 0  =>  a = −inv(h_in)·h_out·b.
        const int a = gf.mul(gf.neg(gf.inv(h_in)), gf.mul(h_out, b));
        CHECK(out[static_cast<std::size_t>(b)] ==
              doctest::Approx(m[static_cast<std::size_t>(a)]).epsilon(1e-14));
      }
    }
}

TEST_CASE("cn_update_conv: uniform inputs stay uniform") {
  const int q = 11;
  const BeliefMessage u(static_cast<std::size_t>(q), 1.0 / q);
  const BeliefMessage out = cn_update_conv({u, u}, {3, 8}, 5, q);
  for (const double v : out) CHECK(v == doctest::Approx(1.0 / q).epsilon(1e-12));
}

TEST_CASE("cn_update_conv: matches the naive configuration sum at q=67") {
  const int q = 67;
  const PrimeField gf(q);
  RandomStream s(61, 0);
  for (int rep = 0; rep < 20; ++rep) {
    BeliefMessage m1(static_cast<std::size_t>(q)), m2(static_cast<std::size_t>(q));
    for (auto& v : m1) v = s.uniform_double();
    for (auto& v : m2) v = s.uniform_double();
    const int h1 = 1 + static_cast<int>(s.uniform_below(q - 1));
    const int h2 = 1 + static_cast<int>(s.uniform_below(q - 1));
    const int ho = 1 + static_cast<int>(s.uniform_below(q - 1));

    BeliefMessage naive(static_cast<std::size_t>(q), 0.0);
    for (int b = 0; b < q; ++b)
      for (int a1 = 0; a1 < q; ++a1) {
        // h1·a1 + h2·a2 + ho·b = 0 determines a2.
        const int a2 = gf.mul(gf.inv(h2), gf.neg(gf.add(gf.mul(h1, a1), gf.mul(ho, b))));
        naive[static_cast<std::size_t>(b)] +=
            m1[static_cast<std::size_t>(a1)] * m2[static_cast<std::size_t>(a2)];
      }

    for (const ConvMode mode : {ConvMode::Direct, ConvMode::Fft}) {
      const BeliefMessage out = cn_update_conv({m1, m2}, {h1, h2}, ho, q, mode);
      for (int b = 0; b < q; ++b)
        CHECK(out[static_cast<std::size_t>(b)] ==
              doctest::Approx(naive[static_cast<std::size_t>(b)]).epsilon(1e-10));
    }
  }
}

TEST_CASE("cn_update_conv: argument validation") {
  const BeliefMessage u(5, 0.2);
  CHECK_THROWS_AS(cn_update_conv({}, {}, 1, 5), std::domain_error);
  CHECK_THROWS_AS(cn_update_conv({u}, {1, 2}, 1, 5), std::domain_error);
  CHECK_THROWS_AS(cn_update_conv({u}, {0}, 1, 5), std::domain_error);
  CHECK_THROWS_AS(cn_update_conv({u}, {1}, 5, 5), std::domain_error);
  CHECK_THROWS_AS(cn_update_conv({BeliefMessage(4, 0.25)}, {1}, 1, 5), std::domain_error);
}
