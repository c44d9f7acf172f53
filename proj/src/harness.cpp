#include "motifcc/harness.hpp"

#include "motifcc/combinatorics.hpp"
#include "motifcc/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace motifcc {

namespace {

// Independent work items indexed 0..count; results must be written to
// per-index slots so the reduction order is fixed. `serial` forces the plain
// loop (the reference path used in tests and benchmarks).
template <typename Body>
void parallel_items(std::int64_t count, int threads, bool serial, Body&& body) {
#ifdef _OPENMP
  if (!serial && threads != 1) {
    if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (std::int64_t i = 0; i < count; ++i) body(i);
    } else {
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t i = 0; i < count; ++i) body(i);
    }
    return;
  }
#else
  (void)threads;
  (void)serial;
#endif
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

double binom_ci95(double p_hat, std::int64_t m) {
  if (m <= 0) return 0.0;
  return 1.96 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(m));
}

bool is_all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

struct FrameOutcome {
  std::uint8_t error = 0;
  std::uint8_t wrong = 0;
  int iters = 0;
};

FrameOutcome run_coded_frame(const ExperimentSpec& spec, int q, std::uint64_t alphabet,
                             const ParityCheckMatrix* fixed, const SymbolSpace* space,
                             const ChannelParams& ch, std::uint64_t sweep_seed,
                             std::int64_t frame) {
  RandomStream fs(sweep_seed, static_cast<std::uint64_t>(frame));
  std::optional<ParityCheckMatrix> own;
  const ParityCheckMatrix* H = fixed;
  if (!H) {
    const CodeSpec& cs = *spec.code;
    own.emplace(build_sc_ldpc(cs.d_v, cs.d_c, cs.L_p, cs.N_p, q, fs));
    H = &*own;
  }
  const int N = H->cols();
  const std::uint64_t mask_seed = fs.next_u64();
  const MaskedCodeword mc = apply_mask(std::vector<int>(static_cast<std::size_t>(N), 0), q,
                                       alphabet, mask_seed);

  DecodeResult res;
  if (spec.decoder == DecoderKind::SetBp) {
    std::vector<PossibilitySet> sets;
    sets.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
      const CombinatorialSymbol x{
          unrank_subset(mc.symbols[static_cast<std::size_t>(j)], spec.n, spec.k)};
      const ReadObservation y = sample_reads(x, ch, fs);
      const std::vector<std::uint64_t> ranks = compatible_set(y, spec.n, spec.k);
      sets.push_back(PossibilitySet::from_labels(
          unmask_labels(ranks, mc.mask[static_cast<std::size_t>(j)], q, alphabet), q));
    }
    res = set_bp_decode(*H, sets, spec.max_iters);
  } else {
    std::vector<BeliefMessage> priors;
    priors.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
      const CombinatorialSymbol x{
          unrank_subset(mc.symbols[static_cast<std::size_t>(j)], spec.n, spec.k)};
      const ReadObservation y = sample_reads(x, ch, fs);
      const PosteriorVector post = space ? posterior(y, ch, *space) : posterior(y, ch);
      priors.push_back(unmask_posterior(post.probs, mc.mask[static_cast<std::size_t>(j)], q));
    }
    res = qspa_decode(*H, priors, spec.max_iters, spec.conv_mode);
  }

  FrameOutcome out;
  const bool decoded_zero = res.status == DecodeStatus::Decoded && is_all_zero(res.codeword);
  out.error = decoded_zero ? 0 : 1;
  out.wrong = (res.status == DecodeStatus::Decoded && !is_all_zero(res.codeword)) ? 1 : 0;
  out.iters = res.iterations;
  return out;
}

FrameOutcome run_uncoded_frame(const ExperimentSpec& spec, std::uint64_t alphabet,
                               const SymbolSpace* space, const ChannelParams& ch,
                               std::uint64_t sweep_seed, std::int64_t frame) {
  RandomStream fs(sweep_seed, static_cast<std::uint64_t>(frame));
  const std::uint64_t mask_seed = fs.next_u64();
  const int qa = static_cast<int>(alphabet);  // mask over the full alphabet
  const MaskedCodeword mc = apply_mask(std::vector<int>{0}, qa, alphabet, mask_seed);
  const CombinatorialSymbol x{unrank_subset(mc.symbols[0], spec.n, spec.k)};
  const ReadObservation y = sample_reads(x, ch, fs);

  FrameOutcome out;
  if (spec.decoder == DecoderKind::SetBp) {
    const std::vector<std::uint64_t> ranks = compatible_set(y, spec.n, spec.k);
    const std::vector<int> labels = unmask_labels(ranks, mc.mask[0], qa, alphabet);
    const bool ok = labels.size() == 1 && labels[0] == 0;
    out.error = ok ? 0 : 1;
    out.wrong = (labels.size() == 1 && labels[0] != 0) ? 1 : 0;
  } else {
    const PosteriorVector post = space ? posterior(y, ch, *space) : posterior(y, ch);
    const std::vector<double> prior = unmask_posterior(post.probs, mc.mask[0], qa);
    int best = 0;
    for (int a = 1; a < qa; ++a)
      if (prior[static_cast<std::size_t>(a)] > prior[static_cast<std::size_t>(best)]) best = a;
    out.error = best == 0 ? 0 : 1;
    out.wrong = out.error;  // MAP always commits, so every error is a substitution
  }
  out.iters = 0;
  return out;
}

std::vector<FerRecord> run_fer_impl(const ExperimentSpec& spec, int threads, bool serial) {
  spec.validate();
  const std::uint64_t alphabet = binom_u64(spec.n, spec.k);
  int q = 0;
  std::optional<ParityCheckMatrix> fixed;
  if (spec.code) {
    q = spec.resolved_q();
    if (spec.fixed_code) {
      RandomStream cs(spec.fixed_code_seed, 0);
      fixed.emplace(build_sc_ldpc(spec.code->d_v, spec.code->d_c, spec.code->L_p, spec.code->N_p,
                                  q, cs));
    }
  }
  std::shared_ptr<const SymbolSpace> space;
  if (spec.decoder == DecoderKind::Qspa) space = SymbolSpace::shared(spec.n, spec.k);

  std::vector<FerRecord> records;
  records.reserve(spec.R_values.size());
  for (const int R : spec.R_values) {
    const std::uint64_t sweep_seed =
        derive_seed(spec.master_seed, static_cast<std::uint64_t>(R));
    ChannelParams ch;
    ch.n = spec.n;
    ch.k = spec.k;
    ch.R = R;
    ch.p_inter = spec.p_inter;

    std::vector<FrameOutcome> outcomes(static_cast<std::size_t>(spec.frames));
    const auto t0 = std::chrono::steady_clock::now();
    parallel_items(spec.frames, threads, serial, [&](std::int64_t f) {
      outcomes[static_cast<std::size_t>(f)] =
          spec.code ? run_coded_frame(spec, q, alphabet, fixed ? &*fixed : nullptr, space.get(),
                                      ch, sweep_seed, f)
                    : run_uncoded_frame(spec, alphabet, space.get(), ch, sweep_seed, f);
    });
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    FerRecord rec;
    rec.R = R;
    rec.frames = spec.frames;
    long iter_sum = 0;
    for (const FrameOutcome& o : outcomes) {  // frame order: deterministic reduction
      rec.frame_errors += o.error;
      rec.wrong_codewords += o.wrong;
      iter_sum += o.iters;
    }
    rec.fer = static_cast<double>(rec.frame_errors) / static_cast<double>(rec.frames);
    rec.ci95 = binom_ci95(rec.fer, rec.frames);
    rec.mean_iters = static_cast<double>(iter_sum) / static_cast<double>(rec.frames);
    rec.wall_seconds = wall;
    rec.sweep_seed = sweep_seed;
    records.push_back(rec);
  }
  return records;
}

}  // namespace

void ExperimentSpec::validate() const {
  ChannelParams ch;
  ch.n = n;
  ch.k = k;
  ch.R = 1;
  ch.p_inter = p_inter;
  ch.validate();
  if (R_values.empty()) throw std::domain_error("ExperimentSpec: empty R list");
  for (const int R : R_values)
    if (R < 1) throw std::domain_error("ExperimentSpec: R must be >= 1");
  if (frames < 1) throw std::domain_error("ExperimentSpec: frames must be >= 1");
  if (max_iters < 1) throw std::domain_error("ExperimentSpec: max_iters must be >= 1");
  if (decoder == DecoderKind::SetBp && p_inter != 0.0)
    throw std::domain_error("ExperimentSpec: the set decoder requires p_inter = 0");
  const std::uint64_t alphabet = binom_u64(n, k);
  if (code) {
    const int q = resolved_q();
    if (q < 2 || static_cast<std::uint64_t>(q) > alphabet)
      throw std::domain_error("ExperimentSpec: q must lie in [2, binom(n,k)]");
  } else if (alphabet > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw std::domain_error("ExperimentSpec: uncoded alphabet too large to mask");
  }
}

int ExperimentSpec::resolved_q() const {
  if (!code) throw std::logic_error("ExperimentSpec::resolved_q: no code spec");
  if (code->q != 0) return code->q;
  const std::uint64_t alphabet = binom_u64(n, k);
  if (alphabet > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
    throw std::domain_error("ExperimentSpec: alphabet too large for automatic q");
  const long q = largest_prime_leq(static_cast<long>(alphabet));
  if (q > std::numeric_limits<int>::max())
    throw std::domain_error("ExperimentSpec: automatic q exceeds int range");
  return static_cast<int>(q);
}

std::vector<FerRecord> run_fer(const ExperimentSpec& spec, int threads) {
  return run_fer_impl(spec, threads, /*serial=*/false);
}

std::vector<FerRecord> run_fer_serial(const ExperimentSpec& spec) {
  return run_fer_impl(spec, 1, /*serial=*/true);
}

void CapacitySweepParams::validate() const {
  if (R_values.empty()) throw std::domain_error("CapacitySweepParams: empty R list");
  for (const int R : R_values)
    if (R < 1) throw std::domain_error("CapacitySweepParams: R must be >= 1");
  if (kind == CapacityKind::NbecT && t < 1)
    throw std::domain_error("CapacitySweepParams: t must be >= 1");
  if (kind == CapacityKind::Split && a < 1)
    throw std::domain_error("CapacitySweepParams: a must be >= 1");
  if ((kind == CapacityKind::NbecT || kind == CapacityKind::InterferenceMc) && trials < 1)
    throw std::domain_error("CapacitySweepParams: trials must be >= 1");
}

CapacityCurve sweep_capacity(const CapacitySweepParams& params, int threads) {
  params.validate();
  CapacityCurve curve;
  curve.points.reserve(params.R_values.size());
  std::string meta;
  switch (params.kind) {
    case CapacityKind::Cc:
      meta = "kind=cc";
      break;
    case CapacityKind::Nbec:
      meta = "kind=nbec";
      break;
    case CapacityKind::NbecT:
      meta = "kind=nbec_t t=" + std::to_string(params.t) +
             " trials=" + std::to_string(params.trials) +
             " seed=" + std::to_string(params.master_seed);
      break;
    case CapacityKind::InterferenceMc:
      meta = "kind=interference p_inter=" + std::to_string(params.p_inter) +
             " trials=" + std::to_string(params.trials) +
             " seed=" + std::to_string(params.master_seed);
      break;
    case CapacityKind::Split:
      meta = "kind=split a=" + std::to_string(params.a);
      break;
  }
  meta += " n=" + std::to_string(params.n) + " k=" + std::to_string(params.k);
  curve.metadata = meta;

  for (const int R : params.R_values) {
    const std::uint64_t seed = derive_seed(params.master_seed, static_cast<std::uint64_t>(R));
    CapacityCurve::Point pt{R, 0.0, 0.0};
    switch (params.kind) {
      case CapacityKind::Cc:
        pt.bits_per_cycle = capacity_cc(params.n, params.k, R);
        break;
      case CapacityKind::Nbec:
        pt.bits_per_cycle = capacity_nbec(params.n, params.k, R);
        break;
      case CapacityKind::NbecT: {
        const McEstimate e = capacity_nbec_t(params.n, params.k, R, params.t, params.trials,
                                             seed, threads);
        pt.bits_per_cycle = e.value;
        pt.ci = e.ci95;
        break;
      }
      case CapacityKind::InterferenceMc: {
        const McEstimate e = capacity_cc_interference(params.n, params.k, R, params.p_inter,
                                                      params.trials, seed, threads);
        pt.bits_per_cycle = e.value;
        pt.ci = e.ci95;
        break;
      }
      case CapacityKind::Split:
        pt.bits_per_cycle = capacity_split(params.n, params.k, params.a, R);
        break;
    }
    curve.points.push_back(pt);
  }
  return curve;
}

namespace {

std::vector<HardDecisionStats> hard_decision_impl(int n, int k, double p_inter, int t,
                                                  const std::vector<int>& R_values,
                                                  std::int64_t trials,
                                                  std::uint64_t master_seed, int threads,
                                                  bool serial) {
  if (t < 1) throw std::domain_error("sweep_hard_decision: t must be >= 1");
  if (trials < 1) throw std::domain_error("sweep_hard_decision: trials must be >= 1");
  const std::uint64_t space = binom_u64(n, k);
  std::vector<HardDecisionStats> out;
  out.reserve(R_values.size());
  for (const int R : R_values) {
    ChannelParams ch;
    ch.n = n;
    ch.k = k;
    ch.R = R;
    ch.p_inter = p_inter;
    ch.validate();
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(R));
    // 0 = correct, 1 = erasure, 2 = substitution, per trial.
    std::vector<std::uint8_t> outcome(static_cast<std::size_t>(trials));
    parallel_items(trials, threads, serial, [&](std::int64_t i) {
      RandomStream st(seed, static_cast<std::uint64_t>(i));
      const std::uint64_t rank = st.uniform_below(space);
      const CombinatorialSymbol x{unrank_subset(rank, n, k)};
      const ReadObservation y = sample_reads(x, ch, st);
      const std::optional<CombinatorialSymbol> d = hard_decision_demap(y, k, t);
      std::uint8_t code = 1;
      if (d) code = d->motifs == x.motifs ? 0 : 2;
      outcome[static_cast<std::size_t>(i)] = code;
    });
    HardDecisionStats s;
    s.R = R;
    s.trials = trials;
    for (const std::uint8_t c : outcome) {
      if (c == 1) ++s.erasures;
      if (c == 2) ++s.substitutions;
    }
    s.erasure_rate = static_cast<double>(s.erasures) / static_cast<double>(trials);
    s.substitution_rate = static_cast<double>(s.substitutions) / static_cast<double>(trials);
    s.erasure_ci95 = binom_ci95(s.erasure_rate, trials);
    s.substitution_ci95 = binom_ci95(s.substitution_rate, trials);
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<HardDecisionStats> sweep_hard_decision(int n, int k, double p_inter, int t,
                                                   const std::vector<int>& R_values,
                                                   std::int64_t trials,
                                                   std::uint64_t master_seed, int threads) {
  return hard_decision_impl(n, k, p_inter, t, R_values, trials, master_seed, threads,
                            /*serial=*/false);
}

std::vector<HardDecisionStats> sweep_hard_decision_serial(int n, int k, double p_inter, int t,
                                                          const std::vector<int>& R_values,
                                                          std::int64_t trials,
                                                          std::uint64_t master_seed) {
  return hard_decision_impl(n, k, p_inter, t, R_values, trials, master_seed, 1,
                            /*serial=*/true);
}

}  // namespace motifcc
