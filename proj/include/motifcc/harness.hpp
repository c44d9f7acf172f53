#pragma once

#include "motifcc/capacity.hpp"
#include "motifcc/channel.hpp"
#include "motifcc/code.hpp"
#include "motifcc/conv.hpp"
#include "motifcc/decode.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace motifcc {

enum class DecoderKind { SetBp, Qspa };

// Code ensemble parameters; q = 0 resolves to largest_prime_leq(binom(n,k)).
struct CodeSpec {
  int d_v = 4;
  int d_c = 12;
  int L_p = 50;
  int N_p = 1002;
  int q = 0;
};

// One FER sweep: fixed (n, k, p_inter), a list of read counts R, one decoder.
// Without a code, each frame is a single uncoded symbol demapped by MAP (or
// by uniqueness of its compatible set, for the set decoder).
struct ExperimentSpec {
  int n = 8;
  int k = 4;
  double p_inter = 0.0;
  std::vector<int> R_values;
  std::optional<CodeSpec> code = CodeSpec{};
  int frames = 100;
  std::uint64_t master_seed = 1;
  DecoderKind decoder = DecoderKind::SetBp;
  int max_iters = 100;
  bool fixed_code = false;            // default: fresh ensemble draw per frame
  std::uint64_t fixed_code_seed = 0;  // code draw when fixed_code is set
  ConvMode conv_mode = ConvMode::Auto;

  void validate() const;
  int resolved_q() const;  // requires a code spec
};

struct FerRecord {
  int R = 0;
  int frames = 0;
  int frame_errors = 0;     // not Decoded, or decoded to the wrong word
  int wrong_codewords = 0;  // Decoded with z != transmitted (undetected)
  double fer = 0.0;
  double ci95 = 0.0;  // binomial normal approximation, 95%
  double mean_iters = 0.0;
  double wall_seconds = 0.0;     // measured here; CSV writers may zero it
  std::uint64_t sweep_seed = 0;  // frame f of this R used RandomStream(sweep_seed, f)
};

// Per R: `frames` independent frames, each drawing its own code (unless
// fixed_code), mask, and channel reads from RandomStream(sweep_seed, f) with
// sweep_seed = derive_seed(master_seed, R). Results are reduced in frame
// order, so records are identical for every thread count.
std::vector<FerRecord> run_fer(const ExperimentSpec& spec, int threads = 0);
// Plain-loop reference implementation (no OpenMP), kept for testing.
std::vector<FerRecord> run_fer_serial(const ExperimentSpec& spec);

enum class CapacityKind { Cc, Nbec, NbecT, InterferenceMc, Split };

struct CapacitySweepParams {
  CapacityKind kind = CapacityKind::Cc;
  int n = 8;  // sub-library size when kind == Split
  int k = 4;
  std::vector<int> R_values;
  double p_inter = 0.0;          // InterferenceMc
  int t = 1;                     // NbecT threshold
  int a = 1;                     // Split library count
  std::int64_t trials = 100000;  // Monte-Carlo kinds
  std::uint64_t master_seed = 1;

  void validate() const;
};

// Evaluates the chosen capacity over the R grid; Monte-Carlo points get seed
// derive_seed(master_seed, R) and a nonzero ci.
CapacityCurve sweep_capacity(const CapacitySweepParams& params, int threads = 0);

struct HardDecisionStats {
  int R = 0;
  std::int64_t trials = 0;
  std::int64_t erasures = 0;
  std::int64_t substitutions = 0;
  double erasure_rate = 0.0;
  double substitution_rate = 0.0;
  double erasure_ci95 = 0.0;
  double substitution_ci95 = 0.0;
};

// Single-symbol Monte-Carlo of the threshold demapper: per trial draw a
// uniform symbol, sample reads, demap; nullopt counts as an erasure, a wrong
// symbol as a substitution. Per-R seed = derive_seed(master_seed, R).
std::vector<HardDecisionStats> sweep_hard_decision(int n, int k, double p_inter, int t,
                                                   const std::vector<int>& R_values,
                                                   std::int64_t trials,
                                                   std::uint64_t master_seed, int threads = 0);
std::vector<HardDecisionStats> sweep_hard_decision_serial(int n, int k, double p_inter, int t,
                                                          const std::vector<int>& R_values,
                                                          std::int64_t trials,
                                                          std::uint64_t master_seed);

}  // namespace motifcc
