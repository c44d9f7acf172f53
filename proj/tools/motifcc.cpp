// Command-line front end: capacity sweeps, FER experiments, code
// construction, encode/simulate/decode pipelines, and the read-write cost
// optimizer. Every run echoes its fully resolved configuration as `#`
// comments at the top of the output so results are self-describing.

#include <CLI11.hpp>

#include "motifcc/capacity.hpp"
#include "motifcc/channel.hpp"
#include "motifcc/code.hpp"
#include "motifcc/combinatorics.hpp"
#include "motifcc/csv.hpp"
#include "motifcc/decode.hpp"
#include "motifcc/errors.hpp"
#include "motifcc/harness.hpp"
#include "motifcc/rng.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace motifcc;

// `start:end[:step]` (inclusive) or a single integer.
std::vector<int> parse_range(const std::string& text) {
  std::vector<long> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(std::stol(tok));
  if (parts.empty() || parts.size() > 3)
    throw std::invalid_argument("range must be START:END[:STEP] or a single value: " + text);
  std::vector<int> out;
  if (parts.size() == 1) {
    out.push_back(static_cast<int>(parts[0]));
    return out;
  }
  const long start = parts[0], end = parts[1], step = parts.size() == 3 ? parts[2] : 1;
  if (step < 1) throw std::invalid_argument("range step must be >= 1: " + text);
  if (end < start) throw std::invalid_argument("range end below start: " + text);
  for (long r = start; r <= end; r += step) out.push_back(static_cast<int>(r));
  return out;
}

struct OutFile {
  explicit OutFile(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);  // binary: LF line endings everywhere
      if (!file) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  bool timing = false;
};

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  std::string kind = "cc";
  int n = 8;
  int k = 4;
  std::string r = "1:40";
  double p = 0.078;
  int t = 1;
  int a = 1;
  std::int64_t samples = 100000;
};

int cmd_capacity(const GlobalOpts& g, const CapacityArgs& a) {
  CapacitySweepParams params;
  if (a.kind == "cc") params.kind = CapacityKind::Cc;
  else if (a.kind == "nbec") params.kind = CapacityKind::Nbec;
  else if (a.kind == "nbec_t") params.kind = CapacityKind::NbecT;
  else if (a.kind == "interference") params.kind = CapacityKind::InterferenceMc;
  else if (a.kind == "split") params.kind = CapacityKind::Split;
  else throw std::invalid_argument("unknown capacity kind: " + a.kind);
  params.n = a.n;
  params.k = a.k;
  params.R_values = parse_range(a.r);
  params.p_inter = a.p;
  params.t = a.t;
  params.a = a.a;
  params.trials = a.samples;
  params.master_seed = g.seed;

  const CapacityCurve curve = sweep_capacity(params, g.threads);

  std::vector<std::string> comments;
  comments.push_back("motifcc capacity kind=" + a.kind + " n=" + std::to_string(a.n) +
                     " k=" + std::to_string(a.k) + " r=" + a.r +
                     " p=" + format_g12(a.p) + " t=" + std::to_string(a.t) +
                     " a=" + std::to_string(a.a) + " samples=" + std::to_string(a.samples) +
                     " seed=" + std::to_string(g.seed) + " format=" + g.format);
  OutFile out(g.out);
  write_capacity_csv(out.stream(), curve, comments);
  return 0;
}

// --------------------------------------------------------------------- fer

struct FerArgs {
  std::string decoder = "setbp";
  int n = 8;
  int k = 4;
  double p = 0.0;
  std::string r = "6";
  int frames = 100;
  int max_iters = 100;
  int dv = 4, dc = 12, lp = 50, np = 1002, q = 0;
  bool uncoded = false;
  std::optional<std::uint64_t> fixed_code;
  std::string conv = "auto";
};

int cmd_fer(const GlobalOpts& g, const FerArgs& a) {
  ExperimentSpec spec;
  spec.n = a.n;
  spec.k = a.k;
  spec.p_inter = a.p;
  spec.R_values = parse_range(a.r);
  spec.frames = a.frames;
  spec.master_seed = g.seed;
  spec.max_iters = a.max_iters;
  if (a.decoder == "setbp") spec.decoder = DecoderKind::SetBp;
  else if (a.decoder == "qspa") spec.decoder = DecoderKind::Qspa;
  else throw std::invalid_argument("unknown decoder: " + a.decoder);
  if (a.uncoded) {
    spec.code.reset();
  } else {
    spec.code = CodeSpec{a.dv, a.dc, a.lp, a.np, a.q};
  }
  if (a.fixed_code) {
    spec.fixed_code = true;
    spec.fixed_code_seed = *a.fixed_code;
  }
  if (a.conv == "auto") spec.conv_mode = ConvMode::Auto;
  else if (a.conv == "direct") spec.conv_mode = ConvMode::Direct;
  else if (a.conv == "fft") spec.conv_mode = ConvMode::Fft;
  else throw std::invalid_argument("unknown convolution mode: " + a.conv);

  if (spec.decoder == DecoderKind::SetBp && spec.p_inter != 0.0) {
    std::cerr << "fer: the set decoder only handles p = 0; use --decoder qspa\n";
    return 2;
  }

  const std::vector<FerRecord> records = run_fer(spec, g.threads);

  std::vector<std::string> comments;
  {
    std::string line = "motifcc fer decoder=" + a.decoder + " n=" + std::to_string(a.n) +
                       " k=" + std::to_string(a.k) + " p=" + format_g12(a.p) + " r=" + a.r +
                       " frames=" + std::to_string(a.frames) +
                       " max_iters=" + std::to_string(a.max_iters);
    if (a.uncoded) {
      line += " uncoded";
    } else {
      line += " dv=" + std::to_string(a.dv) + " dc=" + std::to_string(a.dc) +
              " lp=" + std::to_string(a.lp) + " np=" + std::to_string(a.np) +
              " q=" + std::to_string(spec.resolved_q());
    }
    line += a.fixed_code ? " fixed_code_seed=" + std::to_string(*a.fixed_code)
                         : std::string(" fresh_code_per_frame");
    line += " conv=" + a.conv + " seed=" + std::to_string(g.seed) + " format=" + g.format;
    comments.push_back(line);
  }
  OutFile out(g.out);
  write_fer_csv(out.stream(), records, comments, g.timing);
  return 0;
}

// ------------------------------------------------------------------ rwcost

struct RwArgs {
  double lambda = 1.0;
  double p_read = 1.0;
  std::string curve = "cc";
  int n = 8;
  int k = 4;
  std::string r = "1:200";
};

int cmd_rwcost(const GlobalOpts& g, const RwArgs& a) {
  CapacitySweepParams params;
  if (a.curve == "cc") params.kind = CapacityKind::Cc;
  else if (a.curve == "nbec") params.kind = CapacityKind::Nbec;
  else throw std::invalid_argument("rwcost curve must be cc or nbec: " + a.curve);
  params.n = a.n;
  params.k = a.k;
  params.R_values = parse_range(a.r);
  params.master_seed = g.seed;
  const CapacityCurve curve = sweep_capacity(params, g.threads);

  CostModel cost;
  cost.lambda = a.lambda;
  cost.p_read = a.p_read;
  const RwOptimum opt = rw_optimize(curve, cost);

  OutFile out(g.out);
  out.stream() << "# motifcc rwcost lambda=" << format_g12(a.lambda)
               << " p_read=" << format_g12(a.p_read) << " curve=" << a.curve << " n=" << a.n
               << " k=" << a.k << " r=" << a.r << " seed=" << g.seed << " format=" << g.format
               << "\n";
  out.stream() << "R_star,total_cost,stationarity_residual\n"
               << opt.R_star << ',' << format_g12(opt.total_cost) << ','
               << format_g12(opt.stationarity_residual) << "\n";
  return 0;
}

// --------------------------------------------------------------- construct

struct ConstructArgs {
  int dv = 4, dc = 12, lp = 50, np = 1002, q = 67;
  bool girth = false;
};

int cmd_construct(const GlobalOpts& g, const ConstructArgs& a) {
  if (design_rate(a.dv, a.dc, a.lp) <= 0.0)
    std::cerr << "construct: warning: design rate " << design_rate(a.dv, a.dc, a.lp)
              << " is not positive at lp=" << a.lp << "\n";
  RandomStream stream(g.seed, 0);
  const ParityCheckMatrix H = build_sc_ldpc(a.dv, a.dc, a.lp, a.np, a.q, stream, a.girth);
  OutFile out(g.out);
  H.save(out.stream());
  std::cerr << "construct: built q=" << H.q() << " M=" << H.rows() << " N=" << H.cols()
            << " edges=" << H.num_edges() << " 4cycles=" << count_4cycles(H)
            << " design_rate=" << design_rate(a.dv, a.dc, a.lp) << " seed=" << g.seed << "\n";
  return 0;
}

// ----------------------------------------------------- encode / simreads / decode

ParityCheckMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return ParityCheckMatrix::load(in);
}

struct EncodeArgs {
  std::string matrix;
  std::string in;
  bool random_message = false;
  std::string message_out;
};

int cmd_encode(const GlobalOpts& g, const EncodeArgs& a) {
  const ParityCheckMatrix H = load_matrix(a.matrix);
  const Encoder enc(H);
  std::vector<int> message;
  if (a.random_message) {
    RandomStream stream(g.seed, 0);
    message.resize(static_cast<std::size_t>(enc.message_length()));
    for (auto& m : message)
      m = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(H.q())));
  } else {
    if (a.in.empty())
      throw std::invalid_argument("encode: provide --in MESSAGE_FILE or --random-message");
    std::ifstream in(a.in);
    if (!in) throw std::runtime_error("cannot open message file: " + a.in);
    int v;
    while (in >> v) message.push_back(v);
  }
  if (static_cast<int>(message.size()) != enc.message_length())
    throw std::domain_error("encode: message length " + std::to_string(message.size()) +
                            " != expected " + std::to_string(enc.message_length()));
  if (!a.message_out.empty()) {
    std::ofstream mo(a.message_out, std::ios::binary);
    for (std::size_t i = 0; i < message.size(); ++i)
      mo << message[i] << (i + 1 == message.size() ? "\n" : " ");
  }
  const std::vector<int> cw = enc.encode(message);
  OutFile out(g.out);
  out.stream() << H.q() << ' ' << cw.size() << "\n";
  for (std::size_t i = 0; i < cw.size(); ++i)
    out.stream() << cw[i] << (i + 1 == cw.size() ? "\n" : " ");
  return 0;
}

struct SimreadsArgs {
  std::string in;  // codeword file from encode
  int n = 8;
  int k = 4;
  int R = 6;
  double p = 0.0;
  std::optional<std::uint64_t> mask_seed;
};

int cmd_simreads(const GlobalOpts& g, const SimreadsArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw std::runtime_error("cannot open codeword file: " + a.in);
  int q = 0;
  std::size_t ncw = 0;
  if (!(in >> q >> ncw)) throw std::runtime_error("bad codeword file header: " + a.in);
  std::vector<int> cw(ncw);
  for (auto& c : cw)
    if (!(in >> c)) throw std::runtime_error("truncated codeword file: " + a.in);

  const std::uint64_t alphabet = binom_u64(a.n, a.k);
  const std::uint64_t mask_seed = a.mask_seed ? *a.mask_seed : derive_seed(g.seed, 1);
  const MaskedCodeword mc = apply_mask(cw, q, alphabet, mask_seed);

  ChannelParams ch;
  ch.n = a.n;
  ch.k = a.k;
  ch.R = a.R;
  ch.p_inter = a.p;
  ch.validate();
  RandomStream stream(derive_seed(g.seed, 2), 0);

  OutFile out(g.out);
  out.stream() << a.n << ' ' << a.k << ' ' << a.R << ' ' << format_g12(a.p) << ' ' << q << ' '
               << mask_seed << ' ' << ncw << "\n";
  for (std::size_t j = 0; j < ncw; ++j) {
    const CombinatorialSymbol x{unrank_subset(mc.symbols[j], a.n, a.k)};
    const ReadObservation y = sample_reads(x, ch, stream);
    for (int m = 0; m < a.n; ++m)
      out.stream() << y.counts[static_cast<std::size_t>(m)] << (m + 1 == a.n ? "\n" : " ");
  }
  return 0;
}

struct DecodeArgs {
  std::string matrix;
  std::string in;  // dataset from simreads
  std::string decoder = "setbp";
  int max_iters = 100;
  std::string conv = "auto";
};

int cmd_decode(const GlobalOpts& g, const DecodeArgs& a) {
  const ParityCheckMatrix H = load_matrix(a.matrix);
  std::ifstream in(a.in);
  if (!in) throw std::runtime_error("cannot open dataset file: " + a.in);
  int n = 0, k = 0, R = 0, q = 0;
  double p = 0.0;
  std::uint64_t mask_seed = 0;
  std::size_t count = 0;
  if (!(in >> n >> k >> R >> p >> q >> mask_seed >> count))
    throw std::runtime_error("bad dataset header: " + a.in);
  if (q != H.q()) throw std::domain_error("decode: dataset q does not match matrix q");
  if (count != static_cast<std::size_t>(H.cols()))
    throw std::domain_error("decode: dataset symbol count does not match matrix columns");

  ConvMode mode = ConvMode::Auto;
  if (a.conv == "direct") mode = ConvMode::Direct;
  else if (a.conv == "fft") mode = ConvMode::Fft;
  else if (a.conv != "auto") throw std::invalid_argument("unknown convolution mode: " + a.conv);

  const std::uint64_t alphabet = binom_u64(n, k);
  const std::vector<std::uint64_t> mask =
      apply_mask(std::vector<int>(count, 0), q, alphabet, mask_seed).mask;

  ChannelParams ch;
  ch.n = n;
  ch.k = k;
  ch.R = R;
  ch.p_inter = p;
  ch.validate();

  std::vector<ReadObservation> obs(count);
  for (std::size_t j = 0; j < count; ++j) {
    obs[j].counts.resize(static_cast<std::size_t>(n));
    obs[j].total = 0;
    for (int m = 0; m < n; ++m) {
      if (!(in >> obs[j].counts[static_cast<std::size_t>(m)]))
        throw std::runtime_error("truncated dataset file: " + a.in);
      obs[j].total += obs[j].counts[static_cast<std::size_t>(m)];
    }
  }

  DecodeResult res;
  if (a.decoder == "setbp") {
    if (p != 0.0) {
      std::cerr << "decode: the set decoder only handles p = 0; use --decoder qspa\n";
      return 2;
    }
    std::vector<PossibilitySet> sets;
    sets.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      const auto ranks = compatible_set(obs[j], n, k);
      sets.push_back(PossibilitySet::from_labels(unmask_labels(ranks, mask[j], q, alphabet), q));
    }
    res = set_bp_decode(H, sets, a.max_iters);
  } else if (a.decoder == "qspa") {
    const auto space = SymbolSpace::shared(n, k);
    std::vector<BeliefMessage> priors;
    priors.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      const PosteriorVector post = posterior(obs[j], ch, *space);
      priors.push_back(unmask_posterior(post.probs, mask[j], q));
    }
    res = qspa_decode(H, priors, a.max_iters, mode);
  } else {
    throw std::invalid_argument("unknown decoder: " + a.decoder);
  }

  if (res.status != DecodeStatus::Decoded) {
    std::cerr << "decode: did not converge to a codeword ("
              << (res.status == DecodeStatus::Stalled ? "stalled" : "max iterations") << " after "
              << res.iterations << " iterations)\n";
    return 3;
  }
  const Encoder enc(H);
  const std::vector<int> message = enc.extract_message(res.codeword);
  OutFile out(g.out);
  for (std::size_t i = 0; i < message.size(); ++i)
    out.stream() << message[i] << (i + 1 == message.size() ? "\n" : " ");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupon-collector channel toolkit: capacities, SC-LDPC codes, decoders"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Master seed")->envname("MOTIFCODE_SEED");
  app.add_option("--threads", g.threads, "Worker threads (0 = all); never changes results");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv"}));
  app.add_flag("--timing", g.timing, "Include measured wall_seconds in FER CSV bodies");

  CapacityArgs cap;
  auto* cap_cmd = app.add_subcommand("capacity", "Capacity curves over a read-count range");
  cap_cmd->fallthrough();
  cap_cmd->add_option("--kind", cap.kind, "cc|nbec|nbec_t|interference|split")
      ->check(CLI::IsMember({"cc", "nbec", "nbec_t", "interference", "split"}));
  cap_cmd->add_option("--n,--n-sub", cap.n, "Library size (sub-library for split)");
  cap_cmd->add_option("--k,--k-sub", cap.k, "Motifs per symbol");
  cap_cmd->add_option("--r", cap.r, "Read counts START:END[:STEP]");
  cap_cmd->add_option("--p", cap.p, "Interference probability (interference kind)");
  cap_cmd->add_option("--t", cap.t, "Per-motif count threshold (nbec_t kind)");
  cap_cmd->add_option("--a", cap.a, "Number of sub-libraries (split kind)");
  cap_cmd->add_option("--samples,--trials", cap.samples, "Monte-Carlo sample count");

  FerArgs fer;
  auto* fer_cmd = app.add_subcommand("fer", "Frame-error-rate sweep");
  fer_cmd->fallthrough();
  fer_cmd->add_option("--decoder", fer.decoder, "setbp|qspa")
      ->check(CLI::IsMember({"setbp", "qspa"}));
  fer_cmd->add_option("--n", fer.n, "Library size");
  fer_cmd->add_option("--k", fer.k, "Motifs per symbol");
  fer_cmd->add_option("--p", fer.p, "Interference probability");
  fer_cmd->add_option("--r", fer.r, "Read counts START:END[:STEP]");
  fer_cmd->add_option("--frames", fer.frames, "Frames per R");
  fer_cmd->add_option("--max-iters", fer.max_iters, "Decoder iteration cap");
  fer_cmd->add_option("--dv", fer.dv, "Variable-node degree");
  fer_cmd->add_option("--dc", fer.dc, "Check-node degree");
  fer_cmd->add_option("--lp", fer.lp, "Coupling length");
  fer_cmd->add_option("--np", fer.np, "Protograph copies per position");
  fer_cmd->add_option("--q", fer.q, "Field size (0 = largest prime <= binom(n,k))");
  fer_cmd->add_flag("--uncoded", fer.uncoded, "Single uncoded symbol per frame");
  fer_cmd->add_option("--fixed-code", fer.fixed_code,
                      "Pin one code drawn from this seed instead of per-frame samples");
  fer_cmd->add_option("--conv", fer.conv, "CN convolution path: auto|direct|fft")
      ->check(CLI::IsMember({"auto", "direct", "fft"}));

  RwArgs rw;
  auto* rw_cmd = app.add_subcommand("rwcost", "Read-write cost optimum on a capacity curve");
  rw_cmd->fallthrough();
  rw_cmd->add_option("--lambda", rw.lambda, "Write/read cost ratio");
  rw_cmd->add_option("--p-read", rw.p_read, "Cost per read");
  rw_cmd->add_option("--curve", rw.curve, "cc|nbec")->check(CLI::IsMember({"cc", "nbec"}));
  rw_cmd->add_option("--n", rw.n, "Library size");
  rw_cmd->add_option("--k", rw.k, "Motifs per symbol");
  rw_cmd->add_option("--r", rw.r, "Read-count grid START:END[:STEP]");

  ConstructArgs con;
  auto* con_cmd = app.add_subcommand("construct", "Sample an SC-LDPC parity-check matrix");
  con_cmd->fallthrough();
  con_cmd->add_option("--dv", con.dv, "Variable-node degree");
  con_cmd->add_option("--dc", con.dc, "Check-node degree");
  con_cmd->add_option("--lp", con.lp, "Coupling length");
  con_cmd->add_option("--np", con.np, "Protograph copies per position");
  con_cmd->add_option("--q", con.q, "Field size (prime)");
  con_cmd->add_flag("--girth", con.girth, "Best-effort 4-cycle removal");

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode a message with a parity-check matrix");
  enc_cmd->fallthrough();
  enc_cmd->add_option("--matrix", enc.matrix, "H-matrix file")->required();
  enc_cmd->add_option("--in", enc.in, "Message file (whitespace-separated symbols)");
  enc_cmd->add_flag("--random-message", enc.random_message, "Draw the message from --seed");
  enc_cmd->add_option("--message-out", enc.message_out, "Also write the message here");

  SimreadsArgs sim;
  auto* sim_cmd = app.add_subcommand("simreads", "Mask a codeword and sample channel reads");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--in", sim.in, "Codeword file from encode")->required();
  sim_cmd->add_option("--n", sim.n, "Library size");
  sim_cmd->add_option("--k", sim.k, "Motifs per symbol");
  sim_cmd->add_option("--r", sim.R, "Reads per symbol");
  sim_cmd->add_option("--p", sim.p, "Interference probability");
  sim_cmd->add_option("--mask-seed", sim.mask_seed, "Mask seed (default derived from --seed)");

  DecodeArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "Decode a read dataset back to a message");
  dec_cmd->fallthrough();
  dec_cmd->add_option("--matrix", dec.matrix, "H-matrix file")->required();
  dec_cmd->add_option("--in", dec.in, "Dataset file from simreads")->required();
  dec_cmd->add_option("--decoder", dec.decoder, "setbp|qspa")
      ->check(CLI::IsMember({"setbp", "qspa"}));
  dec_cmd->add_option("--max-iters", dec.max_iters, "Decoder iteration cap");
  dec_cmd->add_option("--conv", dec.conv, "CN convolution path: auto|direct|fft")
      ->check(CLI::IsMember({"auto", "direct", "fft"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cap_cmd) return cmd_capacity(g, cap);
    if (*fer_cmd) return cmd_fer(g, fer);
    if (*rw_cmd) return cmd_rwcost(g, rw);
    if (*con_cmd) return cmd_construct(g, con);
    if (*enc_cmd) return cmd_encode(g, enc);
    if (*sim_cmd) return cmd_simreads(g, sim);
    if (*dec_cmd) return cmd_decode(g, dec);
  } catch (const CLI::ParseError&) {
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
