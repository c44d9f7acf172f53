// Timing harness for the parallel kernels against their serial reference
// implementations, plus the two check-node convolution strategies. Build-only
// target; run manually, optionally with a workload scale factor:
//
//   ./bench_mc [scale]

#include "motifcc/capacity.hpp"
#include "motifcc/conv.hpp"
#include "motifcc/harness.hpp"
#include "motifcc/rng.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace motifcc;

namespace {

double time_of(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& name, double serial, double parallel) {
  std::printf("%-34s %10.3fs %10.3fs %8.2fx\n", name.c_str(), serial, parallel,
              parallel > 0.0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  const double scale = argc > 1 ? std::atof(argv[1]) : 1.0;
  if (!(scale > 0.0)) {
    std::fprintf(stderr, "usage: %s [scale > 0]\n", argv[0]);
    return 1;
  }

  std::printf("%-34s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    const std::int64_t trials = static_cast<std::int64_t>(200000 * scale);
    const double ts = time_of([&] { capacity_nbec_t_serial(8, 4, 10, 2, trials, 7); });
    const double tp = time_of([&] { capacity_nbec_t(8, 4, 10, 2, trials, 7); });
    report("capacity_nbec_t " + std::to_string(trials) + " trials", ts, tp);
  }
  {
    const std::int64_t samples = static_cast<std::int64_t>(20000 * scale);
    const double ts =
        time_of([&] { capacity_cc_interference_serial(8, 4, 8, 0.078, samples, 7); });
    const double tp = time_of([&] { capacity_cc_interference(8, 4, 8, 0.078, samples, 7); });
    report("capacity_cc_interference " + std::to_string(samples), ts, tp);
  }
  {
    const std::int64_t trials = static_cast<std::int64_t>(200000 * scale);
    const double ts = time_of([&] { sweep_hard_decision_serial(8, 4, 0.078, 2, {20}, trials, 7); });
    const double tp = time_of([&] { sweep_hard_decision(8, 4, 0.078, 2, {20}, trials, 7); });
    report("hard_decision sweep " + std::to_string(trials), ts, tp);
  }
  {
    ExperimentSpec spec;
    spec.R_values = {6};
    spec.frames = static_cast<int>(40 * scale);
    CodeSpec code;
    code.d_v = 2;
    code.d_c = 4;
    code.L_p = 10;
    code.N_p = 8;
    code.q = 5;
    spec.code = code;
    spec.master_seed = 7;
    const double ts = time_of([&] { run_fer_serial(spec); });
    const double tp = time_of([&] { run_fer(spec); });
    report("run_fer setbp " + std::to_string(spec.frames) + " frames", ts, tp);
  }

  std::printf("\n%-14s %12s %12s\n", "conv length q", "direct", "fft");
  for (const int q : {17, 67, 131, 257, 521}) {
    RandomStream s(5, static_cast<std::uint64_t>(q));
    std::vector<double> a(static_cast<std::size_t>(q)), b(static_cast<std::size_t>(q)),
        out(static_cast<std::size_t>(q));
    for (auto& v : a) v = s.uniform_double();
    for (auto& v : b) v = s.uniform_double();
    const int reps = static_cast<int>(20000 * scale);
    const double td = time_of([&] {
      for (int r = 0; r < reps; ++r) circular_convolve(a.data(), b.data(), out.data(), q, ConvMode::Direct);
    });
    const double tf = time_of([&] {
      for (int r = 0; r < reps; ++r) circular_convolve(a.data(), b.data(), out.data(), q, ConvMode::Fft);
    });
    std::printf("%-14d %10.3fus %10.3fus\n", q, 1e6 * td / reps, 1e6 * tf / reps);
  }
  return 0;
}
