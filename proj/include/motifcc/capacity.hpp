#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace motifcc {

// Monte-Carlo estimate with a normal-approximation 95% CI half-width.
struct McEstimate {
  double value = 0.0;
  double ci95 = 0.0;
};

struct CapacityCurve {
  struct Point {
    int R;
    double bits_per_cycle;
    double ci;  // 0 for closed forms
  };
  std::vector<Point> points;  // R strictly increasing
  std::string metadata;       // generating parameters, echoed into CSV headers
};

// Cost model for the read-write trade-off: writing costs lambda reads-worth
// per cycle, reading costs p_read per read.
struct CostModel {
  double lambda = 1.0;  // write/read cost ratio
  double p_read = 1.0;  // currency per read

  void validate() const;
};

struct RwOptimum {
  int R_star;
  double total_cost;            // currency per information bit at R_star
  double stationarity_residual; // |C(R*) - (lambda+R*)·C'(R*)|, central-difference slope
};

// Closed-form capacity of CC(n,k,R) in bits per cycle, evaluated with exact
// big-integer counts before the final floating-point combination.
double capacity_cc(int n, int k, int R);

// Erasure-channel view: log2 binom(n,k) scaled by the coupon-collector CDF.
double capacity_nbec(int n, int k, int R);

// Thresholded erasure capacity: a symbol is erased unless every one of its k
// motifs appears >= t times. Monte-Carlo with counter-based streams;
// bit-reproducible for fixed (seed, trials) regardless of threads.
McEstimate capacity_nbec_t(int n, int k, int R, int t, std::int64_t trials,
                           std::uint64_t seed, int threads = 0);
McEstimate capacity_nbec_t_serial(int n, int k, int R, int t, std::int64_t trials,
                                  std::uint64_t seed);

// Monte-Carlo capacity of the interference channel: log2 binom(n,k) minus the
// sampled mean of H(X|Y=y).
McEstimate capacity_cc_interference(int n, int k, int R, double p_inter, std::int64_t samples,
                                    std::uint64_t seed, int threads = 0);
McEstimate capacity_cc_interference_serial(int n, int k, int R, double p_inter,
                                           std::int64_t samples, std::uint64_t seed);

// Split-library capacity: a independent sub-libraries of (n_sub, k_sub), reads
// falling into a given sub-library with probability 1/a.
double capacity_split(int n_sub, int k_sub, int a, int R);

// Information density ceilings (bits per cycle).
double max_density(int n, int k);
double split_density(int n_sub, int k_sub, int n);

// Grid minimizer of the total cost per bit P(R) = p_read·(lambda+R)/C(R).
// Ties break toward smaller R. Throws std::domain_error when every point has
// zero capacity.
RwOptimum rw_optimize(const CapacityCurve& curve, const CostModel& cost);

}  // namespace motifcc
