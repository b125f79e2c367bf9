#pragma once

#include "netcs/design.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netcs {

struct UniquenessRow {
  Strategy strategy;
  int l;
  double mean_m;
  double sd_m;
  int trials;
  int exhausted;  // trials still non-unique after p experiments
};

struct CoherenceRow {
  double gain_bound;
  int m;
  double mean_mu;
};

struct BpRow {
  Strategy strategy;
  int m;
  double success_rate;
};

/// Seed for trial `trial` of a sweep seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Mean and standard deviation of m_required per (strategy, l). Networks use
/// gain bound 0.5. At most p independent experiments exist, so each trial is
/// capped at m = p; trials that reach the cap without a certificate count as p
/// and are tallied in `exhausted`.
std::vector<UniquenessRow> bench_uniqueness(int p, int k, int trials,
                                            const std::vector<Strategy>& strategies,
                                            const std::vector<int>& l_values, std::uint64_t seed);

/// Mean coherence of the row sensing matrices [A1 A2] for m = 1..max_m with
/// four random inputs per experiment.
std::vector<CoherenceRow> bench_coherence(int p, int k, const std::vector<double>& gain_bounds,
                                          int trials, std::uint64_t seed, int max_m = 0,
                                          int inputs_per_experiment = 4);

/// Fraction of trials in which basis pursuit recovers every row support of Q
/// exactly, for m = 1..p experiments of l inputs each.
std::vector<BpRow> bench_bp(int p, int k, int l, int trials,
                            const std::vector<Strategy>& strategies, std::uint64_t seed);

/// True iff every row support of Qhat matches Q0 (zero cutoff 0 for Qhat,
/// which is already thresholded).
bool supports_match(const Matrix& Qhat, const Matrix& Q0);

std::string uniqueness_csv(const std::vector<UniquenessRow>& rows);
std::string coherence_csv(const std::vector<CoherenceRow>& rows);
std::string bp_csv(const std::vector<BpRow>& rows);

}  // namespace netcs
