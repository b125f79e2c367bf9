#pragma once

#include "netcs/experiment.hpp"
#include "netcs/network_model.hpp"
#include "netcs/recovery.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace netcs {

using Rng = std::mt19937_64;

enum class Strategy { Random, Biased, Targeted };

std::string to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

/// Uniform l-subset of [0, p), sorted.
std::vector<int> choose_random(int p, int l, Rng& rng);

/// l inputs drawn without replacement with weight 1 / (1 + usage[i]), sorted.
std::vector<int> choose_biased(const std::vector<int>& usage, int l, Rng& rng);

/// One round of the design loop.
struct DesignRound {
  std::vector<int> inputs;
  std::vector<double> magnitudes;
  std::vector<bool> row_unique;  // certificate per row after the round
};

struct DesignState {
  int p = 0;
  int k = 1;
  int l = 1;
  Strategy strategy = Strategy::Random;
  std::uint64_t seed = 0;
  DataSet data;
  std::vector<int> usage;
  std::vector<DesignRound> history;
  /// Rows whose certificate already holds. Appending experiments cannot
  /// revoke a certificate, so these are not re-checked.
  std::vector<bool> certified;
  /// Input sets implicated by rank-deficient subsets after the last round;
  /// see deficient_input_sets().
  std::vector<std::vector<int>> deficient;
  double rank_tol = kDefaultRankTol;

  int m() const { return data.m(); }
  bool all_unique() const;
};

/// Re-checks the certificate of every row not yet certified and rebuilds
/// `state.deficient`: a row whose own input was never applied contributes {i};
/// any other uncertified row contributes its smallest rank-deficient column
/// subset (at most min(2k, p-1, m-1) columns) mapped to state indices.
void refresh_certificates(DesignState& state);

/// Targeted choice: for each deficient set not yet hit this round, take its
/// least-used member (ties to the lower index), preferring globally the
/// least-used pick; remaining slots are filled by biased sampling.
std::vector<int> choose_targeted(const DesignState& state, Rng& rng);

/// Fresh state for `net`, no experiments yet.
DesignState start_design(const Network& net, Strategy strategy, int l, int k, std::uint64_t seed,
                         double rank_tol = kDefaultRankTol);

/// Picks the next input set for `state` (never repeating an earlier set while
/// unused l-subsets remain), runs the experiment with magnitudes drawn from
/// [0.5, 1.5] and refreshes the per-row certificates. `transfer` is
/// steady_transfer() of the network under test.
void design_step(DesignState& state, const Matrix& transfer, Rng& rng);

struct DesignOutcome {
  bool unique = false;  // false when max_m was reached first
  int m_required = 0;
  DesignState final_state;
};

DesignOutcome run_until_unique(const Network& net, Strategy strategy, int l, int k, int max_m,
                               std::uint64_t seed, double rank_tol = kDefaultRankTol);

}  // namespace netcs
