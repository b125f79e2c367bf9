#include "netcs/design.hpp"

#include "netcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace netcs {

namespace {

constexpr double kMagnitudeLow = 0.5;
constexpr double kMagnitudeHigh = 1.5;
constexpr int kRedrawLimit = 1000;

void check_l(int p, int l) {
  if (l < 1 || l > p)
    throw ParameterError("inputs per experiment must be in 1.." + std::to_string(p));
}

// Weighted draws without replacement from the indices not in `exclude`.
void biased_fill(const std::vector<int>& usage, std::vector<int>& chosen, int l, Rng& rng) {
  const int p = static_cast<int>(usage.size());
  std::vector<int> pool;
  for (int i = 0; i < p; ++i)
    if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pool.push_back(i);
  while (static_cast<int>(chosen.size()) < l && !pool.empty()) {
    std::vector<double> weights;
    weights.reserve(pool.size());
    for (int i : pool) weights.push_back(1.0 / (1.0 + usage[i]));
    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    const size_t s = pick(rng);
    chosen.push_back(pool[s]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(s));
  }
  std::sort(chosen.begin(), chosen.end());
}

// Number of l-subsets of p items, saturating at 1e18.
double subset_count(int p, int l) {
  double c = 1.0;
  for (int i = 1; i <= l; ++i) {
    c = c * (p - l + i) / i;
    if (c > 1e18) return 1e18;
  }
  return c;
}

}  // namespace

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Random:
      return "random";
    case Strategy::Biased:
      return "biased";
    case Strategy::Targeted:
      break;
  }
  return "targeted";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "random") return Strategy::Random;
  if (name == "biased") return Strategy::Biased;
  if (name == "targeted") return Strategy::Targeted;
  throw ParameterError("unknown strategy '" + name + "' (expected random, biased or targeted)");
}

std::vector<int> choose_random(int p, int l, Rng& rng) {
  check_l(p, l);
  std::vector<int> idx(static_cast<size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  for (int s = 0; s < l; ++s) {
    std::uniform_int_distribution<int> pick(s, p - 1);
    std::swap(idx[s], idx[pick(rng)]);
  }
  idx.resize(static_cast<size_t>(l));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<int> choose_biased(const std::vector<int>& usage, int l, Rng& rng) {
  check_l(static_cast<int>(usage.size()), l);
  std::vector<int> chosen;
  biased_fill(usage, chosen, l, rng);
  return chosen;
}

bool DesignState::all_unique() const {
  return std::all_of(certified.begin(), certified.end(), [](bool b) { return b; });
}

void refresh_certificates(DesignState& state) {
  state.deficient.clear();
  const int m = state.m();
  if (m == 0) return;
  const int subset_size = std::min(2 * state.k, state.p - 1);
  auto to_states = [](const RowSystem& sys, const std::vector<int>& cols) {
    std::vector<int> states;
    for (int c : cols) states.push_back(sys.col_map[c]);
    return states;
  };
  for (int i = 0; i < state.p; ++i) {
    if (state.certified[i]) continue;
    const RowSystem sys = assemble_row_system(state.data, i);
    if (!has_full_column_rank(sys.A2, state.rank_tol)) {
      state.deficient.push_back({i});
      continue;
    }
    const Matrix projected = qr_split(sys.A2, state.rank_tol).null.transpose() * sys.A1;
    // Below the full subset size only dependencies among at most m - 1
    // columns say anything about particular inputs.
    if (m - 1 >= subset_size) {
      const UniquenessReport r = check_projected_subsets(projected, state.k, state.rank_tol);
      if (!r.deficient_subset) {
        state.certified[i] = m >= 2 * state.k + 1;
        continue;
      }
    }
    const int search = std::min(subset_size, m - 1);
    if (auto witness = minimal_deficient_subset(projected, search, state.rank_tol))
      state.deficient.push_back(to_states(sys, *witness));
  }
}

std::vector<int> choose_targeted(const DesignState& state, Rng& rng) {
  check_l(state.p, state.l);
  if (state.m() == 0) return choose_random(state.p, state.l, rng);
  const auto& usage = state.usage;
  auto less_used = [&](int a, int b) {
    return usage[a] != usage[b] ? usage[a] < usage[b] : a < b;
  };

  std::vector<int> chosen;
  while (static_cast<int>(chosen.size()) < state.l) {
    int best = -1;
    for (const auto& set : state.deficient) {
      const bool served = std::any_of(set.begin(), set.end(), [&](int s) {
        return std::find(chosen.begin(), chosen.end(), s) != chosen.end();
      });
      if (served) continue;
      const int pick = *std::min_element(set.begin(), set.end(), less_used);
      if (best < 0 || less_used(pick, best)) best = pick;
    }
    if (best < 0) break;
    chosen.push_back(best);
  }
  biased_fill(usage, chosen, state.l, rng);
  return chosen;
}

DesignState start_design(const Network& net, Strategy strategy, int l, int k, std::uint64_t seed,
                         double rank_tol) {
  check_l(net.p, l);
  if (k < 1 || k >= net.p) throw ParameterError("design: need 1 <= k < p");
  DesignState state;
  state.p = net.p;
  state.k = k;
  state.l = l;
  state.strategy = strategy;
  state.seed = seed;
  state.rank_tol = rank_tol;
  state.usage.assign(net.p, 0);
  state.certified.assign(net.p, false);
  state.data.Y.resize(net.p, 0);
  state.data.U.resize(net.p, 0);
  state.data.usage.assign(net.p, 0);
  return state;
}

void design_step(DesignState& state, const Matrix& transfer, Rng& rng) {
  std::set<std::vector<int>> previous;
  for (const auto& round : state.history) previous.insert(round.inputs);
  const bool may_repeat = static_cast<double>(previous.size()) >= subset_count(state.p, state.l);

  auto draw = [&](bool first_attempt) {
    switch (state.strategy) {
      case Strategy::Random:
        return choose_random(state.p, state.l, rng);
      case Strategy::Biased:
        return choose_biased(state.usage, state.l, rng);
      case Strategy::Targeted:
        break;
    }
    return first_attempt ? choose_targeted(state, rng) : choose_biased(state.usage, state.l, rng);
  };

  // Each experiment applies a different input set while one is available.
  std::vector<int> inputs = draw(true);
  for (int attempt = 0; !may_repeat && previous.count(inputs) && attempt < kRedrawLimit; ++attempt)
    inputs = draw(false);

  std::uniform_real_distribution<double> magnitude(kMagnitudeLow, kMagnitudeHigh);
  ExperimentPlan plan;
  plan.inputs = inputs;
  for (size_t s = 0; s < inputs.size(); ++s) plan.magnitudes.push_back(magnitude(rng));

  state.data.append(steady_response(transfer, plan), plan);
  for (int i : inputs) ++state.usage[i];
  refresh_certificates(state);

  DesignRound round;
  round.inputs = inputs;
  round.magnitudes = plan.magnitudes;
  round.row_unique = state.certified;
  state.history.push_back(std::move(round));
}

DesignOutcome run_until_unique(const Network& net, Strategy strategy, int l, int k, int max_m,
                               std::uint64_t seed, double rank_tol) {
  if (max_m < 1) throw ParameterError("run_until_unique: max_m must be at least 1");
  DesignOutcome out;
  out.final_state = start_design(net, strategy, l, k, seed, rank_tol);
  const Matrix transfer = steady_transfer(net);
  Rng rng(seed);
  while (out.final_state.m() < max_m) {
    design_step(out.final_state, transfer, rng);
    if (out.final_state.all_unique()) {
      out.unique = true;
      break;
    }
  }
  out.m_required = out.final_state.m();
  return out;
}

}  // namespace netcs
