#include "netcs/bench.hpp"

#include "netcs/errors.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace netcs {

namespace {

constexpr double kDefaultGainBound = 0.5;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t design_seed(std::uint64_t network_seed, Strategy s, int l) {
  return splitmix64(network_seed ^ splitmix64(static_cast<std::uint64_t>(l) * 4 +
                                              static_cast<std::uint64_t>(s)));
}

std::string number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

void check_trials(int trials) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
}

// Support of every row recovered exactly by basis pursuit with P(i,i)
// unpenalised.
bool bp_recovers(const DataSet& data, const Matrix& Q0) {
  const int p = data.p();
  Vector weights = Vector::Ones(p);
  weights(p - 1) = 0.0;
  for (int i = 0; i < p; ++i) {
    const RowSystem sys = assemble_row_system(data, i);
    Matrix a(sys.A1.rows(), p);
    a << sys.A1, sys.A2;
    Vector x;
    try {
      x = basis_pursuit_weighted(a, sys.b, weights);
    } catch (const NumericalError&) {
      return false;
    }
    for (size_t c = 0; c < sys.col_map.size(); ++c) {
      const bool found = x(static_cast<Index>(c)) != 0.0;
      const bool truth = Q0(i, sys.col_map[c]) != 0.0;
      if (found != truth) return false;
    }
  }
  return true;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return splitmix64(splitmix64(seed) + static_cast<std::uint64_t>(trial));
}

std::vector<UniquenessRow> bench_uniqueness(int p, int k, int trials,
                                            const std::vector<Strategy>& strategies,
                                            const std::vector<int>& l_values, std::uint64_t seed) {
  check_trials(trials);
  std::vector<Network> nets;
  for (int t = 0; t < trials; ++t)
    nets.push_back(random_network(p, k, kDefaultGainBound, trial_seed(seed, t)));

  std::vector<UniquenessRow> rows;
  for (Strategy s : strategies) {
    for (int l : l_values) {
      double sum = 0.0;
      double sum_sq = 0.0;
      int exhausted = 0;
      for (int t = 0; t < trials; ++t) {
        const auto out = run_until_unique(nets[t], s, l, k, p,
                                          design_seed(trial_seed(seed, t), s, l));
        exhausted += out.unique ? 0 : 1;
        sum += out.m_required;
        sum_sq += static_cast<double>(out.m_required) * out.m_required;
      }
      const double mean = sum / trials;
      const double var = trials > 1 ? std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1)) : 0.0;
      rows.push_back({s, l, mean, std::sqrt(var), trials, exhausted});
    }
  }
  return rows;
}

std::vector<CoherenceRow> bench_coherence(int p, int k, const std::vector<double>& gain_bounds,
                                          int trials, std::uint64_t seed, int max_m,
                                          int inputs_per_experiment) {
  check_trials(trials);
  if (max_m <= 0) max_m = p;
  std::vector<CoherenceRow> rows;
  for (double g : gain_bounds) {
    std::vector<double> sum(static_cast<size_t>(max_m) + 1, 0.0);
    std::vector<int> count(static_cast<size_t>(max_m) + 1, 0);
    for (int t = 0; t < trials; ++t) {
      // Same seeds for every gain bound: identical topology and experiments.
      const Network net = random_network(p, k, g, trial_seed(seed, t));
      const Matrix transfer = steady_transfer(net);
      Rng rng(design_seed(trial_seed(seed, t), Strategy::Random, inputs_per_experiment));
      std::uniform_real_distribution<double> magnitude(0.5, 1.5);
      DataSet data;
      for (int m = 1; m <= max_m; ++m) {
        ExperimentPlan plan;
        plan.inputs = choose_random(p, inputs_per_experiment, rng);
        for (size_t s = 0; s < plan.inputs.size(); ++s) plan.magnitudes.push_back(magnitude(rng));
        data.append(steady_response(transfer, plan), plan);
        for (int i = 0; i < p; ++i) {
          const RowSystem sys = assemble_row_system(data, i);
          Matrix a(sys.A1.rows(), p);
          a << sys.A1, sys.A2;
          try {
            sum[m] += coherence(a).mu;
            ++count[m];
          } catch (const ParameterError&) {
            // fewer than two nonzero columns
          }
        }
      }
    }
    for (int m = 1; m <= max_m; ++m)
      rows.push_back({g, m, count[m] ? sum[m] / count[m] : 0.0});
  }
  return rows;
}

std::vector<BpRow> bench_bp(int p, int k, int l, int trials,
                            const std::vector<Strategy>& strategies, std::uint64_t seed) {
  check_trials(trials);
  std::vector<BpRow> rows;
  for (Strategy s : strategies) {
    std::vector<int> successes(static_cast<size_t>(p) + 1, 0);
    for (int t = 0; t < trials; ++t) {
      const Network net = random_network(p, k, kDefaultGainBound, trial_seed(seed, t));
      const Matrix Q0 = steady_gains(net).Q0;
      const Matrix transfer = steady_transfer(net);
      DesignState state = start_design(net, s, l, k, design_seed(trial_seed(seed, t), s, l));
      Rng rng(state.seed);
      for (int m = 1; m <= p; ++m) {
        design_step(state, transfer, rng);
        if (bp_recovers(state.data, Q0)) ++successes[m];
      }
    }
    for (int m = 1; m <= p; ++m)
      rows.push_back({s, m, static_cast<double>(successes[m]) / trials});
  }
  return rows;
}

bool supports_match(const Matrix& Qhat, const Matrix& Q0) {
  if (Qhat.rows() != Q0.rows() || Qhat.cols() != Q0.cols()) return false;
  for (Index i = 0; i < Q0.rows(); ++i)
    for (Index j = 0; j < Q0.cols(); ++j)
      if (i != j && (Qhat(i, j) != 0.0) != (Q0(i, j) != 0.0)) return false;
  return true;
}

std::string uniqueness_csv(const std::vector<UniquenessRow>& rows) {
  std::string out = "strategy,l,mean_m,sd_m,trials,exhausted\n";
  for (const auto& r : rows)
    out += to_string(r.strategy) + "," + std::to_string(r.l) + "," + number(r.mean_m) + "," +
           number(r.sd_m) + "," + std::to_string(r.trials) + "," + std::to_string(r.exhausted) + "\n";
  return out;
}

std::string coherence_csv(const std::vector<CoherenceRow>& rows) {
  std::string out = "gain_bound,m,mean_mu\n";
  for (const auto& r : rows)
    out += number(r.gain_bound) + "," + std::to_string(r.m) + "," + number(r.mean_mu) + "\n";
  return out;
}

std::string bp_csv(const std::vector<BpRow>& rows) {
  std::string out = "strategy,m,success_rate\n";
  for (const auto& r : rows)
    out += to_string(r.strategy) + "," + std::to_string(r.m) + "," + number(r.success_rate) + "\n";
  return out;
}

}  // namespace netcs
