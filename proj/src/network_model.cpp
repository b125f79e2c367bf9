#include "netcs/network_model.hpp"

#include "netcs/errors.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace netcs {

namespace {

constexpr double kMinGain = 1e-6;
constexpr double kPoleLow = 0.5;
constexpr double kPoleHigh = 2.0;

TransferElement draw_element(std::mt19937_64& rng, double gain_bound) {
  std::uniform_real_distribution<double> gain(-gain_bound, gain_bound);
  std::uniform_real_distribution<double> pole(kPoleLow, kPoleHigh);
  double steady = 0.0;
  do {
    steady = gain(rng);
  } while (std::abs(steady) < kMinGain);
  const double a = pole(rng);
  return {steady * a, a};
}

}  // namespace

Network Network::zeros(int p, int k) {
  Network net;
  net.p = p;
  net.k = k;
  net.Q.assign(p, std::vector<TransferElement>(p));
  net.P.assign(p, std::vector<TransferElement>(p));
  return net;
}

int Network::in_degree(int i) const {
  int d = 0;
  for (int j = 0; j < p; ++j) d += Q[i][j].is_zero() ? 0 : 1;
  return d;
}

Network random_network(int p, int k, double gain_bound, std::uint64_t seed) {
  if (p < 2) throw ParameterError("random_network: p must be at least 2");
  if (k < 1 || k >= p) throw ParameterError("random_network: need 1 <= k < p");
  if (!(gain_bound > 0.0) || !std::isfinite(gain_bound))
    throw ParameterError("random_network: gain_bound must be positive");

  std::mt19937_64 rng(seed);
  Network net = Network::zeros(p, k);
  std::uniform_int_distribution<int> degree(1, k);
  std::vector<int> others(p - 1);
  for (int i = 0; i < p; ++i) {
    std::iota(others.begin(), others.end(), 0);
    for (int& j : others)
      if (j >= i) ++j;
    const int d = degree(rng);
    // partial Fisher-Yates: the first d entries become the support
    for (int s = 0; s < d; ++s) {
      std::uniform_int_distribution<int> pick(s, p - 2);
      std::swap(others[s], others[pick(rng)]);
    }
    for (int s = 0; s < d; ++s) net.Q[i][others[s]] = draw_element(rng, gain_bound);
  }
  for (int i = 0; i < p; ++i) net.P[i][i] = draw_element(rng, gain_bound);

  const double rho = abs_gain_spectral_radius(net);
  if (rho >= 1.0) {
    const double factor = 0.9 / rho;
    for (auto& row : net.Q)
      for (auto& e : row) e.gain *= factor;
    net.rescale = factor;
  }
  return net;
}

Network ring_network(int p) {
  if (p < 3) throw ParameterError("ring_network: p must be at least 3");
  Network net = Network::zeros(p, 1);
  net.Q[0][p - 1] = {kRingGain, 1.0};
  for (int i = 1; i < p; ++i) net.Q[i][i - 1] = {kRingGain, 1.0};
  for (int i = 0; i < p; ++i) net.P[i][i] = {kRingGain, 1.0};
  return net;
}

SteadyGains steady_gains(const Network& net) {
  SteadyGains g{Matrix::Zero(net.p, net.p), Matrix::Zero(net.p, net.p)};
  for (int i = 0; i < net.p; ++i) {
    for (int j = 0; j < net.p; ++j) {
      if (!net.Q[i][j].is_zero()) g.Q0(i, j) = net.Q[i][j].steady_state();
      if (!net.P[i][j].is_zero()) g.P0(i, j) = net.P[i][j].steady_state();
    }
  }
  return g;
}

double abs_gain_spectral_radius(const Network& net) {
  return spectral_radius(steady_gains(net).Q0.cwiseAbs());
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> out;
  auto shaped = [&](const ElementMatrix& m) {
    if (static_cast<int>(m.size()) != net.p) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != net.p) return false;
    return true;
  };
  if (net.p < 1) return {"dimension p must be positive"};
  if (!shaped(net.Q) || !shaped(net.P)) return {"Q and P must be p x p"};

  auto at = [](int i, int j) {
    std::ostringstream s;
    s << "(" << i + 1 << "," << j + 1 << ")";
    return s.str();
  };

  for (int i = 0; i < net.p; ++i) {
    for (int j = 0; j < net.p; ++j) {
      const auto& q = net.Q[i][j];
      const auto& pe = net.P[i][j];
      if (!(q.pole > 0.0)) out.push_back("pole not positive in Q at " + at(i, j));
      if (!(pe.pole > 0.0)) out.push_back("pole not positive in P at " + at(i, j));
      if (i == j && !q.is_zero()) out.push_back("hollow Q at " + at(i, j));
      if (i != j && !pe.is_zero()) out.push_back("P off-diagonal entry nonzero at " + at(i, j));
    }
    if (net.P[i][i].is_zero()) out.push_back("P diagonal entry zero at " + std::to_string(i + 1));
  }
  for (int i = 0; i < net.p; ++i) {
    int d = 0;
    for (int j = 0; j < net.p; ++j) d += (j != i && !net.Q[i][j].is_zero()) ? 1 : 0;
    if (d < 1 || d > net.k) {
      out.push_back("in-degree " + std::to_string(d) + " of row " + std::to_string(i + 1) +
                    " outside 1.." + std::to_string(net.k));
    }
  }
  const double rho = abs_gain_spectral_radius(net);
  if (!(rho < 1.0)) {
    std::ostringstream s;
    s << "well-posedness: spectral radius of |Q(0)| is " << rho << " (must be < 1)";
    out.push_back(s.str());
  }
  return out;
}

}  // namespace netcs
