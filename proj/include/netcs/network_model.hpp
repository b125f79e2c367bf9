#pragma once

#include "netcs/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netcs {

/// First-order lag g / (s + a). An absent edge is an element with gain 0.
struct TransferElement {
  double gain = 0.0;
  double pole = 1.0;

  bool is_zero() const { return gain == 0.0; }
  double steady_state() const { return gain / pole; }

  friend bool operator==(const TransferElement&, const TransferElement&) = default;
};

using ElementMatrix = std::vector<std::vector<TransferElement>>;

/// Dynamical structure function (Q, P) with r = p inputs. Indices are 0-based.
///
/// A Network is a plain value; it may hold a configuration that breaks the
/// modelling assumptions (see validate()).
struct Network {
  int p = 0;
  int k = 0;
  ElementMatrix Q;
  ElementMatrix P;
  /// Factor applied to every Q gain by random_network to restore
  /// well-posedness, if it was needed.
  std::optional<double> rescale;

  static Network zeros(int p, int k);

  const TransferElement& q(int i, int j) const { return Q[i][j]; }
  const TransferElement& pdiag(int i) const { return P[i][i]; }
  int in_degree(int i) const;
};

struct SteadyGains {
  Matrix Q0;
  Matrix P0;
};

/// Uniform random k-sparse network. Row in-degrees are drawn from {1..k}, Q and
/// P steady-state gains from [-gain_bound, gain_bound] with |g| >= 1e-6, poles
/// from [0.5, 2.0]. Q is rescaled to spectral radius 0.9 if rho(|Q(0)|) >= 1.
Network random_network(int p, int k, double gain_bound, std::uint64_t seed);

/// Directed ring 1 -> 2 -> ... -> p -> 1 with all steady-state gains 0.5.
Network ring_network(int p);

inline constexpr double kRingGain = 0.5;

SteadyGains steady_gains(const Network& net);

/// Human-readable descriptions of every broken invariant (1-based indices).
std::vector<std::string> validate(const Network& net);

/// rho(|Q(0)|).
double abs_gain_spectral_radius(const Network& net);

}  // namespace netcs
