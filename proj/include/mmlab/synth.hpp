#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmlab/kinematics.hpp"
#include "mmlab/ledger.hpp"

namespace mmlab {

struct SynthConfig {
  std::uint64_t seed = 1;
  int agents = 100;
  int dimension = 1;   // m
  int label_count = 1; // K, equal to the matrix grade count
  TransitionMatrix matrix{{0.5}, {{1.0}}, 1.0};
  double duration = 10.0;
  double intensity = 10.0;     // trades per unit time
  double base_price = 1.0;
  double price_sigma = 0.0;    // per-trade lognormal jitter
  double volume_median = 1.0;
  double volume_sigma = 0.0;
  std::vector<double> label_ex;  // per-label expectation magnitudes, default 1
  double noise = 0.0;          // diffusion coefficient of agent motion
  double step = 0.01;          // agent motion time step
};

// ConfigError unless agents >= 2, m in {1, 2}, K matches the matrix, rates,
// sigmas and noise are non-negative, prices and steps positive.
void validate(const SynthConfig& config);

// Agents drifting with the grade velocity of their nearest grade per axis
// plus Gaussian noise, reflected at 0 and 1.
class AgentSwarm {
public:
  explicit AgentSwarm(const SynthConfig& config);
  AgentSwarm(const SynthConfig& config, std::vector<std::vector<double>> initial_positions);

  void advance();  // one motion step
  std::size_t steps() const { return steps_; }
  double time() const;
  const std::vector<std::vector<double>>& positions() const { return positions_; }
  std::vector<double> velocity(std::size_t agent) const;

private:
  SynthConfig config_;
  std::vector<std::vector<double>> positions_;
  std::size_t steps_ = 0;
};

// Poisson trade events between distinct agents. Identical configs give
// identical ledgers.
Ledger generate_ledger(const SynthConfig& config);

}  // namespace mmlab
