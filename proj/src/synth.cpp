#include "mmlab/synth.hpp"

#include <cmath>

#include "mmlab/error.hpp"
#include "mmlab/philox.hpp"

namespace mmlab {

namespace {

// Counter streams keep the draw families independent.
constexpr std::uint32_t kInitStream = 0;
constexpr std::uint32_t kMotionStream = 1;
constexpr std::uint32_t kEventStream = 2;

double reflect(double x) {
  while (x < 0.0 || x > 1.0) x = x < 0.0 ? -x : 2.0 - x;
  return x;
}

std::size_t pick(double u, std::size_t n) {
  const auto i = static_cast<std::size_t>(u * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace

void validate(const SynthConfig& c) {
  if (c.agents < 2) throw ConfigError("synthetic market needs at least 2 agents");
  if (c.dimension != 1 && c.dimension != 2) throw ConfigError("dimension m must be 1 or 2");
  if (c.label_count < 1 || static_cast<std::size_t>(c.label_count) != c.matrix.grades()) {
    throw ConfigError("label count K must equal the transition matrix grade count");
  }
  if (!c.label_ex.empty() && c.label_ex.size() != static_cast<std::size_t>(c.label_count)) {
    throw ConfigError("label_ex needs one magnitude per label");
  }
  for (double ex : c.label_ex) {
    if (!(ex >= 0.0) || !std::isfinite(ex)) throw ConfigError("expectation magnitudes must be non-negative");
  }
  if (!(c.duration >= 0.0) || !std::isfinite(c.duration)) throw ConfigError("duration must be non-negative");
  if (!(c.intensity >= 0.0) || !std::isfinite(c.intensity)) throw ConfigError("intensity must be non-negative");
  if (!(c.price_sigma >= 0.0) || !(c.volume_sigma >= 0.0) || !(c.noise >= 0.0)) {
    throw ConfigError("sigmas and noise must be non-negative");
  }
  if (!(c.base_price > 0.0) || !(c.volume_median > 0.0)) throw ConfigError("base price and volume median must be positive");
  if (!(c.step > 0.0) || !std::isfinite(c.step)) throw ConfigError("motion step must be positive");
}

AgentSwarm::AgentSwarm(const SynthConfig& config) : config_(config) {
  validate(config_);
  const auto m = static_cast<std::size_t>(config.dimension);
  positions_.resize(static_cast<std::size_t>(config.agents));
  for (std::size_t a = 0; a < positions_.size(); ++a) {
    CounterRng rng(config.seed, kInitStream, a);
    for (std::size_t i = 0; i < m; ++i) positions_[a].push_back(rng.uniform());
  }
}

AgentSwarm::AgentSwarm(const SynthConfig& config, std::vector<std::vector<double>> initial)
    : config_(config), positions_(std::move(initial)) {
  validate(config);
  if (positions_.size() != static_cast<std::size_t>(config.agents)) throw ConfigError("one position per agent needed");
  for (const auto& p : positions_) {
    if (p.size() != static_cast<std::size_t>(config.dimension)) throw ConfigError("position dimension mismatch");
    for (double x : p) {
      if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("initial positions must lie in [0,1]");
    }
  }
}

double AgentSwarm::time() const { return static_cast<double>(steps_) * config_.step; }

std::vector<double> AgentSwarm::velocity(std::size_t agent) const {
  std::vector<double> v;
  for (double x : positions_.at(agent)) v.push_back(coordinate_velocity(config_.matrix, x));
  return v;
}

void AgentSwarm::advance() {
  const double h = config_.step;
  const double spread = config_.noise * std::sqrt(h);
  const std::uint64_t agents = positions_.size();
  for (std::size_t a = 0; a < positions_.size(); ++a) {
    CounterRng rng(config_.seed, kMotionStream, steps_ * agents + a);
    for (double& x : positions_[a]) {
      const double drift = coordinate_velocity(config_.matrix, x);
      const double kick = spread > 0.0 ? spread * rng.normal() : 0.0;
      x = reflect(x + drift * h + kick);
    }
  }
  ++steps_;
}

Ledger generate_ledger(const SynthConfig& config) {
  validate(config);
  const auto K = static_cast<std::size_t>(config.label_count);
  std::vector<TradeRecord> records;
  if (config.intensity == 0.0 || config.duration == 0.0) return Ledger(config.dimension, config.label_count, {});

  AgentSwarm swarm(config);
  double t = 0.0;
  for (std::uint64_t event = 0;; ++event) {
    CounterRng rng(config.seed, kEventStream, event);
    t += rng.exponential(config.intensity);
    if (t >= config.duration) break;
    const auto target = static_cast<std::size_t>(std::floor(t / config.step));
    while (swarm.steps() < target) swarm.advance();

    const auto agents = static_cast<std::size_t>(config.agents);
    const std::size_t seller = pick(rng.uniform(), agents);
    std::size_t buyer = pick(rng.uniform(), agents - 1);
    if (buyer >= seller) ++buyer;
    const int seller_l = static_cast<int>(pick(rng.uniform(), K)) + 1;
    const int buyer_l = static_cast<int>(pick(rng.uniform(), K)) + 1;
    const double z_volume = rng.normal();
    const double z_price = rng.normal();

    TradeRecord r;
    r.time = t;
    r.seller_coords = swarm.positions()[seller];
    r.buyer_coords = swarm.positions()[buyer];
    r.volume = config.volume_median * std::exp(config.volume_sigma * z_volume);
    const double price = config.price_sigma > 0.0 ? config.base_price * std::exp(config.price_sigma * z_price)
                                                  : config.base_price;
    r.value = price * r.volume;
    r.seller_label = {static_cast<int>(config.matrix.nearest_grade(r.seller_coords[0])) + 1, seller_l};
    r.buyer_label = {static_cast<int>(config.matrix.nearest_grade(r.buyer_coords[0])) + 1, buyer_l};
    const auto ex = [&](int k) { return config.label_ex.empty() ? 1.0 : config.label_ex[static_cast<std::size_t>(k - 1)]; };
    r.seller_ex_u = r.seller_ex_c = ex(r.seller_label.k);
    r.buyer_ex_u = r.buyer_ex_c = ex(r.buyer_label.k);
    r.seller_velocity = swarm.velocity(seller);
    r.buyer_velocity = swarm.velocity(buyer);
    records.push_back(std::move(r));
  }
  return Ledger(config.dimension, config.label_count, std::move(records));
}

}  // namespace mmlab
