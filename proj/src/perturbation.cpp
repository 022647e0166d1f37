#include "mmlab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"
#include "mmlab/rk4.hpp"

namespace mmlab {

namespace {

constexpr double kWeightTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kWarnMagnitude = 0.1;

void check_channel(const ChannelParams& p, const std::string& where) {
  if (!(p.baseline > 0.0) || !std::isfinite(p.baseline)) throw ConfigError(where + ": baseline must be positive");
  if (!(p.expected > 0.0) || !std::isfinite(p.expected)) {
    throw ConfigError(where + ": expected-trade baseline must be positive");
  }
  if (!(p.normalization > 0.0) || !std::isfinite(p.normalization)) {
    throw ConfigError(where + ": normalization must be positive");
  }
  for (double v : {p.expectation, p.a, p.b, p.x0, p.et0}) {
    if (!std::isfinite(v)) throw ConfigError(where + ": parameters must be finite");
  }
}

std::string label_text(const Label& k) {
  return "label (" + std::to_string(k.k) + "," + std::to_string(k.l) + ")";
}

void check_weights(std::span<const double> w, std::size_t expected, const char* name) {
  if (w.size() != expected) throw ConfigError(std::string(name) + " weights do not match the label count");
  double sum = 0.0;
  for (double x : w) sum += x;
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    throw ConfigError(std::string(name) + " weights sum to " + csv::format(sum) + ", not 1");
  }
}

// Coefficients of dx/dt = kx * et - damp * x, det/dt = ke * x.
struct Linear {
  double kx, damp, ke;
};

Linear linear_system(FeedbackMode mode, const ChannelParams& p) {
  if (mode == FeedbackMode::simple) return {p.a * p.expected / p.baseline, 0.0, p.b * p.baseline / p.expected};
  return {p.a * p.expected / (p.baseline * p.normalization), p.a * p.expectation / p.normalization,
          p.b * p.baseline / p.expected};
}

PerturbationTrajectory integrate(const PerturbationConfig& config, double dt, double duration) {
  validate(config);
  const std::size_t steps = step_count(dt, duration);
  const double h = steps > 0 ? duration / static_cast<double>(steps) : 0.0;
  const std::size_t labels = config.labels.size();

  std::vector<Linear> sys;
  std::vector<double> y;  // per label: u, et_u, c, et_c
  for (const auto& lp : config.labels) {
    sys.push_back(linear_system(config.mode, lp.u));
    sys.push_back(linear_system(config.mode, lp.c));
    y.insert(y.end(), {lp.u.x0, lp.u.et0, lp.c.x0, lp.c.et0});
  }
  auto rhs = [&](double, const std::vector<double>& s, std::vector<double>& d) {
    for (std::size_t ch = 0; ch < sys.size(); ++ch) {
      const double x = s[2 * ch];
      const double et = s[2 * ch + 1];
      d[2 * ch] = sys[ch].kx * et - sys[ch].damp * x;
      d[2 * ch + 1] = sys[ch].ke * x;
    }
  };

  PerturbationTrajectory tr;
  tr.time.reserve(steps + 1);
  tr.labels.resize(labels);
  for (std::size_t i = 0; i < labels; ++i) tr.labels[i].label = config.labels[i].label;
  auto record = [&](double t) {
    tr.time.push_back(t);
    for (std::size_t i = 0; i < labels; ++i) {
      LabelSeries& s = tr.labels[i];
      s.u2.push_back(y[4 * i]);
      s.et_u.push_back(y[4 * i + 1]);
      s.c2.push_back(y[4 * i + 2]);
      s.et_c.push_back(y[4 * i + 3]);
      s.pi2k.push_back(y[4 * i + 2] - y[4 * i]);
      if (const auto& f = config.labels[i].first) {
        s.u1.push_back(f->u(t));
        s.c1.push_back(f->c(t));
      }
    }
  };

  Rk4 rk(y.size());
  record(0.0);
  for (std::size_t n = 0; n < steps; ++n) {
    rk.step(y, static_cast<double>(n) * h, h, rhs);
    record(static_cast<double>(n + 1) * h);
  }

  const PriceBaseline base = price_baseline(config);
  Price2Series p2 = assemble_price2(tr.labels, base.lambda2, base.mu2, base.p20);
  tr.pi2 = std::move(p2.pi2);
  tr.p2 = std::move(p2.p2);
  if (config.p10) {
    std::vector<double> l1, m1;
    for (const auto& lp : config.labels) {
      l1.push_back(lp.first->lambda);
      m1.push_back(lp.first->mu);
    }
    tr.p1 = assemble_price1(tr.labels, l1, m1, *config.p10);
    tr.sigma2 = assemble_volatility(tr.labels, base.lambda2, base.mu2, l1, m1, base.p20, *config.p10);
  }
  return tr;
}

}  // namespace

const char* mode_name(FeedbackMode mode) {
  return mode == FeedbackMode::simple ? "SIMPLE" : "EXPECTATION_FEEDBACK";
}

const char* channel_name(Channel channel) { return channel == Channel::volume ? "U" : "C"; }

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::harmonic: return "HARMONIC";
    case Regime::exponential: return "EXPONENTIAL";
    case Regime::damped: return "DAMPED";
    case Regime::critical: return "CRITICAL";
  }
  return "CRITICAL";
}

double Sinusoid::operator()(double t) const {
  return amplitude * std::exp(growth * t) * std::sin(omega * t + phase);
}

void validate(const PerturbationConfig& config) {
  if (config.labels.empty()) throw ConfigError("perturbation config needs at least one label");
  for (const auto& lp : config.labels) {
    check_channel(lp.u, label_text(lp.label) + " U channel");
    check_channel(lp.c, label_text(lp.label) + " C channel");
    if (config.p10.has_value() != lp.first.has_value()) {
      throw ConfigError(label_text(lp.label) + ": first-degree inputs must be given for every label together with p10");
    }
  }
  if (config.p10 && (!(*config.p10 > 0.0) || !std::isfinite(*config.p10))) {
    throw ConfigError("p10 must be positive");
  }
}

std::vector<std::string> linear_regime_warnings(const PerturbationConfig& config) {
  std::vector<std::string> out;
  for (const auto& lp : config.labels) {
    const std::pair<const char*, double> values[] = {
        {"u(2,k;0)", lp.u.x0}, {"et_u(k;0)", lp.u.et0}, {"c(2,k;0)", lp.c.x0}, {"et_c(k;0)", lp.c.et0}};
    for (const auto& [name, v] : values) {
      if (std::abs(v) >= kWarnMagnitude) {
        out.push_back(label_text(lp.label) + ": initial " + name + " = " + csv::format(v) +
                      " is not small; the linear approximation may not hold");
      }
    }
  }
  return out;
}

PriceBaseline price_baseline(const PerturbationConfig& config) {
  double u20 = 0.0, c20 = 0.0;
  for (const auto& lp : config.labels) {
    u20 += lp.u.baseline;
    c20 += lp.c.baseline;
  }
  PriceBaseline b;
  for (const auto& lp : config.labels) {
    b.lambda2.push_back(lp.u.baseline / u20);
    b.mu2.push_back(lp.c.baseline / c20);
  }
  b.p20 = c20 / u20;
  return b;
}

RegimeVerdict classify_channel(FeedbackMode mode, const ChannelParams& p) {
  RegimeVerdict v;
  const double n = mode == FeedbackMode::simple ? 1.0 : p.normalization;
  const double omega2 = -p.a * p.b / n;
  const double gamma = mode == FeedbackMode::simple ? 0.0 : p.a * p.expectation / n;
  v.gamma = gamma;
  if (omega2 > 0.0) v.omega = std::sqrt(omega2);
  if (gamma == 0.0) {
    if (omega2 > 0.0) {
      v.regime = Regime::harmonic;
    } else if (omega2 < 0.0) {
      v.regime = Regime::exponential;
      v.rate = std::sqrt(-omega2);
      v.rate2 = -v.rate;
    }
    return v;
  }
  const double disc = omega2 - gamma * gamma / 4.0;
  if (disc > 0.0) {
    v.regime = Regime::damped;
    v.phi = std::sqrt(disc);
  } else if (disc < 0.0) {
    v.regime = Regime::exponential;
    const double root = std::sqrt(-disc);
    v.rate = -gamma / 2.0 + root;
    v.rate2 = -gamma / 2.0 - root;
  } else {
    v.rate = v.rate2 = -gamma / 2.0;
  }
  return v;
}

RegimeVerdict classify_regime(const PerturbationConfig& config, std::size_t label_index, Channel channel) {
  if (label_index >= config.labels.size()) throw DomainError("label index out of range");
  const auto& lp = config.labels[label_index];
  return classify_channel(config.mode, channel == Channel::volume ? lp.u : lp.c);
}

double default_step(const PerturbationConfig& config) {
  double scale = std::numeric_limits<double>::infinity();
  for (const auto& lp : config.labels) {
    for (const ChannelParams* p : {&lp.u, &lp.c}) {
      const RegimeVerdict v = classify_channel(config.mode, *p);
      switch (v.regime) {
        case Regime::harmonic: scale = std::min(scale, 2.0 * std::numbers::pi / v.omega); break;
        case Regime::damped: scale = std::min(scale, 2.0 * std::numbers::pi / v.phi); break;
        case Regime::exponential:
          scale = std::min(scale, 1.0 / std::max(std::abs(v.rate), std::abs(v.rate2)));
          break;
        case Regime::critical:
          if (v.rate != 0.0) scale = std::min(scale, 1.0 / std::abs(v.rate));
          break;
      }
    }
  }
  if (!std::isfinite(scale)) scale = 1.0;
  return scale / 1000.0;
}

PerturbationTrajectory simulate_linear(const PerturbationConfig& config, double dt, double duration) {
  if (config.mode != FeedbackMode::simple) throw ConfigError("simulate_linear needs SIMPLE mode");
  return integrate(config, dt, duration);
}

PerturbationTrajectory simulate_damped(const PerturbationConfig& config, double dt, double duration) {
  if (config.mode != FeedbackMode::expectation_feedback) {
    throw ConfigError("simulate_damped needs EXPECTATION_FEEDBACK mode");
  }
  return integrate(config, dt, duration);
}

PerturbationTrajectory simulate(const PerturbationConfig& config, double dt, double duration) {
  return integrate(config, dt, duration);
}

Price2Series assemble_price2(std::span<const LabelSeries> series, std::span<const double> lambda2,
                             std::span<const double> mu2, double p20) {
  check_weights(lambda2, series.size(), "lambda_2");
  check_weights(mu2, series.size(), "mu_2");
  const std::size_t samples = series.empty() ? 0 : series.front().u2.size();
  for (const auto& s : series) {
    if (s.u2.size() != samples || s.c2.size() != samples || s.pi2k.size() != samples) {
      throw ConfigError("label series have different lengths");
    }
  }
  Price2Series out;
  out.pi2.resize(samples);
  out.p2.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double direct = 0.0, split = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const LabelSeries& s = series[k];
      direct += mu2[k] * s.c2[i] - lambda2[k] * s.u2[i];
      split += mu2[k] * s.pi2k[i] + (mu2[k] - lambda2[k]) * s.u2[i];
    }
    if (std::abs(direct - split) > kIdentityTolerance) {
      throw InvariantError("price disturbance forms disagree by " + csv::format(std::abs(direct - split)));
    }
    out.pi2[i] = direct;
    out.p2[i] = p20 * (1.0 + direct);
  }
  return out;
}

std::vector<double> assemble_price1(std::span<const LabelSeries> series, std::span<const double> lambda1,
                                    std::span<const double> mu1, double p10) {
  check_weights(lambda1, series.size(), "lambda_1");
  check_weights(mu1, series.size(), "mu_1");
  const std::size_t samples = series.empty() ? 0 : series.front().u1.size();
  for (const auto& s : series) {
    if (s.u1.size() != samples || s.c1.size() != samples) throw ConfigError("first-degree series have different lengths");
  }
  std::vector<double> out(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double pi = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) pi += mu1[k] * series[k].c1[i] - lambda1[k] * series[k].u1[i];
    out[i] = p10 * (1.0 + pi);
  }
  return out;
}

std::vector<double> assemble_volatility(std::span<const LabelSeries> series, std::span<const double> lambda2,
                                        std::span<const double> mu2, std::span<const double> lambda1,
                                        std::span<const double> mu1, double p20, double p10) {
  const double s0 = p20 - p10 * p10;
  if (!(s0 > 0.0)) {
    throw ConfigError("baseline variance p20 - p10^2 = " + csv::format(s0) + " must be positive");
  }
  check_weights(lambda2, series.size(), "lambda_2");
  check_weights(mu2, series.size(), "mu_2");
  check_weights(lambda1, series.size(), "lambda_1");
  check_weights(mu1, series.size(), "mu_1");
  const double sigma2 = p20 / s0;
  const double sigma1 = 2.0 * p10 * p10 / s0;
  const std::size_t samples = series.empty() ? 0 : series.front().u2.size();
  for (const auto& s : series) {
    if (s.u2.size() != samples || s.c2.size() != samples || s.u1.size() != samples || s.c1.size() != samples) {
      throw ConfigError("label series have different lengths");
    }
  }
  std::vector<double> out(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    double second = 0.0, first = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
      second += mu2[k] * series[k].c2[i] - lambda2[k] * series[k].u2[i];
      first += mu1[k] * series[k].c1[i] - lambda1[k] * series[k].u1[i];
    }
    out[i] = s0 * (1.0 + sigma2 * second - sigma1 * first);
  }
  return out;
}

PriceOdeSeries solve_price_ode(double u0, double p0, const std::function<double(double)>& f_u,
                               const std::function<double(double)>& f_c, double dt, double duration) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw ConfigError("initial volume U0 must be positive");
  if (!std::isfinite(p0)) throw ConfigError("initial price must be finite");
  const std::size_t steps = step_count(dt, duration);
  const double h = steps > 0 ? duration / static_cast<double>(steps) : 0.0;
  std::vector<double> y{u0, p0};
  auto rhs = [&](double t, const std::vector<double>& s, std::vector<double>& d) {
    if (!(s[0] > 0.0)) throw SingularityError("volume U(2;t) reached zero at t = " + csv::format(t));
    const double fu = f_u ? f_u(t) : 0.0;
    const double fc = f_c ? f_c(t) : 0.0;
    if (!std::isfinite(fu) || !std::isfinite(fc)) throw IntegrationError("non-finite forcing at t = " + csv::format(t));
    d[0] = fu;
    d[1] = (fc - s[1] * fu) / s[0];
  };
  PriceOdeSeries out;
  out.time.push_back(0.0);
  out.volume.push_back(u0);
  out.price.push_back(p0);
  Rk4 rk(2);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    rk.step(y, t, h, rhs);
    if (!(y[0] > 0.0)) throw SingularityError("volume U(2;t) reached zero at t = " + csv::format(t + h));
    out.time.push_back(static_cast<double>(n + 1) * h);
    out.volume.push_back(y[0]);
    out.price.push_back(y[1]);
  }
  return out;
}

std::string label_trajectory_csv(const PerturbationTrajectory& tr) {
  std::string out = "t,k,l,u2,c2,et_u,et_c,pi2k\n";
  for (std::size_t i = 0; i < tr.time.size(); ++i) {
    const std::string t = csv::format(tr.time[i]);
    for (const auto& s : tr.labels) {
      out += t + ',' + std::to_string(s.label.k) + ',' + std::to_string(s.label.l) + ',' + csv::format(s.u2[i]) +
             ',' + csv::format(s.c2[i]) + ',' + csv::format(s.et_u[i]) + ',' + csv::format(s.et_c[i]) + ',' +
             csv::format(s.pi2k[i]) + '\n';
    }
  }
  return out;
}

std::string assembled_trajectory_csv(const PerturbationTrajectory& tr) {
  std::string out = "t,pi2,p2,p1,sigma2\n";
  const bool first = !tr.p1.empty();
  for (std::size_t i = 0; i < tr.time.size(); ++i) {
    out += csv::format(tr.time[i]) + ',' + csv::format(tr.pi2[i]) + ',' + csv::format(tr.p2[i]) + ',' +
           (first ? csv::format(tr.p1[i]) : std::string(csv::kMissing)) + ',' +
           (first ? csv::format(tr.sigma2[i]) : std::string(csv::kMissing)) + '\n';
  }
  return out;
}

std::string price_ode_csv(const PriceOdeSeries& s) {
  std::string out = "t,U,p\n";
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    out += csv::format(s.time[i]) + ',' + csv::format(s.volume[i]) + ',' + csv::format(s.price[i]) + '\n';
  }
  return out;
}

}  // namespace mmlab
