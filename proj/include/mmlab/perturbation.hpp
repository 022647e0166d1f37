#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/ledger.hpp"

namespace mmlab {

enum class FeedbackMode { simple, expectation_feedback };
enum class Channel { volume, value };  // U or C

const char* mode_name(FeedbackMode mode);      // "SIMPLE" / "EXPECTATION_FEEDBACK"
const char* channel_name(Channel channel);     // "U" / "C"

// One disturbance channel of one label. With X the baseline (U_k^2 or C_k^2),
// E the expected-trade baseline (Et_Uk or Et_Ck) and x, et the dimensionless
// disturbances:
//   SIMPLE:                X dx/dt = a E et,                  E det/dt = b X x
//   EXPECTATION_FEEDBACK:  dx/dt = a E/(X N) et - (a Ex/N) x, E det/dt = b X x
// so that x'' + gamma x' + omega^2 x = 0 with gamma = a Ex/N and
// omega^2 = -a b/N. N is an explicit per-channel normalization (default 1).
struct ChannelParams {
  double baseline = 1.0;       // X > 0
  double expected = 1.0;       // E > 0
  double expectation = 0.0;    // Ex, feedback mode only
  double a = 0.0;
  double b = 0.0;
  double normalization = 1.0;  // N > 0, feedback mode only
  double x0 = 0.0;             // x(0)
  double et0 = 0.0;            // et(0)
};

// Caller-supplied first-degree disturbance: amplitude * exp(growth t) * sin(omega t + phase).
struct Sinusoid {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double growth = 0.0;

  double operator()(double t) const;
};

struct FirstDegree {
  double lambda = 0.0;  // lambda_1k
  double mu = 0.0;      // mu_1k
  Sinusoid u;           // u(1,k;t)
  Sinusoid c;           // c(1,k;t)
};

struct LabelPerturbation {
  Label label;
  ChannelParams u;  // volume channel: baseline U_k^2, expected Et_Uk
  ChannelParams c;  // value channel: baseline C_k^2, expected Et_Ck
  std::optional<FirstDegree> first;
};

struct PerturbationConfig {
  FeedbackMode mode = FeedbackMode::simple;
  std::vector<LabelPerturbation> labels;
  // Mean-price baseline; when set every label must carry first-degree inputs.
  std::optional<double> p10;
};

// Throws ConfigError for empty label sets, non-positive baselines or
// normalizations, non-finite couplings, or inconsistent first-degree inputs.
void validate(const PerturbationConfig& config);

// Messages for initial disturbances of magnitude >= 0.1, where the linear
// approximation is doubtful.
std::vector<std::string> linear_regime_warnings(const PerturbationConfig& config);

// Derived weights and price baseline of the second-degree assembly.
struct PriceBaseline {
  std::vector<double> lambda2;  // U_k^2 / U_20
  std::vector<double> mu2;      // C_k^2 / C_20
  double p20 = 0.0;             // C_20 / U_20
};
PriceBaseline price_baseline(const PerturbationConfig& config);

enum class Regime { harmonic, exponential, damped, critical };
const char* regime_name(Regime regime);

struct RegimeVerdict {
  Regime regime = Regime::critical;
  double omega = 0.0;  // undamped angular frequency, where omega^2 > 0
  double rate = 0.0;   // EXPONENTIAL: dominant growth exponent (negative decays)
  double rate2 = 0.0;  // EXPONENTIAL: the other exponent
  double phi = 0.0;    // DAMPED: sqrt(omega^2 - gamma^2/4)
  double gamma = 0.0;  // damping coefficient (feedback mode)
};

RegimeVerdict classify_regime(const PerturbationConfig& config, std::size_t label_index, Channel channel);
RegimeVerdict classify_channel(FeedbackMode mode, const ChannelParams& p);

// Step giving 1000 steps over the shortest period (or e-folding time).
double default_step(const PerturbationConfig& config);

struct LabelSeries {
  Label label;
  std::vector<double> u2, c2, et_u, et_c, pi2k;
  std::vector<double> u1, c1;  // sampled first-degree inputs, when given
};

struct PerturbationTrajectory {
  std::vector<double> time;
  std::vector<LabelSeries> labels;
  std::vector<double> pi2, p2;
  std::vector<double> p1, sigma2;  // empty without first-degree inputs
};

// RK4 integration of the disturbance equations, then assembly of the price
// (and, with first-degree inputs, mean price and volatility) series.
// simulate_linear needs SIMPLE mode and simulate_damped EXPECTATION_FEEDBACK;
// simulate dispatches on the mode. IntegrationError on a non-finite state.
PerturbationTrajectory simulate_linear(const PerturbationConfig& config, double dt, double duration);
PerturbationTrajectory simulate_damped(const PerturbationConfig& config, double dt, double duration);
PerturbationTrajectory simulate(const PerturbationConfig& config, double dt, double duration);

struct Price2Series {
  std::vector<double> pi2;
  std::vector<double> p2;
};

// pi(2;t) = sum_k (mu_2k c - lambda_2k u), p(2;t) = p20 (1 + pi). The
// equivalent form sum mu pi_k + sum (mu - lambda) u is evaluated too and
// must agree to 1e-12 (InvariantError otherwise). ConfigError for weights that
// do not sum to 1 within 1e-12 or sizes that disagree.
Price2Series assemble_price2(std::span<const LabelSeries> series, std::span<const double> lambda2,
                             std::span<const double> mu2, double p20);

// p(1;t) = p10 (1 + sum_k (mu_1k c1 - lambda_1k u1)).
std::vector<double> assemble_price1(std::span<const LabelSeries> series, std::span<const double> lambda1,
                                    std::span<const double> mu1, double p10);

// Linearized sigma_p^2(t) around sigma_p0^2 = p20 - p10^2, which must be positive:
//   sigma_p0^2 (1 + sigma_2 pi(2;t) - sigma_1 pi(1;t)), sigma_2 = p20 / sigma_p0^2,
//   sigma_1 = 2 p10^2 / sigma_p0^2 (first order of p(2) - p(1)^2).
std::vector<double> assemble_volatility(std::span<const LabelSeries> series, std::span<const double> lambda2,
                                        std::span<const double> mu2, std::span<const double> lambda1,
                                        std::span<const double> mu1, double p20, double p10);

struct PriceOdeSeries {
  std::vector<double> time;
  std::vector<double> volume;  // U(2;t)
  std::vector<double> price;   // p(2;t)
};

// RK4 on dU/dt = F_U(t), U dp/dt + p F_U(t) = F_C(t).
// SingularityError once U reaches zero.
PriceOdeSeries solve_price_ode(double u0, double p0, const std::function<double(double)>& f_u,
                               const std::function<double(double)>& f_c, double dt, double duration);

// "t,k,l,u2,c2,et_u,et_c,pi2k"
std::string label_trajectory_csv(const PerturbationTrajectory& trajectory);
// "t,pi2,p2,p1,sigma2"
std::string assembled_trajectory_csv(const PerturbationTrajectory& trajectory);
// "t,U,p"
std::string price_ode_csv(const PriceOdeSeries& series);

struct OscillationFit {
  double frequency = 0.0;   // angular
  double decay_rate = 0.0;  // positive for decaying amplitude, negative for growth
};

// Angular frequency pi / (mean spacing of zero crossings, located by linear
// interpolation); decay rate from a least-squares fit of log |extremum|
// against time, one parabolically refined extremum per enclosed half cycle.
// Fewer than two crossings: frequency 0 and the rate from log |x| over the
// latter half of the series. A constant series gives (0, 0).
OscillationFit fit_oscillation(std::span<const double> series, double dt);

}  // namespace mmlab
