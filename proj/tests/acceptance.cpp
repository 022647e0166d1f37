// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmlab/cli.hpp"
#include "mmlab/dynamics.hpp"
#include "mmlab/expectations.hpp"
#include "mmlab/grid.hpp"
#include "mmlab/kinematics.hpp"
#include "mmlab/moments.hpp"
#include "mmlab/perturbation.hpp"
#include "oracles.hpp"

using namespace mmlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1: p(n) U(n) = C(n), rolling equals one-shot.
Outcome moment_identity() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> size(1, 10000);
  double worst = 0.0;
  for (int ledger_index = 0; ledger_index < 1000 && o.pass; ++ledger_index) {
    const auto trades = oracle::random_trades(rng, size(rng), 1, 1, 100.0);
    const Ledger ledger(1, 1, trades);
    const auto whole = compute_moments(ledger.records(), TimeWindow{50.0, 200.0}, 6);
    for (int n = 1; n <= 6; ++n) {
      const auto s = oracle::degree_sums(trades, n);
      const double c = whole.sum(n).value_sum;
      const double u = whole.sum(n).volume_sum;
      worst = std::max({worst, oracle::relative(*whole.moment(n) * u, c),
                        oracle::relative(c, static_cast<double>(s.value)),
                        oracle::relative(u, static_cast<double>(s.volume))});
    }
    const double delta = 5.0 + ledger_index % 20;
    const auto rolling = moment_series(ledger, delta, delta / 2, 6);
    for (const auto& m : rolling) {
      if (!(m == compute_moments(window_select(ledger, m.window), m.window, 6))) {
        o.require(false, "rolling window differs from one-shot at t=" + fmt(m.window.center));
      }
    }
  }
  o.require(worst <= 1e-12, "relative error " + fmt(worst));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max rel " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

// 2: frequency mean vs VWAP.
Outcome vwap_contrast() {
  Outcome o;
  const std::vector<TradeRecord> two{oracle::trade(0.2, 2, 10), oracle::trade(0.4, 3, 9)};
  o.require(frequency_mean(two) == 4.0, "frequency mean " + fmt(*frequency_mean(two)));
  o.require(price_moment(two, 1) == 3.8, "VWAP " + fmt(*price_moment(two, 1)));
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> price(0.5, 50.0);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<TradeRecord> eq;
    const double v = 0.5 + rep * 0.1;
    for (int i = 0; i < 1 + rep; ++i) eq.push_back(oracle::trade(i, v, v * price(rng)));
    worst = std::max(worst, oracle::relative(*frequency_mean(eq), *price_moment(eq, 1)));
  }
  o.require(worst <= 1e-12, "equal-volume gap " + fmt(worst));
  if (o.pass) o.detail = "4.0 vs 3.8; equal-volume gap " + fmt(worst);
  return o;
}

// 3: volatility degeneracy and sign.
Outcome volatility_sign() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> vol(0.1, 10.0), price(0.5, 5.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double p = price(rng);
    std::vector<TradeRecord> t;
    for (int i = 0; i < 50; ++i) {
      const double u = vol(rng);
      t.push_back(oracle::trade(i * 0.01, u, p * u));
    }
    worst = std::max(worst, std::abs(volatility(t)->sigma2));
  }
  o.require(worst <= 1e-12, "constant-price sigma2 " + fmt(worst));
  const std::vector<TradeRecord> two{oracle::trade(0.2, 2, 10), oracle::trade(0.4, 3, 9)};
  const auto v = volatility(two);
  o.require(std::abs(v->sigma2 - (-0.516923076923077)) <= 1e-9, "hand oracle sigma2 " + fmt(v->sigma2));
  o.require(!v->measure_valid, "hand oracle flagged valid");
  const std::vector<TradeRecord> eq{oracle::trade(0.1, 1, 1), oracle::trade(0.2, 1, 3)};
  o.require(std::abs(volatility(eq)->sigma2 - 1.0) <= 1e-12, "equal-volume sigma2 " + fmt(volatility(eq)->sigma2));
  if (o.pass) o.detail = "constant " + fmt(worst) + ", hand " + fmt(v->sigma2);
  return o;
}

// 4: grid, label and marginal sums reproduce the economy totals.
Outcome grid_partition() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int m : {1, 2}) {
    for (double d : {0.25, 0.125, 0.0625}) {
      for (int rep = 0; rep < 5; ++rep) {
        const auto trades = oracle::random_trades(rng, 5000, m, 3, 1.0);
        const auto dom = EconomicDomain::with_scale(m, d);
        for (int n : {1, 2, 3}) {
          const auto s = oracle::degree_sums(trades, n);
          const double cu = static_cast<double>(s.volume), cc = static_cast<double>(s.value);
          const GridField g = aggregate_grid(trades, n, dom);
          auto check = [&](double u, double c) {
            worst = std::max({worst, oracle::relative(u, cu), oracle::relative(c, cc)});
          };
          const GridTotals gt = totals(g);
          check(gt.volume_sum, gt.value_sum);
          for (Side side : {Side::seller, Side::buyer}) {
            const GridTotals mt = totals(marginals(g, side));
            check(mt.volume_sum, mt.value_sum);
            double lu = 0.0, lc = 0.0;
            for (const auto& [k, f] : labeled_aggregate(trades, n, dom, side)) {
              const GridTotals lt = totals(f);
              lu += lt.volume_sum;
              lc += lt.value_sum;
            }
            check(lu, lc);
          }
        }
      }
    }
  }
  o.require(worst <= 1e-12, "relative error " + fmt(worst));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max rel " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

// 5: grade velocities and flow velocities.
Outcome kinematics() {
  Outcome o;
  const TransitionMatrix two({0.0, 1.0}, {{0.9, 0.1}, {0.2, 0.8}}, 1.0);
  o.require(grade_velocity(two, 0) == 0.1 && grade_velocity(two, 1) == -0.2,
            "grade velocities " + fmt(grade_velocity(two, 0)) + ", " + fmt(grade_velocity(two, 1)));
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int m : {1, 2}) {
    const auto trades = oracle::random_trades(rng, 3000, m, 2, 1.0, true);
    const auto dom = EconomicDomain::with_scale(m, 0.25);
    const FlowField f = trade_flows(trades, 2, dom);
    const auto mm = static_cast<std::size_t>(m);
    for (const auto& [cell, fc] : f.cells) {
      std::vector<long double> wu_x(mm), wu_y(mm), wc_x(mm), wc_y(mm);
      long double su = 0, sc = 0;
      for (const auto& t : trades) {
        if (trade_cell(t, dom) != cell) continue;
        const long double u2 = static_cast<long double>(t.volume) * t.volume;
        const long double c2 = static_cast<long double>(t.value) * t.value;
        su += u2;
        sc += c2;
        for (std::size_t a = 0; a < mm; ++a) {
          wu_x[a] += u2 * t.seller_velocity[a];
          wu_y[a] += u2 * t.buyer_velocity[a];
          wc_x[a] += c2 * t.seller_velocity[a];
          wc_y[a] += c2 * t.buyer_velocity[a];
        }
      }
      const auto vux = fc.v_ux(), vuy = fc.v_uy(), vcx = fc.v_cx(), vcy = fc.v_cy();
      for (std::size_t a = 0; a < mm; ++a) {
        worst = std::max({worst, std::abs(*vux[a] - static_cast<double>(wu_x[a] / su)),
                          std::abs(*vuy[a] - static_cast<double>(wu_y[a] / su)),
                          std::abs(*vcx[a] - static_cast<double>(wc_x[a] / sc)),
                          std::abs(*vcy[a] - static_cast<double>(wc_y[a] / sc))});
      }
    }
  }
  o.require(worst <= 1e-12, "flow velocity error " + fmt(worst));
  if (o.pass) o.detail = "(0.1, -0.2); flow velocity error " + fmt(worst);
  return o;
}

TransportState random_transport(std::mt19937_64& rng, double d) {
  const auto dom = EconomicDomain::with_scale(1, d);
  const std::vector<Label> labels{Label{1, 1}, Label{2, 1}};
  TransportState s = TransportState::zeros(dom, labels);
  std::uniform_real_distribution<double> pos(0.0, 2.0), any(-1.0, 1.0), vel(-0.5, 0.5);
  for (auto& [k, f] : s.labels) {
    for (auto* field : {&f.u2, &f.c2, &f.et_u, &f.et_c}) {
      for (auto& x : *field) x = pos(rng);
    }
    for (auto* comps : {&f.p_ux, &f.pe_ux}) {
      for (auto& c : *comps) {
        for (auto& x : c) x = any(rng);
      }
    }
    for (auto* comps : {&f.v_u, &f.v_c, &f.ve}) {
      for (auto& c : *comps) {
        for (auto& x : c) x = vel(rng);
      }
    }
  }
  return s;
}

// 6: transport conservation and reduction to the aggregated ODEs.
Outcome transport() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1006);
  const TransportState s = random_transport(rng, 1.0 / 16);
  const double dt = max_stable_step(s);
  const AggregateRun free = run_transport(s, {}, dt, 1000);
  double drift = 0.0;
  const AggregateState& a = free.samples.front();
  const AggregateState& b = free.samples.back();
  for (const auto& [k, v] : a.labels) {
    const auto& w = b.labels.at(k);
    drift = std::max({drift, std::abs(w.u2 - v.u2), std::abs(w.c2 - v.c2), std::abs(w.et_u - v.et_u),
                      std::abs(w.et_c - v.et_c), std::abs(w.p_ux[0] - v.p_ux[0]),
                      std::abs(w.pe_ux[0] - v.pe_ux[0])});
  }
  o.require(drift <= 1e-9, "conservation drift " + fmt(drift));

  SourceModel src;
  src.f_u = [](const Label& k, double t, std::span<const double> z) { return k.k * (1 + std::sin(t + z[0])); };
  src.f_c = [](const Label&, double t, std::span<const double> z) { return z[0] * z[1] * (1 + std::cos(t)); };
  src.w_u = [](const Label&, double, std::span<const double> z) { return 0.3 * z[1]; };
  src.w_c = [](const Label&, double t, std::span<const double>) { return 0.1 * t; };
  src.g_ux = [](const Label&, double t, std::span<const double> z, int) { return z[0] - t; };
  src.r_ux = [](const Label&, double, std::span<const double> z, int) { return z[1] * z[1]; };
  const AggregateRun pde = run_transport(s, src, dt, 1000);
  const AggregateRun ode = run_aggregate(integrate(s), integrate_sources(src, s.domain), dt, 1000);
  const double gap = reduction_check(pde, ode);
  o.require(gap <= 1e-6, "reduction discrepancy " + fmt(gap));
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "drift " + fmt(drift) + ", reduction " + fmt(gap) + ", " + fmt(elapsed) + " s";
  return o;
}

ChannelParams channel(double a, double b, double x0, double et0 = 0.0) {
  ChannelParams p;
  p.a = a;
  p.b = b;
  p.x0 = x0;
  p.et0 = et0;
  return p;
}

PerturbationConfig single(FeedbackMode mode, const ChannelParams& u) {
  PerturbationConfig cfg;
  cfg.mode = mode;
  cfg.labels.push_back({Label{1, 1}, u, channel(0, 0, 0), std::nullopt});
  return cfg;
}

// 7: harmonic regime.
Outcome harmonic() {
  Outcome o;
  const auto tr = simulate_linear(single(FeedbackMode::simple, channel(-1, 1, 0.01)), 2 * kPi / 1000, kPi);
  const double err = std::abs(tr.labels[0].u2.back() + 0.01);
  o.require(err <= 1e-8, "u(pi) error " + fmt(err));
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> mag(0.2, 3.0), base(0.5, 4.0), init(-0.02, 0.02);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const double sign = rep % 2 == 0 ? 1.0 : -1.0;
    ChannelParams p = channel(-sign * mag(rng), sign * mag(rng), init(rng), init(rng));
    p.baseline = base(rng);
    p.expected = base(rng);
    const auto cfg = single(FeedbackMode::simple, p);
    const auto v = classify_regime(cfg, 0, Channel::volume);
    if (v.regime != Regime::harmonic) {
      o.require(false, "config not harmonic");
      continue;
    }
    const double dt = default_step(cfg);
    const auto run = simulate_linear(cfg, dt, 10 * 2 * kPi / v.omega);
    const auto fit = fit_oscillation(run.labels[0].u2, dt);
    worst = std::max(worst, std::abs(fit.frequency - v.omega) / v.omega);
  }
  o.require(worst <= 0.005, "frequency error " + fmt(worst));
  if (o.pass) o.detail = "u(pi) err " + fmt(err) + ", max freq rel err " + fmt(worst);
  return o;
}

// 8: exponential regime.
Outcome exponential() {
  Outcome o;
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> mag(0.2, 3.0), base(0.5, 4.0);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const double sign = rep % 2 == 0 ? 1.0 : -1.0;
    const double a = sign * mag(rng), b = sign * mag(rng);
    const double rate = std::sqrt(a * b);
    ChannelParams p = channel(a, b, 0.01);
    p.baseline = base(rng);
    p.expected = base(rng);
    p.et0 = rate * p.x0 * p.baseline / (a * p.expected);
    const auto cfg = single(FeedbackMode::simple, p);
    const double dt = default_step(cfg);
    const auto run = simulate_linear(cfg, dt, 10.0 / rate);
    const auto fit = fit_oscillation(run.labels[0].u2, dt);
    worst = std::max(worst, std::abs(-fit.decay_rate - rate) / rate);
  }
  o.require(worst <= 0.01, "rate error " + fmt(worst));
  if (o.pass) o.detail = "max rate rel err " + fmt(worst);
  return o;
}

// Feedback channel with omega^2 = w2 and damping g, starting at rest.
ChannelParams feedback(double w2, double g, double x0) {
  ChannelParams p = channel(g, -w2 / g, x0, x0);
  p.expectation = 1.0;
  return p;
}

// 9: damped regime.
Outcome damped() {
  Outcome o;
  const auto cfg = single(FeedbackMode::expectation_feedback, feedback(4, 1, 0.01));
  const double dt = default_step(cfg);
  const auto run = simulate_damped(cfg, dt, 5 * 2 * kPi / std::sqrt(3.75));
  const auto fit = fit_oscillation(run.labels[0].u2, dt);
  const double ferr = std::abs(fit.frequency - std::sqrt(3.75)) / std::sqrt(3.75);
  const double derr = std::abs(fit.decay_rate - 0.5) / 0.5;
  o.require(ferr <= 0.01, "frequency error " + fmt(ferr));
  o.require(derr <= 0.01, "decay error " + fmt(derr));

  const auto grow_cfg = single(FeedbackMode::expectation_feedback, feedback(4, -0.2, 0.01));
  const double gdt = default_step(grow_cfg);
  const auto grow = simulate_damped(grow_cfg, gdt, 10 * 2 * kPi / 2.0);
  const double gerr = std::abs(-fit_oscillation(grow.labels[0].u2, gdt).decay_rate - 0.1) / 0.1;
  o.require(gerr <= 0.01, "growth error " + fmt(gerr));
  if (o.pass) o.detail = "freq " + fmt(ferr) + ", decay " + fmt(derr) + ", growth " + fmt(gerr);
  return o;
}

struct AssemblyGap {
  double identity = 0.0;  // max gap between the two second-degree assembly forms
  double linear = 0.0;    // max |linearized sigma2 - (p2 - p1^2)|
  double s0 = 0.0;        // baseline variance p20 - p10^2
};

// Two labels driven by harmonic disturbances of size eps; p10 sets the mean
// price against p20 = 5.
AssemblyGap assembly_gap(double eps, double p10) {
  PerturbationConfig cfg;
  cfg.mode = FeedbackMode::simple;
  auto with_base = [](ChannelParams p, double base) {
    p.baseline = base;
    return p;
  };
  cfg.labels.push_back({Label{1, 1}, with_base(channel(-1, 1, eps), 3.0),
                        with_base(channel(-2, 2, -eps, 0.5 * eps), 15.0),
                        FirstDegree{0.7, 0.6, {eps, 1.3, 0.2, 0}, {-eps, 0.9, 1.0, 0}}});
  cfg.labels.push_back({Label{2, 1}, with_base(channel(1, -4, 0.5 * eps), 1.0),
                        with_base(channel(-1, 3, eps), 5.0),
                        FirstDegree{0.3, 0.4, {eps, 0.5, 0.0, 0}, {eps, 2.1, 0.4, 0}}});
  cfg.p10 = p10;
  const auto tr = simulate(cfg, 0.01, 20.0);
  const auto base = price_baseline(cfg);
  AssemblyGap g;
  g.s0 = base.p20 - p10 * p10;
  for (std::size_t i = 0; i < tr.time.size(); ++i) {
    double d4 = 0, d7 = 0, num2 = 0, den2 = 0, num1 = 0, den1 = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& ls = tr.labels[k];
      const auto& f = *cfg.labels[k].first;
      d4 += base.mu2[k] * ls.c2[i] - base.lambda2[k] * ls.u2[i];
      d7 += base.mu2[k] * ls.pi2k[i] + (base.mu2[k] - base.lambda2[k]) * ls.u2[i];
      num2 += base.mu2[k] * (1 + ls.c2[i]);
      den2 += base.lambda2[k] * (1 + ls.u2[i]);
      num1 += f.mu * (1 + ls.c1[i]);
      den1 += f.lambda * (1 + ls.u1[i]);
    }
    g.identity = std::max({g.identity, std::abs(d4 - d7), std::abs(tr.pi2[i] - d4)});
    const double p2 = base.p20 * num2 / den2;
    const double p1 = p10 * num1 / den1;
    g.linear = std::max(g.linear, std::abs(tr.sigma2[i] - (p2 - p1 * p1)));
  }
  return g;
}

// 10: price and volatility assembly. The linearization gap is second order in
// eps; it is bounded relative to p20, the scale of both p(2) and p(1)^2.
Outcome assembly() {
  Outcome o;
  const double eps = 1e-3;
  const double p20 = 5.0;
  double identity = 0.0, worst = 0.0, worst_s0 = 0.0;
  for (double p10 : {0.5, 1.0, 1.5, 2.0}) {
    const AssemblyGap g = assembly_gap(eps, p10);
    const AssemblyGap h = assembly_gap(eps / 10, p10);
    identity = std::max({identity, g.identity, h.identity});
    const double order = std::log10(g.linear / h.linear);
    o.require(std::abs(order - 2.0) <= 0.05, "gap is not second order at p10=" + fmt(p10) + ": " + fmt(order));
    worst = std::max(worst, g.linear / (eps * eps * p20));
    worst_s0 = std::max(worst_s0, g.linear / (eps * eps * g.s0));
  }
  o.require(identity <= 1e-12, "assembly form gap " + fmt(identity));
  o.require(worst <= 10.0, "linearization gap " + fmt(worst) + " eps^2 p20");
  if (o.pass) {
    o.detail = "identity " + fmt(identity) + ", linearization <= " + fmt(worst) + " eps^2 p20 (" + fmt(worst_s0) +
               " eps^2 sigma_p0^2)";
  }
  return o;
}

// 11: price ODE against an independently integrated value sum.
Outcome price_ode() {
  Outcome o;
  const double u0 = 2.0, p0 = 1.5;
  const auto f_u = [](double t) { return 0.3 * std::sin(t) + 0.05; };
  const auto f_c = [](double t) { return std::cos(2 * t) + 0.1 * t; };
  const auto run = solve_price_ode(u0, p0, f_u, f_c, 0.01, 10.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < run.time.size(); ++i) {
    const double t = run.time[i];
    const double c = u0 * p0 + 0.5 * std::sin(2 * t) + 0.05 * t * t;
    worst = std::max(worst, oracle::relative(run.price[i] * run.volume[i], c));
  }
  o.require(run.time.size() == 1001, "step count");
  o.require(worst <= 1e-9, "relative error " + fmt(worst));
  if (o.pass) o.detail = "max rel " + fmt(worst) + " over 1000 steps";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mmlab");
  return cli::run_command(args);
}

// 12: synth -> moments -> volatility determinism, constant price end to end.
Outcome pipeline() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "mmlab_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream(root / "synth.json") << R"({"seed": 42, "agents": 50, "intensity": 200, "duration": 10,
      "price_sigma": 0.3, "volume_sigma": 0.5, "noise": 0.02})";
    std::ofstream(root / "flat.json") << R"({"seed": 9, "agents": 50, "intensity": 200, "duration": 10,
      "base_price": 2.5, "price_sigma": 0, "volume_sigma": 0.8, "noise": 0.02})";
  }
  for (const char* run : {"a", "b"}) {
    const std::string dir = (root / run).string();
    o.require(cli({"synth", "--config", (root / "synth.json").string(), "--out", dir}) == 0, "synth failed");
    o.require(cli({"moments", "--in", dir + "/ledger.csv", "--out", dir, "--delta", "1", "--degree", "4"}) == 0,
              "moments failed");
  }
  for (const char* f : {"ledger.csv", "moments.csv", "volatility.csv"}) {
    const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    o.require(!a.empty() && a == b, std::string(f) + " differs between runs");
  }

  const std::string flat = (root / "flat").string();
  o.require(cli({"synth", "--config", (root / "flat.json").string(), "--out", flat}) == 0, "flat synth failed");
  o.require(cli({"volatility", "--in", flat + "/ledger.csv", "--out", flat, "--delta", "1"}) == 0,
            "volatility failed");
  std::istringstream rows(slurp(root / "flat" / "volatility.csv"));
  std::string line;
  std::getline(rows, line);
  double worst = 0.0;
  std::size_t windows = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() < 4 || cells[3] == "NA") continue;
    worst = std::max(worst, std::abs(std::stod(cells[3])));
    ++windows;
  }
  o.require(windows > 0, "no populated windows");
  o.require(worst <= 1e-12, "constant-price sigma2 " + fmt(worst));
  fs::remove_all(root);
  if (o.pass) o.detail = "identical bytes; constant-price |sigma2| " + fmt(worst) + " over " +
                         std::to_string(windows) + " windows";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"moment identity and rolling equivalence", moment_identity},
      {"VWAP contrast", vwap_contrast},
      {"volatility degeneracy and sign", volatility_sign},
      {"grid partition identity", grid_partition},
      {"kinematics", kinematics},
      {"transport conservation and reduction", transport},
      {"harmonic regime", harmonic},
      {"exponential regime", exponential},
      {"damped regime", damped},
      {"price and volatility assembly", assembly},
      {"price ODE consistency", price_ode},
      {"end-to-end determinism", pipeline},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
