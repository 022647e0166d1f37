#include "mmlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "mmlab/csv.hpp"
#include "mmlab/dynamics.hpp"
#include "mmlab/error.hpp"
#include "mmlab/expectations.hpp"
#include "mmlab/grid.hpp"
#include "mmlab/kinematics.hpp"
#include "mmlab/ledger.hpp"
#include "mmlab/moments.hpp"
#include "mmlab/perturbation.hpp"
#include "mmlab/rk4.hpp"
#include "mmlab/synth.hpp"

namespace mmlab::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Raw flag values; unset flags fall back to the JSON config, then defaults.
struct Flags {
  std::optional<std::string> config, in, out, matrix, side;
  std::optional<double> delta, stride, cell, dt, duration, center;
  std::optional<int> degree, m, K, cap;
  std::optional<std::uint64_t> seed;
  bool plot = false;
};

class Settings {
public:
  explicit Settings(const Flags& flags) : flags_(flags) {
    if (flags.config) {
      try {
        config_ = json::parse(csv::read_file(*flags.config));
      } catch (const json::exception& e) {
        throw ConfigError("config " + *flags.config + ": " + e.what());
      }
      if (!config_.is_object()) throw ConfigError("config " + *flags.config + ": top level must be an object");
    } else {
      config_ = json::object();
    }
  }

  const json& config() const { return config_; }

  template <class T>
  std::optional<T> get(const std::optional<T>& flag, const char* key) const {
    if (flag) return flag;
    if (!config_.contains(key)) return std::nullopt;
    try {
      return config_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  }

  fs::path in() const {
    auto v = get(flags_.in, "in");
    if (!v) throw ConfigError("an input ledger is required (--in)");
    return *v;
  }
  fs::path out() const { return get(flags_.out, "out").value_or("."); }
  int m() const { return get(flags_.m, "m").value_or(1); }
  int K() const { return get(flags_.K, "K").value_or(1); }
  bool plot() const { return flags_.plot || config_.value("plot", false); }
  const Flags& flags() const { return flags_; }

private:
  const Flags& flags_;
  json config_;
};

double positive(std::optional<double> v, double fallback, const char* name) {
  const double x = v.value_or(fallback);
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(name) + " must be positive and finite");
  return x;
}

int degree_at_least_one(std::optional<int> v, int fallback) {
  const int n = v.value_or(fallback);
  if (n < 1) throw ConfigError("degree must be >= 1");
  return n;
}

void write_output(const fs::path& dir, const std::string& name, const std::string& contents) {
  fs::create_directories(dir);
  csv::write_atomic(dir / name, contents);
}

// Two-column "x y" plot data; missing samples are skipped.
void write_plot(const fs::path& dir, const std::string& name, const std::vector<double>& x,
                const std::vector<std::optional<double>>& y) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i]) out += csv::format(x[i]) + ' ' + csv::format(*y[i]) + '\n';
  }
  write_output(dir, name, out);
}

void write_plot(const fs::path& dir, const std::string& name, const std::vector<double>& x,
                const std::vector<double>& y) {
  std::vector<std::optional<double>> wrapped(y.begin(), y.end());
  write_plot(dir, name, x, wrapped);
}

Ledger load(const Settings& s) { return load_ledger_file(s.in(), s.m(), s.K()); }

// Whole-ledger window unless --t/--delta narrow it.
TimeWindow analysis_window(const Settings& s, const Ledger& ledger) {
  const double span = ledger.empty() ? 0.0 : ledger.time_max() - ledger.time_min();
  const double t0 = ledger.empty() ? 0.0 : ledger.time_min();
  const double delta = positive(s.get(s.flags().delta, "delta"), span + 1.0, "delta");
  const auto center = s.get(s.flags().center, "t");
  const TimeWindow w = center ? TimeWindow{*center, delta} : window_starting_at(t0, delta);
  check_window(w);
  return w;
}

EconomicDomain domain(const Settings& s) {
  return EconomicDomain::with_scale(s.m(), positive(s.get(s.flags().cell, "cell"), 1.0, "cell"));
}

TransitionMatrix matrix_from_json(const json& j) {
  try {
    return TransitionMatrix(j.at("positions").get<std::vector<double>>(),
                            j.at("probabilities").get<std::vector<std::vector<double>>>(),
                            j.value("horizon", 1.0));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("transition matrix: ") + e.what());
  }
}

std::optional<TransitionMatrix> matrix(const Settings& s) {
  if (s.flags().matrix) {
    try {
      return matrix_from_json(json::parse(csv::read_file(*s.flags().matrix)));
    } catch (const json::parse_error& e) {
      throw ConfigError("matrix " + *s.flags().matrix + ": " + e.what());
    }
  }
  if (!s.config().contains("matrix")) return std::nullopt;
  const json& j = s.config().at("matrix");
  if (j.is_string()) {
    try {
      return matrix_from_json(json::parse(csv::read_file(j.get<std::string>())));
    } catch (const json::parse_error& e) {
      throw ConfigError("matrix " + j.get<std::string>() + ": " + e.what());
    }
  }
  return matrix_from_json(j);
}

Side side(const Settings& s) {
  const std::string v = s.get(s.flags().side, "side").value_or("seller");
  if (v == "seller" || v == "SELLER" || v == "sell") return Side::seller;
  if (v == "buyer" || v == "BUYER" || v == "buy") return Side::buyer;
  throw ConfigError("side must be 'seller' or 'buyer', got '" + v + "'");
}

// ---------------------------------------------------------------- commands

int cmd_validate(const Settings& s) {
  const Ledger ledger = load(s);
  std::cout << "ok: " << ledger.size() << " records";
  if (!ledger.empty()) {
    std::cout << ", t in [" << csv::format(ledger.time_min()) << ", " << csv::format(ledger.time_max()) << "]";
  }
  std::cout << '\n';
  if (s.get(s.flags().out, "out")) write_output(s.out(), "ledger.csv", write_ledger_csv(ledger));
  return kExitOk;
}

int cmd_moments(const Settings& s, bool with_moments) {
  const Ledger ledger = load(s);
  const double span = ledger.empty() ? 0.0 : ledger.time_max() - ledger.time_min();
  const double delta = positive(s.get(s.flags().delta, "delta"), span + 1.0, "delta");
  const double stride = positive(s.get(s.flags().stride, "stride"), delta, "stride");
  const int degree = degree_at_least_one(s.get(s.flags().degree, "degree"), 2);
  const int cap = s.get(s.flags().cap, "cap").value_or(kDefaultDegreeCap);
  // Volatility needs p1 and p2 regardless of the requested degree.
  const auto series = moment_series(ledger, delta, stride, std::max(degree, 2), std::max(cap, 2));
  const fs::path out = s.out();
  if (with_moments) write_output(out, "moments.csv", moments_csv(series));
  write_output(out, "volatility.csv", volatility_csv(series));
  if (s.plot()) {
    std::vector<double> t;
    std::vector<std::optional<double>> p1, p2, sigma2;
    for (const auto& ms : series) {
      t.push_back(ms.window.center);
      p1.push_back(ms.moment(1));
      p2.push_back(ms.moment(2));
      const auto vol = volatility(ms);
      sigma2.push_back(vol ? std::optional<double>(vol->sigma2) : std::nullopt);
    }
    write_plot(out, "p1.dat", t, p1);
    write_plot(out, "p2.dat", t, p2);
    write_plot(out, "sigma2.dat", t, sigma2);
  }
  return kExitOk;
}

int cmd_grid(const Settings& s) {
  const Ledger ledger = load(s);
  const TimeWindow window = analysis_window(s, ledger);
  const EconomicDomain dom = domain(s);
  const int degree = degree_at_least_one(s.get(s.flags().degree, "degree"), 2);
  const auto trades = window_select(ledger, window);
  const GridField field = aggregate_grid(trades, degree, dom, window);
  const fs::path out = s.out();
  write_output(out, "grid.csv", grid_csv(field));
  write_output(out, "grid_counts.csv", grid_counts_csv(field));
  write_output(out, "marginal_sell.csv", marginal_csv(marginals(field, Side::seller)));
  write_output(out, "marginal_buy.csv", marginal_csv(marginals(field, Side::buyer)));
  const GridTotals tot = totals(field);
  std::cout << "C_n=" << csv::format(tot.value_sum) << " U_n=" << csv::format(tot.volume_sum)
            << " p_n=" << csv::format(tot.price) << '\n';
  return kExitOk;
}

int cmd_flows(const Settings& s) {
  const Ledger ledger = load(s);
  const TimeWindow window = analysis_window(s, ledger);
  const EconomicDomain dom = domain(s);
  const int degree = degree_at_least_one(s.get(s.flags().degree, "degree"), 2);
  const auto fallback = matrix(s);
  const FlowField field =
      trade_flows(window_select(ledger, window), degree, dom, fallback ? &*fallback : nullptr, window);
  const fs::path out = s.out();
  write_output(out, "flows.csv", flows_csv(field));
  write_output(out, "flow_summary.csv", flow_summary_csv(flow_marginals_totals(field)));
  return kExitOk;
}

int cmd_expectations(const Settings& s) {
  const Ledger ledger = load(s);
  const TimeWindow window = analysis_window(s, ledger);
  const EconomicDomain dom = domain(s);
  const Side sd = side(s);
  const auto trades = window_select(ledger, window);
  const auto ex = collective_expectations(expected_trades(trades, dom, sd, window),
                                          labeled_aggregate(trades, 2, dom, sd, window));
  write_output(s.out(), "expectations.csv", expectations_csv(ex));
  std::cout << "Ex_Us=" << csv::format(ex.ex_us) << " Ex_Cs=" << csv::format(ex.ex_cs) << '\n';
  return kExitOk;
}

// Uniform source densities from the "sources" config object.
SourceModel constant_sources(const json& cfg) {
  SourceModel model;
  if (!cfg.contains("sources")) return model;
  const json& src = cfg.at("sources");
  auto scalar = [&](const char* key) -> SourceModel::Scalar {
    if (!src.contains(key)) return {};
    const double v = src.at(key).get<double>();
    return [v](const Label&, double, std::span<const double>) { return v; };
  };
  auto component = [&](const char* key) -> SourceModel::Component {
    if (!src.contains(key)) return {};
    const double v = src.at(key).get<double>();
    return [v](const Label&, double, std::span<const double>, int) { return v; };
  };
  try {
    model.f_u = scalar("F_U");
    model.f_c = scalar("F_C");
    model.w_u = scalar("W_U");
    model.w_c = scalar("W_C");
    model.g_ux = component("G_Ux");
    model.r_ux = component("R_Ux");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sources: ") + e.what());
  }
  return model;
}

int cmd_transport(const Settings& s) {
  const Ledger ledger = load(s);
  const TimeWindow window = analysis_window(s, ledger);
  const EconomicDomain dom = domain(s);
  TransportState state = transport_state_from_trades(window_select(ledger, window), dom);
  const double stable = max_stable_step(state);
  const double dt = positive(s.get(s.flags().dt, "dt"), std::isfinite(stable) ? stable : 0.01, "dt");
  const double duration = s.get(s.flags().duration, "duration").value_or(100.0 * dt);
  const std::size_t steps = step_count(dt, duration);
  const double h = steps > 0 ? duration / static_cast<double>(steps) : dt;
  const SourceModel sources = constant_sources(s.config());

  const AggregateRun pde = run_transport(state, sources, h, steps);
  const AggregateRun ode = run_aggregate(integrate(state), integrate_sources(sources, dom), h, steps);
  const double gap = reduction_check(pde, ode);
  const fs::path out = s.out();
  write_output(out, "transport.csv", trajectory_csv(pde, "mass_"));
  write_output(out, "aggregate.csv", trajectory_csv(ode));
  std::cout << "steps=" << steps << " dt=" << csv::format(h) << " reduction_discrepancy=" << csv::format(gap) << '\n';
  if (s.plot()) {
    for (const auto& [k, v] : pde.samples.front().labels) {
      std::vector<double> t, mass;
      for (const auto& sample : pde.samples) {
        t.push_back(sample.time);
        mass.push_back(sample.labels.at(k).u2);
      }
      write_plot(out, "mass_U2_" + std::to_string(k.k) + "_" + std::to_string(k.l) + ".dat", t, mass);
    }
  }
  return kExitOk;
}

ChannelParams channel_from_json(const json& j) {
  ChannelParams p;
  p.baseline = j.value("baseline", p.baseline);
  p.expected = j.value("expected", p.expected);
  p.expectation = j.value("expectation", p.expectation);
  p.a = j.value("a", p.a);
  p.b = j.value("b", p.b);
  p.normalization = j.value("normalization", p.normalization);
  p.x0 = j.value("x0", p.x0);
  p.et0 = j.value("et0", p.et0);
  return p;
}

Sinusoid sinusoid_from_json(const json& j) {
  Sinusoid w;
  w.amplitude = j.value("amplitude", 0.0);
  w.omega = j.value("omega", 0.0);
  w.phase = j.value("phase", 0.0);
  w.growth = j.value("growth", 0.0);
  return w;
}

PerturbationConfig perturbation_from_json(const json& cfg) {
  PerturbationConfig pc;
  try {
    const std::string mode = cfg.value("mode", std::string("SIMPLE"));
    if (mode == "SIMPLE") {
      pc.mode = FeedbackMode::simple;
    } else if (mode == "EXPECTATION_FEEDBACK") {
      pc.mode = FeedbackMode::expectation_feedback;
    } else {
      throw ConfigError("mode must be SIMPLE or EXPECTATION_FEEDBACK, got '" + mode + "'");
    }
    if (cfg.contains("p10")) pc.p10 = cfg.at("p10").get<double>();
    if (!cfg.contains("labels")) throw ConfigError("perturbation config needs a 'labels' array");
    for (const json& jl : cfg.at("labels")) {
      LabelPerturbation lp;
      lp.label = {jl.value("k", 1), jl.value("l", 1)};
      if (jl.contains("U")) lp.u = channel_from_json(jl.at("U"));
      if (jl.contains("C")) lp.c = channel_from_json(jl.at("C"));
      if (jl.contains("first")) {
        const json& f = jl.at("first");
        FirstDegree fd;
        fd.lambda = f.value("lambda", 0.0);
        fd.mu = f.value("mu", 0.0);
        if (f.contains("u")) fd.u = sinusoid_from_json(f.at("u"));
        if (f.contains("c")) fd.c = sinusoid_from_json(f.at("c"));
        lp.first = fd;
      }
      pc.labels.push_back(lp);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("perturbation config: ") + e.what());
  }
  validate(pc);
  return pc;
}

json verdict_json(const RegimeVerdict& v) {
  json j{{"regime", regime_name(v.regime)}};
  switch (v.regime) {
    case Regime::harmonic: j["omega"] = v.omega; break;
    case Regime::exponential:
      j["rate"] = v.rate;
      j["rate2"] = v.rate2;
      if (v.gamma != 0.0) j["gamma"] = v.gamma;
      break;
    case Regime::damped:
      j["omega"] = v.omega;
      j["gamma"] = v.gamma;
      j["phi"] = v.phi;
      break;
    case Regime::critical:
      if (v.gamma != 0.0) j["gamma"] = v.gamma;
      break;
  }
  return j;
}

int cmd_perturb(const Settings& s) {
  const PerturbationConfig pc = perturbation_from_json(s.config());
  for (const auto& w : linear_regime_warnings(pc)) std::cerr << "warning: " << w << '\n';
  const double dt = positive(s.get(s.flags().dt, "dt"), default_step(pc), "dt");
  const double duration = positive(s.get(s.flags().duration, "duration"), 10000.0 * default_step(pc), "duration");
  const PerturbationTrajectory tr = simulate(pc, dt, duration);

  json report{{"mode", mode_name(pc.mode)}, {"labels", json::array()}, {"warnings", linear_regime_warnings(pc)}};
  for (std::size_t i = 0; i < pc.labels.size(); ++i) {
    report["labels"].push_back({{"k", pc.labels[i].label.k},
                                {"l", pc.labels[i].label.l},
                                {"U", verdict_json(classify_regime(pc, i, Channel::volume))},
                                {"C", verdict_json(classify_regime(pc, i, Channel::value))}});
  }
  const fs::path out = s.out();
  write_output(out, "perturb_labels.csv", label_trajectory_csv(tr));
  write_output(out, "perturb_assembled.csv", assembled_trajectory_csv(tr));
  write_output(out, "regimes.json", report.dump(2) + '\n');
  if (s.plot()) {
    for (const auto& ls : tr.labels) {
      const std::string tag = std::to_string(ls.label.k) + "_" + std::to_string(ls.label.l);
      write_plot(out, "u2_" + tag + ".dat", tr.time, ls.u2);
      write_plot(out, "c2_" + tag + ".dat", tr.time, ls.c2);
      write_plot(out, "pi2_" + tag + ".dat", tr.time, ls.pi2k);
    }
    write_plot(out, "pi2.dat", tr.time, tr.pi2);
    write_plot(out, "p2.dat", tr.time, tr.p2);
    if (!tr.p1.empty()) {
      write_plot(out, "p1.dat", tr.time, tr.p1);
      write_plot(out, "sigma2.dat", tr.time, tr.sigma2);
    }
  }
  return kExitOk;
}

// constant + amplitude * sin(omega t + phase)
std::function<double(double)> forcing_from_json(const json& cfg, const char* key) {
  if (!cfg.contains(key)) return [](double) { return 0.0; };
  const json& j = cfg.at(key);
  if (j.is_number()) {
    const double c = j.get<double>();
    return [c](double) { return c; };
  }
  const double c = j.value("constant", 0.0);
  const double a = j.value("amplitude", 0.0);
  const double w = j.value("omega", 0.0);
  const double ph = j.value("phase", 0.0);
  return [=](double t) { return c + a * std::sin(w * t + ph); };
}

int cmd_price_ode(const Settings& s) {
  const json& cfg = s.config();
  std::function<double(double)> f_u, f_c;
  double u0 = 1.0, p0 = 1.0;
  try {
    u0 = cfg.value("U0", 1.0);
    p0 = cfg.value("p0", 1.0);
    f_u = forcing_from_json(cfg, "F_U");
    f_c = forcing_from_json(cfg, "F_C");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("price-ode config: ") + e.what());
  }
  const double dt = positive(s.get(s.flags().dt, "dt"), 0.01, "dt");
  const double duration = positive(s.get(s.flags().duration, "duration"), 1000.0 * dt, "duration");
  const PriceOdeSeries series = solve_price_ode(u0, p0, f_u, f_c, dt, duration);
  const fs::path out = s.out();
  write_output(out, "price_ode.csv", price_ode_csv(series));
  if (s.plot()) {
    write_plot(out, "price.dat", series.time, series.price);
    write_plot(out, "volume.dat", series.time, series.volume);
  }
  return kExitOk;
}

SynthConfig synth_from(const Settings& s) {
  const json& cfg = s.config();
  SynthConfig c;
  try {
    c.seed = s.get(s.flags().seed, "seed").value_or(1);
    c.dimension = s.m();
    c.agents = cfg.value("agents", c.agents);
    c.duration = s.get(s.flags().duration, "duration").value_or(c.duration);
    c.intensity = cfg.value("intensity", c.intensity);
    c.base_price = cfg.value("base_price", c.base_price);
    c.price_sigma = cfg.value("price_sigma", c.price_sigma);
    c.volume_median = cfg.value("volume_median", c.volume_median);
    c.volume_sigma = cfg.value("volume_sigma", c.volume_sigma);
    c.noise = cfg.value("noise", c.noise);
    c.step = cfg.value("step", c.step);
    if (cfg.contains("label_ex")) c.label_ex = cfg.at("label_ex").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  if (auto m = matrix(s)) c.matrix = *m;
  c.label_count = s.get(s.flags().K, "K").value_or(static_cast<int>(c.matrix.grades()));
  return c;
}

int cmd_synth(const Settings& s) {
  const Ledger ledger = generate_ledger(synth_from(s));
  write_output(s.out(), "ledger.csv", write_ledger_csv(ledger));
  std::cout << "generated " << ledger.size() << " trades\n";
  return kExitOk;
}

void add_io(CLI::App* sub, Flags& f, bool input) {
  sub->add_option("--config", f.config, "JSON config file; explicit flags override its keys");
  if (input) sub->add_option("--in", f.in, "input ledger CSV");
  sub->add_option("--out", f.out, "output directory (default .)");
}

void add_ledger_shape(CLI::App* sub, Flags& f) {
  sub->add_option("--m", f.m, "risk-coordinate dimension m (default 1)");
  sub->add_option("--K", f.K, "label bound K (default 1)");
}

void add_window(CLI::App* sub, Flags& f) {
  sub->add_option("--t", f.center, "window centre (default: first window from the ledger start)");
  sub->add_option("--delta", f.delta, "window width (default: the whole ledger)");
}

}  // namespace

int run_command(int argc, char** argv) {
  Flags f;
  CLI::App app{"mmlab: price moments, risk-grid aggregation and second-degree trade dynamics"};
  app.name("mmlab");
  app.require_subcommand(1, 1);

  auto* validate_cmd = app.add_subcommand("validate", "load and validate a ledger");
  add_io(validate_cmd, f, true);
  add_ledger_shape(validate_cmd, f);

  auto* moments_cmd = app.add_subcommand("moments", "rolling price moments and volatility");
  auto* volatility_cmd = app.add_subcommand("volatility", "rolling volatility only");
  for (auto* sub : {moments_cmd, volatility_cmd}) {
    add_io(sub, f, true);
    add_ledger_shape(sub, f);
    sub->add_option("--delta", f.delta, "window width (default: the whole ledger)");
    sub->add_option("--stride", f.stride, "window stride (default: delta)");
    sub->add_option("--degree", f.degree, "highest moment degree N (default 2)");
    sub->add_option("--cap", f.cap, "degree cap (default 12)");
    sub->add_flag("--plot", f.plot, "also write two-column plot data");
  }

  auto* grid_cmd = app.add_subcommand("grid", "collective trades on the risk grid");
  auto* flows_cmd = app.add_subcommand("flows", "trade flows and flow velocities");
  auto* expectations_cmd = app.add_subcommand("expectations", "expected trades and collective expectations");
  auto* transport_cmd = app.add_subcommand("transport", "transport equations and their aggregated ODEs");
  for (auto* sub : {grid_cmd, flows_cmd, expectations_cmd, transport_cmd}) {
    add_io(sub, f, true);
    add_ledger_shape(sub, f);
    add_window(sub, f);
    sub->add_option("--cell", f.cell, "cell scale d, 1/d an integer (default 1)");
  }
  for (auto* sub : {grid_cmd, flows_cmd}) sub->add_option("--degree", f.degree, "trade degree n (default 2)");
  flows_cmd->add_option("--matrix", f.matrix, "transition matrix JSON for trades without velocities");
  expectations_cmd->add_option("--side", f.side, "seller or buyer (default seller)");
  transport_cmd->add_option("--dt", f.dt, "time step (default: the stability limit)");
  transport_cmd->add_option("--duration", f.duration, "simulated time (default 100 steps)");
  transport_cmd->add_flag("--plot", f.plot, "also write two-column plot data");

  auto* perturb_cmd = app.add_subcommand("perturb", "linear disturbance dynamics of price and volatility");
  auto* price_cmd = app.add_subcommand("price-ode", "second-degree price equation");
  for (auto* sub : {perturb_cmd, price_cmd}) {
    add_io(sub, f, false);
    sub->add_option("--dt", f.dt, "time step");
    sub->add_option("--duration", f.duration, "simulated time");
    sub->add_flag("--plot", f.plot, "also write two-column plot data");
  }

  auto* synth_cmd = app.add_subcommand("synth", "synthetic trade ledger");
  add_io(synth_cmd, f, false);
  synth_cmd->add_option("--seed", f.seed, "generator seed");
  synth_cmd->add_option("--duration", f.duration, "simulated time");
  synth_cmd->add_option("--m", f.m, "risk-coordinate dimension m (default 1)");
  synth_cmd->add_option("--K", f.K, "label bound K (default: matrix grades)");
  synth_cmd->add_option("--matrix", f.matrix, "transition matrix JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    const Settings s(f);
    if (validate_cmd->parsed()) return cmd_validate(s);
    if (moments_cmd->parsed()) return cmd_moments(s, true);
    if (volatility_cmd->parsed()) return cmd_moments(s, false);
    if (grid_cmd->parsed()) return cmd_grid(s);
    if (flows_cmd->parsed()) return cmd_flows(s);
    if (expectations_cmd->parsed()) return cmd_expectations(s);
    if (transport_cmd->parsed()) return cmd_transport(s);
    if (perturb_cmd->parsed()) return cmd_perturb(s);
    if (price_cmd->parsed()) return cmd_price_ode(s);
    if (synth_cmd->parsed()) return cmd_synth(s);
  } catch (const InputError& e) {
    std::cerr << "mmlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "mmlab: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "mmlab: " << e.what() << '\n';
    return kExitUsage;
  }
  std::cerr << app.help();
  return kExitUsage;
}

int run_command(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  return run_command(static_cast<int>(copy.size()), argv.data());
}

}  // namespace mmlab::cli
