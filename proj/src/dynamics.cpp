#include "mmlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"
#include "mmlab/expectations.hpp"
#include "mmlab/kernels/kernels.hpp"
#include "mmlab/kinematics.hpp"
#include "mmlab/rk4.hpp"

namespace mmlab {

namespace {

constexpr double kPositivityTolerance = 1e-14;

using Components = std::vector<std::vector<double>>;

Components zero_components(std::size_t count, std::size_t cells) {
  return Components(count, std::vector<double>(cells, 0.0));
}

std::vector<std::vector<double>> cell_centers(const EconomicDomain& domain) {
  std::vector<std::vector<double>> centers(domain.cell_count());
  for (std::size_t c = 0; c < centers.size(); ++c) centers[c] = domain.cell_center(c);
  return centers;
}

void check_shape(const LabelTransport& f, const EconomicDomain& domain) {
  const std::size_t cells = domain.cell_count();
  const auto m = static_cast<std::size_t>(domain.dimension);
  auto scalar_ok = [&](const std::vector<double>& v) { return v.size() == cells; };
  auto comps_ok = [&](const Components& v, std::size_t count) {
    return v.size() == count && std::all_of(v.begin(), v.end(), scalar_ok);
  };
  if (!scalar_ok(f.u2) || !scalar_ok(f.c2) || !scalar_ok(f.et_u) || !scalar_ok(f.et_c) ||
      !comps_ok(f.p_ux, m) || !comps_ok(f.pe_ux, m) || !comps_ok(f.v_u, 2 * m) || !comps_ok(f.v_c, 2 * m) ||
      !comps_ok(f.ve, 2 * m)) {
    throw ConfigError("transport field shapes do not match the domain");
  }
}

// Dimension-split upwind advection of `field` by `velocity` over all 2m axes.
void advect(std::vector<double>& field, const Components& velocity, const EconomicDomain& domain, double dt,
            std::vector<double>& scratch) {
  const auto n = static_cast<std::size_t>(domain.cells_per_axis);
  const std::size_t axes = domain.axes();
  const double courant = dt * static_cast<double>(n);
  scratch.resize(field.size());
  std::size_t outer = 1;
  std::size_t inner = field.size() / n;
  for (std::size_t a = 0; a < axes; ++a) {
    kernels::upwind_sweep(field, velocity[a], outer, n, inner, courant, scratch);
    field.swap(scratch);
    outer *= n;
    if (a + 1 < axes) inner /= n;
  }
}

void check_non_negative(const std::vector<double>& field, const char* name) {
  double scale = 1.0;
  for (double v : field) scale = std::max(scale, std::abs(v));
  for (double v : field) {
    if (v < -kPositivityTolerance * scale) {
      throw InvariantError(std::string("transport produced a negative ") + name + " cell");
    }
  }
}

// Simpson increment of a time-dependent source at every cell centre.
template <class Eval>
void add_source(std::vector<double>& field, const std::vector<std::vector<double>>& centers, double t, double dt,
                Eval&& eval) {
  for (std::size_t c = 0; c < field.size(); ++c) {
    const double s0 = eval(t, centers[c]);
    const double s1 = eval(t + 0.5 * dt, centers[c]);
    const double s2 = eval(t + dt, centers[c]);
    field[c] += dt / 6.0 * (s0 + 4.0 * s1 + s2);
  }
}

double field_integral(const std::vector<double>& field, double volume) {
  double sum = 0.0;
  for (double v : field) sum += v;
  return sum * volume;
}

double max_abs(const Components& comps) {
  double v = 0.0;
  for (const auto& c : comps) {
    for (double x : c) {
      if (!std::isfinite(x)) throw ConfigError("transport velocities must be finite");
      v = std::max(v, std::abs(x));
    }
  }
  return v;
}

void pack(const AggregateValues& v, std::vector<double>& out) {
  out.push_back(v.u2);
  out.push_back(v.c2);
  out.push_back(v.et_u);
  out.push_back(v.et_c);
  out.insert(out.end(), v.p_ux.begin(), v.p_ux.end());
  out.insert(out.end(), v.pe_ux.begin(), v.pe_ux.end());
}

double eval_or_zero(const AggregateSources::Scalar& f, const Label& k, double t) {
  return f ? f(k, t) : 0.0;
}

}  // namespace

TransportState TransportState::zeros(const EconomicDomain& domain, std::span<const Label> labels) {
  const std::size_t cells = domain.cell_count();
  const auto m = static_cast<std::size_t>(domain.dimension);
  TransportState s;
  s.domain = domain;
  for (const Label& k : labels) {
    LabelTransport f;
    f.u2.assign(cells, 0.0);
    f.c2.assign(cells, 0.0);
    f.et_u.assign(cells, 0.0);
    f.et_c.assign(cells, 0.0);
    f.p_ux = zero_components(m, cells);
    f.pe_ux = zero_components(m, cells);
    f.v_u = zero_components(2 * m, cells);
    f.v_c = zero_components(2 * m, cells);
    f.ve = zero_components(2 * m, cells);
    s.labels.emplace(k, std::move(f));
  }
  return s;
}

double max_stable_step(const TransportState& state) {
  double vmax = 0.0;
  for (const auto& [k, f] : state.labels) {
    vmax = std::max({vmax, max_abs(f.v_u), max_abs(f.v_c), max_abs(f.ve)});
  }
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * state.domain.cell_scale() / vmax;
}

TransportState transport_step(const TransportState& state, const SourceModel& sources, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("transport step must be positive and finite");
  for (const auto& [k, f] : state.labels) check_shape(f, state.domain);
  const double limit = max_stable_step(state);
  if (dt > limit * (1.0 + 1e-12)) {
    throw StepSizeError("dt = " + csv::format(dt) + " exceeds the upwind stability bound " + csv::format(limit));
  }

  const bool any_source = sources.f_u || sources.f_c || sources.w_u || sources.w_c || sources.g_ux || sources.r_ux;
  std::vector<std::vector<double>> centers;
  if (any_source) centers = cell_centers(state.domain);

  TransportState next = state;
  next.time = state.time + dt;
  std::vector<double> scratch;
  const double t = state.time;
  for (auto& [k, f] : next.labels) {
    advect(f.u2, f.v_u, state.domain, dt, scratch);
    advect(f.c2, f.v_c, state.domain, dt, scratch);
    advect(f.et_u, f.ve, state.domain, dt, scratch);
    advect(f.et_c, f.ve, state.domain, dt, scratch);
    for (auto& p : f.p_ux) advect(p, f.v_u, state.domain, dt, scratch);
    for (auto& p : f.pe_ux) advect(p, f.ve, state.domain, dt, scratch);

    check_non_negative(f.u2, "U2");
    check_non_negative(f.c2, "C2");
    check_non_negative(f.et_u, "EtU");
    check_non_negative(f.et_c, "EtC");

    if (!any_source) continue;
    const Label& label = k;
    auto scalar = [&](std::vector<double>& field, const SourceModel::Scalar& s) {
      if (!s) return;
      add_source(field, centers, t, dt, [&](double tt, std::span<const double> z) { return s(label, tt, z); });
    };
    scalar(f.u2, sources.f_u);
    scalar(f.c2, sources.f_c);
    scalar(f.et_u, sources.w_u);
    scalar(f.et_c, sources.w_c);
    auto component = [&](Components& fields, const SourceModel::Component& s) {
      if (!s) return;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const int comp = static_cast<int>(i);
        add_source(fields[i], centers, t, dt,
                   [&](double tt, std::span<const double> z) { return s(label, tt, z, comp); });
      }
    };
    component(f.p_ux, sources.g_ux);
    component(f.pe_ux, sources.r_ux);
  }
  return next;
}

AggregateState integrate(const TransportState& state) {
  const double vol = state.domain.cell_volume();
  AggregateState out;
  out.time = state.time;
  for (const auto& [k, f] : state.labels) {
    AggregateValues v;
    v.u2 = field_integral(f.u2, vol);
    v.c2 = field_integral(f.c2, vol);
    v.et_u = field_integral(f.et_u, vol);
    v.et_c = field_integral(f.et_c, vol);
    for (const auto& p : f.p_ux) v.p_ux.push_back(field_integral(p, vol));
    for (const auto& p : f.pe_ux) v.pe_ux.push_back(field_integral(p, vol));
    out.labels.emplace(k, std::move(v));
  }
  return out;
}

AggregateSources integrate_sources(const SourceModel& sources, const EconomicDomain& domain) {
  auto centers = std::make_shared<const std::vector<std::vector<double>>>(cell_centers(domain));
  const double vol = domain.cell_volume();
  auto scalar = [centers, vol](SourceModel::Scalar s) -> AggregateSources::Scalar {
    if (!s) return {};
    return [centers, vol, s](const Label& k, double t) {
      double sum = 0.0;
      for (const auto& z : *centers) sum += s(k, t, z);
      return sum * vol;
    };
  };
  auto component = [centers, vol](SourceModel::Component s) -> AggregateSources::Component {
    if (!s) return {};
    return [centers, vol, s](const Label& k, double t, int comp) {
      double sum = 0.0;
      for (const auto& z : *centers) sum += s(k, t, z, comp);
      return sum * vol;
    };
  };
  return {scalar(sources.f_u), scalar(sources.f_c), scalar(sources.w_u),
          scalar(sources.w_c), component(sources.g_ux), component(sources.r_ux)};
}

AggregateState aggregate_ode_step(const AggregateState& state, const AggregateSources& sources, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("ODE step must be positive and finite");
  std::vector<double> y;
  std::vector<std::pair<Label, std::size_t>> layout;  // label, flow components
  for (const auto& [k, v] : state.labels) {
    if (v.p_ux.size() != v.pe_ux.size()) throw ConfigError("flow and expected-flow dimensions differ");
    layout.emplace_back(k, v.p_ux.size());
    pack(v, y);
  }

  auto rhs = [&](double t, const std::vector<double>&, std::vector<double>& dydt) {
    std::size_t i = 0;
    for (const auto& [k, m] : layout) {
      dydt[i++] = eval_or_zero(sources.f_u, k, t);
      dydt[i++] = eval_or_zero(sources.f_c, k, t);
      dydt[i++] = eval_or_zero(sources.w_u, k, t);
      dydt[i++] = eval_or_zero(sources.w_c, k, t);
      for (std::size_t c = 0; c < m; ++c) dydt[i++] = sources.g_ux ? sources.g_ux(k, t, static_cast<int>(c)) : 0.0;
      for (std::size_t c = 0; c < m; ++c) dydt[i++] = sources.r_ux ? sources.r_ux(k, t, static_cast<int>(c)) : 0.0;
    }
    for (double d : dydt) {
      if (!std::isfinite(d)) throw IntegrationError("non-finite source value at t = " + csv::format(t));
    }
  };
  Rk4 rk(y.size());
  rk.step(y, state.time, dt, rhs);

  AggregateState next;
  next.time = state.time + dt;
  std::size_t i = 0;
  for (const auto& [k, m] : layout) {
    AggregateValues v;
    v.u2 = y[i++];
    v.c2 = y[i++];
    v.et_u = y[i++];
    v.et_c = y[i++];
    v.p_ux.assign(y.begin() + static_cast<std::ptrdiff_t>(i), y.begin() + static_cast<std::ptrdiff_t>(i + m));
    i += m;
    v.pe_ux.assign(y.begin() + static_cast<std::ptrdiff_t>(i), y.begin() + static_cast<std::ptrdiff_t>(i + m));
    i += m;
    next.labels.emplace(k, std::move(v));
  }
  return next;
}

AggregateRun run_transport(TransportState state, const SourceModel& sources, double dt, std::size_t steps,
                           TransportState* final_state) {
  AggregateRun run{dt, steps, {}};
  run.samples.reserve(steps + 1);
  run.samples.push_back(integrate(state));
  for (std::size_t s = 0; s < steps; ++s) {
    state = transport_step(state, sources, dt);
    run.samples.push_back(integrate(state));
  }
  if (final_state) *final_state = std::move(state);
  return run;
}

AggregateRun run_aggregate(AggregateState state, const AggregateSources& sources, double dt, std::size_t steps) {
  AggregateRun run{dt, steps, {}};
  run.samples.reserve(steps + 1);
  run.samples.push_back(state);
  for (std::size_t s = 0; s < steps; ++s) {
    state = aggregate_ode_step(state, sources, dt);
    run.samples.push_back(state);
  }
  return run;
}

double reduction_check(const AggregateRun& transport, const AggregateRun& ode) {
  if (transport.steps != ode.steps || transport.dt != ode.dt || transport.samples.size() != ode.samples.size()) {
    throw ConfigError("reduction check needs runs with the same step size and step count");
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < transport.samples.size(); ++s) {
    const auto& a = transport.samples[s].labels;
    const auto& b = ode.samples[s].labels;
    if (a.size() != b.size()) throw ConfigError("reduction check runs cover different labels");
    for (const auto& [k, va] : a) {
      const auto it = b.find(k);
      if (it == b.end()) throw ConfigError("reduction check runs cover different labels");
      std::vector<double> x, y;
      pack(va, x);
      pack(it->second, y);
      if (x.size() != y.size()) throw ConfigError("reduction check runs have different flow dimensions");
      for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
  }
  return worst;
}

std::string trajectory_csv(const AggregateRun& run, const std::string& prefix) {
  std::string out = "t,k,l,quantity,value\n";
  for (const auto& sample : run.samples) {
    const std::string t = csv::format(sample.time);
    for (const auto& [k, v] : sample.labels) {
      const std::string head = t + ',' + std::to_string(k.k) + ',' + std::to_string(k.l) + ',' + prefix;
      out += head + "U2," + csv::format(v.u2) + '\n';
      out += head + "C2," + csv::format(v.c2) + '\n';
      out += head + "EtU," + csv::format(v.et_u) + '\n';
      out += head + "EtC," + csv::format(v.et_c) + '\n';
      for (std::size_t c = 0; c < v.p_ux.size(); ++c) {
        out += head + "PUx" + std::to_string(c + 1) + ',' + csv::format(v.p_ux[c]) + '\n';
      }
      for (std::size_t c = 0; c < v.pe_ux.size(); ++c) {
        out += head + "PeUx" + std::to_string(c + 1) + ',' + csv::format(v.pe_ux[c]) + '\n';
      }
    }
  }
  return out;
}

TransportState transport_state_from_trades(std::span<const TradeRecord> trades, const EconomicDomain& domain) {
  const auto labeled = labeled_aggregate(trades, 2, domain, Side::seller);
  const auto expected = expected_trades(trades, domain, Side::seller);
  std::vector<Label> labels;
  for (const auto& [k, field] : labeled) labels.push_back(k);
  TransportState state = TransportState::zeros(domain, labels);
  const double inv_vol = 1.0 / domain.cell_volume();
  const auto m = static_cast<std::size_t>(domain.dimension);
  const bool kinematic = std::all_of(trades.begin(), trades.end(), [](const TradeRecord& t) { return t.has_velocity(); });

  for (auto& [k, f] : state.labels) {
    for (const auto& [c, sums] : labeled.at(k).cells) {
      f.u2[c] = sums.volume_sum * inv_vol;
      f.c2[c] = sums.value_sum * inv_vol;
    }
    const ExpectedTradeField& et = expected.at(k);
    for (const auto& [c, cell] : et.cells) {
      f.et_u[c] = cell.et_u * inv_vol;
      f.et_c[c] = cell.et_c * inv_vol;
      if (!et.has_flows) continue;
      const auto vx = cell.ve_ux();
      const auto vy = cell.ve_uy();
      for (std::size_t a = 0; a < m; ++a) {
        f.pe_ux[a][c] = cell.pe_ux[a] * inv_vol;
        f.ve[a][c] = vx[a].value_or(0.0);
        f.ve[m + a][c] = vy[a].value_or(0.0);
      }
    }
    if (!kinematic) continue;
    std::vector<TradeRecord> subset;
    for (const auto& t : trades) {
      if (t.seller_label == k) subset.push_back(t);
    }
    const FlowField flows = trade_flows(subset, 2, domain);
    for (const auto& [c, cell] : flows.cells) {
      const auto vux = cell.v_ux(), vuy = cell.v_uy(), vcx = cell.v_cx(), vcy = cell.v_cy();
      for (std::size_t a = 0; a < m; ++a) {
        f.p_ux[a][c] = cell.p_ux[a] * inv_vol;
        f.v_u[a][c] = vux[a].value_or(0.0);
        f.v_u[m + a][c] = vuy[a].value_or(0.0);
        f.v_c[a][c] = vcx[a].value_or(0.0);
        f.v_c[m + a][c] = vcy[a].value_or(0.0);
      }
    }
  }
  return state;
}

}  // namespace mmlab
