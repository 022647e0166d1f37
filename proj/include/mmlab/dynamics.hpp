#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmlab/grid.hpp"
#include "mmlab/ledger.hpp"

namespace mmlab {

// Dense per-cell fields of one expectation label. Scalars are densities: the
// domain integral of a field is sum(f) * d^(2m). Velocity fields hold 2m
// component arrays, each of cell_count() entries in the domain's row-major
// order; flow fields hold m component arrays (the x-directed flows).
struct LabelTransport {
  std::vector<double> u2, c2, et_u, et_c;
  std::vector<std::vector<double>> p_ux, pe_ux;
  std::vector<std::vector<double>> v_u, v_c, ve;
};

struct TransportState {
  EconomicDomain domain;
  double time = 0.0;
  std::map<Label, LabelTransport> labels;

  // Zero fields and velocities for each label.
  static TransportState zeros(const EconomicDomain& domain, std::span<const Label> labels);
};

// Source densities F_U, F_C, W_U, W_C and flow sources G_Ux, R_Ux at a point
// z of the 2m-dimensional domain. Empty callables mean zero.
struct SourceModel {
  using Scalar = std::function<double(const Label&, double t, std::span<const double> z)>;
  using Component = std::function<double(const Label&, double t, std::span<const double> z, int component)>;
  Scalar f_u, f_c, w_u, w_c;
  Component g_ux, r_ux;
};

struct AggregateValues {
  double u2 = 0.0, c2 = 0.0, et_u = 0.0, et_c = 0.0;
  std::vector<double> p_ux, pe_ux;  // m components each
};

struct AggregateState {
  double time = 0.0;
  std::map<Label, AggregateValues> labels;
};

// Right-hand sides of the aggregated equations as functions of (k, t).
struct AggregateSources {
  using Scalar = std::function<double(const Label&, double t)>;
  using Component = std::function<double(const Label&, double t, int component)>;
  Scalar f_u, f_c, w_u, w_c;
  Component g_ux, r_ux;
};

// Largest admissible step for the upwind scheme: 0.5 * d / max|v|
// (infinity when every velocity is zero).
double max_stable_step(const TransportState& state);

// One step of df/dt + div(f v) = S for every field: dimension-split upwind
// sweeps with closed boundaries, then the source increment integrated with
// Simpson's rule at cell centres. U2 and P_Ux move with v_u, C2 with v_c and
// the expected trades with ve, all frozen over the step.
// StepSizeError if dt breaks the stability bound; InvariantError if a
// non-negative field turns negative.
TransportState transport_step(const TransportState& state, const SourceModel& sources, double dt);

// Domain integrals sum(f) * d^(2m) of every field.
AggregateState integrate(const TransportState& state);

// Cell-centre quadrature of the source densities, matching transport_step.
AggregateSources integrate_sources(const SourceModel& sources, const EconomicDomain& domain);

// Classical RK4 step of dX/dt = source(k, t) for every aggregated quantity.
// IntegrationError on a non-finite source value.
AggregateState aggregate_ode_step(const AggregateState& state, const AggregateSources& sources, double dt);

// Sampled domain integrals (transport) or states (ODE), one per step
// including the initial one.
struct AggregateRun {
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<AggregateState> samples;
};

AggregateRun run_transport(TransportState state, const SourceModel& sources, double dt, std::size_t steps,
                           TransportState* final_state = nullptr);
AggregateRun run_aggregate(AggregateState state, const AggregateSources& sources, double dt, std::size_t steps);

// Max over samples and quantities of |transport integral - ODE value|.
// ConfigError when steps, dt, labels or flow dimensions differ.
double reduction_check(const AggregateRun& transport, const AggregateRun& ode);

// "t,k,l,quantity,value"; quantity names are prefixed (e.g. "mass_") when
// a prefix is given.
std::string trajectory_csv(const AggregateRun& run, const std::string& prefix = "");

// Initial transport state from a windowed ledger: second-degree labeled sums
// and expected trades (seller side) as densities, velocities from the
// contributing trades where present and zero elsewhere.
TransportState transport_state_from_trades(std::span<const TradeRecord> trades, const EconomicDomain& domain);

}  // namespace mmlab
