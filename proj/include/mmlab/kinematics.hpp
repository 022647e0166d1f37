#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/grid.hpp"
#include "mmlab/ledger.hpp"

namespace mmlab {

// K numeric grade positions with a row-stochastic migration matrix over horizon T.
class TransitionMatrix {
public:
  // Throws ConfigError unless positions are strictly increasing in [0,1],
  // probabilities are non-negative and each row sums to 1 within 1e-9, and T > 0.
  TransitionMatrix(std::vector<double> grade_positions, std::vector<std::vector<double>> probabilities,
                   double horizon);

  std::size_t grades() const { return positions_.size(); }
  std::span<const double> positions() const { return positions_; }
  double probability(std::size_t i, std::size_t j) const { return probabilities_[i][j]; }
  double horizon() const { return horizon_; }

  // Index of the grade position nearest to x; ties go to the lower grade.
  std::size_t nearest_grade(double x) const;

private:
  std::vector<double> positions_;
  std::vector<std::vector<double>> probabilities_;
  double horizon_;
};

// Mean drift at grade i: (1/T) sum_j (x_j - x_i) a_ij. DomainError for a bad index.
double grade_velocity(const TransitionMatrix& matrix, std::size_t i);

// Velocity at a continuous coordinate: grade_velocity at the nearest grade.
double coordinate_velocity(const TransitionMatrix& matrix, double x);

// Per-cell transported sums and their flows. Flow vectors have m components.
struct FlowCell {
  double volume_sum = 0.0;  // U(n;t,z)
  double value_sum = 0.0;   // C(n;t,z)
  std::vector<double> p_ux, p_uy, p_cx, p_cy;

  FlowCell() = default;
  explicit FlowCell(std::size_t m) : p_ux(m, 0.0), p_uy(m, 0.0), p_cx(m, 0.0), p_cy(m, 0.0) {}
  FlowCell& operator+=(const FlowCell& other);

  // flow / matching sum per component; std::nullopt where the sum is zero.
  std::vector<std::optional<double>> v_ux() const;
  std::vector<std::optional<double>> v_uy() const;
  std::vector<std::optional<double>> v_cx() const;
  std::vector<std::optional<double>> v_cy() const;
};

struct FlowField {
  EconomicDomain domain;
  int degree = 2;
  TimeWindow window;
  std::map<std::size_t, FlowCell> cells;
};

struct FlowMarginal {
  Side side = Side::seller;
  EconomicDomain domain;
  int degree = 2;
  std::map<std::size_t, FlowCell> cells;  // keyed by the m-dimensional index
};

struct FlowSummary {
  FlowMarginal sell;
  FlowMarginal buy;
  FlowCell total;  // economy-wide sums; total.v_ux() etc. are the macro velocities
};

// Per-trade flows U^n v, C^n v summed per cell. Trades without velocities use
// the fallback matrix (nearest grade per axis); ConfigError if none is given.
FlowField trade_flows(std::span<const TradeRecord> trades, int degree, const EconomicDomain& domain,
                      const TransitionMatrix* fallback = nullptr, const TimeWindow& window = {});

FlowSummary flow_marginals_totals(const FlowField& field);

// "n,zx..,zy..,axis,P_Ux,P_Uy,P_Cx,P_Cy,v_Ux,v_Uy,v_Cx,v_Cy", one row per cell and axis component.
std::string flows_csv(const FlowField& field);
// "scope,z..,axis,U_n,C_n,P_Ux,P_Uy,P_Cx,P_Cy,v_Ux,v_Uy,v_Cx,v_Cy" for SELL, BUY and TOTAL rows.
std::string flow_summary_csv(const FlowSummary& summary);

}  // namespace mmlab
