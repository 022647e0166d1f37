#include "mmlab/kinematics.hpp"

#include <cmath>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"

namespace mmlab {

TransitionMatrix::TransitionMatrix(std::vector<double> grade_positions,
                                   std::vector<std::vector<double>> probabilities, double horizon)
    : positions_(std::move(grade_positions)), probabilities_(std::move(probabilities)), horizon_(horizon) {
  const std::size_t k = positions_.size();
  if (k == 0) throw ConfigError("transition matrix needs at least one grade");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ConfigError("transition horizon T must be positive");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(positions_[i] >= 0.0 && positions_[i] <= 1.0)) throw ConfigError("grade positions must lie in [0,1]");
    if (i > 0 && !(positions_[i] > positions_[i - 1])) {
      throw ConfigError("grade positions must be strictly increasing");
    }
  }
  if (probabilities_.size() != k) throw ConfigError("transition matrix must be K x K");
  for (const auto& row : probabilities_) {
    if (row.size() != k) throw ConfigError("transition matrix must be K x K");
    double sum = 0.0;
    for (double a : row) {
      if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("transition probabilities must be non-negative");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("transition matrix rows must sum to 1");
  }
}

std::size_t TransitionMatrix::nearest_grade(double x) const {
  std::size_t best = 0;
  double best_dist = std::abs(x - positions_[0]);
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    const double dist = std::abs(x - positions_[i]);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

double grade_velocity(const TransitionMatrix& matrix, std::size_t i) {
  if (i >= matrix.grades()) throw DomainError("grade index out of range");
  const auto x = matrix.positions();
  double drift = 0.0;
  for (std::size_t j = 0; j < matrix.grades(); ++j) drift += (x[j] - x[i]) * matrix.probability(i, j);
  return drift / matrix.horizon();
}

double coordinate_velocity(const TransitionMatrix& matrix, double x) {
  return grade_velocity(matrix, matrix.nearest_grade(x));
}

FlowCell& FlowCell::operator+=(const FlowCell& other) {
  volume_sum += other.volume_sum;
  value_sum += other.value_sum;
  for (std::size_t i = 0; i < p_ux.size(); ++i) {
    p_ux[i] += other.p_ux[i];
    p_uy[i] += other.p_uy[i];
    p_cx[i] += other.p_cx[i];
    p_cy[i] += other.p_cy[i];
  }
  return *this;
}

namespace {

std::vector<std::optional<double>> ratio(const std::vector<double>& flow, double sum) {
  std::vector<std::optional<double>> v(flow.size());
  if (sum > 0.0) {
    for (std::size_t i = 0; i < flow.size(); ++i) v[i] = flow[i] / sum;
  }
  return v;
}

}  // namespace

std::vector<std::optional<double>> FlowCell::v_ux() const { return ratio(p_ux, volume_sum); }
std::vector<std::optional<double>> FlowCell::v_uy() const { return ratio(p_uy, volume_sum); }
std::vector<std::optional<double>> FlowCell::v_cx() const { return ratio(p_cx, value_sum); }
std::vector<std::optional<double>> FlowCell::v_cy() const { return ratio(p_cy, value_sum); }

FlowField trade_flows(std::span<const TradeRecord> trades, int degree, const EconomicDomain& domain,
                      const TransitionMatrix* fallback, const TimeWindow& window) {
  if (degree < 1) throw DomainError("degree n must be >= 1");
  const auto m = static_cast<std::size_t>(domain.dimension);
  FlowField field{domain, degree, window, {}};
  std::vector<double> vx(m), vy(m);
  for (const auto& t : trades) {
    if (t.has_velocity()) {
      vx = t.seller_velocity;
      vy = t.buyer_velocity;
    } else {
      if (fallback == nullptr) {
        throw ConfigError("trade without velocities and no fallback transition matrix");
      }
      for (std::size_t a = 0; a < m; ++a) {
        vx[a] = coordinate_velocity(*fallback, t.seller_coords[a]);
        vy[a] = coordinate_velocity(*fallback, t.buyer_coords[a]);
      }
    }
    const double un = degree_power(t.volume, degree);
    const double cn = degree_power(t.value, degree);
    auto [it, inserted] = field.cells.try_emplace(trade_cell(t, domain), m);
    auto& cell = it->second;
    cell.volume_sum += un;
    cell.value_sum += cn;
    for (std::size_t a = 0; a < m; ++a) {
      cell.p_ux[a] += un * vx[a];
      cell.p_uy[a] += un * vy[a];
      cell.p_cx[a] += cn * vx[a];
      cell.p_cy[a] += cn * vy[a];
    }
  }
  return field;
}

FlowSummary flow_marginals_totals(const FlowField& field) {
  const auto m = static_cast<std::size_t>(field.domain.dimension);
  FlowSummary s{{Side::seller, field.domain, field.degree, {}},
                {Side::buyer, field.domain, field.degree, {}},
                FlowCell(m)};
  for (const auto& [flat, cell] : field.cells) {
    const auto index = field.domain.unflatten(flat);
    const std::vector<int> xi(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(m));
    const std::vector<int> yi(index.begin() + static_cast<std::ptrdiff_t>(m), index.end());
    s.sell.cells.try_emplace(field.domain.flatten_marginal(xi), m).first->second += cell;
    s.buy.cells.try_emplace(field.domain.flatten_marginal(yi), m).first->second += cell;
    s.total += cell;
  }
  return s;
}

namespace {

std::string index_header(const char* prefix, int m) {
  std::string s;
  for (int i = 1; i <= m; ++i) s += std::string(",") + prefix + std::to_string(i);
  return s;
}

void append_flow_row(std::string& out, const FlowCell& cell, std::size_t a) {
  out += ',' + csv::format(cell.p_ux[a]) + ',' + csv::format(cell.p_uy[a]) + ',' + csv::format(cell.p_cx[a]) +
         ',' + csv::format(cell.p_cy[a]);
  out += ',' + csv::format(cell.v_ux()[a]) + ',' + csv::format(cell.v_uy()[a]) + ',' +
         csv::format(cell.v_cx()[a]) + ',' + csv::format(cell.v_cy()[a]) + '\n';
}

}  // namespace

std::string flows_csv(const FlowField& field) {
  const int m = field.domain.dimension;
  std::string out = "n" + index_header("zx", m) + index_header("zy", m) +
                    ",axis,P_Ux,P_Uy,P_Cx,P_Cy,v_Ux,v_Uy,v_Cx,v_Cy\n";
  for (const auto& [flat, cell] : field.cells) {
    const auto index = field.domain.unflatten(flat);
    for (std::size_t a = 0; a < static_cast<std::size_t>(m); ++a) {
      out += std::to_string(field.degree);
      for (int i : index) out += ',' + std::to_string(i);
      out += ',' + std::to_string(a + 1);
      append_flow_row(out, cell, a);
    }
  }
  return out;
}

std::string flow_summary_csv(const FlowSummary& s) {
  const int m = s.sell.domain.dimension;
  std::string out = "scope" + index_header("z", m) + ",axis,U_n,C_n,P_Ux,P_Uy,P_Cx,P_Cy,v_Ux,v_Uy,v_Cx,v_Cy\n";
  // Economy totals have no cell index; their index columns read NA.
  auto emit = [&](const char* scope, const std::vector<int>& index, const FlowCell& cell) {
    for (std::size_t a = 0; a < static_cast<std::size_t>(m); ++a) {
      out += scope;
      for (int i : index) out += i < 0 ? std::string(",NA") : ',' + std::to_string(i);
      out += ',' + std::to_string(a + 1) + ',' + csv::format(cell.volume_sum) + ',' + csv::format(cell.value_sum);
      append_flow_row(out, cell, a);
    }
  };
  for (const auto& [flat, cell] : s.sell.cells) emit("SELL", s.sell.domain.unflatten_marginal(flat), cell);
  for (const auto& [flat, cell] : s.buy.cells) emit("BUY", s.buy.domain.unflatten_marginal(flat), cell);
  emit("TOTAL", std::vector<int>(static_cast<std::size_t>(m), -1), s.total);
  return out;
}

}  // namespace mmlab
