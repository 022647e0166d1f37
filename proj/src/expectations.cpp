#include "mmlab/expectations.hpp"

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"

namespace mmlab {

namespace {

const Label& side_label(const TradeRecord& t, Side side) {
  return side == Side::seller ? t.seller_label : t.buyer_label;
}

std::vector<std::optional<double>> per_unit(const std::vector<double>& flow, double sum) {
  std::vector<std::optional<double>> v(flow.size());
  if (sum > 0.0) {
    for (std::size_t i = 0; i < flow.size(); ++i) v[i] = flow[i] / sum;
  }
  return v;
}

}  // namespace

std::vector<std::optional<double>> ExpectedCell::ve_ux() const { return per_unit(pe_ux, et_u); }
std::vector<std::optional<double>> ExpectedCell::ve_uy() const { return per_unit(pe_uy, et_u); }

std::map<Label, GridField> labeled_aggregate(std::span<const TradeRecord> trades, int degree,
                                             const EconomicDomain& domain, Side side, const TimeWindow& window) {
  if (degree < 1) throw DomainError("degree n must be >= 1");
  std::map<Label, GridField> out;
  for (const auto& t : trades) {
    auto [it, inserted] = out.try_emplace(side_label(t, side), GridField{domain, degree, window, {}});
    auto& cell = it->second.cells[trade_cell(t, domain)];
    cell.volume_sum += degree_power(t.volume, degree);
    cell.value_sum += degree_power(t.value, degree);
    ++cell.trades;
  }
  return out;
}

std::map<Label, ExpectedTradeField> expected_trades(std::span<const TradeRecord> trades,
                                                    const EconomicDomain& domain, Side side,
                                                    const TimeWindow& window) {
  const auto m = static_cast<std::size_t>(domain.dimension);
  std::map<Label, ExpectedTradeField> out;
  for (const auto& t : trades) {
    const Label& label = side_label(t, side);
    auto [it, inserted] = out.try_emplace(label);
    auto& field = it->second;
    if (inserted) {
      field.side = side;
      field.label = label;
      field.domain = domain;
      field.window = window;
      field.has_flows = true;
    }
    field.has_flows = field.has_flows && t.has_velocity();

    const double ex_u = side == Side::seller ? t.seller_ex_u : t.buyer_ex_u;
    const double ex_c = side == Side::seller ? t.seller_ex_c : t.buyer_ex_c;
    const double et_u = ex_u * (t.volume * t.volume);
    const double et_c = ex_c * (t.value * t.value);

    auto& cell = field.cells[trade_cell(t, domain)];
    if (cell.pe_ux.empty()) {
      cell.pe_ux.assign(m, 0.0);
      cell.pe_uy.assign(m, 0.0);
    }
    cell.et_u += et_u;
    cell.et_c += et_c;
    ++cell.trades;
    if (t.has_velocity()) {
      for (std::size_t a = 0; a < m; ++a) {
        cell.pe_ux[a] += et_u * t.seller_velocity[a];
        cell.pe_uy[a] += et_u * t.buyer_velocity[a];
      }
    }
  }
  // Partial flows would mislead; drop them unless every trade had velocities.
  for (auto& [label, field] : out) {
    if (field.has_flows) continue;
    for (auto& [flat, cell] : field.cells) {
      cell.pe_ux.clear();
      cell.pe_uy.clear();
    }
  }
  return out;
}

CollectiveExpectations collective_expectations(const std::map<Label, ExpectedTradeField>& expected,
                                               const std::map<Label, GridField>& labeled) {
  if (expected.size() != labeled.size()) throw ConfigError("expected-trade and labeled fields cover different labels");
  CollectiveExpectations out;
  bool first = true;
  for (const auto& [label, et] : expected) {
    const auto found = labeled.find(label);
    if (found == labeled.end()) throw ConfigError("labeled fields lack a label present in expected trades");
    const GridField& grid = found->second;
    if (grid.degree != 2) throw ConfigError("collective expectations need second-degree labeled fields");
    if (!(grid.domain == et.domain)) throw ConfigError("expected trades and labeled fields use different domains");
    if (!(grid.window == et.window)) throw ConfigError("expected trades and labeled fields use different windows");
    if (first) {
      out.side = et.side;
      first = false;
    } else if (et.side != out.side) {
      throw ConfigError("expected-trade fields mix seller and buyer sides");
    }

    ExpectationField field;
    field.side = et.side;
    field.label = label;
    field.domain = et.domain;
    for (const auto& [flat, cell] : et.cells) {
      ExpectationCell& e = field.cells[flat];
      e.et_u = cell.et_u;
      e.et_c = cell.et_c;
    }
    for (const auto& [flat, sums] : grid.cells) {
      ExpectationCell& e = field.cells[flat];
      e.u2 = sums.volume_sum;
      e.c2 = sums.value_sum;
    }
    for (auto& [flat, e] : field.cells) {
      if (e.u2 > 0.0) e.ex_u = e.et_u / e.u2;
      if (e.c2 > 0.0) e.ex_c = e.et_c / e.c2;
      field.et_u += e.et_u;
      field.et_c += e.et_c;
      field.u2 += e.u2;
      field.c2 += e.c2;
    }
    if (field.u2 > 0.0) field.ex_u = field.et_u / field.u2;
    if (field.c2 > 0.0) field.ex_c = field.et_c / field.c2;

    out.et_us += field.et_u;
    out.et_cs += field.et_c;
    out.u2 += field.u2;
    out.c2 += field.c2;
    out.labels.emplace(label, std::move(field));
  }
  if (out.u2 > 0.0) out.ex_us = out.et_us / out.u2;
  if (out.c2 > 0.0) out.ex_cs = out.et_cs / out.c2;
  return out;
}

std::string expectations_csv(const CollectiveExpectations& ex) {
  std::string out = "side,k,l";
  int m = 0;
  if (!ex.labels.empty()) m = ex.labels.begin()->second.domain.dimension;
  for (int i = 1; i <= m; ++i) out += ",zx" + std::to_string(i);
  for (int i = 1; i <= m; ++i) out += ",zy" + std::to_string(i);
  out += ",Et_U,Et_C,U2,C2,Ex_U,Ex_C\n";
  for (const auto& [label, field] : ex.labels) {
    for (const auto& [flat, e] : field.cells) {
      out += std::string(side_name(field.side)) + ',' + std::to_string(label.k) + ',' + std::to_string(label.l);
      for (int i : field.domain.unflatten(flat)) out += ',' + std::to_string(i);
      out += ',' + csv::format(e.et_u) + ',' + csv::format(e.et_c) + ',' + csv::format(e.u2) + ',' +
             csv::format(e.c2) + ',' + csv::format(e.ex_u) + ',' + csv::format(e.ex_c) + '\n';
    }
  }
  return out;
}

}  // namespace mmlab
