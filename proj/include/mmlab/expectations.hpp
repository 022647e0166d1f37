#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/grid.hpp"
#include "mmlab/ledger.hpp"

namespace mmlab {

// Expected trades of one cell: expectation-weighted second-degree sums and,
// when every contributing trade carries velocities, their flows.
struct ExpectedCell {
  double et_u = 0.0;  // sum ex_u * U^2
  double et_c = 0.0;  // sum ex_c * C^2
  std::vector<double> pe_ux;  // sum ex_u * U^2 * v_seller
  std::vector<double> pe_uy;  // sum ex_u * U^2 * v_buyer
  std::size_t trades = 0;

  std::vector<std::optional<double>> ve_ux() const;
  std::vector<std::optional<double>> ve_uy() const;
};

struct ExpectedTradeField {
  Side side = Side::seller;
  Label label;
  EconomicDomain domain;
  TimeWindow window;
  bool has_flows = false;
  std::map<std::size_t, ExpectedCell> cells;
};

struct ExpectationCell {
  double et_u = 0.0;
  double et_c = 0.0;
  double u2 = 0.0;  // U(2,k;t,z)
  double c2 = 0.0;  // C(2,k;t,z)
  std::optional<double> ex_u;  // et_u / u2 where u2 > 0
  std::optional<double> ex_c;
};

// Collective expectations of one label, per cell and economy-wide.
struct ExpectationField {
  Side side = Side::seller;
  Label label;
  EconomicDomain domain;
  std::map<std::size_t, ExpectationCell> cells;
  double et_u = 0.0;  // Et_U(k;t)
  double et_c = 0.0;
  double u2 = 0.0;    // U(2,k;t)
  double c2 = 0.0;
  std::optional<double> ex_u;  // Ex_U(k;t)
  std::optional<double> ex_c;
};

struct CollectiveExpectations {
  Side side = Side::seller;
  std::map<Label, ExpectationField> labels;
  double et_us = 0.0;  // sum over labels of Et_U(k;t)
  double et_cs = 0.0;
  double u2 = 0.0;     // U(2;t)
  double c2 = 0.0;     // C(2;t)
  std::optional<double> ex_us;
  std::optional<double> ex_cs;
};

// Partitions trades by the seller (or buyer) label and aggregates each part.
std::map<Label, GridField> labeled_aggregate(std::span<const TradeRecord> trades, int degree,
                                             const EconomicDomain& domain, Side side,
                                             const TimeWindow& window = {});

// Seller side weights by ex_us/ex_cs, buyer side by ex_ub/ex_cb; the label is
// taken from the same side. Flow vectors always pair x with the seller's
// velocity and y with the buyer's.
std::map<Label, ExpectedTradeField> expected_trades(std::span<const TradeRecord> trades,
                                                    const EconomicDomain& domain, Side side,
                                                    const TimeWindow& window = {});

// Ex = Et / U(2,k) per cell and per label after summing cells, plus the
// all-label aggregates. ConfigError when label sets, sides, domains or windows differ,
// or the labeled fields are not second degree.
CollectiveExpectations collective_expectations(const std::map<Label, ExpectedTradeField>& expected,
                                               const std::map<Label, GridField>& labeled);

// "side,k,l,zx..,zy..,Et_U,Et_C,U2,C2,Ex_U,Ex_C"
std::string expectations_csv(const CollectiveExpectations& ex);

}  // namespace mmlab
