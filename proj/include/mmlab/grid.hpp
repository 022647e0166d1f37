#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/ledger.hpp"

namespace mmlab {

enum class Side { seller, buyer };

const char* side_name(Side side);  // "SELLER" / "BUYER"

// The 2m-dimensional cube [0,1]^m x [0,1]^m of (seller, buyer) coordinates,
// tiled by cells of edge d = 1/cells_per_axis.
struct EconomicDomain {
  int dimension = 1;       // m, 1 or 2
  int cells_per_axis = 1;  // 1/d

  // Throws ConfigError unless m is 1 or 2 and 1/d is an integer.
  static EconomicDomain with_scale(int dimension, double cell_scale);

  double cell_scale() const { return 1.0 / cells_per_axis; }
  std::size_t axes() const { return 2 * static_cast<std::size_t>(dimension); }
  std::size_t cell_count() const;           // (1/d)^(2m)
  std::size_t marginal_cell_count() const;  // (1/d)^m
  double cell_volume() const;               // d^(2m)

  // Row-major flattening of (zx_1..zx_m, zy_1..zy_m).
  std::size_t flatten(std::span<const int> index) const;
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten_marginal(std::span<const int> index) const;
  std::vector<int> unflatten_marginal(std::size_t flat) const;
  // Centre coordinates of a full cell, length 2m.
  std::vector<double> cell_center(std::size_t flat) const;

  bool operator==(const EconomicDomain&) const = default;
};

struct CellSums {
  double volume_sum = 0.0;  // U(n;t,z)
  double value_sum = 0.0;   // C(n;t,z)
  std::size_t trades = 0;   // contributing trades, for occupancy checks

  std::optional<double> price() const;
  CellSums& operator+=(const CellSums& other);
  bool operator==(const CellSums&) const = default;
};

// Collective n-th degree trades per cell. Sums are not divided by the window
// width; absent cells are zero.
struct GridField {
  EconomicDomain domain;
  int degree = 1;
  TimeWindow window;
  std::map<std::size_t, CellSums> cells;
};

// Sell (integrated over buyers) or buy (integrated over sellers) aggregates,
// keyed by the m-dimensional flattened cell index.
struct MarginalField {
  Side side = Side::seller;
  EconomicDomain domain;
  int degree = 1;
  std::map<std::size_t, CellSums> cells;
};

struct GridTotals {
  double value_sum = 0.0;
  double volume_sum = 0.0;
  std::optional<double> price;
};

// floor(coord / d) per component, coordinate 1.0 in the top cell.
// DomainError for coordinates outside [0,1] or a dimension mismatch.
std::vector<int> assign_cell(std::span<const double> coords, const EconomicDomain& domain);

// Flattened full-cell index of a trade's (seller, buyer) position.
std::size_t trade_cell(const TradeRecord& trade, const EconomicDomain& domain);

// x^n by repeated multiplication, matching the moment kernels' powers.
double degree_power(double x, int n);

GridField aggregate_grid(std::span<const TradeRecord> trades, int degree, const EconomicDomain& domain,
                         const TimeWindow& window = {});

MarginalField marginals(const GridField& field, Side side);

GridTotals totals(const GridField& field);
GridTotals totals(const MarginalField& field);

// "n,zx1..zxm,zy1..zym,U_n,C_n,p_n"
std::string grid_csv(const GridField& field);
// "side,n,z1..zm,U_n,C_n,p_n"
std::string marginal_csv(const MarginalField& field);
// "zx1..zxm,zy1..zym,trades"
std::string grid_counts_csv(const GridField& field);

}  // namespace mmlab
