#include "mmlab/grid.hpp"

#include <cmath>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"

namespace mmlab {

const char* side_name(Side side) { return side == Side::seller ? "SELLER" : "BUYER"; }

EconomicDomain EconomicDomain::with_scale(int dimension, double cell_scale) {
  if (dimension != 1 && dimension != 2) throw ConfigError("economic domain supports m = 1 or 2");
  if (!(cell_scale > 0.0) || cell_scale > 1.0) throw ConfigError("cell scale d must lie in (0, 1]");
  const double inv = 1.0 / cell_scale;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * rounded) throw ConfigError("1/d must be an integer");
  return EconomicDomain{dimension, static_cast<int>(rounded)};
}

std::size_t EconomicDomain::cell_count() const {
  std::size_t n = 1;
  for (std::size_t a = 0; a < axes(); ++a) n *= static_cast<std::size_t>(cells_per_axis);
  return n;
}

std::size_t EconomicDomain::marginal_cell_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dimension; ++a) n *= static_cast<std::size_t>(cells_per_axis);
  return n;
}

double EconomicDomain::cell_volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < axes(); ++a) v *= cell_scale();
  return v;
}

std::size_t EconomicDomain::flatten(std::span<const int> index) const {
  std::size_t flat = 0;
  for (int i : index) flat = flat * static_cast<std::size_t>(cells_per_axis) + static_cast<std::size_t>(i);
  return flat;
}

std::vector<int> EconomicDomain::unflatten(std::size_t flat) const {
  std::vector<int> index(axes());
  for (std::size_t a = axes(); a-- > 0;) {
    index[a] = static_cast<int>(flat % static_cast<std::size_t>(cells_per_axis));
    flat /= static_cast<std::size_t>(cells_per_axis);
  }
  return index;
}

std::size_t EconomicDomain::flatten_marginal(std::span<const int> index) const { return flatten(index); }

std::vector<int> EconomicDomain::unflatten_marginal(std::size_t flat) const {
  std::vector<int> index(static_cast<std::size_t>(dimension));
  for (std::size_t a = index.size(); a-- > 0;) {
    index[a] = static_cast<int>(flat % static_cast<std::size_t>(cells_per_axis));
    flat /= static_cast<std::size_t>(cells_per_axis);
  }
  return index;
}

std::vector<double> EconomicDomain::cell_center(std::size_t flat) const {
  const auto index = unflatten(flat);
  std::vector<double> c(index.size());
  for (std::size_t a = 0; a < index.size(); ++a) c[a] = (index[a] + 0.5) * cell_scale();
  return c;
}

std::optional<double> CellSums::price() const {
  if (volume_sum > 0.0) return value_sum / volume_sum;
  return std::nullopt;
}

CellSums& CellSums::operator+=(const CellSums& other) {
  volume_sum += other.volume_sum;
  value_sum += other.value_sum;
  trades += other.trades;
  return *this;
}

std::vector<int> assign_cell(std::span<const double> coords, const EconomicDomain& domain) {
  if (coords.size() != static_cast<std::size_t>(domain.dimension)) {
    throw DomainError("assign_cell: coordinate count does not match the domain dimension");
  }
  std::vector<int> index(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double x = coords[i];
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("assign_cell: coordinate outside [0,1]");
    const int cell = static_cast<int>(std::floor(x * domain.cells_per_axis));
    index[i] = cell >= domain.cells_per_axis ? domain.cells_per_axis - 1 : cell;
  }
  return index;
}

std::size_t trade_cell(const TradeRecord& trade, const EconomicDomain& domain) {
  auto index = assign_cell(trade.seller_coords, domain);
  const auto buyer = assign_cell(trade.buyer_coords, domain);
  index.insert(index.end(), buyer.begin(), buyer.end());
  return domain.flatten(index);
}

double degree_power(double x, int n) {
  double p = x;
  for (int i = 1; i < n; ++i) p *= x;
  return p;
}

GridField aggregate_grid(std::span<const TradeRecord> trades, int degree, const EconomicDomain& domain,
                         const TimeWindow& window) {
  if (degree < 1) throw DomainError("degree n must be >= 1");
  GridField field{domain, degree, window, {}};
  for (const auto& t : trades) {
    auto& cell = field.cells[trade_cell(t, domain)];
    cell.volume_sum += degree_power(t.volume, degree);
    cell.value_sum += degree_power(t.value, degree);
    ++cell.trades;
  }
  return field;
}

MarginalField marginals(const GridField& field, Side side) {
  MarginalField out{side, field.domain, field.degree, {}};
  const auto m = static_cast<std::size_t>(field.domain.dimension);
  for (const auto& [flat, sums] : field.cells) {
    const auto index = field.domain.unflatten(flat);
    const auto first = side == Side::seller ? index.begin() : index.begin() + static_cast<std::ptrdiff_t>(m);
    const std::vector<int> part(first, first + static_cast<std::ptrdiff_t>(m));
    out.cells[field.domain.flatten_marginal(part)] += sums;
  }
  return out;
}

namespace {

template <class Map>
GridTotals sum_cells(const Map& cells) {
  GridTotals t;
  for (const auto& [flat, sums] : cells) {
    t.value_sum += sums.value_sum;
    t.volume_sum += sums.volume_sum;
  }
  if (t.volume_sum > 0.0) t.price = t.value_sum / t.volume_sum;
  return t;
}

std::string index_columns(const char* prefix, int m) {
  std::string s;
  for (int i = 1; i <= m; ++i) s += std::string(",") + prefix + std::to_string(i);
  return s;
}

}  // namespace

GridTotals totals(const GridField& field) { return sum_cells(field.cells); }
GridTotals totals(const MarginalField& field) { return sum_cells(field.cells); }

std::string grid_csv(const GridField& field) {
  const int m = field.domain.dimension;
  std::string out = "n" + index_columns("zx", m) + index_columns("zy", m) + ",U_n,C_n,p_n\n";
  for (const auto& [flat, sums] : field.cells) {
    out += std::to_string(field.degree);
    for (int i : field.domain.unflatten(flat)) out += ',' + std::to_string(i);
    out += ',' + csv::format(sums.volume_sum) + ',' + csv::format(sums.value_sum) + ',' +
           csv::format(sums.price()) + '\n';
  }
  return out;
}

std::string marginal_csv(const MarginalField& field) {
  const int m = field.domain.dimension;
  std::string out = "side,n" + index_columns("z", m) + ",U_n,C_n,p_n\n";
  const char* tag = field.side == Side::seller ? "SELL" : "BUY";
  for (const auto& [flat, sums] : field.cells) {
    out += std::string(tag) + ',' + std::to_string(field.degree);
    for (int i : field.domain.unflatten_marginal(flat)) out += ',' + std::to_string(i);
    out += ',' + csv::format(sums.volume_sum) + ',' + csv::format(sums.value_sum) + ',' +
           csv::format(sums.price()) + '\n';
  }
  return out;
}

std::string grid_counts_csv(const GridField& field) {
  const int m = field.domain.dimension;
  std::string header = index_columns("zx", m) + index_columns("zy", m) + ",trades\n";
  std::string out = header.substr(1);
  for (const auto& [flat, sums] : field.cells) {
    bool first = true;
    for (int i : field.domain.unflatten(flat)) {
      if (!first) out += ',';
      out += std::to_string(i);
      first = false;
    }
    out += ',' + std::to_string(sums.trades) + '\n';
  }
  return out;
}

}  // namespace mmlab
