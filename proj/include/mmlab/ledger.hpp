#pragma once

#include <compare>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmlab {

// Expectation type k = (k, l), both components in 1..K.
struct Label {
  int k = 1;
  int l = 1;

  auto operator<=>(const Label&) const = default;
};

// One transaction: seller at x sells `volume` to buyer at y for `value`.
struct TradeRecord {
  double time = 0.0;
  std::vector<double> seller_coords;  // x, m components in [0,1]
  std::vector<double> buyer_coords;   // y, m components in [0,1]
  double volume = 0.0;                // U > 0
  double value = 0.0;                 // C > 0
  Label seller_label;
  Label buyer_label;
  double seller_ex_u = 1.0;
  double seller_ex_c = 1.0;
  double buyer_ex_u = 1.0;
  double buyer_ex_c = 1.0;
  // Empty when the source carried no kinematic data.
  std::vector<double> seller_velocity;
  std::vector<double> buyer_velocity;

  bool has_velocity() const { return !seller_velocity.empty() && !buyer_velocity.empty(); }

  bool operator==(const TradeRecord&) const = default;
};

// Averaging interval [center - width/2, center + width/2).
struct TimeWindow {
  double center = 0.0;
  double width = 1.0;

  double lower() const { return center - width / 2; }
  double upper() const { return center + width / 2; }
  bool contains(double t) const { return t >= lower() && t < upper(); }

  bool operator==(const TimeWindow&) const = default;
};

// Throws ConfigError unless width > 0 and both ends are finite.
void check_window(const TimeWindow& window);

// Window of the given width whose lower edge is `lower`, or the nearest
// representable edge below it when lower + width/2 - width/2 rounds up.
TimeWindow window_starting_at(double lower, double width);

// Time-ordered, validated trade ledger. Immutable once built.
class Ledger {
public:
  Ledger(int dimension, int label_count) : Ledger(dimension, label_count, {}) {}
  // Validates every record (ValidationError names the 1-based position) and
  // stable-sorts by time.
  Ledger(int dimension, int label_count, std::vector<TradeRecord> records);

  int dimension() const { return dimension_; }
  int label_count() const { return label_count_; }
  std::span<const TradeRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  double time_min() const;
  double time_max() const;

  bool operator==(const Ledger&) const = default;

private:
  int dimension_;
  int label_count_;
  std::vector<TradeRecord> records_;
};

// Checks one record against the ledger invariants; throws ValidationError(row, ...).
void validate_record(const TradeRecord& record, int dimension, int label_count, std::size_t row);

// Parses the ledger CSV schema:
//   t,x1..xm,y1..ym,volume,value,k_s,l_s,k_b,l_b[,ex_us,ex_cs,ex_ub,ex_cb][,vx1..vxm,vy1..vym]
Ledger load_ledger(std::string_view source, int dimension, int label_count);
Ledger load_ledger_file(const std::filesystem::path& path, int dimension, int label_count);

// Header line (without newline) for the given options.
std::string ledger_header(int dimension, bool with_expectations, bool with_velocities);

// Always writes the expectation group; writes velocities when every record has them.
std::string write_ledger_csv(const Ledger& ledger);

// Records with time in [t - width/2, t + width/2), in ledger order.
std::span<const TradeRecord> window_select(const Ledger& ledger, const TimeWindow& window);
std::vector<TradeRecord> window_select(std::span<const TradeRecord> trades, const TimeWindow& window);

// value / volume
double trade_price(const TradeRecord& trade);

}  // namespace mmlab
