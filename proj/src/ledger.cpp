#include "mmlab/ledger.hpp"

#include <algorithm>
#include <cmath>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"

namespace mmlab {

void check_window(const TimeWindow& window) {
  if (!std::isfinite(window.center) || !std::isfinite(window.width) || !(window.width > 0.0)) {
    throw ConfigError("time window needs a finite center and a positive width");
  }
}

void validate_record(const TradeRecord& r, int dimension, int label_count, std::size_t row) {
  const auto m = static_cast<std::size_t>(dimension);
  if (!std::isfinite(r.time)) throw ValidationError(row, "time is not finite");
  if (r.seller_coords.size() != m || r.buyer_coords.size() != m) {
    throw ValidationError(row, "coordinate count does not match dimension " + std::to_string(dimension));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(r.seller_coords[i] >= 0.0 && r.seller_coords[i] <= 1.0)) {
      throw ValidationError(row, "x" + std::to_string(i + 1) + " outside [0,1]");
    }
    if (!(r.buyer_coords[i] >= 0.0 && r.buyer_coords[i] <= 1.0)) {
      throw ValidationError(row, "y" + std::to_string(i + 1) + " outside [0,1]");
    }
  }
  if (!(r.volume > 0.0) || !std::isfinite(r.volume)) throw ValidationError(row, "volume must be positive");
  if (!(r.value > 0.0) || !std::isfinite(r.value)) throw ValidationError(row, "value must be positive");
  auto label_ok = [label_count](const Label& l) {
    return l.k >= 1 && l.k <= label_count && l.l >= 1 && l.l <= label_count;
  };
  if (!label_ok(r.seller_label)) throw ValidationError(row, "seller label outside 1..K");
  if (!label_ok(r.buyer_label)) throw ValidationError(row, "buyer label outside 1..K");
  for (double ex : {r.seller_ex_u, r.seller_ex_c, r.buyer_ex_u, r.buyer_ex_c}) {
    if (!std::isfinite(ex)) throw ValidationError(row, "expectation magnitude is not finite");
  }
  if (r.seller_velocity.empty() != r.buyer_velocity.empty()) {
    throw ValidationError(row, "seller and buyer velocities must be given together");
  }
  if (r.has_velocity()) {
    if (r.seller_velocity.size() != m || r.buyer_velocity.size() != m) {
      throw ValidationError(row, "velocity component count does not match dimension");
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(r.seller_velocity[i]) || !std::isfinite(r.buyer_velocity[i])) {
        throw ValidationError(row, "velocity is not finite");
      }
    }
  }
}

Ledger::Ledger(int dimension, int label_count, std::vector<TradeRecord> records)
    : dimension_(dimension), label_count_(label_count), records_(std::move(records)) {
  if (dimension_ < 1) throw ConfigError("ledger dimension m must be >= 1");
  if (label_count_ < 1) throw ConfigError("label count K must be >= 1");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate_record(records_[i], dimension_, label_count_, i + 1);
  }
  std::stable_sort(records_.begin(), records_.end(),
                   [](const TradeRecord& a, const TradeRecord& b) { return a.time < b.time; });
}

double Ledger::time_min() const {
  if (records_.empty()) throw DomainError("empty ledger has no time range");
  return records_.front().time;
}

double Ledger::time_max() const {
  if (records_.empty()) throw DomainError("empty ledger has no time range");
  return records_.back().time;
}

std::string ledger_header(int dimension, bool with_expectations, bool with_velocities) {
  std::string h = "t";
  for (int i = 1; i <= dimension; ++i) h += ",x" + std::to_string(i);
  for (int i = 1; i <= dimension; ++i) h += ",y" + std::to_string(i);
  h += ",volume,value,k_s,l_s,k_b,l_b";
  if (with_expectations) h += ",ex_us,ex_cs,ex_ub,ex_cb";
  if (with_velocities) {
    for (int i = 1; i <= dimension; ++i) h += ",vx" + std::to_string(i);
    for (int i = 1; i <= dimension; ++i) h += ",vy" + std::to_string(i);
  }
  return h;
}

namespace {

double need_double(std::string_view field, std::size_t row, const char* name) {
  auto v = csv::parse_double(field);
  if (!v) throw ParseError(row, std::string("non-numeric ") + name + " '" + std::string(field) + "'");
  return *v;
}

int need_int(std::string_view field, std::size_t row, const char* name) {
  auto v = csv::parse_int(field);
  if (!v) throw ParseError(row, std::string("non-integer ") + name + " '" + std::string(field) + "'");
  return static_cast<int>(*v);
}

}  // namespace

Ledger load_ledger(std::string_view source, int dimension, int label_count) {
  if (dimension < 1) throw ConfigError("ledger dimension m must be >= 1");
  if (label_count < 1) throw ConfigError("label count K must be >= 1");
  if (source.size() >= 3 && static_cast<unsigned char>(source[0]) == 0xEF &&
      static_cast<unsigned char>(source[1]) == 0xBB && static_cast<unsigned char>(source[2]) == 0xBF) {
    source.remove_prefix(3);
  }

  csv::LineReader reader(source);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(0, "missing header");

  bool with_ex = false;
  bool with_vel = false;
  if (line == ledger_header(dimension, false, false)) {
  } else if (line == ledger_header(dimension, true, false)) {
    with_ex = true;
  } else if (line == ledger_header(dimension, false, true)) {
    with_vel = true;
  } else if (line == ledger_header(dimension, true, true)) {
    with_ex = with_vel = true;
  } else {
    throw ParseError(0, "header does not match the ledger schema for m=" + std::to_string(dimension));
  }
  const auto m = static_cast<std::size_t>(dimension);
  const std::size_t arity = 1 + 2 * m + 2 + 4 + (with_ex ? 4 : 0) + (with_vel ? 2 * m : 0);

  std::vector<TradeRecord> records;
  std::size_t row = 0;
  while (reader.next(line)) {
    if (line.empty()) continue;
    ++row;
    const auto f = csv::split(line);
    if (f.size() != arity) {
      throw ParseError(row, "expected " + std::to_string(arity) + " fields, got " + std::to_string(f.size()));
    }
    TradeRecord r;
    std::size_t c = 0;
    r.time = need_double(f[c++], row, "t");
    r.seller_coords.resize(m);
    r.buyer_coords.resize(m);
    for (auto& x : r.seller_coords) x = need_double(f[c++], row, "x");
    for (auto& y : r.buyer_coords) y = need_double(f[c++], row, "y");
    r.volume = need_double(f[c++], row, "volume");
    r.value = need_double(f[c++], row, "value");
    r.seller_label.k = need_int(f[c++], row, "k_s");
    r.seller_label.l = need_int(f[c++], row, "l_s");
    r.buyer_label.k = need_int(f[c++], row, "k_b");
    r.buyer_label.l = need_int(f[c++], row, "l_b");
    if (with_ex) {
      r.seller_ex_u = need_double(f[c++], row, "ex_us");
      r.seller_ex_c = need_double(f[c++], row, "ex_cs");
      r.buyer_ex_u = need_double(f[c++], row, "ex_ub");
      r.buyer_ex_c = need_double(f[c++], row, "ex_cb");
    }
    if (with_vel) {
      r.seller_velocity.resize(m);
      r.buyer_velocity.resize(m);
      for (auto& v : r.seller_velocity) v = need_double(f[c++], row, "vx");
      for (auto& v : r.buyer_velocity) v = need_double(f[c++], row, "vy");
    }
    validate_record(r, dimension, label_count, row);
    records.push_back(std::move(r));
  }
  return Ledger(dimension, label_count, std::move(records));
}

Ledger load_ledger_file(const std::filesystem::path& path, int dimension, int label_count) {
  return load_ledger(csv::read_file(path), dimension, label_count);
}

std::string write_ledger_csv(const Ledger& ledger) {
  const auto records = ledger.records();
  const bool with_vel = !records.empty() &&
                        std::all_of(records.begin(), records.end(), [](const auto& r) { return r.has_velocity(); });
  std::string out = ledger_header(ledger.dimension(), true, with_vel);
  out += '\n';
  for (const auto& r : records) {
    out += csv::format(r.time);
    for (double x : r.seller_coords) out += ',' + csv::format(x);
    for (double y : r.buyer_coords) out += ',' + csv::format(y);
    out += ',' + csv::format(r.volume);
    out += ',' + csv::format(r.value);
    out += ',' + std::to_string(r.seller_label.k) + ',' + std::to_string(r.seller_label.l);
    out += ',' + std::to_string(r.buyer_label.k) + ',' + std::to_string(r.buyer_label.l);
    out += ',' + csv::format(r.seller_ex_u) + ',' + csv::format(r.seller_ex_c);
    out += ',' + csv::format(r.buyer_ex_u) + ',' + csv::format(r.buyer_ex_c);
    if (with_vel) {
      for (double v : r.seller_velocity) out += ',' + csv::format(v);
      for (double v : r.buyer_velocity) out += ',' + csv::format(v);
    }
    out += '\n';
  }
  return out;
}

std::span<const TradeRecord> window_select(const Ledger& ledger, const TimeWindow& window) {
  check_window(window);
  const auto records = ledger.records();
  const double lo = window.lower();
  const double hi = window.upper();
  const auto first = std::lower_bound(records.begin(), records.end(), lo,
                                      [](const TradeRecord& r, double t) { return r.time < t; });
  const auto last = std::lower_bound(first, records.end(), hi,
                                     [](const TradeRecord& r, double t) { return r.time < t; });
  return {first, last};
}

std::vector<TradeRecord> window_select(std::span<const TradeRecord> trades, const TimeWindow& window) {
  check_window(window);
  std::vector<TradeRecord> out;
  for (const auto& r : trades) {
    if (window.contains(r.time)) out.push_back(r);
  }
  return out;
}

TimeWindow window_starting_at(double lower, double width) {
  TimeWindow w{lower + width / 2, width};
  while (w.lower() > lower) w.center = std::nextafter(w.center, -HUGE_VAL);
  return w;
}

double trade_price(const TradeRecord& trade) {
  if (trade.volume == 0.0) throw DomainError("trade price undefined for zero volume");
  return trade.value / trade.volume;
}

}  // namespace mmlab
