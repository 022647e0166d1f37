#include "mmlab/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mmlab/csv.hpp"
#include "mmlab/error.hpp"
#include "mmlab/kernels/kernels.hpp"

namespace mmlab {

namespace {

void check_degree(int n) {
  if (n < 1) throw DomainError("degree n must be >= 1");
}

struct Columns {
  std::vector<double> volumes;
  std::vector<double> values;
};

Columns gather(std::span<const TradeRecord> trades) {
  Columns c;
  c.volumes.reserve(trades.size());
  c.values.reserve(trades.size());
  for (const auto& t : trades) {
    c.volumes.push_back(t.volume);
    c.values.push_back(t.value);
  }
  return c;
}

}  // namespace

MomentSeries compute_moments(std::span<const TradeRecord> trades, const TimeWindow& window, int max_degree) {
  check_degree(max_degree);
  const auto degree = static_cast<std::size_t>(max_degree);
  const auto cols = gather(trades);
  std::vector<double> u(degree), c(degree);
  kernels::power_sums(cols.volumes, cols.values, u, c);

  MomentSeries s;
  s.window = window;
  s.max_degree = max_degree;
  s.trade_count = trades.size();
  s.sums.resize(degree);
  s.moments.resize(degree);
  for (std::size_t d = 0; d < degree; ++d) {
    s.sums[d] = {c[d], u[d]};
    if (u[d] > 0.0) s.moments[d] = c[d] / u[d];
  }
  return s;
}

DegreeSums aggregate_degree(std::span<const TradeRecord> trades, int n) {
  return compute_moments(trades, {}, n).sum(n);
}

std::optional<double> price_moment(std::span<const TradeRecord> trades, int n) {
  return compute_moments(trades, {}, n).moment(n);
}

std::optional<double> frequency_mean(std::span<const TradeRecord> trades) {
  if (trades.empty()) return std::nullopt;
  std::vector<double> prices;
  prices.reserve(trades.size());
  for (const auto& t : trades) prices.push_back(trade_price(t));
  std::vector<double> ones(prices.size(), 1.0);
  double count = 0.0;
  double total = 0.0;
  kernels::power_sums(ones, prices, std::span<double>(&count, 1), std::span<double>(&total, 1));
  return total / static_cast<double>(trades.size());
}

std::optional<VolatilityReading> volatility(const MomentSeries& m) {
  if (m.max_degree < 2) throw DomainError("volatility needs moments up to degree 2");
  const auto p1 = m.moment(1);
  const auto p2 = m.moment(2);
  if (!p1 || !p2) return std::nullopt;
  VolatilityReading r;
  r.window = m.window;
  r.p1 = *p1;
  r.p2 = *p2;
  r.sigma2 = *p2 - *p1 * *p1;
  const double moments[2] = {*p1, *p2};
  r.measure_valid = moment_validity(moments, 2) && r.sigma2 >= -kHankelTolerance;
  return r;
}

std::optional<VolatilityReading> volatility(std::span<const TradeRecord> trades, const TimeWindow& window) {
  return volatility(compute_moments(trades, window, 2));
}

std::complex<double> char_function(const MomentSeries& m, double x, int terms) {
  if (terms < 0) throw DomainError("char_function: negative term count");
  if (terms > m.max_degree) throw DomainError("char_function: more terms than available moments");
  std::complex<double> total(1.0, 0.0);
  double coeff = 1.0;  // x^n / n!
  // i^n cycles through 1, i, -1, -i.
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int n = 1; n <= terms; ++n) {
    const auto p = m.moment(n);
    if (!p) throw DomainError("char_function: moment p(" + std::to_string(n) + ") is missing");
    coeff *= x / n;
    total += ipow[n % 4] * (coeff * *p);
  }
  return total;
}

double hankel_min_eigenvalue(std::span<const double> moments, int max_even_degree) {
  if (max_even_degree < 0 || max_even_degree % 2 != 0) {
    throw DomainError("moment_validity: degree must be a non-negative even number");
  }
  if (moments.size() < static_cast<std::size_t>(max_even_degree)) {
    throw DomainError("moment_validity: moments missing up to degree " + std::to_string(max_even_degree));
  }
  const int r = max_even_degree / 2;
  Eigen::MatrixXd h(r + 1, r + 1);
  for (int a = 0; a <= r; ++a) {
    for (int b = 0; b <= r; ++b) {
      const int n = a + b;
      h(a, b) = n == 0 ? 1.0 : moments[static_cast<std::size_t>(n - 1)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool moment_validity(std::span<const double> moments, int max_even_degree, double tolerance) {
  return hankel_min_eigenvalue(moments, max_even_degree) >= -tolerance;
}

bool moment_validity(const MomentSeries& m, int max_even_degree) {
  if (max_even_degree > m.max_degree) throw DomainError("moment_validity: degree exceeds max_degree");
  std::vector<double> p;
  for (int n = 1; n <= max_even_degree; ++n) {
    const auto v = m.moment(n);
    if (!v) throw DomainError("moment_validity: moment p(" + std::to_string(n) + ") is missing");
    p.push_back(*v);
  }
  return moment_validity(p, max_even_degree);
}

std::vector<TimeWindow> rolling_windows(const Ledger& ledger, double delta, double stride) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("window width must be positive");
  if (!(stride > 0.0) || !std::isfinite(stride)) throw ConfigError("stride must be positive");
  std::vector<TimeWindow> windows;
  if (ledger.empty()) return windows;
  const double t0 = ledger.time_min();
  const double t1 = ledger.time_max();
  for (std::size_t k = 0;; ++k) {
    // The first window must contain the earliest trade exactly.
    const TimeWindow w =
        k == 0 ? window_starting_at(t0, delta) : TimeWindow{t0 + delta / 2 + static_cast<double>(k) * stride, delta};
    if (w.lower() > t1) break;
    windows.push_back(w);
  }
  return windows;
}

std::vector<MomentSeries> moment_series(const Ledger& ledger, double delta, double stride, int max_degree,
                                        int degree_cap) {
  check_degree(max_degree);
  if (max_degree > degree_cap) {
    throw ConfigError("degree " + std::to_string(max_degree) + " exceeds the cap of " + std::to_string(degree_cap));
  }
  std::vector<MomentSeries> out;
  for (const auto& w : rolling_windows(ledger, delta, stride)) {
    out.push_back(compute_moments(window_select(ledger, w), w, max_degree));
  }
  return out;
}

std::string moments_csv(std::span<const MomentSeries> series) {
  std::string out = "t,n,C_n,U_n,p_n\n";
  for (const auto& s : series) {
    for (int n = 1; n <= s.max_degree; ++n) {
      const auto& d = s.sum(n);
      out += csv::format(s.window.center) + ',' + std::to_string(n) + ',' + csv::format(d.value_sum) + ',' +
             csv::format(d.volume_sum) + ',' + csv::format(s.moment(n)) + '\n';
    }
  }
  return out;
}

std::string volatility_csv(std::span<const MomentSeries> series) {
  std::string out = "t,p1,p2,sigma2,valid\n";
  for (const auto& s : series) {
    out += csv::format(s.window.center);
    const auto r = volatility(s);
    if (r) {
      out += ',' + csv::format(r->p1) + ',' + csv::format(r->p2) + ',' + csv::format(r->sigma2) + ',' +
             (r->measure_valid ? "true" : "false") + '\n';
    } else {
      out += ",NA,NA,NA,NA\n";
    }
  }
  return out;
}

}  // namespace mmlab
