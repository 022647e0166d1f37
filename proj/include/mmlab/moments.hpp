#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmlab/ledger.hpp"

namespace mmlab {

inline constexpr int kDefaultDegreeCap = 12;
inline constexpr double kHankelTolerance = 1e-9;

// C(n;t) and U(n;t): sums of the n-th powers of trade values and volumes.
struct DegreeSums {
  double value_sum = 0.0;
  double volume_sum = 0.0;

  bool operator==(const DegreeSums&) const = default;
};

// Degree sums and price moments p(n;t) = C(n;t)/U(n;t) for n = 1..max_degree
// over one averaging window. Moments are std::nullopt for an empty window.
struct MomentSeries {
  TimeWindow window;
  int max_degree = 0;
  std::size_t trade_count = 0;
  std::vector<DegreeSums> sums;                  // index n-1
  std::vector<std::optional<double>> moments;    // index n-1

  const DegreeSums& sum(int n) const { return sums.at(static_cast<std::size_t>(n - 1)); }
  std::optional<double> moment(int n) const { return moments.at(static_cast<std::size_t>(n - 1)); }

  bool operator==(const MomentSeries&) const = default;
};

// sigma2 = p2 - p1^2 is reported as computed, never clamped.
struct VolatilityReading {
  TimeWindow window;
  double p1 = 0.0;
  double p2 = 0.0;
  double sigma2 = 0.0;
  bool measure_valid = false;
};

DegreeSums aggregate_degree(std::span<const TradeRecord> trades, int n);

// N-VWAP; n = 1 is the ordinary VWAP.
std::optional<double> price_moment(std::span<const TradeRecord> trades, int n);

// Arithmetic mean of per-trade prices, every trade weighted 1/N.
std::optional<double> frequency_mean(std::span<const TradeRecord> trades);

// All degrees 1..max_degree in one pass. `window` is recorded, not applied.
MomentSeries compute_moments(std::span<const TradeRecord> trades, const TimeWindow& window, int max_degree);

std::optional<VolatilityReading> volatility(std::span<const TradeRecord> trades, const TimeWindow& window = {});
std::optional<VolatilityReading> volatility(const MomentSeries& moments);

// Truncated moment series 1 + sum_{n=1..terms} (i^n / n!) p(n;t) x^n.
// Throws DomainError when terms exceeds max_degree or a needed moment is missing.
std::complex<double> char_function(const MomentSeries& moments, double x, int terms);

// True iff the (r+1)x(r+1) Hankel matrix H[a][b] = p(a+b), p(0) = 1, built
// from p(1..2r), has no eigenvalue below -tolerance.
bool moment_validity(std::span<const double> moments, int max_even_degree,
                     double tolerance = kHankelTolerance);
bool moment_validity(const MomentSeries& moments, int max_even_degree);

// Smallest Hankel eigenvalue; exposed for diagnostics and tests.
double hankel_min_eigenvalue(std::span<const double> moments, int max_even_degree);

// Window centres t_min + delta/2 + k*stride for k = 0, 1, ... while the
// window's lower edge does not pass t_max. Empty ledger -> no windows.
std::vector<TimeWindow> rolling_windows(const Ledger& ledger, double delta, double stride);

// One MomentSeries per rolling window; each equals compute_moments on
// window_select of the same window. Throws ConfigError if max_degree > degree_cap.
std::vector<MomentSeries> moment_series(const Ledger& ledger, double delta, double stride, int max_degree,
                                        int degree_cap = kDefaultDegreeCap);

// "t,n,C_n,U_n,p_n" rows, one per window and degree.
std::string moments_csv(std::span<const MomentSeries> series);
// "t,p1,p2,sigma2,valid" rows; empty windows print NA.
std::string volatility_csv(std::span<const MomentSeries> series);

}  // namespace mmlab
