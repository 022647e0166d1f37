#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mmlab/error.hpp"
#include "mmlab/perturbation.hpp"

namespace mmlab {

namespace {

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

struct Crossing {
  double time;
  std::size_t before;  // last sample index before the crossing
  std::size_t after;   // first sample index after it
};

std::vector<Crossing> zero_crossings(std::span<const double> s, double dt) {
  std::vector<Crossing> out;
  std::size_t prev = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) continue;
    if (prev < s.size() && (s[prev] > 0.0) != (s[i] > 0.0)) {
      const double frac = s[prev] / (s[prev] - s[i]);
      const double t = (static_cast<double>(prev) + frac * static_cast<double>(i - prev)) * dt;
      out.push_back({t, prev, i});
    }
    prev = i;
  }
  return out;
}

// Peak of |s| within [lo, hi], refined by a parabola through its neighbours.
std::pair<double, double> refined_peak(std::span<const double> s, std::size_t lo, std::size_t hi, double dt) {
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (std::abs(s[i]) > std::abs(s[best])) best = i;
  }
  double t = static_cast<double>(best) * dt;
  double peak = std::abs(s[best]);
  if (best > 0 && best + 1 < s.size()) {
    const double a = std::abs(s[best - 1]), b = std::abs(s[best]), c = std::abs(s[best + 1]);
    const double curv = a - 2.0 * b + c;
    if (curv < 0.0) {
      const double offset = 0.5 * (a - c) / curv;
      if (std::abs(offset) <= 1.0) {
        t += offset * dt;
        peak = b - 0.25 * (a - c) * offset;
      }
    }
  }
  return {t, peak};
}

}  // namespace

OscillationFit fit_oscillation(std::span<const double> series, double dt) {
  if (!(dt > 0.0)) throw ConfigError("sampling step must be positive");
  OscillationFit fit;
  if (series.size() < 2) return fit;
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  if (*lo_it == *hi_it) return fit;

  const auto crossings = zero_crossings(series, dt);
  if (crossings.size() >= 2) {
    const double span_t = crossings.back().time - crossings.front().time;
    const double spacing = span_t / static_cast<double>(crossings.size() - 1);
    fit.frequency = std::numbers::pi / spacing;

    std::vector<double> times, logs;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
      const auto [t, peak] = refined_peak(series, crossings[c].after, crossings[c + 1].before, dt);
      if (peak > 0.0) {
        times.push_back(t);
        logs.push_back(std::log(peak));
      }
    }
    if (times.size() >= 2) fit.decay_rate = -slope(times, logs);
    return fit;
  }

  std::vector<double> times, logs;
  for (std::size_t i = series.size() / 2; i < series.size(); ++i) {
    if (series[i] == 0.0) continue;
    times.push_back(static_cast<double>(i) * dt);
    logs.push_back(std::log(std::abs(series[i])));
  }
  if (times.size() >= 2) fit.decay_rate = -slope(times, logs);
  return fit;
}

}  // namespace mmlab
