#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace qcl::harness {

inline constexpr double kZ95 = 1.96;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double halfwidth() const { return (hi - lo) / 2.0; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - spread), std::min(1.0, centre + spread)};
}

// Normal-approximation interval, falling back to Wilson when p*trials < 10.
inline Interval proportion_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  if (p * n < 10.0) return wilson_interval(successes, trials, z);
  const double hw = z * std::sqrt(p * (1.0 - p) / n);
  return {p - hw, p + hw};
}

// 1.96 * sqrt(p(1-p)(1/t0 + 1/t1)) with p the pooled acceptance rate.
inline double two_sample_halfwidth(std::uint64_t accept_a, std::uint64_t trials_a, std::uint64_t accept_b,
                                   std::uint64_t trials_b, double z = kZ95) {
  if (trials_a == 0 || trials_b == 0) return 1.0;
  const double pooled = static_cast<double>(accept_a + accept_b) / static_cast<double>(trials_a + trials_b);
  return z * std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(trials_a) + 1.0 / static_cast<double>(trials_b)));
}

inline double standard_error(double p, std::uint64_t trials) {
  return trials == 0 ? 1.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// Weighted least squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::vector<double> residuals;
  std::size_t points = 0;
  bool defined = false;  // false with fewer than two distinct x values
};

// Weights are inverse variances of the y values, so slope_se is the model
// standard error of the slope.
inline LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  LineFit fit;
  fit.points = x.size();
  if (x.size() < 2) return fit;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  const double spread = std::max(std::abs(x.front()), 1.0) * 1e-12;
  if (sxx <= spread * spread * sw) return fit;
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.slope_se = std::sqrt(1.0 / sxx);
  for (std::size_t i = 0; i < x.size(); ++i) fit.residuals.push_back(y[i] - (fit.intercept + fit.slope * x[i]));
  return fit;
}

}  // namespace qcl::harness
