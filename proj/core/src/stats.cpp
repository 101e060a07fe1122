#include "ttp/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "ttp/error.hpp"

namespace ttp {

std::size_t inf_quantile_rank(std::size_t count, double level) {
  if (count == 0) fail(ErrorKind::InvalidArgument, "quantile of an empty reference set");
  if (!(level > 0.0 && level <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "quantile level must lie in (0, 1]");
  }
  // level * count is an integer up to representation error for the usual
  // alpha values (0.05 * 1000 and friends); absorb that error before ceil.
  const double target = level * static_cast<double>(count);
  auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  return std::clamp<std::size_t>(rank, 1, count);
}

double inf_quantile_sorted(std::span<const double> sorted, double level) {
  return sorted[inf_quantile_rank(sorted.size(), level) - 1];
}

double inf_quantile(std::span<const double> values, double level) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return inf_quantile_sorted(sorted, level);
}

double empirical_cdf(std::span<const double> sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidArgument, "KS distance of an empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x = 0.0;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) fail(ErrorKind::InvalidArgument, "KS distance of an empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double best = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    const double x = s[i];
    const double before = static_cast<double>(i) / n;
    while (i < s.size() && s[i] == x) ++i;
    const double after = static_cast<double>(i) / n;
    const double f = cdf(x);
    best = std::max({best, std::abs(f - before), std::abs(after - f)});
  }
  return best;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

double binomial_stderr(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - mu) * (v - mu);
  return s / static_cast<double>(values.size() - 1);
}

}  // namespace ttp
