#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ttp {

/// Smallest realized value q with #{v <= q} / |values| >= level.
/// `level` is the coverage 1 - alpha, in (0, 1].
double inf_quantile(std::span<const double> values, double level);

/// Same, on data already sorted ascending.
double inf_quantile_sorted(std::span<const double> sorted, double level);

/// 1-based order-statistic rank used by inf_quantile.
std::size_t inf_quantile_rank(std::size_t count, double level);

/// sup_x |F_a(x) - F_b(x)| between two empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// sup_x |F_emp(x) - cdf(x)| for a continuous reference CDF.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Fraction of `values` that are <= x.
double empirical_cdf(std::span<const double> sorted, double x);

double normal_cdf(double x);
double normal_quantile(double p);

/// sqrt(p (1 - p) / n).
double binomial_stderr(double p, std::size_t n);

double mean(std::span<const double> values);
double sample_variance(std::span<const double> values);

}  // namespace ttp
