#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ttp {

enum class KernelFamily { RBF, Linear, IMQ, LinearPlusRBF };
enum class BandwidthPolicy { MedianHeuristic, Fixed };
enum class Arm { Current, Historical, Treatment };

std::string_view to_string(KernelFamily family);
std::string_view to_string(Arm arm);
std::optional<KernelFamily> parse_kernel_family(std::string_view text);
std::optional<Arm> parse_arm(std::string_view text);

/// Kernel family plus bandwidth policy.
///
/// RBF:            exp(-|x-y|^2 / (2 zeta))
/// IMQ:            (1 + |x-y|^2 / zeta)^(-1/2)
/// Linear:         <x, y>
/// LinearPlusRBF:  <x, y> + epsilon * exp(-|x-y|^2 / (2 zeta))
///
/// zeta is the resolved bandwidth: either the fixed value or the median of the
/// pooled pairwise squared distances.
struct KernelSpec {
  KernelFamily family = KernelFamily::RBF;
  BandwidthPolicy bandwidth_policy = BandwidthPolicy::MedianHeuristic;
  double fixed_bandwidth = 1.0;
  double epsilon = 1.0;

  static KernelSpec rbf_median();
  static KernelSpec rbf(double bandwidth);
  static KernelSpec linear();
  static KernelSpec imq_median();
  static KernelSpec linear_plus_rbf(double epsilon);

  /// Informational only; never used to branch.
  bool characteristic() const noexcept;
  bool uses_bandwidth() const noexcept;
  void validate() const;

  bool operator==(const KernelSpec&) const = default;
};

/// Observations of one arm, stored row-major as size() x dim() doubles.
class Sample {
 public:
  Sample(Arm arm, std::size_t dim, std::vector<double> flat);

  static Sample univariate(Arm arm, std::vector<double> values);
  static Sample from_rows(Arm arm, const std::vector<std::vector<double>>& rows);

  Arm arm() const noexcept { return arm_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return flat_.size() / dim_; }
  std::span<const double> point(std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  std::span<const double> flat() const noexcept { return flat_; }

 private:
  Arm arm_;
  std::size_t dim_;
  std::vector<double> flat_;
};

/// Dense symmetric matrix, row-major.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  const double* row_ptr(std::size_t i) const noexcept { return values_.data() + i * n_; }
  std::span<const double> row(std::size_t i) const noexcept { return {row_ptr(i), n_}; }

  /// Writes (i, j) and (j, i).
  void set_symmetric(std::size_t i, std::size_t j, double value) noexcept {
    values_[i * n_ + j] = value;
    values_[j * n_ + i] = value;
  }

  /// Principal submatrix on the given indices, in the given order.
  KernelMatrix extract(std::span<const std::size_t> indices) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Index layout of the pooled sample: current, then historical, then treatment.
struct Partition {
  std::size_t current = 0;
  std::size_t historical = 0;
  std::size_t treatment = 0;

  std::size_t current_begin() const noexcept { return 0; }
  std::size_t historical_begin() const noexcept { return current; }
  std::size_t treatment_begin() const noexcept { return current + historical; }
  std::size_t total() const noexcept { return current + historical + treatment; }

  bool operator==(const Partition&) const = default;
};

/// Precomputed kernel matrices for one dataset.
///
/// pooled():  all three arms (current | historical | treatment) with the
///            bandwidth resolved on the three-arm pool.
/// two_arm(): current | treatment only, with the bandwidth resolved on that
///            two-arm pool. Used by the no-merge causality branch.
///
/// Immutable after construction; safe to share between threads.
class GramCache {
 public:
  GramCache(KernelSpec spec, Partition partition, KernelMatrix pooled,
            std::optional<double> pooled_bandwidth, KernelMatrix two_arm,
            std::optional<double> two_arm_bandwidth);

  const KernelSpec& kernel() const noexcept { return spec_; }
  const Partition& partition() const noexcept { return partition_; }
  const KernelMatrix& pooled() const noexcept { return pooled_; }
  const KernelMatrix& two_arm() const noexcept { return two_arm_; }
  std::size_t size() const noexcept { return pooled_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return pooled_(i, j); }

  /// Empty for kernels without a bandwidth (Linear).
  std::optional<double> pooled_bandwidth() const noexcept { return pooled_bandwidth_; }
  std::optional<double> two_arm_bandwidth() const noexcept { return two_arm_bandwidth_; }

  /// The spec with the bandwidth pinned to the value actually used, for replay.
  KernelSpec resolved_kernel(bool two_arm) const;

 private:
  KernelSpec spec_;
  Partition partition_;
  KernelMatrix pooled_;
  std::optional<double> pooled_bandwidth_;
  KernelMatrix two_arm_;
  std::optional<double> two_arm_bandwidth_;
};

/// Median over i < j of |v_i - v_j|^2; even counts average the two central values.
double median_pairwise_sq_distance(std::span<const double> flat, std::size_t dim);

double resolve_bandwidth(const KernelSpec& spec, std::span<const double> flat, std::size_t dim);
double resolve_bandwidth(const KernelSpec& spec, std::span<const Sample* const> pooled);

double eval_kernel(const KernelSpec& spec, double bandwidth, std::span<const double> x,
                   std::span<const double> y);

GramCache build_gram(const KernelSpec& spec, const Sample& current, const Sample& historical,
                     const Sample& treatment);

}  // namespace ttp
