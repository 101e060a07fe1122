#include "ttp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttp/error.hpp"

namespace ttp {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::RBF: return "rbf";
    case KernelFamily::Linear: return "linear";
    case KernelFamily::IMQ: return "imq";
    case KernelFamily::LinearPlusRBF: return "linear_rbf";
  }
  return "unknown";
}

std::string_view to_string(Arm arm) {
  switch (arm) {
    case Arm::Current: return "current";
    case Arm::Historical: return "historical";
    case Arm::Treatment: return "treatment";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view text) {
  for (auto family : {KernelFamily::RBF, KernelFamily::Linear, KernelFamily::IMQ,
                      KernelFamily::LinearPlusRBF}) {
    if (text == to_string(family)) return family;
  }
  return std::nullopt;
}

std::optional<Arm> parse_arm(std::string_view text) {
  for (auto arm : {Arm::Current, Arm::Historical, Arm::Treatment}) {
    if (text == to_string(arm)) return arm;
  }
  return std::nullopt;
}

KernelSpec KernelSpec::rbf_median() { return {}; }

KernelSpec KernelSpec::rbf(double bandwidth) {
  KernelSpec spec;
  spec.bandwidth_policy = BandwidthPolicy::Fixed;
  spec.fixed_bandwidth = bandwidth;
  return spec;
}

KernelSpec KernelSpec::linear() {
  KernelSpec spec;
  spec.family = KernelFamily::Linear;
  return spec;
}

KernelSpec KernelSpec::imq_median() {
  KernelSpec spec;
  spec.family = KernelFamily::IMQ;
  return spec;
}

KernelSpec KernelSpec::linear_plus_rbf(double epsilon) {
  KernelSpec spec;
  spec.family = KernelFamily::LinearPlusRBF;
  spec.epsilon = epsilon;
  return spec;
}

bool KernelSpec::characteristic() const noexcept {
  return family != KernelFamily::Linear;
}

bool KernelSpec::uses_bandwidth() const noexcept { return family != KernelFamily::Linear; }

void KernelSpec::validate() const {
  if (bandwidth_policy == BandwidthPolicy::Fixed &&
      !(fixed_bandwidth > 0.0 && std::isfinite(fixed_bandwidth))) {
    fail(ErrorKind::InvalidArgument, "fixed bandwidth must be a positive finite number");
  }
  if (family == KernelFamily::LinearPlusRBF && !(epsilon > 0.0 && std::isfinite(epsilon))) {
    fail(ErrorKind::InvalidArgument, "linear_rbf kernel needs epsilon > 0");
  }
}

Sample::Sample(Arm arm, std::size_t dim, std::vector<double> flat)
    : arm_(arm), dim_(dim), flat_(std::move(flat)) {
  if (dim_ == 0) fail(ErrorKind::InvalidArgument, "sample dimension must be positive");
  if (flat_.size() % dim_ != 0) {
    fail(ErrorKind::DimensionMismatch, "sample storage is not a multiple of its dimension");
  }
}

Sample Sample::univariate(Arm arm, std::vector<double> values) {
  return Sample(arm, 1, std::move(values));
}

Sample Sample::from_rows(Arm arm, const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) fail(ErrorKind::InvalidArgument, "sample has no rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) fail(ErrorKind::DimensionMismatch, "rows of differing dimension");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Sample(arm, dim, std::move(flat));
}

KernelMatrix KernelMatrix::extract(std::span<const std::size_t> indices) const {
  KernelMatrix out(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const double* src = row_ptr(indices[a]);
    double* dst = out.values_.data() + a * indices.size();
    for (std::size_t b = 0; b < indices.size(); ++b) dst[b] = src[indices[b]];
  }
  return out;
}

GramCache::GramCache(KernelSpec spec, Partition partition, KernelMatrix pooled,
                     std::optional<double> pooled_bandwidth, KernelMatrix two_arm,
                     std::optional<double> two_arm_bandwidth)
    : spec_(spec),
      partition_(partition),
      pooled_(std::move(pooled)),
      pooled_bandwidth_(pooled_bandwidth),
      two_arm_(std::move(two_arm)),
      two_arm_bandwidth_(two_arm_bandwidth) {
  if (pooled_.size() != partition_.total() ||
      two_arm_.size() != partition_.current + partition_.treatment) {
    fail(ErrorKind::InvalidArgument, "Gram matrix sizes do not match the partition");
  }
}

KernelSpec GramCache::resolved_kernel(bool two_arm) const {
  KernelSpec out = spec_;
  const auto bandwidth = two_arm ? two_arm_bandwidth_ : pooled_bandwidth_;
  if (bandwidth) {
    out.bandwidth_policy = BandwidthPolicy::Fixed;
    out.fixed_bandwidth = *bandwidth;
  }
  return out;
}

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    sum += diff * diff;
  }
  return sum;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += x[k] * y[k];
  return sum;
}

// Kernel value without the dimension check, for the Gram loops.
double kernel_value(const KernelSpec& spec, double bandwidth, std::span<const double> x,
                    std::span<const double> y) {
  switch (spec.family) {
    case KernelFamily::RBF:
      return std::exp(-squared_distance(x, y) / (2.0 * bandwidth));
    case KernelFamily::Linear:
      return dot(x, y);
    case KernelFamily::IMQ:
      return 1.0 / std::sqrt(1.0 + squared_distance(x, y) / bandwidth);
    case KernelFamily::LinearPlusRBF:
      return dot(x, y) + spec.epsilon * std::exp(-squared_distance(x, y) / (2.0 * bandwidth));
  }
  return 0.0;
}

std::vector<double> concat_flat(std::span<const Sample* const> samples, std::size_t& dim) {
  std::vector<double> flat;
  dim = 0;
  for (const Sample* s : samples) {
    if (dim == 0) {
      dim = s->dim();
    } else if (s->dim() != dim) {
      fail(ErrorKind::DimensionMismatch, "samples have dimensions " + std::to_string(dim) +
                                             " and " + std::to_string(s->dim()));
    }
    flat.insert(flat.end(), s->flat().begin(), s->flat().end());
  }
  return flat;
}

KernelMatrix gram_of(const KernelSpec& spec, double bandwidth, std::span<const double> flat,
                     std::size_t dim) {
  const std::size_t n = flat.size() / dim;
  KernelMatrix k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> xi = flat.subspan(i * dim, dim);
    for (std::size_t j = i; j < n; ++j) {
      k.set_symmetric(i, j, kernel_value(spec, bandwidth, xi, flat.subspan(j * dim, dim)));
    }
  }
  return k;
}

}  // namespace

double median_pairwise_sq_distance(std::span<const double> flat, std::size_t dim) {
  if (dim == 0) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  const std::size_t n = flat.size() / dim;
  if (n < 2) fail(ErrorKind::DegenerateSample, "median heuristic needs at least two points");
  std::vector<double> distances;
  distances.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      distances.push_back(squared_distance(flat.subspan(i * dim, dim), flat.subspan(j * dim, dim)));
    }
  }
  const std::size_t count = distances.size();
  const auto mid = distances.begin() + static_cast<std::ptrdiff_t>(count / 2);
  std::nth_element(distances.begin(), mid, distances.end());
  const double upper = *mid;
  if (count % 2 == 1) return upper;
  const double lower = *std::max_element(distances.begin(), mid);
  return 0.5 * (lower + upper);
}

double resolve_bandwidth(const KernelSpec& spec, std::span<const double> flat, std::size_t dim) {
  spec.validate();
  if (spec.bandwidth_policy == BandwidthPolicy::Fixed) return spec.fixed_bandwidth;
  const double median = median_pairwise_sq_distance(flat, dim);
  if (!(median > 0.0)) {
    fail(ErrorKind::DegenerateSample,
         "median pairwise squared distance is zero (identical pooled points); "
         "use a fixed bandwidth or check the input data");
  }
  return median;
}

double resolve_bandwidth(const KernelSpec& spec, std::span<const Sample* const> pooled) {
  std::size_t dim = 0;
  const std::vector<double> flat = concat_flat(pooled, dim);
  return resolve_bandwidth(spec, flat, dim);
}

double eval_kernel(const KernelSpec& spec, double bandwidth, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::DimensionMismatch,
         "kernel arguments of size " + std::to_string(x.size()) + " and " +
             std::to_string(y.size()));
  }
  return kernel_value(spec, bandwidth, x, y);
}

GramCache build_gram(const KernelSpec& spec, const Sample& current, const Sample& historical,
                     const Sample& treatment) {
  spec.validate();
  if (current.size() == 0 || historical.size() == 0 || treatment.size() == 0) {
    fail(ErrorKind::SampleTooSmall, "every arm needs at least one observation");
  }
  const Sample* three[] = {&current, &historical, &treatment};
  const Sample* two[] = {&current, &treatment};
  std::size_t dim = 0;
  const std::vector<double> pooled_flat = concat_flat(three, dim);
  const std::vector<double> two_arm_flat = concat_flat(two, dim);

  const Partition partition{current.size(), historical.size(), treatment.size()};

  std::optional<double> pooled_bandwidth;
  std::optional<double> two_arm_bandwidth;
  if (spec.uses_bandwidth()) {
    pooled_bandwidth = resolve_bandwidth(spec, pooled_flat, dim);
    two_arm_bandwidth = resolve_bandwidth(spec, two_arm_flat, dim);
  }

  KernelMatrix pooled = gram_of(spec, pooled_bandwidth.value_or(1.0), pooled_flat, dim);

  KernelMatrix two_arm;
  if (pooled_bandwidth == two_arm_bandwidth) {
    std::vector<std::size_t> indices;
    indices.reserve(partition.current + partition.treatment);
    for (std::size_t i = 0; i < partition.current; ++i) indices.push_back(i);
    for (std::size_t i = 0; i < partition.treatment; ++i) {
      indices.push_back(partition.treatment_begin() + i);
    }
    two_arm = pooled.extract(indices);
  } else {
    two_arm = gram_of(spec, *two_arm_bandwidth, two_arm_flat, dim);
  }

  return GramCache(spec, partition, std::move(pooled), pooled_bandwidth, std::move(two_arm),
                   two_arm_bandwidth);
}

}  // namespace ttp
