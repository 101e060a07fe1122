#include "ttp/mmd.hpp"

#include <algorithm>
#include <string>

#include "detail/linalg.hpp"
#include "ttp/error.hpp"

namespace ttp {

namespace {

// Multiplicities of an index list over the contiguous range it touches.
struct Counts {
  std::size_t offset = 0;
  std::vector<double> weights;
  double total = 0.0;
};

Counts counts_of(const KernelMatrix& k, const IndexSet& set, const char* what) {
  if (set.empty()) fail(ErrorKind::InvalidArgument, std::string(what) + " index set is empty");
  const auto [lo, hi] = std::minmax_element(set.indices.begin(), set.indices.end());
  if (*hi >= k.size()) {
    fail(ErrorKind::IndexOutOfRange, std::string(what) + " index " + std::to_string(*hi) +
                                         " outside a kernel matrix of size " +
                                         std::to_string(k.size()));
  }
  Counts c;
  c.offset = *lo;
  c.weights.assign(*hi - *lo + 1, 0.0);
  for (std::size_t i : set.indices) c.weights[i - c.offset] += 1.0;
  c.total = static_cast<double>(set.size());
  return c;
}

double cross(const KernelMatrix& k, const Counts& a, const Counts& b) {
  return detail::bilinear(k, a.offset, a.weights, b.offset, b.weights);
}

double diagonal(const KernelMatrix& k, const Counts& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    if (a.weights[i] != 0.0) s += a.weights[i] * k(a.offset + i, a.offset + i);
  }
  return s;
}

// Within-sample term of the estimator: (1/n^2) S for V, (S - diag)/(n(n-1)) for U.
double within(const KernelMatrix& k, const Counts& a, double self, Estimator estimator) {
  const double n = a.total;
  if (estimator == Estimator::VStat) return self / (n * n);
  return (self - diagonal(k, a)) / (n * (n - 1.0));
}

void require_u_sizes(const IndexSet& a, const IndexSet& b) {
  if (a.size() < 2 || b.size() < 2) {
    fail(ErrorKind::SampleTooSmall, "U-statistic needs at least two points per sample");
  }
}

}  // namespace

IndexSet IndexSet::range(std::size_t begin, std::size_t count) {
  IndexSet set;
  set.indices.resize(count);
  for (std::size_t i = 0; i < count; ++i) set.indices[i] = begin + i;
  return set;
}

IndexSet IndexSet::concat(const IndexSet& a, const IndexSet& b) {
  IndexSet set;
  set.indices.reserve(a.size() + b.size());
  set.indices.insert(set.indices.end(), a.indices.begin(), a.indices.end());
  set.indices.insert(set.indices.end(), b.indices.begin(), b.indices.end());
  return set;
}

MMDValue mmd2_v(const KernelMatrix& k, const IndexSet& a, const IndexSet& b) {
  const Counts ca = counts_of(k, a, "first");
  const Counts cb = counts_of(k, b, "second");
  // One signed weight vector w = ca/|a| - cb/|b| over the union range, so that
  // D^2 = w' K w and swapping a and b only flips the sign of w.
  const std::size_t lo = std::min(ca.offset, cb.offset);
  const std::size_t hi = std::max(ca.offset + ca.weights.size(), cb.offset + cb.weights.size());
  std::vector<double> wa(hi - lo, 0.0);
  std::vector<double> wb(hi - lo, 0.0);
  for (std::size_t i = 0; i < ca.weights.size(); ++i) wa[ca.offset - lo + i] = ca.weights[i] / ca.total;
  for (std::size_t i = 0; i < cb.weights.size(); ++i) wb[cb.offset - lo + i] = cb.weights[i] / cb.total;
  std::vector<double> w(hi - lo);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = wa[i] - wb[i];
  return {detail::bilinear(k, lo, w, lo, w), Estimator::VStat};
}

MMDValue mmd2_v(const GramCache& gram, const IndexSet& a, const IndexSet& b) {
  return mmd2_v(gram.pooled(), a, b);
}

MMDValue mmd2_u(const KernelMatrix& k, const IndexSet& a, const IndexSet& b) {
  require_u_sizes(a, b);
  const Counts ca = counts_of(k, a, "first");
  const Counts cb = counts_of(k, b, "second");
  const double value = within(k, ca, cross(k, ca, ca), Estimator::UStat) +
                       within(k, cb, cross(k, cb, cb), Estimator::UStat) -
                       2.0 * cross(k, ca, cb) / (ca.total * cb.total);
  return {value, Estimator::UStat};
}

MMDValue mmd2_u(const GramCache& gram, const IndexSet& a, const IndexSet& b) {
  return mmd2_u(gram.pooled(), a, b);
}

MMDValue mmd2(const KernelMatrix& k, const IndexSet& a, const IndexSet& b, Estimator estimator) {
  return estimator == Estimator::VStat ? mmd2_v(k, a, b) : mmd2_u(k, a, b);
}

MMDValue mmd2_v_fused(const GramCache& gram, const IndexSet& current, const IndexSet& historical,
                      const IndexSet& other) {
  return mmd2_v(gram.pooled(), IndexSet::concat(current, historical), other);
}

MMDValue mmd2_fused(const KernelMatrix& k, const IndexSet& current, const IndexSet& historical,
                    const IndexSet& other, Estimator estimator) {
  return mmd2(k, IndexSet::concat(current, historical), other, estimator);
}

double fused_contrast(const KernelMatrix& k, const IndexSet& current, const IndexSet& historical,
                      const IndexSet& treatment, Estimator estimator) {
  if (estimator == Estimator::UStat) {
    require_u_sizes(current, treatment);
  }
  const Counts cc = counts_of(k, current, "current");
  const Counts ch = counts_of(k, historical, "historical");
  const Counts ct = counts_of(k, treatment, "treatment");
  const double m = cc.total;
  const double n = ct.total;
  const double fused = m + ch.total;

  // The fused-fused term is common to both distances and cancels.
  const double c_cc = cross(k, cc, cc);
  const double c_tt = cross(k, ct, ct);
  const double c_tf = cross(k, ct, cc) + cross(k, ct, ch);
  const double c_cf = c_cc + cross(k, cc, ch);
  const double contrast = within(k, ct, c_tt, estimator) - within(k, cc, c_cc, estimator) -
                          2.0 * (c_tf / n - c_cf / m) / fused;
  return std::sqrt(n) * contrast;
}

}  // namespace ttp
