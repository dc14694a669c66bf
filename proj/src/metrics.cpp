#include "eprnet/metrics.hpp"

#include <algorithm>
#include <vector>

#include "eprnet/errors.hpp"

namespace eprnet::metrics {

double jain_index(std::span<const double> values) {
  if (values.empty()) throw InvariantError("jain_index: empty input");
  double max_v = 0.0;
  for (double v : values) {
    if (v < 0.0) throw InvariantError("jain_index: negative value");
    max_v = std::max(max_v, v);
  }
  if (!(max_v > 0.0)) {
    throw InvariantError("jain_index: all values are zero");
  }
  // Normalizing by the maximum keeps the all-equal case exactly 1.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values) {
    const double x = v / max_v;
    sum += x;
    sum_sq += x * x;
  }
  return sum * sum / (static_cast<double>(values.size()) * sum_sq);
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvariantError("median: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

MetricsReport report(const alloc::Allocation& allocation,
                     const alloc::Allocation& baseline) {
  if (allocation.kappa != baseline.kappa || allocation.m != baseline.m) {
    throw InvariantError("report: allocations cover different instances");
  }
  const auto& received = allocation.received;
  const double base_min =
      *std::min_element(baseline.received.begin(), baseline.received.end());
  if (!(base_min > 0.0)) {
    throw InvariantError("report: baseline minimum is zero");
  }
  MetricsReport r;
  r.min_rate = *std::min_element(received.begin(), received.end());
  r.median_rate = median(received);
  r.normalized_min = r.min_rate / base_min;
  r.jain = jain_index(received);
  return r;
}

double source_importance(std::span<const double> maxmin_by_source) {
  if (maxmin_by_source.size() < 2) {
    throw InvariantError("source_importance: need at least 2 sources");
  }
  return jain_index(maxmin_by_source);
}

}  // namespace eprnet::metrics
