#pragma once

#include <span>

#include "eprnet/allocation.hpp"

namespace eprnet::metrics {

struct MetricsReport {
  double min_rate = 0.0;        // pairs/s
  double median_rate = 0.0;     // pairs/s
  double normalized_min = 0.0;  // vs the round-robin baseline
  double jain = 0.0;            // in [1/kappa, 1]
};

// (sum x)^2 / (r sum x^2). Requires at least one strictly positive value.
double jain_index(std::span<const double> values);

// Median uses the mean of the two central order statistics for even
// counts. Throws InvariantError when the baseline minimum is zero.
MetricsReport report(const alloc::Allocation& allocation,
                     const alloc::Allocation& baseline);

// Jain index over the per-source max-min rates; 1 means placement does
// not matter, 1/n means only one viable placement.
double source_importance(std::span<const double> maxmin_by_source);

double median(std::span<const double> values);

}  // namespace eprnet::metrics
