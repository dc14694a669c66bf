#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eprnet::plot {

struct Series {
  std::string label;
  std::vector<double> values;  // one per group / x position; NaN = missing
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  // Lower bound of the y axis; also drawn as an annotated floor line when
  // floor_annotation is set.
  double y_min = 0.0;
  std::string floor_annotation;
  int width = 960;
  int height = 540;
};

// Grouped bar chart: one cluster per group, one bar per series. Every bar
// carries its value as a text label, serialized exactly like CSV values.
void grouped_bars(std::ostream& os, const std::vector<std::string>& groups,
                  const std::vector<Series>& series, const ChartOptions& opts);

// Line chart over shared x positions.
void lines(std::ostream& os, const std::vector<double>& xs,
           const std::vector<Series>& series, const ChartOptions& opts);

}  // namespace eprnet::plot
