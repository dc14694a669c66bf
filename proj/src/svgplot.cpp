#include "eprnet/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"

namespace eprnet::plot {

namespace {

const char* kPalette[] = {"#4269d0", "#efb118", "#ff725c", "#6cc5b0",
                          "#3ca951", "#ff8ab7", "#a463f2", "#97bbf5"};

std::string color(std::size_t i) {
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

struct Frame {
  double x0, y0, x1, y1;  // plot area in SVG coordinates
  double vmin, vmax;      // value range mapped onto the y axis

  double y(double v) const {
    const double t = (v - vmin) / (vmax - vmin);
    return y1 - t * (y1 - y0);
  }
};

void open_svg(std::ostream& os, const ChartOptions& opts) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
     << "\" height=\"" << opts.height << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opts.width / 2
     << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">" << opts.title
     << "</text>\n";
}

void axes(std::ostream& os, const Frame& f, const ChartOptions& opts) {
  os << "<line x1=\"" << f.x0 << "\" y1=\"" << f.y1 << "\" x2=\"" << f.x1
     << "\" y2=\"" << f.y1 << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << f.x0 << "\" y1=\"" << f.y0 << "\" x2=\"" << f.x0
     << "\" y2=\"" << f.y1 << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (f.x0 + f.x1) / 2 << "\" y=\"" << f.y1 + 36
     << "\" text-anchor=\"middle\">" << opts.x_label << "</text>\n";
  os << "<text transform=\"translate(16," << (f.y0 + f.y1) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << opts.y_label
     << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = f.vmin + (f.vmax - f.vmin) * i / 4.0;
    os << "<text x=\"" << f.x0 - 6 << "\" y=\"" << f.y(v) + 4
       << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(v)
       << "</text>\n";
  }
  if (!opts.floor_annotation.empty()) {
    os << "<text x=\"" << f.x1 << "\" y=\"" << f.y1 - 4
       << "\" text-anchor=\"end\" font-size=\"10\" fill=\"#888\">floor "
       << opts.floor_annotation << "</text>\n";
  }
}

void legend(std::ostream& os, const std::vector<Series>& series, double x,
            double y) {
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<rect x=\"" << x << "\" y=\"" << y + 16.0 * s
       << "\" width=\"10\" height=\"10\" fill=\"" << color(s) << "\"/>\n";
    os << "<text x=\"" << x + 14 << "\" y=\"" << y + 16.0 * s + 9 << "\">"
       << series[s].label << "</text>\n";
  }
}

Frame make_frame(const std::vector<Series>& series, const ChartOptions& opts) {
  double vmax = opts.y_min;
  for (const auto& s : series) {
    for (double v : s.values) {
      if (!std::isnan(v)) vmax = std::max(vmax, v);
    }
  }
  if (vmax <= opts.y_min) vmax = opts.y_min + 1.0;
  Frame f;
  f.x0 = 60;
  f.y0 = 40;
  f.x1 = opts.width - 150;
  f.y1 = opts.height - 60;
  f.vmin = opts.y_min;
  f.vmax = vmax * 1.08;
  return f;
}

void check(const std::vector<Series>& series, std::size_t n_positions) {
  if (series.empty() || n_positions == 0) {
    throw ConfigError("plot: empty input");
  }
  for (const auto& s : series) {
    if (s.values.size() != n_positions) {
      throw ConfigError("plot: series '" + s.label + "' has " +
                        std::to_string(s.values.size()) + " values, expected " +
                        std::to_string(n_positions));
    }
  }
}

}  // namespace

void grouped_bars(std::ostream& os, const std::vector<std::string>& groups,
                  const std::vector<Series>& series, const ChartOptions& opts) {
  check(series, groups.size());
  Frame f = make_frame(series, opts);
  open_svg(os, opts);
  axes(os, f, opts);

  const double group_w = (f.x1 - f.x0) / groups.size();
  const double bar_w = group_w * 0.8 / series.size();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = f.x0 + group_w * g + group_w * 0.1;
    os << "<text x=\"" << gx + group_w * 0.4 << "\" y=\"" << f.y1 + 16
       << "\" text-anchor=\"middle\" font-size=\"10\">" << groups[g]
       << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[g];
      if (std::isnan(v)) continue;
      const double x = gx + bar_w * s;
      const double y = f.y(v);
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w * 0.9
         << "\" height=\"" << f.y1 - y << "\" fill=\"" << color(s) << "\"/>\n";
      os << "<text x=\"" << x + bar_w * 0.45 << "\" y=\"" << y - 2
         << "\" text-anchor=\"middle\" font-size=\"7\">" << format_double(v)
         << "</text>\n";
    }
  }
  legend(os, series, f.x1 + 10, f.y0);
  os << "</svg>\n";
}

void lines(std::ostream& os, const std::vector<double>& xs,
           const std::vector<Series>& series, const ChartOptions& opts) {
  check(series, xs.size());
  Frame f = make_frame(series, opts);
  open_svg(os, opts);
  axes(os, f, opts);

  const double xmin = *std::min_element(xs.begin(), xs.end());
  const double xmax = *std::max_element(xs.begin(), xs.end());
  auto sx = [&](double x) {
    if (xmax == xmin) return (f.x0 + f.x1) / 2;
    return f.x0 + (x - xmin) / (xmax - xmin) * (f.x1 - f.x0);
  };
  for (double x : xs) {
    os << "<text x=\"" << sx(x) << "\" y=\"" << f.y1 + 16
       << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(x)
       << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    std::string points;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = series[s].values[i];
      if (std::isnan(v)) continue;
      points += format_double(sx(xs[i])) + "," + format_double(f.y(v)) + " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color(s)
       << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = series[s].values[i];
      if (std::isnan(v)) continue;
      os << "<circle cx=\"" << sx(xs[i]) << "\" cy=\"" << f.y(v)
         << "\" r=\"2.5\" fill=\"" << color(s) << "\"/>\n";
      os << "<text x=\"" << sx(xs[i]) << "\" y=\"" << f.y(v) - 5
         << "\" text-anchor=\"middle\" font-size=\"7\">" << format_double(v)
         << "</text>\n";
    }
  }
  legend(os, series, f.x1 + 10, f.y0);
  os << "</svg>\n";
}

}  // namespace eprnet::plot
