#include "hfgtflow/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

namespace {

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  if (!std::isfinite(v))
    throw Error(errc::nonfinite_value, "non-finite value in plot data");
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

std::string render_svg(const Trajectory &trajectory,
                       const std::vector<std::string> &variables,
                       const SvgOptions &options) {
  std::vector<std::vector<double>> series;
  for (const auto &name : variables)
    series.push_back(trajectory.column(name));
  const std::size_t n = trajectory.steps();

  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto &s : series)
    for (double v : s) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (hi == lo)
    hi = lo + 1.0;

  const double ml = 70, mr = 20, mt = options.title.empty() ? 20.0 : 40.0,
               mb = 40;
  const double pw = options.width - ml - mr;
  const double ph = options.height - mt - mb;
  auto sx = [&](std::size_t k) {
    return ml + (n > 1 ? pw * double(k) / double(n - 1) : pw / 2);
  };
  auto sy = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << " " << options.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    svg << "<text x=\"" << options.width / 2 << "\" y=\"24\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << options.title << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    const double y = sy(v);
    svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(v) << "</text>\n";
    const std::size_t k = n > 0 ? std::size_t(std::lround(
                                      double(n - 1) * i / 4.0))
                                : 0;
    const double x = sx(k);
    svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x
        << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << k << "</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    svg << "<polyline fill=\"none\" stroke=\""
        << kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < n; ++k) {
      if (k)
        svg << ' ';
      svg << fmt(sx(k)) << ',' << fmt(sy(series[s][k]));
    }
    svg << "\"/>\n";
  }

  // Legend.
  for (std::size_t s = 0; s < variables.size(); ++s) {
    const double y = mt + 14 + 16 * double(s);
    svg << "<line x1=\"" << ml + pw - 110 << "\" y1=\"" << y << "\" x2=\""
        << ml + pw - 90 << "\" y2=\"" << y << "\" stroke=\""
        << kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))]
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << ml + pw - 84 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << variables[s]
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace hfgtflow
