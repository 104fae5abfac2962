#ifndef HFGTFLOW_SVG_HPP
#define HFGTFLOW_SVG_HPP

#include <string>
#include <vector>

#include "hfgtflow/trajectory.hpp"

namespace hfgtflow {

struct SvgOptions {
  int width = 800;
  int height = 480;
  std::string title;
};

/// Static line chart: axes, tick labels, legend, one polyline per variable.
/// Throws DanglingReference when a variable is not a trajectory column.
std::string render_svg(const Trajectory &trajectory,
                       const std::vector<std::string> &variables,
                       const SvgOptions &options = {});

} // namespace hfgtflow

#endif
