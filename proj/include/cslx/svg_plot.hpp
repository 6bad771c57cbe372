#pragma once

#include <string>

#include "cslx/fit.hpp"
#include "cslx/spectrum.hpp"

namespace cslx {

struct PlotOptions {
  int width = 720;
  int height = 540;
  std::string title = "X-ray emission spectrum";
};

// Static SVG of the spectrum on log-log axes: rate-density points with
// Poisson error bars and, when a fit is given, the alpha/E curve overlaid.
// Zero-count bins are drawn as downward arrows at their uncertainty floor.
std::string render_spectrum_svg(const BinnedSpectrum& s, const FitResult* fit,
                                const PlotOptions& options = {});

}  // namespace cslx
