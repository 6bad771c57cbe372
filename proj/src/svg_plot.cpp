#include "cslx/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cslx {

namespace {

struct LogAxis {
  double lo_log, hi_log;  // log10 of the data range
  double px_lo, px_hi;    // pixel range (px_lo maps to lo_log)

  double to_px(double value) const {
    const double f = (std::log10(value) - lo_log) / (hi_log - lo_log);
    return px_lo + f * (px_hi - px_lo);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void draw_log_ticks(std::ostringstream& svg, const LogAxis& axis, bool x_axis,
                    double cross_px_lo, double cross_px_hi) {
  const int k_lo = static_cast<int>(std::floor(axis.lo_log));
  const int k_hi = static_cast<int>(std::ceil(axis.hi_log));
  for (int k = k_lo; k <= k_hi; ++k) {
    for (int m = 1; m < 10; ++m) {
      const double v = m * std::pow(10.0, k);
      const double lg = std::log10(v);
      if (lg < axis.lo_log - 1e-9 || lg > axis.hi_log + 1e-9) continue;
      const double p = axis.to_px(v);
      const bool decade = m == 1;
      const char* color = decade ? "#bbb" : "#eee";
      if (x_axis)
        svg << "<line x1='" << fmt(p) << "' y1='" << fmt(cross_px_lo) << "' x2='"
            << fmt(p) << "' y2='" << fmt(cross_px_hi) << "' stroke='" << color
            << "' stroke-width='1'/>\n";
      else
        svg << "<line x1='" << fmt(cross_px_lo) << "' y1='" << fmt(p) << "' x2='"
            << fmt(cross_px_hi) << "' y2='" << fmt(p) << "' stroke='" << color
            << "' stroke-width='1'/>\n";
      if (decade) {
        std::ostringstream label;
        label << "1e" << k;
        if (x_axis)
          svg << "<text x='" << fmt(p) << "' y='" << fmt(cross_px_hi + 16)
              << "' font-size='11' text-anchor='middle' fill='#333'>" << label.str()
              << "</text>\n";
        else
          svg << "<text x='" << fmt(cross_px_lo - 6) << "' y='" << fmt(p + 4)
              << "' font-size='11' text-anchor='end' fill='#333'>" << label.str()
              << "</text>\n";
      }
    }
  }
}

}  // namespace

std::string render_spectrum_svg(const BinnedSpectrum& s, const FitResult* fit,
                                const PlotOptions& options) {
  const RateDensity rd = to_rate_density(s);
  const double ml = 64, mr = 20, mt = 34, mb = 46;
  const double w = options.width, h = options.height;

  // Data range; the y axis must cover the error bars of nonzero bins.
  double y_min = 1e300, y_max = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double lo = rd.rate[i] > 0 ? std::max(rd.rate[i] - rd.sigma[i],
                                                0.1 * rd.sigma[i])
                                     : rd.sigma[i];
    y_min = std::min(y_min, lo);
    y_max = std::max(y_max, rd.rate[i] + rd.sigma[i]);
  }
  if (!(y_max > 0)) y_max = 1.0;
  y_min = std::max(y_min, y_max * 1e-6);

  LogAxis x{std::log10(s.e_min()), std::log10(s.e_max()), ml, w - mr};
  LogAxis y{std::log10(y_min) - 0.05, std::log10(y_max) + 0.05, h - mb, mt};

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "' viewBox='0 0 " << w << " " << h << "'>\n";
  svg << "<rect width='" << w << "' height='" << h << "' fill='white'/>\n";
  svg << "<text x='" << fmt(w / 2) << "' y='20' font-size='14' text-anchor='middle' "
         "fill='#111'>"
      << options.title << "</text>\n";

  draw_log_ticks(svg, x, true, mt, h - mb);
  draw_log_ticks(svg, y, false, ml, w - mr);

  // Frame.
  svg << "<rect x='" << fmt(ml) << "' y='" << fmt(mt) << "' width='" << fmt(w - ml - mr)
      << "' height='" << fmt(h - mt - mb)
      << "' fill='none' stroke='#333' stroke-width='1'/>\n";

  // Fitted alpha/E curve in rate-density units.
  if (fit) {
    svg << "<path d='";
    const int n_pts = 128;
    for (int i = 0; i <= n_pts; ++i) {
      const double e =
          s.e_min() * std::pow(s.e_max() / s.e_min(), static_cast<double>(i) / n_pts);
      const double v = fit->alpha_hat / (e * s.exposure_kg_day());
      const double px = x.to_px(e);
      const double py = y.to_px(std::clamp(v, y_min * 1e-3, y_max * 1e3));
      svg << (i == 0 ? 'M' : 'L') << fmt(px) << ' ' << fmt(py) << ' ';
    }
    svg << "' fill='none' stroke='#c33' stroke-width='1.6'/>\n";
  }

  // Data points with error bars; zero bins become downward arrows.
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e_center = std::sqrt(s.e_low(i) * s.e_high(i));
    const double px = x.to_px(e_center);
    if (rd.rate[i] > 0) {
      const double py = y.to_px(rd.rate[i]);
      const double y_up = y.to_px(rd.rate[i] + rd.sigma[i]);
      const double y_dn =
          y.to_px(std::max(rd.rate[i] - rd.sigma[i], y_min));
      svg << "<line x1='" << fmt(px) << "' y1='" << fmt(y_up) << "' x2='" << fmt(px)
          << "' y2='" << fmt(y_dn) << "' stroke='#226' stroke-width='1'/>\n";
      svg << "<circle cx='" << fmt(px) << "' cy='" << fmt(py)
          << "' r='2.4' fill='#226'/>\n";
    } else {
      const double py = y.to_px(rd.sigma[i]);
      svg << "<path d='M" << fmt(px) << ' ' << fmt(py) << " l0 10 m-3 -4 l3 4 l3 -4'"
          << " fill='none' stroke='#888' stroke-width='1'/>\n";
    }
  }

  // Axis titles and fit label.
  svg << "<text x='" << fmt((ml + w - mr) / 2) << "' y='" << fmt(h - 10)
      << "' font-size='12' text-anchor='middle' fill='#111'>E [keV]</text>\n";
  svg << "<text x='14' y='" << fmt((mt + h - mb) / 2)
      << "' font-size='12' text-anchor='middle' fill='#111' transform='rotate(-90 14 "
      << fmt((mt + h - mb) / 2) << ")'>counts / (keV kg day)</text>\n";
  if (fit) {
    std::ostringstream label;
    label.precision(4);
    label << "alpha = " << fit->alpha_hat << " +- " << fit->alpha_err
          << ", chi2/ndf = " << goodness(*fit);
    svg << "<text x='" << fmt(w - mr - 6) << "' y='" << fmt(mt + 16)
        << "' font-size='11' text-anchor='end' fill='#c33'>" << label.str()
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cslx
