#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>

#include "pmelab/errors.hpp"

namespace pmelab {

/// Minimal standalone SVG line plot: one polyline, axis box, min/max labels.
inline void write_svg_polyline(std::ostream& out, std::span<const double> xs,
                               std::span<const double> ys, const std::string& title,
                               const std::string& xlabel, const std::string& ylabel)
{
  if (xs.size() != ys.size() || xs.empty())
    throw ValidationError("svg: need equally many x and y values, at least one");
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end());
  double y1 = *std::max_element(ys.begin(), ys.end());
  double x0 = *xmin, x1 = *xmax;
  if (x1 == x0)
    x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  out << "<text x=\"" << L - 4 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << y1
      << "</text>\n";
  out << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" text-anchor=\"end\">" << y0
      << "</text>\n";
  out << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\">" << x0 << "</text>\n";
  out << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"end\">" << x1
      << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i]))
      continue;
    out << px(xs[i]) << ',' << py(ys[i]) << ' ';
  }
  out << "\"/>\n</svg>\n";
}

} // namespace pmelab
