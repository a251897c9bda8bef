#include "bmlab/plot.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

namespace bmlab {

std::string overlay_svg(const std::vector<SvgLayer>& layers,
                        const std::vector<std::array<Rational, 2>>& outline, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  auto grow = [&](double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const auto& l : layers) {
    if (!l.set || l.set->dim() != 2) fail_input("svg layers must be planar voxel sets");
    const GridSpec& g = l.set->grid();
    const RationalVector hi = g.upper_corner();
    grow(to_double(g.origin[0]), to_double(g.origin[1]));
    grow(to_double(hi[0]), to_double(hi[1]));
  }
  for (const auto& p : outline) grow(to_double(p[0]), to_double(p[1]));
  if (!(x1 > x0) || !(y1 > y0)) fail_input("nothing to draw");

  const double size = 600, pad = 30, legend = 24 * static_cast<double>(layers.size() + 1);
  const double scale = size / std::max(x1 - x0, y1 - y0);
  const double width = 2 * pad + (x1 - x0) * scale, height = 2 * pad + (y1 - y0) * scale + legend;
  auto px = [&](double x) { return pad + (x - x0) * scale; };
  auto py = [&](double y) { return pad + (y1 - y) * scale; };

  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : layers) {
    const VoxelSet& a = *l.set;
    const GridSpec& g = a.grid();
    const double h = to_double(g.h), ox = to_double(g.origin[0]), oy = to_double(g.origin[1]);
    os << "<g fill=\"" << l.fill << "\" fill-opacity=\"" << l.opacity << "\" stroke=\"none\">\n";
    for (long j = 0; j < g.extents[1]; ++j) {
      long i = 0;
      while (i < g.extents[0]) {
        if (!a.test(CellIndex{i, j})) {
          ++i;
          continue;
        }
        long e = i;
        while (e < g.extents[0] && a.test(CellIndex{e, j})) ++e;
        os << "<rect x=\"" << px(ox + i * h) << "\" y=\"" << py(oy + (j + 1) * h) << "\" width=\"" << (e - i) * h * scale
           << "\" height=\"" << h * scale << "\"/>\n";
        i = e;
      }
    }
    os << "</g>\n";
  }
  if (!outline.empty()) {
    os << "<polygon points=\"";
    for (const auto& p : outline) os << px(to_double(p[0])) << ',' << py(to_double(p[1])) << ' ';
    os << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  double ly = height - legend + 8;
  os << "<g font-family=\"monospace\" font-size=\"13\">\n";
  os << "<text x=\"" << pad << "\" y=\"" << ly + 4 << "\">" << title << "</text>\n";
  for (const auto& l : layers) {
    ly += 24;
    os << "<rect x=\"" << pad << "\" y=\"" << ly - 8 << "\" width=\"14\" height=\"14\" fill=\"" << l.fill
       << "\" fill-opacity=\"" << l.opacity << "\"/>\n";
    os << "<text x=\"" << pad + 22 << "\" y=\"" << ly + 4 << "\">" << l.label << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

VoxelSet axis_slice(const VoxelSet& a, std::size_t axis, const Rational& at) {
  const GridSpec& g = a.grid();
  if (g.dim < 2 || axis >= g.dim) fail_input("axis_slice needs an axis of a set of dimension >= 2");
  const Rational k = floor((at - g.origin[axis]) / g.h);
  RationalVector origin;
  std::vector<long> ext;
  for (std::size_t d = 0; d < g.dim; ++d)
    if (d != axis) {
      origin.push_back(g.origin[d]);
      ext.push_back(g.extents[d]);
    }
  VoxelSet out(GridSpec(origin, g.h, ext));
  if (k < 0 || k >= g.extents[axis]) return out;
  const long layer = to_long(k.get_num());
  for (std::size_t l = 0; l < out.grid().cell_count(); ++l) {
    CellIndex c = out.cell_of(l);
    c.insert(c.begin() + static_cast<long>(axis), layer);
    if (a.test(c)) out.set(l);
  }
  return out;
}

}  // namespace bmlab
