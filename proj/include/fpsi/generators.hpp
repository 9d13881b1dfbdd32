#pragma once

#include "fpsi/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace fpsi {

/// Markers of the four sides of a generated rectangle.
struct SideMarkers {
  Marker left, right, bottom, top;
  static SideMarkers all(Marker m) { return {m, m, m, m}; }
};

namespace detail {

/// Triangulated tensor grid with alternating diagonals. `tag_of` picks the
/// subdomain of each cell row, `facet_of` the markers of boundary and
/// interface edges (std::nullopt for none).
template <class TagOf>
Mesh<2> tensor_grid(const std::vector<double>& xs, const std::vector<double>& ys, TagOf tag_of,
                    const SideMarkers& sides) {
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  std::vector<Vec<2>> v;
  v.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) v.emplace_back(xs[i], ys[j]);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Mesh<2>::Cell> cells;
  std::vector<Subdomain> tags;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const Subdomain t = tag_of(j);
      if ((i + j) % 2 == 0) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
      tags.push_back(t);
      tags.push_back(t);
    }
  std::vector<MarkedFacet<2>> f;
  for (int i = 0; i < nx; ++i) {
    f.push_back({{id(i, 0), id(i + 1, 0)}, sides.bottom});
    f.push_back({{id(i, ny), id(i + 1, ny)}, sides.top});
  }
  for (int j = 0; j < ny; ++j) {
    const bool solid = tag_of(j) == Subdomain::Solid;
    f.push_back({{id(0, j), id(0, j + 1)}, solid ? Marker::SolidFixed : sides.left});
    f.push_back({{id(nx, j), id(nx, j + 1)}, solid ? Marker::SolidFixed : sides.right});
  }
  for (int j = 1; j < ny; ++j)
    if (tag_of(j - 1) != tag_of(j))
      for (int i = 0; i < nx; ++i) f.push_back({{id(i, j), id(i + 1, j)}, Marker::Interface});
  return Mesh<2>(std::move(v), std::move(cells), std::move(tags), std::move(f));
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = a + (b - a) * i / n;
  return out;
}

}  // namespace detail

/// n x n triangulation of [x0, x0+lx] x [y0, y0+ly] with one subdomain.
inline Mesh<2> rectangle_mesh(int nx, int ny, Subdomain tag, SideMarkers sides, double x0 = 0.0,
                              double y0 = 0.0, double lx = 1.0, double ly = 1.0) {
  if (nx < 1 || ny < 1) throw MeshError("rectangle needs at least one cell per direction");
  if (tag == Subdomain::Solid) sides = SideMarkers::all(Marker::SolidFixed);
  return detail::tensor_grid(detail::linspace(x0, x0 + lx, nx), detail::linspace(y0, y0 + ly, ny),
                             [tag](int) { return tag; }, sides);
}

/// Geometry of the two-dimensional channel: fluid [0, L] x [0, H] between two
/// poroelastic strips of thickness W below and above.
struct ChannelGeometry {
  double length = 50.0;    // mm
  double height = 10.0;    // mm
  double thickness = 1.0;  // mm
};

/// Channel mesh at resolution n: n cells across the fluid, n L / H along it and
/// at least two layers in each strip, none thicker than the fluid rows.
/// GAMMA_F0 is the fluid
/// inlet at x = 0, GAMMA_OUT the outlet at x = L, GAMMA_S0 the outer strip
/// edges and strip ends.
inline Mesh<2> channel_mesh(int n, const ChannelGeometry& g = {}) {
  if (n < 2) throw MeshError("channel resolution must be at least 2");
  const double hy = g.height / n;
  const int nx = static_cast<int>(std::lround(n * g.length / g.height));
  const int ns = std::max(2, static_cast<int>(std::ceil(g.thickness / hy - 1e-12)));
  std::vector<double> ys;
  for (double y : detail::linspace(-g.thickness, 0.0, ns)) ys.push_back(y);
  for (double y : detail::linspace(0.0, g.height, n)) ys.push_back(y);
  for (double y : detail::linspace(g.height, g.height + g.thickness, ns)) ys.push_back(y);
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  auto tag_of = [ns, n](int row) {
    return row < ns || row >= ns + n ? Subdomain::Solid : Subdomain::Fluid;
  };
  return detail::tensor_grid(detail::linspace(0.0, g.length, std::max(nx, 1)), ys, tag_of,
                             {Marker::FluidInlet, Marker::FluidOutlet, Marker::SolidFixed,
                              Marker::SolidFixed});
}

}  // namespace fpsi
