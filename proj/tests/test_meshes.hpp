#pragma once

#include "fpsi/mesh.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace fpsi::testing {

inline Mesh<2> unit_triangle(Subdomain tag = Subdomain::Fluid) {
  std::vector<Vec<2>> v{{0, 0}, {1, 0}, {0, 1}};
  const Marker m = tag == Subdomain::Fluid ? Marker::FluidInlet : Marker::SolidFixed;
  return Mesh<2>(v, {{0, 1, 2}}, {tag}, {{{0, 1}, m}, {{1, 2}, m}, {{2, 0}, m}});
}

/// Unit square split along the (0,0)-(1,1) diagonal. Cell 0 (upper-left) and
/// cell 1 (lower-right) carry the given tags.
inline Mesh<2> two_triangle_square(Subdomain left, Subdomain right) {
  std::vector<Vec<2>> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto outer = [](Subdomain s) {
    return s == Subdomain::Fluid ? Marker::FluidInlet : Marker::SolidFixed;
  };
  std::vector<MarkedFacet<2>> f{{{2, 3}, outer(left)},
                                {{3, 0}, outer(left)},
                                {{0, 1}, outer(right)},
                                {{1, 2}, outer(right)}};
  if (left != right) f.push_back({{0, 2}, Marker::Interface});
  return Mesh<2>(v, {{0, 2, 3}, {0, 1, 2}}, {left, right}, f);
}

/// Structured n x n triangulation of [x0,x0+lx] x [y0,y0+ly], alternating
/// diagonals, all boundary facets marked with `boundary`.
inline Mesh<2> rectangle(int nx, int ny, Subdomain tag, Marker boundary, double x0 = 0.0,
                         double y0 = 0.0, double lx = 1.0, double ly = 1.0) {
  std::vector<Vec<2>> v;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) v.emplace_back(x0 + lx * i / nx, y0 + ly * j / ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Mesh<2>::Cell> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
    }
  std::vector<MarkedFacet<2>> f;
  for (int i = 0; i < nx; ++i) {
    f.push_back({{id(i, 0), id(i + 1, 0)}, boundary});
    f.push_back({{id(i, ny), id(i + 1, ny)}, boundary});
  }
  for (int j = 0; j < ny; ++j) {
    f.push_back({{id(0, j), id(0, j + 1)}, boundary});
    f.push_back({{id(nx, j), id(nx, j + 1)}, boundary});
  }
  std::vector<Subdomain> tags(cells.size(), tag);
  return Mesh<2>(v, cells, tags, f);
}

/// Unit square cut into four triangles around its center.
inline Mesh<2> criss_cross(Subdomain tag, Marker boundary) {
  std::vector<Vec<2>> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  std::vector<Mesh<2>::Cell> c{{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  std::vector<MarkedFacet<2>> f{
      {{0, 1}, boundary}, {{1, 2}, boundary}, {{2, 3}, boundary}, {{3, 0}, boundary}};
  return Mesh<2>(v, c, std::vector<Subdomain>(4, tag), f);
}

/// [-1,0]x[0,1] fluid | [0,1]x[0,1] solid, n x n cells each side, interface
/// along x = 0.
inline Mesh<2> fluid_solid_box(int n) {
  std::vector<Vec<2>> v;
  const int nx = 2 * n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= nx; ++i) v.emplace_back(-1.0 + 2.0 * i / nx, 1.0 * j / n);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Mesh<2>::Cell> cells;
  std::vector<Subdomain> tags;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const Subdomain s = i < n ? Subdomain::Fluid : Subdomain::Solid;
      cells.push_back({a, b, c});
      cells.push_back({a, c, d});
      tags.push_back(s);
      tags.push_back(s);
    }
  std::vector<MarkedFacet<2>> f;
  for (int i = 0; i < nx; ++i) {
    const Marker m = i < n ? Marker::FluidInlet : Marker::SolidFixed;
    f.push_back({{id(i, 0), id(i + 1, 0)}, m});
    f.push_back({{id(i, n), id(i + 1, n)}, m});
  }
  for (int j = 0; j < n; ++j) {
    f.push_back({{id(0, j), id(0, j + 1)}, Marker::FluidOutlet});
    f.push_back({{id(nx, j), id(nx, j + 1)}, Marker::SolidFixed});
    f.push_back({{id(n, j), id(n, j + 1)}, Marker::Interface});
  }
  return Mesh<2>(v, cells, tags, f);
}

inline std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "fpsi_tests";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace fpsi::testing
