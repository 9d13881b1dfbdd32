#pragma once

#include "fpsi/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

namespace fpsi {

/// Combinatorial constants of the reference simplex in dimension Dim.
template <int Dim>
struct SimplexTopology;

template <>
struct SimplexTopology<2> {
  static constexpr int kVertices = 3;
  static constexpr int kEdges = 3;
  // Local edge k joins kEdgeVertices[k][0] and kEdgeVertices[k][1]; P2 node 3+k
  // sits at its midpoint.
  static constexpr std::array<std::array<int, 2>, 3> kEdgeVertices{{{0, 1}, {1, 2}, {0, 2}}};
  static constexpr double kMeasure = 0.5;
};

template <>
struct SimplexTopology<3> {
  static constexpr int kVertices = 4;
  static constexpr int kEdges = 6;
  static constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
      {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 3}, {2, 3}}};
  static constexpr double kMeasure = 1.0 / 6.0;
};

/// Affine map X = origin + jacobian * xi from the reference simplex to a cell.
template <int Dim>
struct AffineMap {
  Vec<Dim> origin;
  Mat<Dim> jacobian;
  Mat<Dim> inverse;
  Mat<Dim> inverse_transpose;
  double det = 0.0;

  Vec<Dim> to_physical(const Vec<Dim>& xi) const { return origin + jacobian * xi; }
  Vec<Dim> to_reference(const Vec<Dim>& x) const { return inverse * (x - origin); }
  /// Physical gradient from a reference gradient.
  Vec<Dim> grad(const Vec<Dim>& ref_grad) const { return inverse_transpose * ref_grad; }
};

template <int Dim>
AffineMap<Dim> make_affine_map(std::span<const Vec<Dim>, Dim + 1> x) {
  AffineMap<Dim> m;
  m.origin = x[0];
  for (int j = 0; j < Dim; ++j) m.jacobian.col(j) = x[j + 1] - x[0];
  m.det = m.jacobian.determinant();
  m.inverse = m.jacobian.inverse();
  m.inverse_transpose = m.inverse.transpose();
  return m;
}

inline constexpr double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Signed simplex volume (positive for the reference orientation).
template <int Dim>
double signed_volume(std::span<const Vec<Dim>, Dim + 1> x) {
  Mat<Dim> b;
  for (int j = 0; j < Dim; ++j) b.col(j) = x[j + 1] - x[0];
  return b.determinant() / factorial(Dim);
}

/// Measure of a (Dim-1)-simplex embedded in Dim dimensions.
template <int Dim>
double facet_measure(std::span<const Vec<Dim>, Dim> x) {
  if constexpr (Dim == 2) {
    return (x[1] - x[0]).norm();
  } else {
    return 0.5 * (x[1] - x[0]).cross(x[2] - x[0]).norm();
  }
}

/// Unnormalized facet normal; orientation follows the vertex ordering.
template <int Dim>
Vec<Dim> facet_normal_direction(std::span<const Vec<Dim>, Dim> x) {
  if constexpr (Dim == 2) {
    const Vec<2> t = x[1] - x[0];
    return Vec<2>(t.y(), -t.x());
  } else {
    return (x[1] - x[0]).cross(x[2] - x[0]);
  }
}

/// Facet diameter: the longest edge.
template <int Dim>
double facet_diameter(std::span<const Vec<Dim>, Dim> x) {
  double h = 0.0;
  for (int i = 0; i < Dim; ++i)
    for (int j = i + 1; j < Dim; ++j) h = std::max(h, (x[i] - x[j]).norm());
  return h;
}

}  // namespace fpsi
