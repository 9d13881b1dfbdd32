#pragma once

#include "fpsi/simplex.hpp"
#include "fpsi/types.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace fpsi {

/// Quadrature on the reference simplex of dimension D (D = 1 is [0, 1]).
template <int D>
struct QuadratureRule {
  std::vector<Vec<D>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 40;

/// Gauss-Legendre nodes and weights on [0, 1].
inline QuadratureRule<1> gauss_legendre(int n) {
  // Legendre P_n(x) and its derivative by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule<1> rule;
  rule.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    Vec<1> pt;
    pt[0] = 0.5 * (1.0 - x);
    rule.points.push_back(pt);
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

/// Collapsed-coordinate (Duffy) product rule exact for total degree `degree`
/// on the reference simplex; weights sum to the simplex measure.
template <int D>
QuadratureRule<D> simplex_quadrature(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw Error("unsupported quadrature degree " + std::to_string(degree));
  QuadratureRule<D> rule;
  rule.degree = degree;
  if constexpr (D == 1) {
    rule = gauss_legendre(std::max(1, (degree + 2) / 2));
    rule.degree = degree;
  } else if constexpr (D == 2) {
    const auto gu = gauss_legendre((degree + 3) / 2);
    const auto gv = gauss_legendre((degree + 2) / 2);
    for (std::size_t i = 0; i < gu.size(); ++i)
      for (std::size_t j = 0; j < gv.size(); ++j) {
        const double u = gu.points[i][0], v = gv.points[j][0];
        rule.points.push_back(Vec<2>(u, v * (1.0 - u)));
        rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
      }
  } else {
    static_assert(D == 3);
    const auto gu = gauss_legendre((degree + 4) / 2);
    const auto gv = gauss_legendre((degree + 3) / 2);
    const auto gw = gauss_legendre((degree + 2) / 2);
    for (std::size_t i = 0; i < gu.size(); ++i)
      for (std::size_t j = 0; j < gv.size(); ++j)
        for (std::size_t k = 0; k < gw.size(); ++k) {
          const double u = gu.points[i][0], v = gv.points[j][0], w = gw.points[k][0];
          rule.points.push_back(Vec<3>(u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v)));
          rule.weights.push_back(gu.weights[i] * gv.weights[j] * gw.weights[k] * (1.0 - u) *
                                 (1.0 - u) * (1.0 - v));
        }
  }
  return rule;
}

/// Cell rule for a Dim-dimensional mesh.
template <int Dim>
QuadratureRule<Dim> quadrature(int degree) {
  return simplex_quadrature<Dim>(degree);
}

/// Facet rule for a Dim-dimensional mesh.
template <int Dim>
QuadratureRule<Dim - 1> facet_quadrature(int degree) {
  return simplex_quadrature<Dim - 1>(degree);
}

}  // namespace fpsi
