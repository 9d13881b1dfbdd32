#pragma once

#include "fpsi/quadrature.hpp"
#include "fpsi/simplex.hpp"

#include <string>
#include <vector>

namespace fpsi {

inline constexpr int kMaxNodes = 10;  // P2 tetrahedron

using NodeValues = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxNodes, 1>;
template <int Dim>
using NodeGradients = Eigen::Matrix<double, Eigen::Dynamic, Dim, Eigen::RowMajor, kMaxNodes, Dim>;

template <int Dim>
struct BasisEvaluation {
  NodeValues values;
  NodeGradients<Dim> gradients;  // row i: reference gradient of basis i
};

/// Lagrange P1/P2 element on the reference simplex. Nodes are the vertices
/// followed by the edge midpoints in SimplexTopology order.
template <int Dim>
class ReferenceElement {
 public:
  using Topology = SimplexTopology<Dim>;

  explicit ReferenceElement(int degree) : degree_(degree) {
    if (degree != 1 && degree != 2)
      throw Error("unsupported element degree " + std::to_string(degree));
    nodes_.push_back(Vec<Dim>::Zero());
    for (int i = 0; i < Dim; ++i) nodes_.push_back(Vec<Dim>::Unit(i));
    if (degree == 2)
      for (const auto& e : Topology::kEdgeVertices)
        nodes_.push_back(0.5 * (nodes_[e[0]] + nodes_[e[1]]));
  }

  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Vec<Dim>& node(int i) const { return nodes_[i]; }

  BasisEvaluation<Dim> eval(const Vec<Dim>& xi) const {
    if (xi.minCoeff() < -kTolerance || xi.sum() > 1.0 + kTolerance)
      throw Error("evaluation point outside the reference simplex");
    return eval_unchecked(xi);
  }

  BasisEvaluation<Dim> eval_unchecked(const Vec<Dim>& xi) const {
    Eigen::Matrix<double, Dim + 1, 1> lambda;
    lambda[0] = 1.0 - xi.sum();
    lambda.template tail<Dim>() = xi;
    Eigen::Matrix<double, Dim + 1, Dim> dlambda = Eigen::Matrix<double, Dim + 1, Dim>::Zero();
    dlambda.row(0).setConstant(-1.0);
    dlambda.template bottomRows<Dim>().setIdentity();

    BasisEvaluation<Dim> out;
    out.values.resize(num_nodes());
    out.gradients.resize(num_nodes(), Dim);
    if (degree_ == 1) {
      out.values = lambda;
      out.gradients = dlambda;
      return out;
    }
    for (int i = 0; i <= Dim; ++i) {
      out.values[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
      out.gradients.row(i) = (4.0 * lambda[i] - 1.0) * dlambda.row(i);
    }
    for (int e = 0; e < Topology::kEdges; ++e) {
      const int a = Topology::kEdgeVertices[e][0], b = Topology::kEdgeVertices[e][1];
      out.values[Dim + 1 + e] = 4.0 * lambda[a] * lambda[b];
      out.gradients.row(Dim + 1 + e) = 4.0 * (lambda[b] * dlambda.row(a) + lambda[a] * dlambda.row(b));
    }
    return out;
  }

  static constexpr double kTolerance = 1e-12;

 private:
  int degree_;
  std::vector<Vec<Dim>> nodes_;
};

template <int Dim>
BasisEvaluation<Dim> eval_basis(const ReferenceElement<Dim>& element, const Vec<Dim>& xi) {
  return element.eval(xi);
}

/// Basis values and reference gradients at every point of a cell rule.
template <int Dim>
struct Tabulation {
  std::vector<BasisEvaluation<Dim>> at;

  Tabulation() = default;
  Tabulation(const ReferenceElement<Dim>& element, const QuadratureRule<Dim>& rule) {
    at.reserve(rule.size());
    for (const auto& p : rule.points) at.push_back(element.eval(p));
  }
};

}  // namespace fpsi
