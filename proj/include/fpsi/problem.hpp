#pragma once

#include "fpsi/assembler.hpp"
#include "fpsi/linear_solver.hpp"

#include <functional>
#include <memory>

namespace fpsi {

/// Boundary values at time t. Missing functions mean homogeneous data; `pf`
/// gives the value of the pinned fluid pressure DOF when there is one.
template <int Dim>
struct DirichletData {
  std::function<Vec<Dim>(const Vec<Dim>&, double)> vf, vs;
  std::function<double(const Vec<Dim>&, double)> pf, pd;
};

/// A fully specified discrete problem: mesh, spaces, coefficients, data and
/// scheme settings.
template <int Dim>
struct Problem {
  std::shared_ptr<const Discretization<Dim>> disc;
  MaterialParams<Dim> material;
  FormSwitches forms;

  int order = 1;
  double dt = 1e-4;
  /// Keep F = I, J = 1 and skip the mesh-extension solve.
  bool frozen = false;

  double tau_scale = 1.0;
  std::optional<double> tau_constant;

  std::function<double(double)> p_ext;
  double sign_pext = 1.0;
  std::function<BodyForce<Dim>(double)> force;
  DirichletData<Dim> dirichlet;

  SolverOptions solver;
  double j_min = kDefaultMinJacobian;

  const Discretization<Dim>& discretization() const {
    if (!disc) throw Error("problem has no discretization");
    return *disc;
  }
};

/// Constrained global DOFs and their values at time t.
template <int Dim>
std::pair<std::vector<char>, Eigen::VectorXd> constraints(const Problem<Dim>& p, double t) {
  const auto& d = p.discretization();
  const auto& L = d.layout();
  std::vector<char> mask(L.total(), 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(L.total());
  auto vector_block = [&](Block b, const std::function<Vec<Dim>(const Vec<Dim>&, double)>& g) {
    if (!d.has(b)) return;
    const auto& s = d.space(b);
    for (Index n = 0; n < s.num_nodes(); ++n) {
      if (!s.is_dirichlet_node(n)) continue;
      const Vec<Dim> v = g ? g(s.node_coordinates(n), t) : Vec<Dim>::Zero();
      for (int c = 0; c < Dim; ++c) {
        const Index i = L.offset(b) + s.dof(n, c);
        mask[i] = 1;
        values[i] = v[c];
      }
    }
  };
  vector_block(Block::Vf, p.dirichlet.vf);
  vector_block(Block::Vs, p.dirichlet.vs);
  if (d.has(Block::Pd)) {
    const auto& s = d.space(Block::Pd);
    for (Index n = 0; n < s.num_nodes(); ++n) {
      if (!s.is_dirichlet_node(n)) continue;
      const Index i = L.offset(Block::Pd) + n;
      mask[i] = 1;
      values[i] = p.dirichlet.pd ? p.dirichlet.pd(s.node_coordinates(n), t) : 0.0;
    }
  }
  if (const auto pin = d.pinned_fluid_pressure()) {
    const Index i = L.offset(Block::Pf) + *pin;
    mask[i] = 1;
    values[i] = p.dirichlet.pf ? p.dirichlet.pf(d.space(Block::Pf).node_coordinates(*pin), t) : 0.0;
  }
  return {std::move(mask), std::move(values)};
}

}  // namespace fpsi
