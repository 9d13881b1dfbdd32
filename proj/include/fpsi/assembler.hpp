#pragma once

#include "fpsi/block_system.hpp"
#include "fpsi/forms.hpp"

#include <functional>
#include <optional>

namespace fpsi {

/// Volume source terms (manufactured solutions), already evaluated at t_k.
template <int Dim>
struct BodyForce {
  std::function<Vec<Dim>(const Vec<Dim>&)> vf, vs, q;
  std::function<double(const Vec<Dim>&)> pf, pd;

  bool empty() const { return !vf && !vs && !q && !pf && !pd; }
};

struct FormSwitches {
  bool mass = true;
  bool elastic = true;
  bool darcy = true;
  bool viscous = true;
  bool inertia = true;
  bool pressure = true;
  InterfaceTerms interface;
  bool external_pressure = true;
};

/// Everything the monolithic system of one step depends on.
template <int Dim>
struct AssemblyInput {
  const Discretization<Dim>* disc = nullptr;
  const GeometricFields<Dim>* geo = nullptr;
  MaterialParams<Dim> material;
  FormSwitches forms;

  /// c0 / dt; zero drops the time derivative.
  double mass_coefficient = 0.0;
  /// History part of the BDF derivative in block layout; empty means zero.
  Eigen::VectorXd history_rate;

  /// Elastic closure u^k = u_hist + beta v_s^k on displacement-space DOFs.
  double elastic_beta = 1.0;
  Eigen::VectorXd u_hist;

  /// Extrapolated fluid velocity (v_f block, may be empty) and mesh velocity
  /// (displacement space, may be empty).
  Eigen::VectorXd vf_tilde;
  Eigen::VectorXd w_tilde;

  /// tau = tau_scale / h^2 unless tau_constant is set.
  double tau_scale = 1.0;
  std::optional<double> tau_constant;

  double p_ext = 0.0;
  double sign_pext = 1.0;
  BodyForce<Dim> force;

  /// Constrained (Dirichlet or pinned) global DOFs with their values; empty
  /// means none.
  std::vector<char> constrained;
  Eigen::VectorXd constrained_values;
};

namespace detail {

template <int Dim>
std::vector<Index> global_dofs(const Discretization<Dim>& d, Block b, Index cell) {
  std::vector<Index> dofs;
  d.space(b).cell_dofs(cell, dofs);
  const Index off = d.layout().offset(b);
  for (auto& i : dofs) i += off;
  return dofs;
}

inline LocalVector gather(const std::vector<Index>& idx, const Eigen::VectorXd& x) {
  LocalVector v(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) v[i] = x[idx[i]];
  return v;
}

template <int Dim>
LocalVector vector_load(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                        const std::function<Vec<Dim>(const Vec<Dim>&)>& f) {
  const int n = static_cast<int>(cv.p2->at[0].values.size());
  LocalVector r = LocalVector::Zero(n * Dim);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const Vec<Dim> fv = f(cv.point(q));
    const double w = gf.at(cell, static_cast<int>(q)).J * cv.weights[q];
    for (int a = 0; a < n; ++a)
      r.template segment<Dim>(a * Dim) += (w * cv.p2->at[q].values[a]) * fv;
  }
  return r;
}

template <int Dim>
LocalVector scalar_load(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                        const std::function<double(const Vec<Dim>&)>& f) {
  const auto& tab = *cv.p1;
  LocalVector r = LocalVector::Zero(tab.at[0].values.size());
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const double w = gf.at(cell, static_cast<int>(q)).J * cv.weights[q];
    r += (w * f(cv.point(q))) * tab.at[q].values;
  }
  return r;
}

/// Values of a vector P2 field at the cell quadrature points.
template <int Dim>
std::vector<Vec<Dim>> point_values(const CellValues<Dim>& cv, const CellNodalValues<Dim>& nodal) {
  std::vector<Vec<Dim>> out(cv.size());
  for (std::size_t q = 0; q < cv.size(); ++q)
    out[q] = nodal.transpose() * cv.p2->at[q].values;
  return out;
}

}  // namespace detail

template <int Dim>
double interface_tau(const AssemblyInput<Dim>& in, const InterfaceFacet<Dim>& f) {
  if (in.tau_constant) return *in.tau_constant;
  return in.tau_scale / (f.h * f.h);
}

/// Assemble the monolithic system of one step.
template <int Dim>
BlockSystem assemble_system(const AssemblyInput<Dim>& in) {
  if (!in.disc || !in.geo) throw Error("assembly input lacks discretization or geometry");
  const Discretization<Dim>& d = *in.disc;
  const GeometricFields<Dim>& gf = *in.geo;
  const auto& mesh = d.mesh();
  const auto& layout = d.layout();
  const auto& mat = in.material;
  const Index N = layout.total();
  if (gf.min_J <= 0.0) throw DegenerateDeformation(-1, gf.min_J);

  const bool has_hist = in.history_rate.size() > 0;
  if (has_hist && in.history_rate.size() != N) throw Error("history vector has wrong length");
  if (in.u_hist.size() > 0 && in.u_hist.size() != d.displacement_space().num_dofs())
    throw Error("displacement history has wrong length");

  SystemBuilder sb = in.constrained.empty()
                         ? SystemBuilder(N)
                         : SystemBuilder(N, in.constrained, in.constrained_values);
  const double c = in.mass_coefficient;
  const bool mass = in.forms.mass && c != 0.0;

  CellValues<Dim> cv;
  for (Index cell = 0; cell < mesh.num_cells(); ++cell) {
    cv.reinit(d, cell);
    if (mesh.tag(cell) == Subdomain::Fluid) {
      const auto vf = detail::global_dofs(d, Block::Vf, cell);
      const auto pf = detail::global_dofs(d, Block::Pf, cell);
      if (mass) {
        const LocalMatrix M = vector_mass(cv, gf, cell, mat.rho_f);
        sb.add_block(vf, vf, c * M);
        if (has_hist) sb.add_rhs_block(vf, -(M * detail::gather(vf, in.history_rate)));
      }
      if (in.forms.viscous) sb.add_block(vf, vf, viscous_matrix(cv, gf, cell, mat.mu_f));
      if (in.forms.inertia && (in.vf_tilde.size() > 0 || in.w_tilde.size() > 0)) {
        std::vector<Vec<Dim>> adv(cv.size(), Vec<Dim>::Zero());
        if (in.vf_tilde.size() > 0) {
          const auto a = detail::point_values(cv, cell_nodal_values(d.space(Block::Vf), in.vf_tilde, cell));
          for (std::size_t q = 0; q < adv.size(); ++q) adv[q] += a[q];
        }
        if (in.w_tilde.size() > 0) {
          const auto w = detail::point_values(cv, cell_nodal_values(d.displacement_space(), in.w_tilde, cell));
          for (std::size_t q = 0; q < adv.size(); ++q) adv[q] -= w[q];
        }
        sb.add_block(vf, vf, inertia_matrix(cv, gf, cell, mat.rho_f, adv));
      }
      if (in.forms.pressure) {
        const LocalMatrix B = divergence_matrix(cv, gf, cell);
        sb.add_block(vf, pf, -B.transpose());
        sb.add_block(pf, vf, B);
      }
      if (in.force.vf) sb.add_rhs_block(vf, detail::vector_load(cv, gf, cell, in.force.vf));
      if (in.force.pf) sb.add_rhs_block(pf, detail::scalar_load(cv, gf, cell, in.force.pf));
    } else {
      const auto vs = detail::global_dofs(d, Block::Vs, cell);
      const auto qd = detail::global_dofs(d, Block::Q, cell);
      const auto pd = detail::global_dofs(d, Block::Pd, cell);
      if (mass) {
        const LocalMatrix M = vector_mass(cv, gf, cell);
        const LocalMatrix Mp = scalar_mass(cv, gf, cell, 1, mat.s0);
        const double rp = mat.rho_p(), rf = mat.rho_f, rd = mat.rho_f / mat.phi;
        sb.add_block(vs, vs, (c * rp) * M);
        sb.add_block(vs, qd, (c * rf) * M);
        sb.add_block(qd, vs, (c * rf) * M);
        sb.add_block(qd, qd, (c * rd) * M);
        sb.add_block(pd, pd, c * Mp);
        if (has_hist) {
          const LocalVector hv = M * detail::gather(vs, in.history_rate);
          const LocalVector hq = M * detail::gather(qd, in.history_rate);
          sb.add_rhs_block(vs, -(rp * hv + rf * hq));
          sb.add_rhs_block(qd, -(rf * hv + rd * hq));
          sb.add_rhs_block(pd, -(Mp * detail::gather(pd, in.history_rate)));
        }
      }
      if (in.forms.elastic) {
        const auto parts = elastic_parts(cv, gf, cell, mat.lambda_s, mat.mu_s);
        sb.add_block(vs, vs, in.elastic_beta * parts.stiffness);
        LocalVector r = parts.offset;
        if (in.u_hist.size() > 0) {
          std::vector<Index> ud;
          d.displacement_space().cell_dofs(cell, ud);
          r += parts.stiffness * detail::gather(ud, in.u_hist);
        }
        sb.add_rhs_block(vs, -r);
      }
      if (in.forms.darcy) sb.add_block(qd, qd, darcy_matrix(cv, gf, cell, mat.K_inv()));
      if (in.forms.pressure) {
        const LocalMatrix B = divergence_matrix(cv, gf, cell);
        sb.add_block(vs, pd, -B.transpose());
        sb.add_block(qd, pd, -B.transpose());
        sb.add_block(pd, vs, B);
        sb.add_block(pd, qd, B);
      }
      if (in.force.vs) sb.add_rhs_block(vs, detail::vector_load(cv, gf, cell, in.force.vs));
      if (in.force.q) sb.add_rhs_block(qd, detail::vector_load(cv, gf, cell, in.force.q));
      if (in.force.pd) sb.add_rhs_block(pd, detail::scalar_load(cv, gf, cell, in.force.pd));
    }
  }

  const auto& terms = in.forms.interface;
  if (terms.penalty || terms.pressure || terms.kinetic || terms.bjs) {
    const Mat<Dim> Kis = mat.K_inv_sqrt();
    for (std::size_t i = 0; i < d.interface().size(); ++i) {
      const auto& f = d.interface()[i];
      std::vector<Index> idx = detail::global_dofs(d, Block::Vf, f.fluid_cell);
      for (Block b : {Block::Vs, Block::Q, Block::Pd}) {
        const auto s = detail::global_dofs(d, b, f.solid_cell);
        idx.insert(idx.end(), s.begin(), s.end());
      }
      CellNodalValues<Dim> vt = CellNodalValues<Dim>::Zero(d.p2().num_nodes(), Dim);
      if (in.vf_tilde.size() > 0) vt = cell_nodal_values(d.space(Block::Vf), in.vf_tilde, f.fluid_cell);
      InterfaceCoefficients k{interface_tau(in, f), mat.rho_f, mat.gamma};
      const auto loc = interface_matrix(d, gf.interface[i], vt, k, Kis, terms);
      sb.add_block(idx, idx, loc.A);
    }
  }

  if (in.forms.external_pressure && in.p_ext != 0.0) {
    for (std::size_t i = 0; i < d.fluid_boundary().size(); ++i) {
      const auto& f = d.fluid_boundary()[i];
      if (f.marker != Marker::FluidInlet) continue;
      const auto vf = detail::global_dofs(d, Block::Vf, f.cell);
      LocalVector r = LocalVector::Zero(static_cast<Eigen::Index>(vf.size()));
      for (const auto& p : gf.boundary[i]) {
        const auto b = d.p2().eval_unchecked(p.xi_f);
        const double w = in.sign_pext * in.p_ext * p.Js * p.weight;
        for (int a = 0; a < d.p2().num_nodes(); ++a)
          r.template segment<Dim>(a * Dim) += (w * b.values[a]) * p.n;
      }
      sb.add_rhs_block(vf, r);
    }
  }
  return sb.finalize();
}

}  // namespace fpsi
