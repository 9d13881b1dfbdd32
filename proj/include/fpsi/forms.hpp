#pragma once

#include "fpsi/geometry.hpp"
#include "fpsi/kinematics.hpp"

#include <vector>

namespace fpsi {

inline constexpr int kMaxLocal = 3 * kMaxNodes;

using LocalMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLocal, kMaxLocal>;
using LocalVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxLocal, 1>;

// Element kernels. Vector P2 local DOFs are node-major (node * Dim + component),
// the same order FunctionSpace::cell_dofs produces. g_a = F^{-T} grad phi_a is
// the ALE gradient of basis a at the extrapolated geometry.

namespace detail {

template <int Dim>
NodeGradients<Dim> ale_gradients(const NodeGradients<Dim>& G, const PointGeometry<Dim>& g) {
  return G * g.Finv;  // row a: (F^{-T} G_a)^T
}

template <int Dim>
LocalMatrix expand_vector(const LocalMatrix& scalar) {
  const Eigen::Index n = scalar.rows();
  LocalMatrix out = LocalMatrix::Zero(n * Dim, n * Dim);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (int c = 0; c < Dim; ++c) out(a * Dim + c, b * Dim + c) = scalar(a, b);
  return out;
}

}  // namespace detail

/// Scalar mass matrix int coeff J phi_a phi_b on a cell, using the P2 (degree
/// 2) or P1 (degree 1) table.
template <int Dim>
LocalMatrix scalar_mass(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                        int degree, double coeff = 1.0) {
  const Tabulation<Dim>& tab = degree == 2 ? *cv.p2 : *cv.p1;
  const Eigen::Index n = tab.at[0].values.size();
  LocalMatrix m = LocalMatrix::Zero(n, n);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& v = tab.at[q].values;
    m.noalias() += (coeff * gf.at(cell, q).J * cv.weights[q]) * v * v.transpose();
  }
  return m;
}

/// Vector P2 mass int coeff J w . psi.
template <int Dim>
LocalMatrix vector_mass(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                        double coeff = 1.0) {
  return detail::expand_vector<Dim>(scalar_mass(cv, gf, cell, 2, coeff));
}

/// a_d: int J K^{-1} w . psi on vector P2.
template <int Dim>
LocalMatrix darcy_matrix(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                         const Mat<Dim>& K_inv) {
  const LocalMatrix s = scalar_mass(cv, gf, cell, 2);
  const Eigen::Index n = s.rows();
  LocalMatrix out(n * Dim, n * Dim);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      out.template block<Dim, Dim>(a * Dim, b * Dim) = s(a, b) * K_inv;
  return out;
}

/// a_f: int 2 mu J D(w) : D(psi) with D(v) = sym(grad v F^{-1}).
template <int Dim>
LocalMatrix viscous_matrix(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                           double mu) {
  const int n = cv.p2->at[0].values.size();
  LocalMatrix out = LocalMatrix::Zero(n * Dim, n * Dim);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& geo = gf.at(cell, q);
    const NodeGradients<Dim> g = detail::ale_gradients<Dim>(cv.p2_grads[q], geo);
    const double w = mu * geo.J * cv.weights[q];
    const LocalMatrix gg = g * g.transpose();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < Dim; ++c) {
          out(a * Dim + c, b * Dim + c) += w * gg(a, b);
          for (int e = 0; e < Dim; ++e) out(a * Dim + c, b * Dim + e) += w * g(a, e) * g(b, c);
        }
  }
  return out;
}

/// c_f: int rho J (grad w F^{-1} adv) . psi, advection given per point.
template <int Dim>
LocalMatrix inertia_matrix(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                           double rho, const std::vector<Vec<Dim>>& adv) {
  const int n = cv.p2->at[0].values.size();
  LocalMatrix s = LocalMatrix::Zero(n, n);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& geo = gf.at(cell, q);
    const NodeGradients<Dim> g = detail::ale_gradients<Dim>(cv.p2_grads[q], geo);
    const NodeValues ga = g * adv[q];
    s.noalias() += (rho * geo.J * cv.weights[q]) * cv.p2->at[q].values * ga.transpose();
  }
  return detail::expand_vector<Dim>(s);
}

/// B(m, b*Dim+e) = int chi_m J (F^{-T} grad phi_b)_e, so that
/// b(p, psi) = p^T B psi. Rows: P1 nodes; columns: vector P2 DOFs.
template <int Dim>
LocalMatrix divergence_matrix(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf,
                              Index cell) {
  const int n = cv.p2->at[0].values.size();
  const int m = cv.p1->at[0].values.size();
  LocalMatrix out = LocalMatrix::Zero(m, n * Dim);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& geo = gf.at(cell, q);
    const NodeGradients<Dim> g = detail::ale_gradients<Dim>(cv.p2_grads[q], geo);
    const auto& chi = cv.p1->at[q].values;
    const double w = geo.J * cv.weights[q];
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < Dim; ++e) out.col(b * Dim + e) += (w * g(b, e)) * chi;
  }
  return out;
}

/// Elastic form a_s(u; psi) = int F S(E(u, u~)) : grad psi, split as
/// stiffness * u + offset (the form is affine in u).
struct ElasticParts {
  LocalMatrix stiffness;
  LocalVector offset;
};

template <int Dim>
ElasticParts elastic_parts(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                           double lambda, double mu) {
  const int n = cv.p2->at[0].values.size();
  ElasticParts out{LocalMatrix::Zero(n * Dim, n * Dim), LocalVector::Zero(n * Dim)};
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& geo = gf.at(cell, q);
    const auto& G = cv.p2_grads[q];
    const double w = cv.weights[q];
    const Mat<Dim> S0 = svk_stress<Dim>(green_lagrange<Dim>(Mat<Dim>::Identity(), geo.F), lambda, mu);
    // FS G_a gives the test row block for node a
    const NodeGradients<Dim> FSG0 = G * (geo.F * S0).transpose();
    for (int a = 0; a < n; ++a) out.offset.template segment<Dim>(a * Dim) += w * FSG0.row(a).transpose();
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < Dim; ++e) {
        // E = 1/2 sym(grad u^T F) for u = phi_b e_e: 1/2 sym(G_b f_e^T), f_e = F^T e_e
        const Vec<Dim> fe = geo.F.row(e).transpose();
        const Mat<Dim> E = 0.25 * (G.row(b).transpose() * fe.transpose() + fe * G.row(b));
        const Mat<Dim> FS = geo.F * svk_stress<Dim>(E, lambda, mu);
        const NodeGradients<Dim> col = G * FS.transpose();
        for (int a = 0; a < n; ++a)
          out.stiffness.col(b * Dim + e).template segment<Dim>(a * Dim) += w * col.row(a).transpose();
      }
  }
  return out;
}

/// Which interface terms to include.
struct InterfaceTerms {
  bool penalty = true;
  bool pressure = true;
  bool kinetic = true;
  bool bjs = true;
};

/// Local interface matrix over [v_f (fluid cell) | v_s | q | p_d (solid cell)].
template <int Dim>
struct InterfaceLocal {
  int n2 = 0;  // P2 nodes per cell
  int n1 = 0;  // P1 nodes per cell
  Eigen::MatrixXd A;
  int vf() const { return 0; }
  int vs() const { return n2 * Dim; }
  int q() const { return 2 * n2 * Dim; }
  int pd() const { return 3 * n2 * Dim; }
  int size() const { return 3 * n2 * Dim + n1; }
};

struct InterfaceCoefficients {
  double tau = 1.0;
  double rho_f = 1.0;
  double gamma = 1.0;
};

/// d^k on one interface facet. `vf_tilde` are the fluid-cell nodal values of
/// the extrapolated fluid velocity (kinetic term), `K_inv_sqrt` the BJS weight.
template <int Dim>
InterfaceLocal<Dim> interface_matrix(const Discretization<Dim>& d,
                                     const std::vector<FacetPoint<Dim>>& points,
                                     const CellNodalValues<Dim>& vf_tilde,
                                     const InterfaceCoefficients& k, const Mat<Dim>& K_inv_sqrt,
                                     const InterfaceTerms& terms = {}) {
  InterfaceLocal<Dim> out;
  out.n2 = d.p2().num_nodes();
  out.n1 = d.p1().num_nodes();
  const int N = out.size();
  out.A = Eigen::MatrixXd::Zero(N, N);
  // W: velocity of each local DOF in (w_f - w_s - w_d); T: tangential part of
  // (w_f - w_s). Columns are DOFs.
  Eigen::Matrix<double, Dim, Eigen::Dynamic> W(Dim, N), T(Dim, N), K(Dim, N);
  Eigen::VectorXd chi(N);
  for (const auto& p : points) {
    const auto bf = d.p2().eval_unchecked(p.xi_f);
    const auto bs = d.p2().eval_unchecked(p.xi_s);
    const auto b1 = d.p1().eval_unchecked(p.xi_s);
    W.setZero();
    T.setZero();
    K.setZero();
    chi.setZero();
    for (int a = 0; a < out.n2; ++a)
      for (int c = 0; c < Dim; ++c) {
        W(c, out.vf() + a * Dim + c) = bf.values[a];
        W(c, out.vs() + a * Dim + c) = -bs.values[a];
        W(c, out.q() + a * Dim + c) = -bs.values[a];
        T(c, out.vf() + a * Dim + c) = bf.values[a];
        T(c, out.vs() + a * Dim + c) = -bs.values[a];
        // (psi_s - psi_f) for the kinetic correction
        K(c, out.vf() + a * Dim + c) = -bf.values[a];
        K(c, out.vs() + a * Dim + c) = bs.values[a];
      }
    for (int m = 0; m < out.n1; ++m) chi[out.pd() + m] = b1.values[m];
    const double w = p.weight * p.Js;
    const Eigen::RowVectorXd Wn = p.n.transpose() * W;
    if (terms.penalty) out.A.noalias() += (k.tau * w) * Wn.transpose() * Wn;
    if (terms.pressure) out.A.noalias() += w * Wn.transpose() * chi.transpose();
    if (terms.kinetic) {
      Vec<Dim> vt = vf_tilde.transpose() * bf.values;
      Eigen::RowVectorXd trial = Eigen::RowVectorXd::Zero(N);
      for (int a = 0; a < out.n2; ++a)
        for (int c = 0; c < Dim; ++c) trial[out.vf() + a * Dim + c] = bf.values[a] * vt[c];
      const Eigen::RowVectorXd Kn = p.n.transpose() * K;
      out.A.noalias() += (0.5 * k.rho_f * w) * Kn.transpose() * trial;
    }
    if (terms.bjs) {
      const Mat<Dim> M = p.P * K_inv_sqrt * p.P;
      out.A.noalias() += (k.gamma * w) * T.transpose() * M * T;
    }
  }
  return out;
}

/// Mesh-extension stiffness on a fluid cell: int J (lambda tr G_b tr G_a +
/// mu (G_b + G_b^T) : G_a), G = e_c g^T, at the geometry in gf.
template <int Dim>
LocalMatrix extension_matrix(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell,
                             double lambda, double mu) {
  const int n = cv.p2->at[0].values.size();
  LocalMatrix out = LocalMatrix::Zero(n * Dim, n * Dim);
  for (std::size_t q = 0; q < cv.size(); ++q) {
    const auto& geo = gf.at(cell, q);
    const NodeGradients<Dim> g = detail::ale_gradients<Dim>(cv.p2_grads[q], geo);
    const double w = geo.J * cv.weights[q];
    const LocalMatrix gg = g * g.transpose();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < Dim; ++c) {
          out(a * Dim + c, b * Dim + c) += w * mu * gg(a, b);
          for (int e = 0; e < Dim; ++e)
            out(a * Dim + c, b * Dim + e) += w * (lambda * g(a, c) * g(b, e) + mu * g(a, e) * g(b, c));
        }
  }
  return out;
}

/// Deformed volume int J of a cell.
template <int Dim>
double deformed_volume(const CellValues<Dim>& cv, const GeometricFields<Dim>& gf, Index cell) {
  double v = 0.0;
  for (std::size_t q = 0; q < cv.size(); ++q) v += gf.at(cell, q).J * cv.weights[q];
  return v;
}

}  // namespace fpsi
