#pragma once

#include "fpsi/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace fpsi {

inline constexpr double kDefaultMinJacobian = 1e-8;

template <int Dim>
struct DeformationState {
  Mat<Dim> F;
  double J = 1.0;
  Mat<Dim> Finv;
  Mat<Dim> FinvT;
};

/// F = I + grad_u with its determinant and inverses. Throws
/// DegenerateDeformation when J <= j_min.
template <int Dim>
DeformationState<Dim> deformation_state(const Mat<Dim>& grad_u, Index cell = -1,
                                        double j_min = kDefaultMinJacobian) {
  DeformationState<Dim> s;
  s.F = Mat<Dim>::Identity() + grad_u;
  s.J = s.F.determinant();
  if (!(s.J > j_min)) throw DegenerateDeformation(cell, s.J);
  s.Finv = s.F.inverse();
  s.FinvT = s.Finv.transpose();
  return s;
}

template <int Dim>
Mat<Dim> sym(const Mat<Dim>& a) {
  return 0.5 * (a + a.transpose());
}

/// Two-argument Green-Lagrange strain E(F1, F2) = 1/2 {F1^T F2 - I}_s.
template <int Dim>
Mat<Dim> green_lagrange(const Mat<Dim>& F1, const Mat<Dim>& F2) {
  return 0.5 * sym<Dim>(F1.transpose() * F2 - Mat<Dim>::Identity());
}

/// Second Piola-Kirchhoff stress of a Saint Venant-Kirchhoff material.
template <int Dim>
Mat<Dim> svk_stress(const Mat<Dim>& E, double lambda_s, double mu_s) {
  return lambda_s * E.trace() * Mat<Dim>::Identity() + 2.0 * mu_s * E;
}

/// Stored energy density lambda/2 (tr E)^2 + mu E:E.
template <int Dim>
double svk_energy_density(const Mat<Dim>& E, double lambda_s, double mu_s) {
  const double tr = E.trace();
  return 0.5 * lambda_s * tr * tr + mu_s * E.squaredNorm();
}

/// Reference-frame fluid rate of strain D = {grad_v F^{-1}}_s.
template <int Dim>
Mat<Dim> fluid_rate_of_strain(const Mat<Dim>& grad_v, const Mat<Dim>& Finv) {
  return sym<Dim>(grad_v * Finv);
}

template <int Dim>
struct PushedNormal {
  Vec<Dim> n;
  double area_factor = 1.0;  // J |F^{-T} n_ref|
};

template <int Dim>
PushedNormal<Dim> pushforward_normal(const Mat<Dim>& FinvT, double J, const Vec<Dim>& n_ref) {
  const Vec<Dim> m = FinvT * n_ref;
  const double len = m.norm();
  if (!(len > 0.0) || !(J > 0.0)) throw DegenerateDeformation(-1, J);
  return {m / len, J * len};
}

/// Physical and porous-medium constants in the g/mm/s unit system.
template <int Dim>
struct MaterialParams {
  double rho_f = 1e-3;    // g/mm^3
  double rho_s = 1.2e-3;  // g/mm^3
  double mu_f = 3e-3;     // g/(mm s)
  double lambda_s = 0.0;  // g/(mm s^2)
  double mu_s = 1.0;      // g/(mm s^2)
  double phi = 0.3;
  double s0 = 0.0;  // mm s^2 / g
  Mat<Dim> K = Mat<Dim>::Identity();  // mm^2
  double gamma = 1.0;

  double rho_p() const { return rho_s * (1.0 - phi) + rho_f * phi; }

  Mat<Dim> K_inv() const { return K.inverse(); }

  /// K^{-1/2} through the symmetric eigendecomposition.
  Mat<Dim> K_inv_sqrt() const {
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> es(K);
    const Vec<Dim> d = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ConfigError(std::string("invalid material parameter: ") + what);
    };
    require(rho_f > 0.0, "rho_f must be positive");
    require(rho_s > 0.0, "rho_s must be positive");
    require(mu_f > 0.0, "mu_f must be positive");
    require(mu_s > 0.0, "mu_s must be positive");
    require(lambda_s >= 0.0, "lambda_s must be non-negative");
    require(phi > 0.0 && phi < 1.0, "phi must lie in (0, 1)");
    require(s0 >= 0.0, "s0 must be non-negative");
    require(gamma >= 0.0, "gamma must be non-negative");
    require((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff(),
            "K must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> es(K);
    require(es.eigenvalues().minCoeff() > 0.0, "K must be positive definite");
  }
};

template <int Dim>
double mixture_density(const MaterialParams<Dim>& p) {
  return p.rho_p();
}

struct LameParameters {
  double lambda;
  double mu;
};

inline LameParameters lame_from_young(double young, double poisson) {
  return {young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson)),
          young / (2.0 * (1.0 + poisson))};
}

}  // namespace fpsi
