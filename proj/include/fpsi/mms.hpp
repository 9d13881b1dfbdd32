#pragma once

#include "fpsi/convergence.hpp"
#include "fpsi/generators.hpp"
#include "fpsi/timestepper.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace fpsi::mms {

// Second derivatives in (x, y, t) by nesting forward-mode AutoDiff.
using Inner = Eigen::AutoDiffScalar<Eigen::Vector3d>;
using Scalar = Eigen::AutoDiffScalar<Eigen::Matrix<Inner, 3, 1>>;

inline constexpr double kPi = std::numbers::pi;

struct Jet {
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();  // d/dx, d/dy, d/dt
  Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
};

template <std::size_t N>
using Field = std::function<std::array<Scalar, N>(const Scalar&, const Scalar&, const Scalar&)>;

template <std::size_t N>
std::array<Jet, N> jets(const Field<N>& f, const Vec<2>& x, double t) {
  const double v[3] = {x[0], x[1], t};
  std::array<Scalar, 3> X;
  for (int i = 0; i < 3; ++i) {
    X[i].value() = Inner(v[i], 3, i);
    X[i].derivatives() = Eigen::Matrix<Inner, 3, 1>::Zero();
    X[i].derivatives()[i] = Inner(1.0, Eigen::Vector3d::Zero());
  }
  const auto r = f(X[0], X[1], X[2]);
  std::array<Jet, N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out[k].value = r[k].value().value();
    // constant expressions carry empty derivative vectors
    if (r[k].value().derivatives().size() == 3) out[k].grad = r[k].value().derivatives();
    if (r[k].derivatives().size() == 3)
      for (int i = 0; i < 3; ++i)
        if (r[k].derivatives()[i].derivatives().size() == 3)
          out[k].hess.row(i) = r[k].derivatives()[i].derivatives().transpose();
  }
  return out;
}

/// Derived quantities of a 2D vector field from its component jets.
struct VectorJet {
  std::array<Jet, 2> c;

  Vec<2> value() const { return {c[0].value, c[1].value}; }
  Vec<2> dt() const { return {c[0].grad[2], c[1].grad[2]}; }
  Mat<2> grad() const {
    Mat<2> g;
    for (int i = 0; i < 2; ++i) g.row(i) = c[i].grad.head<2>().transpose();
    return g;
  }
  double div() const { return c[0].grad[0] + c[1].grad[1]; }
  Vec<2> laplacian() const {
    return {c[0].hess(0, 0) + c[0].hess(1, 1), c[1].hess(0, 0) + c[1].hess(1, 1)};
  }
  Vec<2> grad_div() const {
    return {c[0].hess(0, 0) + c[1].hess(1, 0), c[0].hess(0, 1) + c[1].hess(1, 1)};
  }
};

inline VectorJet vector_jet(const Field<2>& f, const Vec<2>& x, double t) { return {jets(f, x, t)}; }
inline Jet scalar_jet(const Field<1>& f, const Vec<2>& x, double t) { return jets(f, x, t)[0]; }

inline Vec<2> eval2(const Field<2>& f, const Vec<2>& x, double t) { return vector_jet(f, x, t).value(); }
inline double eval1(const Field<1>& f, const Vec<2>& x, double t) { return scalar_jet(f, x, t).value; }

/// L2 norm of (discrete - exact) over the cells of the block's space. With
/// `remove_mean` both functions are compared up to their mean values.
template <class Exact>
double l2_error(const Discretization<2>& d, Block b, const Eigen::VectorXd& x, Exact exact,
                bool remove_mean = false, int degree = 10) {
  const auto& s = d.space(b);
  const Eigen::VectorXd dofs = d.layout().extract(x, b);
  const auto rule = quadrature<2>(degree);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(s.rank());
  if (remove_mean) {
    double vol = 0.0;
    for (Index c : s.cells()) {
      const auto map = d.mesh().cell_map(c);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = rule.weights[q] * std::abs(map.det);
        shift += w * (s.evaluate(dofs, c, rule.points[q]) -
                      Eigen::VectorXd(exact(map.to_physical(rule.points[q]))));
        vol += w;
      }
    }
    shift /= vol;
  }
  double sum = 0.0;
  for (Index c : s.cells()) {
    const auto map = d.mesh().cell_map(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec<2> p = map.to_physical(rule.points[q]);
      const Eigen::VectorXd e = s.evaluate(dofs, c, rule.points[q]) - Eigen::VectorXd(exact(p)) - shift;
      sum += rule.weights[q] * std::abs(map.det) * e.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

// Exact solutions ------------------------------------------------------------

struct FlowSolution {
  Field<2> v;
  Field<1> p;
};

/// Quadratic velocity and linear pressure, reproduced exactly by P2-P1.
inline FlowSolution stokes_polynomial() {
  return {[](const Scalar& x, const Scalar& y, const Scalar&) { return std::array<Scalar, 2>{y * y, x * x}; },
          [](const Scalar& x, const Scalar& y, const Scalar&) { return std::array<Scalar, 1>{x - y}; }};
}

/// Divergence-free velocity from the stream function sin^2(pi x) sin^2(pi y).
inline FlowSolution stokes_trigonometric() {
  using std::cos;
  using std::sin;
  return {[](const Scalar& x, const Scalar& y, const Scalar&) {
            const Scalar sx = sin(kPi * x), sy = sin(kPi * y);
            return std::array<Scalar, 2>{2.0 * kPi * sx * sx * sy * cos(kPi * y),
                                         -2.0 * kPi * sy * sy * sx * cos(kPi * x)};
          },
          [](const Scalar& x, const Scalar& y, const Scalar&) {
            return std::array<Scalar, 1>{cos(kPi * x) * cos(kPi * y)};
          }};
}

/// Time-modulated polynomial flow: zero spatial error, so only the time
/// discretization shows.
inline FlowSolution navier_stokes_unsteady() {
  using std::sin;
  return {[](const Scalar& x, const Scalar& y, const Scalar& t) {
            const Scalar g = sin(2.0 * t) + t;
            return std::array<Scalar, 2>{g * y * y, g * x * x};
          },
          [](const Scalar& x, const Scalar& y, const Scalar& t) {
            return std::array<Scalar, 1>{(sin(2.0 * t) + t) * (x - y)};
          }};
}

struct BiotSolution {
  Field<2> u, q;
  Field<1> p;
};

/// Pore pressure vanishes on the boundary of the unit square, which makes the
/// omitted natural Darcy boundary term consistent.
inline BiotSolution biot_trigonometric() {
  using std::cos;
  using std::sin;
  return {[](const Scalar& x, const Scalar& y, const Scalar&) {
            return std::array<Scalar, 2>{sin(kPi * x) * cos(kPi * y), x * y * (1.0 - y)};
          },
          [](const Scalar& x, const Scalar& y, const Scalar&) {
            return std::array<Scalar, 2>{cos(kPi * x) * sin(kPi * y) + x, sin(kPi * x) * y * y};
          },
          [](const Scalar& x, const Scalar& y, const Scalar&) {
            return std::array<Scalar, 1>{sin(kPi * x) * sin(kPi * y)};
          }};
}

// Problems --------------------------------------------------------------------

/// Unit square n x n with interior vertices moved by up to `jitter` h in each
/// direction (fixed seed), which avoids superconvergence of the structured grid.
inline std::shared_ptr<const Discretization<2>> unit_square(int n, Subdomain tag, double jitter = 0.2) {
  const Mesh<2> grid = rectangle_mesh(n, n, tag, SideMarkers::all(Marker::FluidInlet));
  std::vector<Vec<2>> v = grid.vertices();
  std::mt19937 gen(20240u + static_cast<unsigned>(n));
  std::uniform_real_distribution<double> u(-jitter / n, jitter / n);
  for (auto& x : v) {
    const bool interior = x.minCoeff() > 1e-12 && x.maxCoeff() < 1.0 - 1e-12;
    if (interior) x += Vec<2>(u(gen), u(gen));
  }
  std::vector<Subdomain> tags(grid.num_cells(), tag);
  auto mesh = std::make_shared<const Mesh<2>>(std::move(v), grid.cells(), std::move(tags), grid.facets());
  DiscretizationOptions opt;
  if (tag == Subdomain::Fluid) opt.fluid_dirichlet = {Marker::FluidInlet};
  return std::make_shared<const Discretization<2>>(mesh, opt);
}

/// Fluid-only problem with velocity data on the whole boundary. `unsteady`
/// keeps the time derivative and advection in the forcing.
inline Problem<2> flow_problem(int n, const FlowSolution& s, double rho, double mu, bool unsteady) {
  Problem<2> p;
  p.disc = unit_square(n, Subdomain::Fluid);
  p.material.rho_f = rho;
  p.material.mu_f = mu;
  p.frozen = true;
  p.forms.inertia = unsteady;
  p.dirichlet.vf = [v = s.v](const Vec<2>& x, double t) { return eval2(v, x, t); };
  p.dirichlet.pf = [f = s.p](const Vec<2>& x, double t) { return eval1(f, x, t); };
  p.force = [s, rho, mu, unsteady](double t) {
    BodyForce<2> f;
    f.vf = [s, rho, mu, unsteady, t](const Vec<2>& x) -> Vec<2> {
      const VectorJet v = vector_jet(s.v, x, t);
      const Jet pj = scalar_jet(s.p, x, t);
      Vec<2> r = -mu * (v.laplacian() + v.grad_div()) + pj.grad.head<2>();
      if (unsteady) r += rho * (v.dt() + v.grad() * v.value());
      return r;
    };
    f.pf = [s, t](const Vec<2>& x) { return vector_jet(s.v, x, t).div(); };
    return f;
  };
  return p;
}

/// Steady Biot system on the unit square; the v_s unknown acts as the
/// displacement (elastic closure with unit factor).
inline Problem<2> biot_problem(int n, const BiotSolution& s, double lambda, double mu, double K) {
  Problem<2> p;
  p.disc = unit_square(n, Subdomain::Solid);
  p.material.lambda_s = lambda;
  p.material.mu_s = mu;
  p.material.K = K * Mat<2>::Identity();
  p.frozen = true;
  p.forms.interface = {false, false, false, false};
  p.dirichlet.vs = [u = s.u](const Vec<2>& x, double t) { return eval2(u, x, t); };
  p.dirichlet.pd = [f = s.p](const Vec<2>& x, double t) { return eval1(f, x, t); };
  p.force = [s, lambda, mu, K](double t) {
    BodyForce<2> f;
    f.vs = [s, lambda, mu, t](const Vec<2>& x) -> Vec<2> {
      const VectorJet u = vector_jet(s.u, x, t);
      return -0.5 * lambda * u.grad_div() - 0.5 * mu * (u.laplacian() + u.grad_div()) +
             scalar_jet(s.p, x, t).grad.head<2>();
    };
    f.q = [s, K, t](const Vec<2>& x) -> Vec<2> {
      return eval2(s.q, x, t) / K + scalar_jet(s.p, x, t).grad.head<2>();
    };
    f.pd = [s, t](const Vec<2>& x) { return vector_jet(s.u, x, t).div() + vector_jet(s.q, x, t).div(); };
    return f;
  };
  return p;
}

// Studies ---------------------------------------------------------------------

struct FlowErrors {
  double v = 0.0, p = 0.0;
};

inline FlowErrors stokes_errors(int n, const FlowSolution& s) {
  const auto p = flow_problem(n, s, 1.0, 1.0, false);
  const Fields f = solve_steady(p);
  const auto& d = *p.disc;
  return {l2_error(d, Block::Vf, f.x, [&](const Vec<2>& x) { return eval2(s.v, x, 0.0); }),
          l2_error(d, Block::Pf, f.x, [&](const Vec<2>& x) { return Vec<1>(eval1(s.p, x, 0.0)); },
                   true)};
}

struct BiotErrors {
  double u = 0.0, q = 0.0, p = 0.0;
};

inline BiotErrors biot_errors(int n, const BiotSolution& s = biot_trigonometric()) {
  const auto p = biot_problem(n, s, 1.0, 1.0, 1.0);
  const Fields f = solve_steady(p);
  const auto& d = *p.disc;
  return {l2_error(d, Block::Vs, f.x, [&](const Vec<2>& x) { return eval2(s.u, x, 0.0); }),
          l2_error(d, Block::Q, f.x, [&](const Vec<2>& x) { return eval2(s.q, x, 0.0); }),
          l2_error(d, Block::Pd, f.x, [&](const Vec<2>& x) { return Vec<1>(eval1(s.p, x, 0.0)); })};
}

/// Run the unsteady flow from its exact initial state to t_end.
inline FlowErrors time_errors(int n, int order, double dt, double t_end,
                              const FlowSolution& s = navier_stokes_unsteady()) {
  auto p = flow_problem(n, s, 1.0, 0.1, true);
  p.order = order;
  p.dt = dt;
  const auto& d = *p.disc;
  State st = rest_state(d);
  d.layout().insert(st.history[0].x, Block::Vf,
                    d.space(Block::Vf).interpolate([&](const Vec<2>& x) -> Eigen::VectorXd {
                      return eval2(s.v, x, 0.0);
                    }));
  const int steps = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k < steps; ++k) st = advance_step(p, st);
  const double t = st.time;
  return {l2_error(d, Block::Vf, st.current().x, [&](const Vec<2>& x) { return eval2(s.v, x, t); }),
          l2_error(d, Block::Pf, st.current().x,
                   [&](const Vec<2>& x) { return Vec<1>(eval1(s.p, x, t)); }, true)};
}

struct Study {
  std::string name;
  std::vector<ConvergenceTable> tables;
};

inline std::vector<int> resolutions(int base, int levels) {
  if (levels < 3) throw ConfigError("need >= 3 levels");
  if (base < 1) throw ConfigError("base resolution must be positive");
  std::vector<int> n;
  for (int l = 0; l < levels; ++l) n.push_back(base << l);
  return n;
}

inline Study stokes_study(int base = 8, int levels = 4) {
  std::vector<double> h, ev, ep;
  for (int n : resolutions(base, levels)) {
    const auto e = stokes_errors(n, stokes_trigonometric());
    h.push_back(1.0 / n);
    ev.push_back(e.v);
    ep.push_back(e.p);
  }
  return {"stokes", {convergence_table(h, ev, "velocity L2"), convergence_table(h, ep, "pressure L2")}};
}

inline Study biot_study(int base = 4, int levels = 4) {
  std::vector<double> h, eu, eq, ep;
  for (int n : resolutions(base, levels)) {
    const auto e = biot_errors(n);
    h.push_back(1.0 / n);
    eu.push_back(e.u);
    eq.push_back(e.q);
    ep.push_back(e.p);
  }
  return {"biot",
          {convergence_table(h, eu, "displacement L2"), convergence_table(h, eq, "flux q L2"),
           convergence_table(h, ep, "pore pressure L2")}};
}

/// Temporal study on a fixed mesh: dt0, dt0/2, ... to t_end.
inline Study time_study(int order, int levels = 4, int n = 8, double dt0 = 0.1, double t_end = 1.0) {
  if (levels < 3) throw ConfigError("need >= 3 levels");
  std::vector<double> dt, ev;
  for (int l = 0; l < levels; ++l) {
    dt.push_back(dt0 / (1 << l));
    ev.push_back(time_errors(n, order, dt.back(), t_end).v);
  }
  return {"time_bdf" + std::to_string(order), {convergence_table(dt, ev, "velocity L2 at t_end")}};
}

}  // namespace fpsi::mms
