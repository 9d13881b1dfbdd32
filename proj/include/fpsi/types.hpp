#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpsi {

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

using Index = int;

/// Cell subdomain tags.
enum class Subdomain : int { Fluid = 1, Solid = 2 };

/// Boundary and interface facet markers.
enum class Marker : int {
  FluidInlet = 11,   // Gamma_f0: fluid Dirichlet / inlet boundary
  FluidOutlet = 12,  // Gamma_out: open outflow boundary
  SolidFixed = 13,   // Gamma_s0: clamped, drained structure boundary
  Interface = 14,    // Gamma_fs: fluid-structure interface
};

inline constexpr std::array<Marker, 4> kAllMarkers{Marker::FluidInlet, Marker::FluidOutlet,
                                                   Marker::SolidFixed, Marker::Interface};

inline std::string_view to_string(Subdomain s) {
  return s == Subdomain::Fluid ? "FLUID" : "SOLID";
}

inline std::string_view to_string(Marker m) {
  switch (m) {
    case Marker::FluidInlet: return "GAMMA_F0";
    case Marker::FluidOutlet: return "GAMMA_OUT";
    case Marker::SolidFixed: return "GAMMA_S0";
    case Marker::Interface: return "GAMMA_FS";
  }
  return "?";
}

inline std::optional<Subdomain> parse_subdomain(std::string_view s) {
  if (s == "FLUID" || s == "1") return Subdomain::Fluid;
  if (s == "SOLID" || s == "2") return Subdomain::Solid;
  return std::nullopt;
}

inline std::optional<Marker> parse_marker(std::string_view s) {
  for (Marker m : kAllMarkers)
    if (s == to_string(m) || s == std::to_string(static_cast<int>(m))) return m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Errors. Everything derives from fpsi::Error so the CLI can map categories to
// exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class DegenerateDeformation : public Error {
 public:
  DegenerateDeformation(Index cell, double jacobian)
      : Error("degenerate deformation in cell " + std::to_string(cell) +
              ": J = " + std::to_string(jacobian)),
        cell_(cell),
        jacobian_(jacobian) {}
  Index cell() const { return cell_; }
  double jacobian() const { return jacobian_; }

 private:
  Index cell_;
  double jacobian_;
};

}  // namespace fpsi
