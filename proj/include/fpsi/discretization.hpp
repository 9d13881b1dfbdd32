#pragma once

#include "fpsi/block_system.hpp"
#include "fpsi/function_space.hpp"
#include "fpsi/mesh.hpp"
#include "fpsi/quadrature.hpp"

#include <memory>
#include <optional>
#include <set>

namespace fpsi {

struct DiscretizationOptions {
  /// Fluid boundary markers carrying Dirichlet velocity data.
  std::set<Marker> fluid_dirichlet;
  int cell_quadrature_degree = 6;
  int facet_quadrature_degree = 6;
};

/// Every space, rule and table the forms need for one mesh.
///
/// Taylor-Hood pairs: P2 vector velocities (v_f on the fluid, v_s and q on the
/// solid) with P1 pressures. Displacement and mesh velocity live in a global P2
/// vector space; the mesh-extension solve uses a fluid-only copy with the outer
/// fluid boundary and the interface constrained.
template <int Dim>
class Discretization {
 public:
  Discretization(std::shared_ptr<const Mesh<Dim>> mesh, DiscretizationOptions options = {})
      : mesh_(std::move(mesh)),
        options_(options),
        p2_(2),
        p1_(1),
        cell_rule_(quadrature<Dim>(options.cell_quadrature_degree)),
        facet_rule_(facet_quadrature<Dim>(options.facet_quadrature_degree)),
        p2_tab_(p2_, cell_rule_),
        p1_tab_(p1_, cell_rule_) {
    const Mesh<Dim>& m = *mesh_;
    const bool fluid = m.count_cells(Subdomain::Fluid) > 0;
    const bool solid = m.count_cells(Subdomain::Solid) > 0;
    for (Marker mk : options.fluid_dirichlet)
      if (mk == Marker::SolidFixed || mk == Marker::Interface)
        throw ConfigError("fluid Dirichlet markers must be GAMMA_F0 or GAMMA_OUT");

    if (fluid) {
      std::set<Marker> vf_bc;
      for (Marker mk : options.fluid_dirichlet)
        if (m.has_marker(mk)) vf_bc.insert(mk);
      vf_.emplace(m, Subdomain::Fluid, Dim, 2, vf_bc);
      pf_.emplace(m, Subdomain::Fluid, 1, 1);
      std::set<Marker> ext_bc;
      for (Marker mk : {Marker::FluidInlet, Marker::FluidOutlet, Marker::Interface})
        if (m.has_marker(mk)) ext_bc.insert(mk);
      ext_.emplace(m, Subdomain::Fluid, Dim, 2, ext_bc);
      // The pressure level is free when every fluid boundary facet carries
      // velocity data; pin one P1 node then.
      bool natural = false;
      for (const auto& f : m.facets())
        if ((f.marker == Marker::FluidInlet || f.marker == Marker::FluidOutlet) &&
            !vf_bc.count(f.marker))
          natural = true;
      if (m.has_marker(Marker::Interface)) natural = true;
      if (!natural) pinned_pf_ = 0;
    }
    if (solid) {
      std::set<Marker> bc;
      if (m.has_marker(Marker::SolidFixed)) bc.insert(Marker::SolidFixed);
      vs_.emplace(m, Subdomain::Solid, Dim, 2, bc);
      q_.emplace(m, Subdomain::Solid, Dim, 2);
      pd_.emplace(m, Subdomain::Solid, 1, 1, bc);
    }
    disp_.emplace(m, std::nullopt, Dim, 2);

    std::array<Index, kNumBlocks> sizes{};
    for (Block b : kAllBlocks)
      if (const auto* s = space_ptr(b)) sizes[static_cast<int>(b)] = s->num_dofs();
    layout_ = BlockLayout(sizes);

    interface_ = extract_interface(m);
    for (Marker mk : {Marker::FluidInlet, Marker::FluidOutlet})
      for (auto& f : m.boundary_facets(mk)) fluid_boundary_.push_back(f);
  }

  const Mesh<Dim>& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh<Dim>> mesh_ptr() const { return mesh_; }
  const DiscretizationOptions& options() const { return options_; }
  const BlockLayout& layout() const { return layout_; }

  bool has(Block b) const { return space_ptr(b) != nullptr; }
  bool has_fluid() const { return vf_.has_value(); }
  bool has_solid() const { return vs_.has_value(); }

  const FunctionSpace<Dim>& space(Block b) const {
    const auto* s = space_ptr(b);
    if (!s) throw Error("block " + std::string(to_string(b)) + " is not present");
    return *s;
  }
  const FunctionSpace<Dim>& displacement_space() const { return *disp_; }
  const FunctionSpace<Dim>& extension_space() const {
    if (!ext_) throw Error("mesh has no fluid region");
    return *ext_;
  }

  const ReferenceElement<Dim>& p2() const { return p2_; }
  const ReferenceElement<Dim>& p1() const { return p1_; }
  const QuadratureRule<Dim>& cell_rule() const { return cell_rule_; }
  const QuadratureRule<Dim - 1>& facet_rule() const { return facet_rule_; }
  const Tabulation<Dim>& p2_table() const { return p2_tab_; }
  const Tabulation<Dim>& p1_table() const { return p1_tab_; }

  const std::vector<InterfaceFacet<Dim>>& interface() const { return interface_; }
  /// GAMMA_F0 and GAMMA_OUT facets.
  const std::vector<BoundaryFacet<Dim>>& fluid_boundary() const { return fluid_boundary_; }

  /// Local p_f DOF fixed to remove the constant-pressure mode, if any.
  std::optional<Index> pinned_fluid_pressure() const { return pinned_pf_; }

  /// Node of the displacement space carrying node n of space s.
  Index displacement_node(const FunctionSpace<Dim>& s, Index n) const {
    return disp_->entity_node(s.node_entity(n));
  }

 private:
  const FunctionSpace<Dim>* space_ptr(Block b) const {
    const std::optional<FunctionSpace<Dim>>* p = nullptr;
    switch (b) {
      case Block::Vf: p = &vf_; break;
      case Block::Vs: p = &vs_; break;
      case Block::Q: p = &q_; break;
      case Block::Pf: p = &pf_; break;
      case Block::Pd: p = &pd_; break;
    }
    return p && p->has_value() ? &**p : nullptr;
  }

  std::shared_ptr<const Mesh<Dim>> mesh_;
  DiscretizationOptions options_;
  ReferenceElement<Dim> p2_, p1_;
  QuadratureRule<Dim> cell_rule_;
  QuadratureRule<Dim - 1> facet_rule_;
  Tabulation<Dim> p2_tab_, p1_tab_;
  std::optional<FunctionSpace<Dim>> vf_, vs_, q_, pf_, pd_, disp_, ext_;
  BlockLayout layout_;
  std::vector<InterfaceFacet<Dim>> interface_;
  std::vector<BoundaryFacet<Dim>> fluid_boundary_;
  std::optional<Index> pinned_pf_;
};

}  // namespace fpsi
