#pragma once

// Mesh readers and writers.
//
// Native format (whitespace separated, '#' starts a comment, 0-based indices):
//
//   DIMENSION 2
//   VERTICES <n>
//   <x> <y>                  (n lines)
//   CELLS <m>
//   <v0> <v1> <v2> <TAG>     TAG is FLUID or SOLID
//   FACETS <k>
//   <v0> <v1> <MARKER>       MARKER is GAMMA_F0, GAMMA_OUT, GAMMA_S0 or GAMMA_FS
//
// Gmsh MSH ASCII 2.2 is read through a physical-tag table.

#include "fpsi/mesh.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>

namespace fpsi {

/// Maps Gmsh physical tags to subdomain tags or facet markers.
struct MshTagMap {
  std::map<int, std::variant<Subdomain, Marker>> entries;

  static MshTagMap defaults() {
    MshTagMap m;
    m.entries[static_cast<int>(Subdomain::Fluid)] = Subdomain::Fluid;
    m.entries[static_cast<int>(Subdomain::Solid)] = Subdomain::Solid;
    for (Marker k : kAllMarkers) m.entries[static_cast<int>(k)] = k;
    return m;
  }
};

namespace detail {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const { return tokens_.at(pos_); }

  std::string next() {
    if (done()) throw MeshError("parse failure: unexpected end of file");
    return tokens_[pos_++];
  }

  long next_int() {
    const std::string t = next();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw MeshError("parse failure: expected integer, got '" + t + "'");
    return v;
  }

  double next_double() {
    const std::string t = next();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw MeshError("parse failure: expected number, got '" + t + "'");
    return v;
  }

  void expect(const std::string& word) {
    const std::string t = next();
    if (t != word) throw MeshError("parse failure: expected '" + word + "', got '" + t + "'");
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

template <int Dim>
Mesh<Dim> read_native_mesh(std::istream& in) {
  detail::TokenReader r(in);
  if (!r.done() && r.peek() == "DIMENSION") {
    r.next();
    if (r.next_int() != Dim) throw MeshError("mesh dimension does not match");
  }
  r.expect("VERTICES");
  const long nv = r.next_int();
  if (nv < 0) throw MeshError("parse failure: negative vertex count");
  std::vector<Vec<Dim>> vertices(nv);
  for (auto& v : vertices)
    for (int i = 0; i < Dim; ++i) v[i] = r.next_double();

  r.expect("CELLS");
  const long nc = r.next_int();
  if (nc < 0) throw MeshError("parse failure: negative cell count");
  std::vector<typename Mesh<Dim>::Cell> cells(nc);
  std::vector<Subdomain> tags(nc);
  for (long c = 0; c < nc; ++c) {
    for (int i = 0; i <= Dim; ++i) cells[c][i] = static_cast<Index>(r.next_int());
    const std::string t = r.next();
    const auto s = parse_subdomain(t);
    if (!s) throw MeshError("parse failure: unknown subdomain tag '" + t + "'");
    tags[c] = *s;
  }

  std::vector<MarkedFacet<Dim>> facets;
  if (!r.done()) {
    r.expect("FACETS");
    const long nf = r.next_int();
    if (nf < 0) throw MeshError("parse failure: negative facet count");
    facets.resize(nf);
    for (auto& f : facets) {
      for (int i = 0; i < Dim; ++i) f.vertices[i] = static_cast<Index>(r.next_int());
      const std::string t = r.next();
      const auto m = parse_marker(t);
      if (!m) throw MeshError("parse failure: unknown facet marker '" + t + "'");
      f.marker = *m;
    }
  }
  if (!r.done()) throw MeshError("parse failure: trailing content after FACETS");
  return Mesh<Dim>(std::move(vertices), std::move(cells), std::move(tags), std::move(facets));
}

template <int Dim>
Mesh<Dim> read_msh22(std::istream& in, const MshTagMap& table = MshTagMap::defaults()) {
  detail::TokenReader r(in);
  r.expect("$MeshFormat");
  const std::string version = r.next();
  if (version.rfind("2.2", 0) != 0) throw MeshError("unsupported MSH version " + version);
  const long file_type = r.next_int();
  if (file_type != 0) throw MeshError("only ASCII MSH files are supported");
  r.next();  // data size
  r.expect("$EndMeshFormat");

  MshTagMap map = table;
  std::map<long, Index> node_index;
  std::vector<Vec<Dim>> vertices;
  std::vector<typename Mesh<Dim>::Cell> cells;
  std::vector<Subdomain> tags;
  std::vector<MarkedFacet<Dim>> facets;

  // Gmsh element type ids for (Dim-1)-simplices and Dim-simplices.
  constexpr int facet_type = Dim == 2 ? 1 : 2;
  constexpr int cell_type = Dim == 2 ? 2 : 4;

  while (!r.done()) {
    const std::string section = r.next();
    if (section == "$PhysicalNames") {
      const long n = r.next_int();
      for (long i = 0; i < n; ++i) {
        r.next_int();  // dimension
        const int tag = static_cast<int>(r.next_int());
        std::string name = r.next();
        if (name.size() >= 2 && name.front() == '"') name = name.substr(1, name.size() - 2);
        if (auto s = parse_subdomain(name)) map.entries[tag] = *s;
        if (auto m = parse_marker(name)) map.entries[tag] = *m;
      }
      r.expect("$EndPhysicalNames");
    } else if (section == "$Nodes") {
      const long n = r.next_int();
      vertices.reserve(n);
      for (long i = 0; i < n; ++i) {
        const long id = r.next_int();
        Vec<Dim> x;
        double xyz[3];
        for (double& c : xyz) c = r.next_double();
        for (int d = 0; d < Dim; ++d) x[d] = xyz[d];
        node_index[id] = static_cast<Index>(vertices.size());
        vertices.push_back(x);
      }
      r.expect("$EndNodes");
    } else if (section == "$Elements") {
      const long n = r.next_int();
      for (long i = 0; i < n; ++i) {
        r.next_int();  // element id
        const int type = static_cast<int>(r.next_int());
        const long ntags = r.next_int();
        std::vector<long> etags(ntags);
        for (auto& t : etags) t = r.next_int();
        int nnodes = 0;
        switch (type) {
          case 15: nnodes = 1; break;
          case 1: nnodes = 2; break;
          case 2: nnodes = 3; break;
          case 4: nnodes = 4; break;
          default: throw MeshError("unsupported MSH element type " + std::to_string(type));
        }
        std::vector<Index> nodes(nnodes);
        for (auto& v : nodes) {
          const long id = r.next_int();
          auto it = node_index.find(id);
          if (it == node_index.end()) throw MeshError("element references unknown node");
          v = it->second;
        }
        if (type != facet_type && type != cell_type) continue;
        if (etags.empty()) throw MeshError("MSH element without physical tag");
        const auto entry = map.entries.find(static_cast<int>(etags[0]));
        if (entry == map.entries.end())
          throw MeshError("unknown physical tag " + std::to_string(etags[0]));
        if (type == cell_type) {
          if (!std::holds_alternative<Subdomain>(entry->second))
            throw MeshError("cell physical tag maps to a facet marker");
          typename Mesh<Dim>::Cell c;
          std::copy(nodes.begin(), nodes.end(), c.begin());
          cells.push_back(c);
          tags.push_back(std::get<Subdomain>(entry->second));
        } else {
          if (!std::holds_alternative<Marker>(entry->second))
            throw MeshError("facet physical tag maps to a subdomain");
          MarkedFacet<Dim> f;
          std::copy(nodes.begin(), nodes.end(), f.vertices.begin());
          f.marker = std::get<Marker>(entry->second);
          facets.push_back(f);
        }
      }
      r.expect("$EndElements");
    } else if (!section.empty() && section[0] == '$') {
      // Skip unknown sections.
      const std::string end = "$End" + section.substr(1);
      while (r.next() != end) {
      }
    } else {
      throw MeshError("parse failure: unexpected token '" + section + "'");
    }
  }
  return Mesh<Dim>(std::move(vertices), std::move(cells), std::move(tags), std::move(facets));
}

/// Loads a mesh, choosing the reader from the file content.
template <int Dim>
Mesh<Dim> load_mesh(const std::filesystem::path& path,
                    const MshTagMap& table = MshTagMap::defaults()) {
  const std::string text = detail::read_file(path);
  std::istringstream in(text);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text.compare(first, 11, "$MeshFormat") == 0)
    return read_msh22<Dim>(in, table);
  return read_native_mesh<Dim>(in);
}

template <int Dim>
void write_native_mesh(const Mesh<Dim>& mesh, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "DIMENSION " << Dim << "\n";
  out << "VERTICES " << mesh.num_vertices() << "\n";
  for (const auto& v : mesh.vertices()) {
    for (int i = 0; i < Dim; ++i) out << (i ? " " : "") << v[i];
    out << "\n";
  }
  out << "CELLS " << mesh.num_cells() << "\n";
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    for (Index v : mesh.cell(c)) out << v << " ";
    out << to_string(mesh.tag(c)) << "\n";
  }
  out << "FACETS " << mesh.facets().size() << "\n";
  for (const auto& f : mesh.facets()) {
    for (Index v : f.vertices) out << v << " ";
    out << to_string(f.marker) << "\n";
  }
}

template <int Dim>
void save_native_mesh(const Mesh<Dim>& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path.string() + "'");
  write_native_mesh(mesh, out);
}

}  // namespace fpsi
