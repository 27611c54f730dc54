#pragma once

#include <iosfwd>
#include <string>

#include "tfem/mesh.hpp"

namespace tfem {

// Plain-text mesh format:
//   n <dim>
//   v <count>   followed by one coordinate line per vertex
//   c <count>   followed by cell vertex-id lines with a trailing region tag
//   d <count>   followed by Dirichlet facet vertex-id lines
// Whitespace separated; '#' starts a comment.

void write_mesh(std::ostream& os, const SimplicialComplex& c);
SimplicialComplex read_mesh(std::istream& is);

void write_mesh_file(const std::string& path, const SimplicialComplex& c);
SimplicialComplex read_mesh_file(const std::string& path);

}  // namespace tfem
