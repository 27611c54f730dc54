#include "tfem/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tfem {

namespace {

// strip comments, return token stream over the whole input
std::stringstream tokenize(std::istream& is) {
  std::stringstream tokens;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    tokens << line << '\n';
  }
  return tokens;
}

}  // namespace

void write_mesh(std::ostream& os, const SimplicialComplex& c) {
  os << std::setprecision(17);
  const int n = c.dim;
  os << "n " << n << "\n";
  os << "v " << c.vertices.size() << "\n";
  for (const auto& v : c.vertices) {
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << v[i];
    os << "\n";
  }
  os << "c " << c.num_cells() << "\n";
  for (int ci = 0; ci < c.num_cells(); ++ci) {
    for (int v : c.cell(ci).vertex_ids) os << v << " ";
    os << c.region_tags[ci] << "\n";
  }
  os << "d " << c.dirichlet_facets.size() << "\n";
  for (int f : c.dirichlet_facets) {
    const auto& ids = c.simplices[n - 1][f].vertex_ids;
    for (size_t i = 0; i < ids.size(); ++i) os << (i ? " " : "") << ids[i];
    os << "\n";
  }
}

SimplicialComplex read_mesh(std::istream& is) {
  auto tok = tokenize(is);
  std::string key;
  int n = 0;
  if (!(tok >> key >> n) || key != "n") throw Error("mesh file: expected 'n <dim>'");

  int nv = 0;
  if (!(tok >> key >> nv) || key != "v") throw Error("mesh file: expected 'v <count>'");
  std::vector<Vec> vertices(nv, Vec(n));
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < n; ++d)
      if (!(tok >> vertices[i][d])) throw Error("mesh file: bad vertex line");

  int nc = 0;
  if (!(tok >> key >> nc) || key != "c") throw Error("mesh file: expected 'c <count>'");
  std::vector<std::vector<int>> cells(nc, std::vector<int>(n + 1));
  std::vector<int> tags(nc);
  for (int i = 0; i < nc; ++i) {
    for (int d = 0; d <= n; ++d)
      if (!(tok >> cells[i][d])) throw Error("mesh file: bad cell line");
    if (!(tok >> tags[i])) throw Error("mesh file: missing region tag");
  }

  int nd = 0;
  if (!(tok >> key >> nd) || key != "d") throw Error("mesh file: expected 'd <count>'");
  std::vector<std::vector<int>> dirichlet(nd, std::vector<int>(n));
  for (int i = 0; i < nd; ++i)
    for (int d = 0; d < n; ++d)
      if (!(tok >> dirichlet[i][d])) throw Error("mesh file: bad Dirichlet facet line");

  return build_complex(vertices, cells, dirichlet, tags);
}

void write_mesh_file(const std::string& path, const SimplicialComplex& c) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open mesh file for writing: " + path);
  write_mesh(os, c);
}

SimplicialComplex read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open mesh file: " + path);
  return read_mesh(is);
}

}  // namespace tfem
