#ifndef RSD_FEM_HPP
#define RSD_FEM_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rsd/csr.hpp"
#include "rsd/grid.hpp"
#include "rsd/pde.hpp"
#include "rsd/tree.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// Dense element matrix of one rectangular bilinear element, (4c)x(4c),
/// row-major, local DOF layout: node-major counter-clockwise
/// ((x,y),(x+1,y),(x+1,y+1),(x,y+1)) with components interleaved per node.
struct ElementMatrix {
  int size = 0;
  std::vector<double> data;
  double& operator()(int i, int j) { return data[i * size + j]; }
  double operator()(int i, int j) const { return data[i * size + j]; }
};

/// Exact element matrix via 2x2 Gauss quadrature (exact for bilinear
/// stiffness, mass and grad-div terms on rectangles).
///
/// The elasticity operator is assembled in the standard symmetric form
/// mu*grad(u):grad(w) + (lambda+mu)*(div u)(div w) by default;
/// literal_grad_div_sign flips the grad-div sign (the non-SPD variant).
ElementMatrix element_matrix(PdeKind kind, double hx, double hy,
                             bool literal_grad_div_sign = false);

/// Assembles the global interior-DOF system with Dirichlet rows/columns
/// eliminated. Throws ConfigError when grid.components does not match the
/// operator.
CsrMatrix assemble(const Grid& grid, PdeKind kind,
                   bool literal_grad_div_sign = false);

/// Splits an interior node's interface block by element side: the first
/// matrix collects contributions from elements strictly left of the
/// interface column, the second from elements strictly right. Their sum
/// equals the interface block of the assembled matrix. The split is an
/// assembly-level notion, so the operator kind is required.
std::pair<CsrMatrix, CsrMatrix> split_interface_matrix(
    const Grid& grid, PdeKind kind, const TreeNode& node,
    bool literal_grad_div_sign = false);

/// Random exact solution with entries uniform in [-1, 1] (seeded,
/// bit-reproducible) and the matching right-hand side f = K u*.
std::pair<Vector, Vector> manufactured_problem(const CsrMatrix& K,
                                               std::uint64_t seed);

}  // namespace rsd

#endif
