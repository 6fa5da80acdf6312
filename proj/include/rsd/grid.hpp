#ifndef RSD_GRID_HPP
#define RSD_GRID_HPP

#include <vector>

#include "rsd/config.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// Regular grid over the long-thin domain: P true sub-domains along x, each
/// meshed with N nodes per dimension, adjacent sub-domains sharing one node
/// column. All four boundary edges carry homogeneous Dirichlet conditions
/// and are eliminated from the unknown set.
///
/// Interior DOFs are numbered column by column (x outer, y inner) with the
/// components interleaved per node, so every leaf block is banded with
/// bandwidth O(N*c) and every node-column is a contiguous index range.
class Grid {
 public:
  Grid() = default;

  int p = 0;           // true sub-domain count
  int n = 0;           // nodes per dimension per true sub-domain
  index_t nx = 0;      // global node count along x: p*(n-1)+1
  index_t ny = 0;      // global node count along y: n
  double hx = 1.0;
  double hy = 1.0;
  int components = 1;

  index_t node_count() const { return nx * ny; }
  index_t node_index(index_t ix, index_t iy) const { return ix * ny + iy; }

  bool is_boundary(index_t ix, index_t iy) const {
    return ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1;
  }

  /// Interior DOF index of (node, component), or -1 for eliminated
  /// (boundary) nodes.
  index_t dof(index_t ix, index_t iy, int comp) const {
    if (is_boundary(ix, iy)) return -1;
    return ((ix - 1) * (ny - 2) + (iy - 1)) * components + comp;
  }

  index_t interior_dof_count() const {
    return (nx - 2) * (ny - 2) * components;
  }

  /// Contiguous DOF range [first, last) of the interior node columns
  /// col_lo..col_hi-1 (global column indices; boundary columns yield an
  /// empty range at the clamped end).
  index_t column_dof_begin(index_t col) const {
    return (col - 1) * (ny - 2) * components;
  }

  const std::vector<bool>& dirichlet_mask() const { return dirichlet_mask_; }
  const std::vector<index_t>& dof_map() const { return dof_map_; }

  void finalize();  // fills dirichlet_mask_ and dof_map_

 private:
  std::vector<bool> dirichlet_mask_;   // per node
  std::vector<index_t> dof_map_;       // per (node, component), -1 = eliminated
};

/// Builds the grid for a config. Throws ConfigError for N < 3 or invalid P.
Grid build_grid(const ProblemConfig& config);

}  // namespace rsd

#endif
