#include "rsd/tree.hpp"

#include <numeric>
#include <string>

namespace rsd {

DomainTree build_tree(int p) {
  if (p < 2 || (p & (p - 1)) != 0)
    throw ConfigError("build_tree: P must be a power of two >= 2, got " +
                      std::to_string(p));

  int height = 0;
  while ((1 << height) < p) ++height;

  DomainTree tree;
  tree.leaf_count_ = p;
  tree.height_ = height;
  tree.nodes_.resize(static_cast<std::size_t>(2 * p - 1));

  for (index_t id = 0; id < static_cast<index_t>(tree.nodes_.size()); ++id) {
    TreeNode& nd = tree.nodes_[id];
    nd.id = id;

    int level = 0;
    while ((1 << (level + 1)) - 1 <= id) ++level;
    nd.level = level;
    nd.height_below = height - level;

    const int pos = id - ((1 << level) - 1);      // position within level
    const int span = p >> level;                  // leaves per node
    nd.leaf_lo = pos * span;
    nd.leaf_hi = nd.leaf_lo + span;

    if (span > 1) {
      nd.left_child = 2 * id + 1;
      nd.right_child = 2 * id + 2;
      const int mid = nd.leaf_lo + span / 2;
      nd.hat_left_leaf = mid - 1;
      nd.hat_right_leaf = mid;
      nd.owner_rank = nd.hat_left_leaf;
    } else {
      nd.owner_rank = nd.leaf_lo;
    }
  }
  return tree;
}

void compute_index_sets(DomainTree& tree, const Grid& grid) {
  if (tree.leaf_count() != grid.p)
    throw ConfigError("compute_index_sets: tree and grid disagree on P");

  const index_t cols_per_leaf = grid.n - 1;  // element columns per leaf
  const index_t width = (grid.ny - 2) * grid.components;  // DOFs per column

  for (TreeNode& nd : tree.nodes()) {
    nd.x_lo = static_cast<index_t>(nd.leaf_lo) * cols_per_leaf;
    nd.x_hi = static_cast<index_t>(nd.leaf_hi) * cols_per_leaf;

    // Interior columns owned by this node are x_lo+1 .. x_hi-1; the
    // bounding columns are either domain boundary or an ancestor interface.
    nd.dof_begin = nd.x_lo * width;
    nd.dof_end = (nd.x_hi - 1) * width;

    if (!nd.is_leaf()) {
      const int mid = (nd.leaf_lo + nd.leaf_hi) / 2;
      nd.interface_col = static_cast<index_t>(mid) * cols_per_leaf;
      nd.iface_begin = (nd.interface_col - 1) * width;
      nd.iface_end = nd.interface_col * width;

      nd.idx_VL.resize(static_cast<std::size_t>(nd.iface_begin - nd.dof_begin));
      std::iota(nd.idx_VL.begin(), nd.idx_VL.end(), nd.dof_begin);
      nd.idx_I.resize(static_cast<std::size_t>(width));
      std::iota(nd.idx_I.begin(), nd.idx_I.end(), nd.iface_begin);
      nd.idx_VR.resize(static_cast<std::size_t>(nd.dof_end - nd.iface_end));
      std::iota(nd.idx_VR.begin(), nd.idx_VR.end(), nd.iface_end);
    }
  }
}

}  // namespace rsd
