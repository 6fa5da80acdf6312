#ifndef RSD_TREE_HPP
#define RSD_TREE_HPP

#include <vector>

#include "rsd/grid.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// One node of the decomposition tree. Leaves are true sub-domains,
/// interior nodes are pseudo sub-domains owning the interface between their
/// children.
///
/// After compute_index_sets, all DOF sets are contiguous index ranges in the
/// grid's column-major numbering and the materialized sorted sets are also
/// kept (idx_VL, idx_VR, idx_I).
struct TreeNode {
  index_t id = -1;
  int level = 0;          // root = 0
  int height_below = 0;
  index_t left_child = -1;
  index_t right_child = -1;
  int leaf_lo = 0;        // owned true sub-domains [leaf_lo, leaf_hi)
  int leaf_hi = 0;

  index_t x_lo = -1;      // owned node columns [x_lo, x_hi], inclusive
  index_t x_hi = -1;
  index_t interface_col = -1;   // interior nodes only

  int hat_left_leaf = -1;   // rightmost leaf of the left subtree (ordinal)
  int hat_right_leaf = -1;  // leftmost leaf of the right subtree (ordinal)
  int owner_rank = -1;      // leaves: own rank; interfaces: rank of the
                            // leaf immediately left of the interface

  index_t dof_begin = 0, dof_end = 0;      // node's full DOF range
  index_t iface_begin = 0, iface_end = 0;  // interface DOF range

  IndexSet idx_VL, idx_VR, idx_I;

  bool is_leaf() const { return left_child < 0; }
  index_t dof_count() const { return dof_end - dof_begin; }
  index_t interface_size() const { return iface_end - iface_begin; }
};

/// Complete binary tree over P true sub-domains, heap layout: node i has
/// children 2i+1 and 2i+2; leaf k is node P-1+k.
class DomainTree {
 public:
  int leaf_count() const { return leaf_count_; }
  int height() const { return height_; }

  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(index_t id) const { return nodes_[id]; }
  TreeNode& node(index_t id) { return nodes_[id]; }
  const TreeNode& root() const { return nodes_[0]; }

  index_t leaf_node_id(int leaf_ordinal) const {
    return static_cast<index_t>(leaf_count_ - 1 + leaf_ordinal);
  }
  const TreeNode& leaf(int leaf_ordinal) const {
    return nodes_[leaf_node_id(leaf_ordinal)];
  }

  std::vector<TreeNode>& nodes() { return nodes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  friend DomainTree build_tree(int p);
  int leaf_count_ = 0;
  int height_ = 0;
  std::vector<TreeNode> nodes_;
};

/// Builds the tree shape (levels, children, hat leaves, owner ranks) for P
/// true sub-domains. Throws ConfigError unless P is a power of two >= 2.
DomainTree build_tree(int p);

/// Fills per-node column ranges, interface columns and DOF index sets from
/// the grid geometry. The tree and grid must come from the same config.
void compute_index_sets(DomainTree& tree, const Grid& grid);

}  // namespace rsd

#endif
