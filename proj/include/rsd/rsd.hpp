#ifndef RSD_RSD_HPP
#define RSD_RSD_HPP

#include <atomic>
#include <span>
#include <vector>

#include "rsd/band.hpp"
#include "rsd/csr.hpp"
#include "rsd/grid.hpp"
#include "rsd/pde.hpp"
#include "rsd/tree.hpp"
#include "rsd/types.hpp"

namespace rsd {

enum class Side { Left, Right };

/// Entries of w (indexed by the side's full child sub-domain) at the hat
/// leaf's DOFs, in the leaf's local ordering. Throws on a leaf node or a
/// size mismatch.
Vector restrict_hat(const DomainTree& tree, const TreeNode& node, Side side,
                    std::span<const double> w);

/// Embeds a hat-leaf vector into the side's full child sub-domain with zeros
/// elsewhere. restrict_hat(prolong_hat(v)) == v.
Vector prolong_hat(const DomainTree& tree, const TreeNode& node, Side side,
                   std::span<const double> v);

/// Work counters in the units the method is usually costed in: direct leaf
/// solves and point-to-point exchanges between the two hat-leaf owners.
struct RsdCounters {
  long long leaf_solve_count = 0;
  long long smatvec_count = 0;
  long long point_to_point_message_count = 0;
  std::vector<long long> leaf_solves_per_level;  // by requesting node level
  std::vector<long long> leaf_solves_per_leaf;   // by leaf ordinal
};

/// Per-interior-node blocks. The interface block is kept split by element
/// side: K_II_left + K_II_right equals the assembled interface block exactly
/// because only the two element columns adjacent to the interface touch it.
struct SchurNodeData {
  CsrMatrix K_II_left;
  CsrMatrix K_II_right;
  CsrMatrix K_hatL_I;  // hat-leaf rows x interface columns
  CsrMatrix K_I_hatL;
  CsrMatrix K_hatR_I;
  CsrMatrix K_I_hatR;
  index_t hatL_offset = 0;  // hat ranges relative to node.dof_begin
  index_t hatL_size = 0;
  index_t hatR_offset = 0;
  index_t hatR_size = 0;
};

/// The multi-level Schur preconditioner. Construction extracts all blocks
/// and factorizes the P leaf matrices; application approximates K^{-1} f by
/// recursing over the tree, solving each interface system with a fixed
/// number of inner Krylov steps on the hat-approximated Schur operator.
///
/// The two child recursions and the two hat-leaf solves run as tasks when
/// threading is enabled; results are bitwise identical to the serial path
/// because no floating-point accumulation order depends on the schedule.
class RsdPreconditioner {
 public:
  RsdPreconditioner(const CsrMatrix& K, const Grid& grid,
                    const DomainTree& tree, PdeKind kind, int gamma,
                    bool literal_grad_div_sign = false);

  RsdPreconditioner(const RsdPreconditioner&) = delete;
  RsdPreconditioner& operator=(const RsdPreconditioner&) = delete;

  /// u ~= K^{-1} f over the whole domain (root node).
  void apply(std::span<const double> f, std::span<double> u);

  /// Same, restricted to one tree node's DOF range.
  void apply_at(index_t node_id, std::span<const double> f,
                std::span<double> u);

  /// y = S x for one interior node's (hat-approximated) Schur operator.
  void schur_matvec(index_t node_id, std::span<const double> x,
                    std::span<double> y);

  int gamma() const { return gamma_; }

  /// Test hook: solve every interface system to subspace exactness (inner
  /// step count = interface dimension) instead of gamma steps.
  void set_exact_inner(bool on) { exact_inner_ = on; }

  /// Counters of the most recent application (they reset when one starts).
  RsdCounters counters() const;
  /// Totals since construction or the last reset_counters().
  const RsdCounters& cumulative() const { return cumulative_; }
  void reset_counters();

  const SchurNodeData& node_data(index_t node_id) const;
  const DomainTree& tree() const { return tree_; }

 private:
  struct LiveCounters {
    std::atomic<long long> leaf_solves{0};
    std::atomic<long long> smatvecs{0};
    std::atomic<long long> messages{0};
    std::vector<std::atomic<long long>> per_level;
    std::vector<std::atomic<long long>> per_leaf;
  };

  void run_counted(const TreeNode& node, std::span<const double> f,
                   std::span<double> u);
  void apply_node(const TreeNode& node, std::span<const double> f,
                  std::span<double> u);
  void smatvec_node(const TreeNode& node, const SchurNodeData& d,
                    std::span<const double> x, std::span<double> y);
  void solve_leaf(int leaf_ordinal, int requesting_level,
                  std::span<const double> rhs, std::span<double> out);

  DomainTree tree_;
  int gamma_ = 1;
  bool exact_inner_ = false;
  std::vector<BandedFactorization> leaf_facts_;  // by leaf ordinal
  std::vector<SchurNodeData> node_data_;         // by node id, interior only
  LiveCounters live_;
  RsdCounters cumulative_;
};

}  // namespace rsd

#endif
