#include <doctest.h>

#include "rsd/grid.hpp"
#include "rsd/tree.hpp"

using namespace rsd;

namespace {

ProblemConfig cfg(int p, int n, PdeKind kind = PdeKind::Poisson) {
  ProblemConfig c;
  c.p = p;
  c.n = n;
  c.pde = kind;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(cfg(2, 3).validate());
  CHECK_NOTHROW(cfg(128, 17).validate());

  auto bad = [](auto mutate) {
    ProblemConfig c = cfg(8, 17);
    mutate(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  bad([](ProblemConfig& c) { c.p = 3; });   // not a power of two
  bad([](ProblemConfig& c) { c.p = 0; });
  bad([](ProblemConfig& c) { c.p = 1; });   // no interface at all
  bad([](ProblemConfig& c) { c.p = -8; });
  bad([](ProblemConfig& c) { c.n = 2; });
  bad([](ProblemConfig& c) { c.gamma = 0; });
  bad([](ProblemConfig& c) { c.tol = 0.0; });
  bad([](ProblemConfig& c) { c.tol = -1.0; });
  bad([](ProblemConfig& c) { c.max_outer = 0; });
  bad([](ProblemConfig& c) { c.hx = -0.5; });
  bad([](ProblemConfig& c) { c.hy = -1.0; });
}

TEST_CASE("mesh spacing defaults to unit sub-domains") {
  Grid g = build_grid(cfg(8, 17));
  CHECK(g.hx == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(g.hy == doctest::Approx(1.0 / 16).epsilon(1e-15));

  // An explicit spacing overrides the automatic one per axis.
  ProblemConfig c = cfg(8, 17);
  c.hx = 2.5;
  Grid stretched = build_grid(c);
  CHECK(stretched.hx == 2.5);
  CHECK(stretched.hy == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("grid dimensions and DOF numbering") {
  Grid g = build_grid(cfg(8, 17));
  CHECK(g.nx == 8 * 16 + 1);
  CHECK(g.ny == 17);
  CHECK(g.components == 1);
  CHECK(g.interior_dof_count() == (g.nx - 2) * (g.ny - 2));

  // Boundary nodes carry no DOF.
  CHECK(g.dof(0, 5, 0) == -1);
  CHECK(g.dof(g.nx - 1, 5, 0) == -1);
  CHECK(g.dof(5, 0, 0) == -1);
  CHECK(g.dof(5, g.ny - 1, 0) == -1);

  // Column-major interior numbering.
  CHECK(g.dof(1, 1, 0) == 0);
  CHECK(g.dof(1, 2, 0) == 1);
  CHECK(g.dof(2, 1, 0) == g.ny - 2);
  CHECK(g.column_dof_begin(1) == 0);
  CHECK(g.column_dof_begin(2) == g.ny - 2);

  // dof_map agrees with the formula everywhere.
  const auto& map = g.dof_map();
  REQUIRE(static_cast<index_t>(map.size()) == g.node_count());
  for (index_t ix = 0; ix < g.nx; ++ix)
    for (index_t iy = 0; iy < g.ny; ++iy)
      CHECK(map[g.node_index(ix, iy)] == g.dof(ix, iy, 0));
}

TEST_CASE("two-component grid interleaves components per node") {
  Grid g = build_grid(cfg(2, 5, PdeKind::WeakCoupled));
  CHECK(g.components == 2);
  CHECK(g.dof(1, 1, 0) == 0);
  CHECK(g.dof(1, 1, 1) == 1);
  CHECK(g.dof(1, 2, 0) == 2);
  CHECK(g.interior_dof_count() == (g.nx - 2) * (g.ny - 2) * 2);
}

TEST_CASE("tree shape for P = 8") {
  DomainTree tree = build_tree(8);
  CHECK(tree.leaf_count() == 8);
  CHECK(tree.height() == 3);
  CHECK(tree.size() == 15);

  const TreeNode& root = tree.root();
  CHECK(root.id == 0);
  CHECK(root.level == 0);
  CHECK(root.height_below == 3);
  CHECK(root.left_child == 1);
  CHECK(root.right_child == 2);
  CHECK(root.leaf_lo == 0);
  CHECK(root.leaf_hi == 8);
  CHECK(root.hat_left_leaf == 3);
  CHECK(root.hat_right_leaf == 4);
  CHECK(root.owner_rank == 3);

  for (int k = 0; k < 8; ++k) {
    const TreeNode& leaf = tree.leaf(k);
    CHECK(leaf.id == 7 + k);
    CHECK(leaf.is_leaf());
    CHECK(leaf.level == 3);
    CHECK(leaf.height_below == 0);
    CHECK(leaf.leaf_lo == k);
    CHECK(leaf.leaf_hi == k + 1);
    CHECK(leaf.owner_rank == k);
  }

  // Second-level node over leaves [4, 8).
  const TreeNode& n2 = tree.node(2);
  CHECK(n2.level == 1);
  CHECK(n2.leaf_lo == 4);
  CHECK(n2.leaf_hi == 8);
  CHECK(n2.hat_left_leaf == 5);
  CHECK(n2.hat_right_leaf == 6);
  CHECK(n2.owner_rank == 5);
}

TEST_CASE("tree rejects invalid leaf counts") {
  CHECK_THROWS_AS(build_tree(0), ConfigError);
  CHECK_THROWS_AS(build_tree(1), ConfigError);
  CHECK_THROWS_AS(build_tree(3), ConfigError);
  CHECK_THROWS_AS(build_tree(12), ConfigError);
  CHECK_NOTHROW(build_tree(2));
  CHECK_NOTHROW(build_tree(128));
}

TEST_CASE("index sets tile the domain") {
  for (int p : {2, 4, 8}) {
    for (int n : {3, 5, 9}) {
      CAPTURE(p);
      CAPTURE(n);
      Grid g = build_grid(cfg(p, n));
      DomainTree tree = build_tree(p);
      compute_index_sets(tree, g);

      const index_t width = (g.ny - 2) * g.components;
      const TreeNode& root = tree.root();
      CHECK(root.dof_begin == 0);
      CHECK(root.dof_end == g.interior_dof_count());

      for (const TreeNode& node : tree.nodes()) {
        // Column ranges cover [k(n-1), (k+1)(n-1)] per leaf subtree.
        CHECK(node.x_lo == node.leaf_lo * (n - 1));
        CHECK(node.x_hi == node.leaf_hi * (n - 1));
        CHECK(node.dof_begin == node.x_lo * width);
        CHECK(node.dof_end == (node.x_hi - 1) * width);

        if (node.is_leaf()) continue;

        const TreeNode& L = tree.node(node.left_child);
        const TreeNode& R = tree.node(node.right_child);

        // Interface column halves the leaf range.
        const int mid = (node.leaf_lo + node.leaf_hi) / 2;
        CHECK(node.interface_col == mid * (n - 1));
        CHECK(node.iface_begin == (node.interface_col - 1) * width);
        CHECK(node.iface_end == node.iface_begin + width);
        CHECK(node.interface_size() == width);

        // Children + interface tile the node's range exactly.
        CHECK(L.dof_begin == node.dof_begin);
        CHECK(L.dof_end == node.iface_begin);
        CHECK(R.dof_begin == node.iface_end);
        CHECK(R.dof_end == node.dof_end);

        // Hat leaves abut the interface from both sides.
        const TreeNode& hatL = tree.leaf(node.hat_left_leaf);
        const TreeNode& hatR = tree.leaf(node.hat_right_leaf);
        CHECK(hatL.dof_end == node.iface_begin);
        CHECK(hatR.dof_begin == node.iface_end);

        // Materialized sets are the contiguous ranges.
        REQUIRE(node.idx_I.size() == static_cast<std::size_t>(width));
        for (std::size_t t = 0; t < node.idx_I.size(); ++t)
          CHECK(node.idx_I[t] == node.iface_begin + static_cast<index_t>(t));
        REQUIRE(node.idx_VL.size() ==
                static_cast<std::size_t>(L.dof_count()));
        CHECK(node.idx_VL.front() == L.dof_begin);
        CHECK(node.idx_VL.back() == L.dof_end - 1);
        REQUIRE(node.idx_VR.size() ==
                static_cast<std::size_t>(R.dof_count()));
        CHECK(node.idx_VR.front() == R.dof_begin);
        CHECK(node.idx_VR.back() == R.dof_end - 1);
      }
    }
  }
}

TEST_CASE("smallest decomposition: P = 2") {
  Grid g = build_grid(cfg(2, 3));
  DomainTree tree = build_tree(2);
  compute_index_sets(tree, g);

  CHECK(tree.size() == 3);
  const TreeNode& root = tree.root();
  CHECK(root.interface_col == 2);
  CHECK(root.interface_size() == 1);   // single interior row, scalar
  CHECK(g.interior_dof_count() == 3);
  CHECK(root.iface_begin == 1);
  CHECK(root.iface_end == 2);
}
