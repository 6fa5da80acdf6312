#include <doctest.h>

#include <cmath>

#include "rsd/band.hpp"
#include "rsd/fem.hpp"
#include "rsd/grid.hpp"
#include "rsd/tree.hpp"
#include "support/oracles.hpp"

using namespace rsd;
using rsd::testing::dense_solve;
using rsd::testing::random_vector;
using rsd::testing::rel_error;

TEST_CASE("diagonal system") {
  CsrMatrix K =
      CsrMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, -1.0}});
  BandedFactorization F = band_factor(K);
  CHECK(F.dim() == 3);
  CHECK(F.lower_bandwidth() == 0);
  CHECK(F.upper_bandwidth() == 0);
  Vector x = band_solve(F, Vector{2.0, 8.0, 3.0});
  CHECK(std::abs(x[0] - 1.0) < 1e-15);
  CHECK(std::abs(x[1] - 2.0) < 1e-15);
  CHECK(std::abs(x[2] + 3.0) < 1e-15);
}

TEST_CASE("pivoting handles a zero leading diagonal") {
  // [[0,1],[1,0]] requires a row interchange.
  CsrMatrix K = CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
  BandedFactorization F = band_factor(K);
  Vector x = band_solve(F, Vector{3.0, 7.0});
  CHECK(x[0] == 7.0);
  CHECK(x[1] == 3.0);
}

TEST_CASE("singular matrix is rejected") {
  CsrMatrix K = CsrMatrix::from_triplets(
      2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(band_factor(K), FactorizationError);
}

TEST_CASE("zero right-hand side yields the zero solution") {
  CsrMatrix K = CsrMatrix::from_triplets(
      3, 3, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 4.0}, {1, 2, 1.0},
             {2, 1, 1.0}, {2, 2, 4.0}});
  BandedFactorization F = band_factor(K);
  CHECK(F.lower_bandwidth() == 1);
  CHECK(F.upper_bandwidth() == 1);
  Vector x = band_solve(F, Vector(3, 0.0));
  CHECK(x == Vector(3, 0.0));
}

TEST_CASE("non-square input is rejected") {
  CsrMatrix K = CsrMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {1, 1, 1.0}});
  CHECK_THROWS_AS(band_factor(K), DimensionError);
}

TEST_CASE("leaf block solve matches dense LU") {
  // A realistic banded block: one true sub-domain of the assembled system.
  ProblemConfig conf;
  conf.p = 4;
  conf.n = 9;
  Grid g = build_grid(conf);
  DomainTree tree = build_tree(4);
  compute_index_sets(tree, g);
  CsrMatrix K = assemble(g, PdeKind::Poisson);

  const TreeNode& leaf = tree.leaf(1);
  IndexSet range;
  for (index_t i = leaf.dof_begin; i < leaf.dof_end; ++i) range.push_back(i);
  CsrMatrix B = extract_block(K, range, range);

  BandedFactorization F = band_factor(B);
  CHECK(F.dim() == B.rows());
  // Nodes couple to the diagonal neighbors of the adjacent column, so the
  // half-bandwidth is one node column plus one.
  CHECK(F.lower_bandwidth() == g.ny - 2 + 1);
  CHECK(F.upper_bandwidth() == g.ny - 2 + 1);

  Vector b = random_vector(B.rows(), 99);
  Vector x = band_solve(F, b);
  Vector xd = dense_solve(B, b);
  CHECK(rel_error(x, xd) < 1e-12);

  // Residual check against the original block.
  Vector r = spmv(B, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    rn += r[i] * r[i];
    bn += b[i] * b[i];
  }
  CHECK(std::sqrt(rn) <= 1e-12 * std::sqrt(bn));
}

TEST_CASE("coupled-system leaf block with pivoting stays accurate") {
  ProblemConfig conf;
  conf.p = 2;
  conf.n = 9;
  conf.pde = PdeKind::StrongCoupled;
  Grid g = build_grid(conf);
  DomainTree tree = build_tree(2);
  compute_index_sets(tree, g);
  CsrMatrix K = assemble(g, conf.pde);

  const TreeNode& leaf = tree.leaf(0);
  IndexSet range;
  for (index_t i = leaf.dof_begin; i < leaf.dof_end; ++i) range.push_back(i);
  CsrMatrix B = extract_block(K, range, range);

  BandedFactorization F = band_factor(B);
  Vector b = random_vector(B.rows(), 7);
  Vector x = band_solve(F, b);
  Vector xd = dense_solve(B, b);
  CHECK(rel_error(x, xd) < 1e-11);
}
