#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsd/dense.hpp"
#include "rsd/fem.hpp"
#include "rsd/grid.hpp"
#include "rsd/krylov.hpp"
#include "support/oracles.hpp"

using namespace rsd;
using rsd::testing::dense_solve;
using rsd::testing::random_vector;
using rsd::testing::rel_error;

namespace {

LinearOperator identity_op() {
  return [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  };
}

LinearOperator csr_op(const CsrMatrix& K) {
  return [&K](std::span<const double> x, std::span<double> y) {
    spmv(K, x, y);
  };
}

}  // namespace

TEST_CASE("identity system converges in one iteration") {
  Vector b = random_vector(10, 1);
  auto [x, stats] = gmres_flexible(identity_op(), identity_op(), b, 1e-12, 50);
  CHECK(stats.reason == Termination::Converged);
  CHECK(stats.iterations == 1);
  CHECK(rel_error(x, b) < 1e-14);
}

TEST_CASE("zero right-hand side returns immediately") {
  Vector b(8, 0.0);
  auto [x, stats] = gmres_flexible(identity_op(), identity_op(), b, 1e-12, 50);
  CHECK(stats.reason == Termination::Converged);
  CHECK(stats.iterations == 0);
  CHECK(x == Vector(8, 0.0));
}

TEST_CASE("unpreconditioned solve of an assembled system") {
  ProblemConfig conf;
  conf.p = 2;
  conf.n = 5;
  Grid g = build_grid(conf);
  CsrMatrix K = assemble(g, PdeKind::Poisson);
  Vector b = random_vector(K.rows(), 4);

  auto [x, stats] = gmres_flexible(csr_op(K), identity_op(), b, 1e-12, 500);
  REQUIRE(stats.reason == Termination::Converged);

  // True residual, not the Givens estimate.
  Vector r = spmv(K, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  CHECK(norm2(r) <= 1e-12 * norm2(b));

  Vector xd = dense_solve(K, b);
  CHECK(rel_error(x, xd) < 1e-8);

  // History starts at ||b|| and never increases (GMRES is monotone).
  REQUIRE(!stats.residual_history.empty());
  CHECK(stats.residual_history.front() == doctest::Approx(norm2(b)));
  for (std::size_t i = 1; i < stats.residual_history.size(); ++i)
    CHECK(stats.residual_history[i] <=
          stats.residual_history[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("an exact right preconditioner converges in at most two steps") {
  ProblemConfig conf;
  conf.p = 2;
  conf.n = 5;
  Grid g = build_grid(conf);
  CsrMatrix K = assemble(g, PdeKind::Poisson);
  DenseLu lu(DenseMatrix::from_csr(K));
  LinearOperator exact_M = [&lu](std::span<const double> x,
                                 std::span<double> y) {
    Vector z = lu.solve(x);
    std::copy(z.begin(), z.end(), y.begin());
  };

  Vector b = random_vector(K.rows(), 11);
  auto [x, stats] = gmres_flexible(csr_op(K), exact_M, b, 1e-12, 50);
  CHECK(stats.reason == Termination::Converged);
  CHECK(stats.iterations <= 2);
  CHECK(rel_error(x, dense_solve(K, b)) < 1e-10);
}

TEST_CASE("iteration cap reports MaxIterations") {
  ProblemConfig conf;
  conf.p = 2;
  conf.n = 9;
  Grid g = build_grid(conf);
  CsrMatrix K = assemble(g, PdeKind::Poisson);
  Vector b = random_vector(K.rows(), 2);
  auto [x, stats] = gmres_flexible(csr_op(K), identity_op(), b, 1e-14, 1);
  CHECK(stats.reason == Termination::MaxIterations);
  CHECK(stats.iterations == 1);
}

TEST_CASE("fixed-step inner solver applies the operator exactly gamma times") {
  ProblemConfig conf;
  conf.p = 2;
  conf.n = 9;
  Grid g = build_grid(conf);
  CsrMatrix K = assemble(g, PdeKind::Poisson);
  Vector gvec = random_vector(K.rows(), 5);

  for (int gamma : {1, 2, 4}) {
    CAPTURE(gamma);
    int applications = 0;
    LinearOperator counting = [&](std::span<const double> x,
                                  std::span<double> y) {
      ++applications;
      spmv(K, x, y);
    };
    Vector u = gmres_fixed_steps(counting, gvec, gamma);
    CHECK(applications == gamma);
    CHECK(static_cast<index_t>(u.size()) == K.rows());
  }
}

TEST_CASE("fixed-step solver is exact once the Krylov space spans the system") {
  // diag(1,2), g=(3,4): two steps give exactly (3,2).
  CsrMatrix D = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  Vector g = {3.0, 4.0};
  Vector u = gmres_fixed_steps(csr_op(D), g, 2);
  CHECK(std::abs(u[0] - 3.0) < 1e-14);
  CHECK(std::abs(u[1] - 2.0) < 1e-14);
}

TEST_CASE("fixed-step solver stops early on breakdown") {
  // 1x1 system: the first step already spans the space; further steps must
  // not divide by the vanishing basis norm.
  CsrMatrix D = CsrMatrix::from_triplets(1, 1, {{0, 0, 4.0}});
  int applications = 0;
  LinearOperator counting = [&](std::span<const double> x,
                                std::span<double> y) {
    ++applications;
    y[0] = 4.0 * x[0];
  };
  Vector u = gmres_fixed_steps(counting, Vector{8.0}, 4);
  CHECK(applications == 1);
  CHECK(std::abs(u[0] - 2.0) < 1e-15);
}

TEST_CASE("zero fixed steps returns the zero vector") {
  Vector u = gmres_fixed_steps(identity_op(), Vector{1.0, 2.0}, 0);
  CHECK(u == Vector{0.0, 0.0});
}
