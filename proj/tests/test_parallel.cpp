#include <doctest.h>

#include <algorithm>

#include "rsd/fem.hpp"
#include "rsd/grid.hpp"
#include "rsd/harness.hpp"
#include "rsd/rsd.hpp"
#include "rsd/threading.hpp"
#include "rsd/tree.hpp"
#include "support/oracles.hpp"

using namespace rsd;
using rsd::testing::random_vector;

// These tests exercise the runtime switch between the OpenMP kernels and
// the serial reference path. In a build without OpenMP support the switch
// is inert (enabled() stays false) and both runs take the serial path, so
// every check still holds.

namespace {

struct ThreadingGuard {
  bool was_enabled;
  int was_workers;
  ThreadingGuard() : was_enabled(threading::enabled()),
                     was_workers(threading::worker_count()) {}
  ~ThreadingGuard() {
    threading::set_worker_count(was_workers);
    threading::set_enabled(was_enabled);
  }
};

}  // namespace

TEST_CASE("threading switch is observable") {
  ThreadingGuard guard;
  threading::set_enabled(false);
  CHECK(!threading::enabled());
  CHECK(threading::worker_count() == 1);
#ifdef RSD_HAVE_OPENMP
  threading::set_worker_count(4);
  threading::set_enabled(true);
  CHECK(threading::enabled());
  CHECK(threading::worker_count() == 4);
#else
  threading::set_enabled(true);
  CHECK(!threading::enabled());
#endif
}

TEST_CASE("parallel spmv is bitwise identical to the serial kernel") {
  ThreadingGuard guard;
  ProblemConfig c;
  c.p = 8;
  c.n = 17;
  Grid g = build_grid(c);
  CsrMatrix K = assemble(g, PdeKind::Poisson);
  Vector x = random_vector(K.rows(), 5);

  threading::set_enabled(false);
  Vector serial(K.rows());
  spmv(K, x, serial);

  threading::set_worker_count(4);
  threading::set_enabled(true);
  Vector parallel(K.rows());
  spmv(K, x, parallel);

  CHECK(std::equal(serial.begin(), serial.end(), parallel.begin()));
}

TEST_CASE("parallel preconditioner application is bitwise identical") {
  ThreadingGuard guard;
  ProblemConfig c;
  c.p = 8;
  c.n = 9;
  c.pde = PdeKind::StrongCoupled;
  Grid g = build_grid(c);
  DomainTree tree = build_tree(c.p);
  compute_index_sets(tree, g);
  CsrMatrix K = assemble(g, c.pde);
  RsdPreconditioner M(K, g, tree, c.pde, 3);

  Vector f = random_vector(K.rows(), 8);
  Vector serial(K.rows()), parallel(K.rows());

  threading::set_enabled(false);
  M.apply(f, serial);
  RsdCounters cs = M.counters();

  threading::set_worker_count(4);
  threading::set_enabled(true);
  M.apply(f, parallel);
  RsdCounters cp = M.counters();

  CHECK(std::equal(serial.begin(), serial.end(), parallel.begin()));
  CHECK(cs.leaf_solve_count == cp.leaf_solve_count);
  CHECK(cs.smatvec_count == cp.smatvec_count);
  CHECK(cs.point_to_point_message_count == cp.point_to_point_message_count);
  CHECK(cs.leaf_solves_per_level == cp.leaf_solves_per_level);
  CHECK(cs.leaf_solves_per_leaf == cp.leaf_solves_per_leaf);
}

TEST_CASE("full experiments agree across the threading switch") {
  ThreadingGuard guard;
  ProblemConfig c;
  c.p = 8;
  c.n = 17;
  c.gamma = 4;

  threading::set_enabled(false);
  SolveReport serial = run_experiment(c);

  threading::set_worker_count(4);
  threading::set_enabled(true);
  SolveReport parallel = run_experiment(c);

  CHECK(serial.beta == parallel.beta);
  CHECK(serial.residual_history == parallel.residual_history);  // bitwise
  CHECK(serial.solution_error == parallel.solution_error);
  CHECK(serial.counters.leaf_solve_count ==
        parallel.counters.leaf_solve_count);
}
