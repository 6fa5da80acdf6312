#ifndef RSD_HARNESS_HPP
#define RSD_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rsd/config.hpp"
#include "rsd/krylov.hpp"
#include "rsd/rsd.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// Everything one experiment reports. beta is the outer iteration count;
/// residual_history holds absolute residual norms starting at ||f||;
/// counters are cumulative over the whole solve. Timers are wall-clock and
/// excluded from reproducibility guarantees.
struct SolveReport {
  ProblemConfig config;
  int beta = 0;
  std::vector<double> residual_history;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  double final_relative_residual = 0.0;
  double solution_error = 0.0;  // ||u - u*||_2 / ||u*||_2
  Termination termination = Termination::Converged;
  RsdCounters counters;

  bool converged() const { return termination == Termination::Converged; }
};

/// Full pipeline: grid + tree -> assembly -> preconditioner setup ->
/// manufactured problem -> flexible GMRES with the preconditioner applied
/// on the right. Deterministic for a fixed config (timers aside).
/// zero_solution_hook forces u* = 0 (and hence f = 0) for edge-case tests.
SolveReport run_experiment(const ProblemConfig& config,
                           bool zero_solution_hook = false);

struct VerifyResult {
  bool pass = false;
  double relative_error = 0.0;  // ||u_rsd - u_dense||_2 / ||u_dense||_2
  SolveReport report;
};

/// Solves the same system with a dense LU oracle and compares. Pass iff the
/// relative error is <= 1e-9. Throws ConfigError above 20,000 DOFs.
VerifyResult verify_small(const ProblemConfig& config,
                          bool zero_solution_hook = false);

struct CountReport {
  RsdCounters counters;  // one root application
  long long expected_leaf_solves = 0;
  long long expected_messages = 0;
  long long per_leaf_bound = 0;
  bool matches_law = false;
};

/// Runs setup plus exactly one preconditioner application and checks the
/// counters against the closed-form work laws.
CountReport run_count(const ProblemConfig& config);

struct SweepRow {
  ProblemConfig config;
  bool ok = false;
  std::string error;
  SolveReport report;
};

/// Runs every config; individual failures are recorded per row and do not
/// stop the sweep. Throws ConfigError on an empty list.
std::vector<SweepRow> sweep(const std::vector<ProblemConfig>& configs);

/// One JSON object per non-blank line, each holding ProblemConfig fields.
/// Unknown keys are rejected. Throws ConfigError with the line number.
std::vector<ProblemConfig> read_sweep_file(std::istream& in);
std::vector<ProblemConfig> read_sweep_file(const std::string& path);

/// CSV report, one row per run:
/// pde,N,P,gamma,beta,setup_s,solve_s,final_rel_res,solution_err,leaf_solves
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// JSON mirror of the reports (array for sweeps, object for one run).
void write_json(const std::vector<SweepRow>& rows, std::ostream& out);
void write_json(const SolveReport& report, std::ostream& out);

}  // namespace rsd

#endif
