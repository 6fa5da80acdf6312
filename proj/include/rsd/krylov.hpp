#ifndef RSD_KRYLOV_HPP
#define RSD_KRYLOV_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rsd/types.hpp"

namespace rsd {

/// Applies a linear (or, for the flexible solver's preconditioner, a
/// nonstationary) operator: out = Op(in).
using LinearOperator =
    std::function<void(std::span<const double>, std::span<double>)>;

enum class Termination { Converged, MaxIterations, Breakdown };

std::string to_string(Termination t);

struct KrylovStats {
  int iterations = 0;
  std::vector<double> residual_history;  // absolute 2-norms, starts with ||r0||
  Termination reason = Termination::Converged;
};

/// Flexible GMRES with right preconditioning, zero initial guess, no
/// restart. Each iteration stores the preconditioned direction, so the
/// preconditioner may change between iterations (ours contains inner Krylov
/// solves). Convergence is declared on the true residual:
/// ||b - A x||_2 / ||b||_2 <= tol.
std::pair<Vector, KrylovStats> gmres_flexible(const LinearOperator& apply_A,
                                              const LinearOperator& apply_M,
                                              std::span<const double> b,
                                              double tol, int max_it);

/// Unpreconditioned GMRES run for exactly `steps` Arnoldi steps (= operator
/// applications) from a zero initial guess, returning the minimizer over the
/// resulting Krylov subspace. Stops early only on breakdown, in which case
/// the subspace solution is exact.
Vector gmres_fixed_steps(const LinearOperator& apply_S,
                         std::span<const double> g, int steps);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace rsd

#endif
