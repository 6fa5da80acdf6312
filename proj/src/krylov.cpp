#include "rsd/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsd {

namespace {

// Dot products and norms are kept serial on purpose: they are cheap compared
// to the operator applications, and a fixed summation order keeps results
// bitwise reproducible across thread counts.
double dot_serial(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

// Applies accumulated Givens rotations to a fresh Hessenberg column, appends
// the rotation that zeroes its subdiagonal entry, and updates the least
// squares right-hand side. Returns the new residual estimate |g[j+1]|.
double givens_update(std::vector<double>& hcol, std::vector<double>& cs,
                     std::vector<double>& sn, std::vector<double>& g, int j) {
  for (int i = 0; i < j; ++i) {
    const double t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
    hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
    hcol[i] = t;
  }
  const double a = hcol[j];
  const double b = hcol[j + 1];
  const double r = std::hypot(a, b);
  if (r == 0.0) {
    cs[j] = 1.0;
    sn[j] = 0.0;
  } else {
    cs[j] = a / r;
    sn[j] = b / r;
  }
  hcol[j] = r;
  hcol[j + 1] = 0.0;
  g[j + 1] = -sn[j] * g[j];
  g[j] = cs[j] * g[j];
  return std::abs(g[j + 1]);
}

// Solves the upper triangular system R y = g for the leading k unknowns,
// where column j of R is stored in hcols[j][0..j].
std::vector<double> solve_triangular(const std::vector<std::vector<double>>& hcols,
                                     const std::vector<double>& g, int k) {
  std::vector<double> y(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    double s = g[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      s -= hcols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
           y[static_cast<std::size_t>(j)];
    const double rii = hcols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    if (rii == 0.0)
      throw std::runtime_error("gmres: singular triangular factor");
    y[static_cast<std::size_t>(i)] = s / rii;
  }
  return y;
}

}  // namespace

double norm2(std::span<const double> v) { return std::sqrt(dot_serial(v, v)); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  return dot_serial(a, b);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::Breakdown: return "breakdown";
  }
  return "unknown";
}

std::pair<Vector, KrylovStats> gmres_flexible(const LinearOperator& apply_A,
                                              const LinearOperator& apply_M,
                                              std::span<const double> b,
                                              double tol, int max_it) {
  const std::size_t n = b.size();
  KrylovStats stats;
  Vector x(n, 0.0);

  const double beta0 = norm2(b);
  stats.residual_history.push_back(beta0);
  if (beta0 == 0.0) return {std::move(x), std::move(stats)};

  std::vector<Vector> V;   // Arnoldi basis
  std::vector<Vector> Z;   // preconditioned directions, x = Z y
  std::vector<std::vector<double>> hcols;
  std::vector<double> cs(static_cast<std::size_t>(max_it));
  std::vector<double> sn(static_cast<std::size_t>(max_it));
  std::vector<double> g(static_cast<std::size_t>(max_it) + 1, 0.0);
  g[0] = beta0;

  V.emplace_back(b.begin(), b.end());
  scale(1.0 / beta0, V[0]);

  auto assemble_solution = [&](int k) {
    const auto y = solve_triangular(hcols, g, k);
    Vector xs(n, 0.0);
    for (int i = 0; i < k; ++i)
      axpy(y[static_cast<std::size_t>(i)], Z[static_cast<std::size_t>(i)], xs);
    return xs;
  };
  auto true_residual = [&](const Vector& xs) {
    Vector r(n);
    apply_A(xs, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  bool broke_down = false;
  for (int j = 0; j < max_it; ++j) {
    Vector z(n);
    apply_M(V[static_cast<std::size_t>(j)], z);
    Vector w(n);
    apply_A(z, w);
    Z.push_back(std::move(z));

    const double wnorm_in = norm2(w);
    std::vector<double> hcol(static_cast<std::size_t>(j) + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      const double hij = dot_serial(w, V[static_cast<std::size_t>(i)]);
      hcol[static_cast<std::size_t>(i)] = hij;
      axpy(-hij, V[static_cast<std::size_t>(i)], w);
    }
    double wnorm = norm2(w);
    // One classical re-orthogonalization pass when cancellation has eaten
    // essentially the whole vector.
    if (wnorm < 1e-8 * wnorm_in) {
      for (int i = 0; i <= j; ++i) {
        const double c = dot_serial(w, V[static_cast<std::size_t>(i)]);
        hcol[static_cast<std::size_t>(i)] += c;
        axpy(-c, V[static_cast<std::size_t>(i)], w);
      }
      wnorm = norm2(w);
    }
    hcol[static_cast<std::size_t>(j) + 1] = wnorm;

    if (wnorm > 0.0) {
      Vector v_next(w);
      scale(1.0 / wnorm, v_next);
      V.push_back(std::move(v_next));
    } else {
      broke_down = true;
    }

    const double est = givens_update(hcol, cs, sn, g, j);
    hcols.push_back(std::move(hcol));
    stats.residual_history.push_back(est);
    stats.iterations = j + 1;

    if (est <= tol * beta0 || broke_down) {
      Vector xs = assemble_solution(j + 1);
      const double rel = true_residual(xs) / beta0;
      if (rel <= tol) {
        x = std::move(xs);
        stats.reason = Termination::Converged;
        return {std::move(x), std::move(stats)};
      }
      if (broke_down) {
        // Exact breakdown without reaching the tolerance: nothing further
        // can be gained from this subspace.
        x = std::move(xs);
        stats.reason = Termination::Breakdown;
        return {std::move(x), std::move(stats)};
      }
      // The estimate was optimistic (orthogonality loss); keep iterating.
    }
  }

  x = assemble_solution(stats.iterations);
  stats.reason = Termination::MaxIterations;
  return {std::move(x), std::move(stats)};
}

Vector gmres_fixed_steps(const LinearOperator& apply_S,
                         std::span<const double> g_in, int steps) {
  const std::size_t n = g_in.size();
  Vector x(n, 0.0);
  if (steps <= 0) return x;

  const double beta0 = norm2(g_in);
  if (beta0 == 0.0) return x;

  std::vector<Vector> V;
  std::vector<std::vector<double>> hcols;
  std::vector<double> cs(static_cast<std::size_t>(steps));
  std::vector<double> sn(static_cast<std::size_t>(steps));
  std::vector<double> g(static_cast<std::size_t>(steps) + 1, 0.0);
  g[0] = beta0;

  V.emplace_back(g_in.begin(), g_in.end());
  scale(1.0 / beta0, V[0]);

  int k = 0;
  for (int j = 0; j < steps; ++j) {
    Vector w(n);
    apply_S(V[static_cast<std::size_t>(j)], w);

    std::vector<double> hcol(static_cast<std::size_t>(j) + 2, 0.0);
    for (int i = 0; i <= j; ++i) {
      const double hij = dot_serial(w, V[static_cast<std::size_t>(i)]);
      hcol[static_cast<std::size_t>(i)] = hij;
      axpy(-hij, V[static_cast<std::size_t>(i)], w);
    }
    const double wnorm = norm2(w);
    hcol[static_cast<std::size_t>(j) + 1] = wnorm;

    givens_update(hcol, cs, sn, g, j);
    hcols.push_back(std::move(hcol));
    k = j + 1;

    // Happy breakdown: the Krylov subspace is invariant and the subspace
    // minimizer is the exact solution. No further operator applications
    // would change the iterate.
    if (wnorm <= 1e-14 * beta0) break;

    Vector v_next(w);
    scale(1.0 / wnorm, v_next);
    V.push_back(std::move(v_next));
  }

  const auto y = solve_triangular(hcols, g, k);
  for (int i = 0; i < k; ++i)
    axpy(y[static_cast<std::size_t>(i)], V[static_cast<std::size_t>(i)], x);
  return x;
}

}  // namespace rsd
