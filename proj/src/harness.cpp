#include "rsd/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "rsd/dense.hpp"
#include "rsd/fem.hpp"
#include "rsd/grid.hpp"
#include "rsd/tree.hpp"

namespace rsd {

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Solve: return "solve";
    case RunMode::Verify: return "verify";
    case RunMode::Count: return "count";
  }
  return "unknown";
}

RunMode mode_from_string(const std::string& name) {
  if (name == "solve") return RunMode::Solve;
  if (name == "verify") return RunMode::Verify;
  if (name == "count") return RunMode::Count;
  throw ConfigError("unknown mode '" + name + "' (solve|verify|count)");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

double relative_norm(const Vector& diff_num, const Vector& denom_vec) {
  const double den = norm2(denom_vec);
  const double num = norm2(diff_num);
  return den > 0.0 ? num / den : num;
}

struct SolveProduct {
  SolveReport report;
  CsrMatrix K;
  Vector u;
  Vector u_star;
  Vector f;
};

SolveProduct solve_product(const ProblemConfig& config,
                           bool zero_solution_hook) {
  config.validate();

  const auto t0 = Clock::now();
  const Grid grid = build_grid(config);
  DomainTree tree = build_tree(config.p);
  compute_index_sets(tree, grid);
  CsrMatrix K = assemble(grid, config.pde, config.literal_eq4_sign);
  RsdPreconditioner M(K, grid, tree, config.pde, config.gamma,
                      config.literal_eq4_sign);
  const auto t1 = Clock::now();

  Vector u_star, f;
  if (zero_solution_hook) {
    u_star.assign(static_cast<std::size_t>(K.rows()), 0.0);
    f.assign(static_cast<std::size_t>(K.rows()), 0.0);
  } else {
    auto made = manufactured_problem(K, config.seed);
    u_star = std::move(made.first);
    f = std::move(made.second);
  }

  const LinearOperator apply_A = [&K](std::span<const double> in,
                                      std::span<double> out) {
    spmv(K, in, out);
  };
  const LinearOperator apply_M = [&M](std::span<const double> in,
                                      std::span<double> out) {
    M.apply(in, out);
  };

  const auto t2 = Clock::now();
  auto solved = gmres_flexible(apply_A, apply_M, f, config.tol,
                               config.max_outer);
  const auto t3 = Clock::now();
  Vector u = std::move(solved.first);
  const KrylovStats& stats = solved.second;

  SolveProduct out;
  out.report.config = config;
  out.report.beta = stats.iterations;
  out.report.residual_history = stats.residual_history;
  out.report.termination = stats.reason;
  out.report.setup_seconds = seconds_between(t0, t1);
  out.report.solve_seconds = seconds_between(t2, t3);

  Vector r(static_cast<std::size_t>(K.rows()));
  spmv(K, u, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
  out.report.final_relative_residual = relative_norm(r, f);

  Vector du(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) du[i] = u[i] - u_star[i];
  out.report.solution_error = relative_norm(du, u_star);

  out.report.counters = M.cumulative();
  out.K = std::move(K);
  out.u = std::move(u);
  out.u_star = std::move(u_star);
  out.f = std::move(f);
  return out;
}

}  // namespace

SolveReport run_experiment(const ProblemConfig& config,
                           bool zero_solution_hook) {
  return solve_product(config, zero_solution_hook).report;
}

VerifyResult verify_small(const ProblemConfig& config,
                          bool zero_solution_hook) {
  config.validate();
  const Grid probe = build_grid(config);
  if (probe.interior_dof_count() > 20000)
    throw ConfigError("verify_small: " +
                      std::to_string(probe.interior_dof_count()) +
                      " DOFs exceed the 20000-DOF cap");

  SolveProduct prod = solve_product(config, zero_solution_hook);
  const DenseLu lu(DenseMatrix::from_csr(prod.K));
  const Vector u_dense = lu.solve(prod.f);

  Vector diff(prod.u.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = prod.u[i] - u_dense[i];

  VerifyResult result;
  result.relative_error = relative_norm(diff, u_dense);
  result.pass = result.relative_error <= 1e-9;
  result.report = std::move(prod.report);
  return result;
}

CountReport run_count(const ProblemConfig& config) {
  config.validate();
  const Grid grid = build_grid(config);
  DomainTree tree = build_tree(config.p);
  compute_index_sets(tree, grid);
  const CsrMatrix K = assemble(grid, config.pde, config.literal_eq4_sign);
  RsdPreconditioner M(K, grid, tree, config.pde, config.gamma,
                      config.literal_eq4_sign);

  const auto made = manufactured_problem(K, config.seed);
  Vector u(static_cast<std::size_t>(K.rows()));
  M.apply(made.second, u);

  CountReport rep;
  rep.counters = M.counters();
  const long long p = config.p;
  const long long gamma = config.gamma;
  rep.expected_leaf_solves = p + (p - 1) * (2 * gamma + 2);
  rep.expected_messages = (p - 1) * (2 * gamma + 2);
  rep.per_leaf_bound = 1 + static_cast<long long>(tree.height()) * (gamma + 1);

  long long max_per_leaf = 0;
  for (long long v : rep.counters.leaf_solves_per_leaf)
    max_per_leaf = std::max(max_per_leaf, v);
  rep.matches_law =
      rep.counters.leaf_solve_count == rep.expected_leaf_solves &&
      rep.counters.point_to_point_message_count == rep.expected_messages &&
      rep.counters.smatvec_count == (p - 1) * gamma &&
      max_per_leaf <= rep.per_leaf_bound;
  return rep;
}

std::vector<SweepRow> sweep(const std::vector<ProblemConfig>& configs) {
  if (configs.empty()) throw ConfigError("sweep: empty config list");
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const ProblemConfig& config : configs) {
    SweepRow row;
    row.config = config;
    try {
      row.report = run_experiment(config);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

ProblemConfig config_from_json(const nlohmann::json& j, std::size_t line_no) {
  ProblemConfig c;
  if (!j.is_object())
    throw ConfigError("sweep config line " + std::to_string(line_no) +
                      ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "pde") c.pde = pde_from_string(value.get<std::string>());
      else if (key == "n" || key == "N") c.n = value.get<int>();
      else if (key == "p" || key == "P") c.p = value.get<int>();
      else if (key == "gamma") c.gamma = value.get<int>();
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "max_outer") c.max_outer = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "literal_eq4_sign") c.literal_eq4_sign = value.get<bool>();
      else if (key == "mode") c.mode = mode_from_string(value.get<std::string>());
      else if (key == "hx") c.hx = value.get<double>();
      else if (key == "hy") c.hy = value.get<double>();
      else
        throw ConfigError("unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("sweep config line " + std::to_string(line_no) +
                        ", key '" + key + "': " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("sweep config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sweep config line " + std::to_string(line_no) + ": " +
                      e.what());
  }
  return c;
}

}  // namespace

std::vector<ProblemConfig> read_sweep_file(std::istream& in) {
  std::vector<ProblemConfig> configs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("sweep config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
    configs.push_back(config_from_json(j, line_no));
  }
  return configs;
}

std::vector<ProblemConfig> read_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep config file '" + path + "'");
  return read_sweep_file(in);
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "pde,N,P,gamma,beta,setup_s,solve_s,final_rel_res,solution_err,"
         "leaf_solves\n";
  out << std::setprecision(17);
  for (const SweepRow& row : rows) {
    const ProblemConfig& c = row.config;
    out << to_string(c.pde) << ',' << c.n << ',' << c.p << ',' << c.gamma
        << ',';
    if (row.ok) {
      const SolveReport& r = row.report;
      out << r.beta << ',' << r.setup_seconds << ',' << r.solve_seconds << ','
          << r.final_relative_residual << ',' << r.solution_error << ','
          << r.counters.leaf_solve_count << '\n';
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out << -1 << ',' << nan << ',' << nan << ',' << nan << ',' << nan << ','
          << 0 << '\n';
    }
  }
}

namespace {

nlohmann::ordered_json to_json(const ProblemConfig& c) {
  return nlohmann::ordered_json{
      {"pde", to_string(c.pde)},
      {"n", c.n},
      {"p", c.p},
      {"gamma", c.gamma},
      {"tol", c.tol},
      {"max_outer", c.max_outer},
      {"seed", c.seed},
      {"literal_eq4_sign", c.literal_eq4_sign},
      {"mode", to_string(c.mode)},
      {"hx", c.hx},
      {"hy", c.hy}};
}

nlohmann::ordered_json to_json(const RsdCounters& c) {
  return nlohmann::ordered_json{
      {"leaf_solve_count", c.leaf_solve_count},
      {"smatvec_count", c.smatvec_count},
      {"point_to_point_message_count", c.point_to_point_message_count},
      {"leaf_solves_per_level", c.leaf_solves_per_level},
      {"leaf_solves_per_leaf", c.leaf_solves_per_leaf}};
}

nlohmann::ordered_json to_json(const SolveReport& r) {
  return nlohmann::ordered_json{{"config", to_json(r.config)},
                                {"beta", r.beta},
                                {"residual_history", r.residual_history},
                                {"setup_seconds", r.setup_seconds},
                                {"solve_seconds", r.solve_seconds},
                                {"final_relative_residual",
                                 r.final_relative_residual},
                                {"solution_error", r.solution_error},
                                {"termination", to_string(r.termination)},
                                {"counters", to_json(r.counters)}};
}

}  // namespace

void write_json(const std::vector<SweepRow>& rows, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& row : rows) {
    nlohmann::ordered_json obj{{"config", to_json(row.config)},
                               {"ok", row.ok}};
    if (row.ok)
      obj["report"] = to_json(row.report);
    else
      obj["error"] = row.error;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

void write_json(const SolveReport& report, std::ostream& out) {
  out << to_json(report).dump(2) << '\n';
}

}  // namespace rsd
