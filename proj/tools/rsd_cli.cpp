// Benchmark driver: runs one configured problem (or a sweep file) through
// the RSD-preconditioned solver and reports beta, residuals, timers and work
// counters as text, CSV or JSON.
//
// Exit codes: 0 converged/pass, 2 non-convergence or failed verdict,
// 1 configuration error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsd/harness.hpp"
#include "rsd/threading.hpp"

namespace {

enum class OutFormat { None, Csv, Json };

OutFormat format_for(const std::string& path) {
  if (path.empty()) return OutFormat::None;
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
    return OutFormat::Csv;
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return OutFormat::Json;
  throw rsd::ConfigError("--out path must end in .csv or .json: '" + path +
                         "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw rsd::ConfigError("cannot open output file '" + path + "'");
  return out;
}

void print_summary(const rsd::SolveReport& r, std::ostream& out) {
  const auto& c = r.config;
  out << "pde=" << rsd::to_string(c.pde) << " N=" << c.n << " P=" << c.p
      << " gamma=" << c.gamma << "\n"
      << "beta=" << r.beta << " termination=" << rsd::to_string(r.termination)
      << " final_rel_res=" << r.final_relative_residual
      << " solution_err=" << r.solution_error << "\n"
      << "setup=" << r.setup_seconds << "s solve=" << r.solve_seconds
      << "s leaf_solves=" << r.counters.leaf_solve_count
      << " smatvecs=" << r.counters.smatvec_count
      << " messages=" << r.counters.point_to_point_message_count << "\n";
}

int run_single(const rsd::ProblemConfig& config, const std::string& out_path) {
  const OutFormat fmt = format_for(out_path);

  switch (config.mode) {
    case rsd::RunMode::Solve: {
      const rsd::SolveReport report = rsd::run_experiment(config);
      print_summary(report, std::cout);
      if (fmt == OutFormat::Json) {
        auto out = open_out(out_path);
        rsd::write_json(report, out);
      } else if (fmt == OutFormat::Csv) {
        auto out = open_out(out_path);
        rsd::SweepRow row;
        row.config = config;
        row.ok = true;
        row.report = report;
        rsd::write_csv({row}, out);
      }
      return report.converged() ? 0 : 2;
    }
    case rsd::RunMode::Verify: {
      const rsd::VerifyResult v = rsd::verify_small(config);
      print_summary(v.report, std::cout);
      std::cout << "dense-oracle relative error=" << v.relative_error << " => "
                << (v.pass ? "pass" : "FAIL") << "\n";
      if (fmt != OutFormat::None) {
        auto out = open_out(out_path);
        if (fmt == OutFormat::Json) rsd::write_json(v.report, out);
        else {
          rsd::SweepRow row;
          row.config = config;
          row.ok = true;
          row.report = v.report;
          rsd::write_csv({row}, out);
        }
      }
      return v.pass ? 0 : 2;
    }
    case rsd::RunMode::Count: {
      const rsd::CountReport c = rsd::run_count(config);
      std::cout << "leaf_solves=" << c.counters.leaf_solve_count
                << " (expected " << c.expected_leaf_solves << ")\n"
                << "messages=" << c.counters.point_to_point_message_count
                << " (expected " << c.expected_messages << ")\n"
                << "smatvecs=" << c.counters.smatvec_count << "\n"
                << "per-leaf solve counts:";
      for (long long v : c.counters.leaf_solves_per_leaf)
        std::cout << ' ' << v;
      std::cout << " (bound " << c.per_leaf_bound << ")\n"
                << (c.matches_law ? "work laws hold" : "work laws VIOLATED")
                << "\n";
      return c.matches_law ? 0 : 2;
    }
  }
  return 1;
}

int run_sweep(const std::string& sweep_path, const std::string& out_path) {
  const OutFormat fmt = format_for(out_path);
  const auto configs = rsd::read_sweep_file(sweep_path);
  const auto rows = rsd::sweep(configs);  // rejects an empty file

  if (fmt == OutFormat::Json) {
    auto out = open_out(out_path);
    rsd::write_json(rows, out);
  } else if (fmt == OutFormat::Csv) {
    auto out = open_out(out_path);
    rsd::write_csv(rows, out);
  } else {
    rsd::write_csv(rows, std::cout);
  }

  for (const auto& row : rows) {
    if (!row.ok) {
      std::cerr << "sweep entry failed: " << row.error << "\n";
      return 2;
    }
    if (!row.report.converged()) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSD-preconditioned Krylov benchmark"};

  std::string pde = "poisson";
  std::string mode = "solve";
  std::string out_path;
  std::string sweep_path;
  rsd::ProblemConfig config;
  int threads = -1;

  app.add_option("--pde", pde, "Operator: poisson|weak|strong|lame")
      ->check(CLI::IsMember({"poisson", "weak", "strong", "lame"}));
  app.add_option("--n", config.n, "Nodes per dimension per sub-domain");
  app.add_option("--p", config.p, "Sub-domain count (power of two >= 2)");
  app.add_option("--gamma", config.gamma, "Inner S-MatVec count");
  app.add_option("--tol", config.tol, "Relative residual tolerance");
  app.add_option("--max-outer", config.max_outer, "Outer iteration cap");
  app.add_option("--seed", config.seed, "Manufactured-solution RNG seed");
  app.add_option("--hx", config.hx,
                 "Element edge length in x (0 = automatic: 1/(N-1), unit"
                 " sub-domains)");
  app.add_option("--hy", config.hy,
                 "Element edge length in y (0 = automatic: 1/(N-1), unit"
                 " sub-domains)");
  app.add_flag("--literal-eq4-sign", config.literal_eq4_sign,
               "Assemble elasticity with the flipped grad-div sign");
  app.add_option("--mode", mode, "solve|verify|count")
      ->check(CLI::IsMember({"solve", "verify", "count"}));
  app.add_option("--out", out_path, "Report file (.csv or .json)");
  app.add_option("--sweep", sweep_path,
                 "Sweep config file, one JSON object per line");
  app.add_option("--threads", threads,
                 "Worker threads (1 forces the serial reference path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (threads == 1) {
      rsd::threading::set_enabled(false);
    } else if (threads > 1) {
      rsd::threading::set_enabled(true);
      rsd::threading::set_worker_count(threads);
    }

    config.pde = rsd::pde_from_string(pde);
    config.mode = rsd::mode_from_string(mode);

    if (!sweep_path.empty()) return run_sweep(sweep_path, out_path);
    config.validate();
    return run_single(config, out_path);
  } catch (const rsd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
