#ifndef RSD_CONFIG_HPP
#define RSD_CONFIG_HPP

#include <cstdint>
#include <string>

#include "rsd/pde.hpp"

namespace rsd {

enum class RunMode { Solve, Verify, Count };

std::string to_string(RunMode mode);
RunMode mode_from_string(const std::string& name);

/// One experiment: which operator, the mesh/decomposition sizes, and the
/// solver knobs.
struct ProblemConfig {
  PdeKind pde = PdeKind::Poisson;
  int n = 17;          // nodes per dimension per true sub-domain
  int p = 8;           // true sub-domain count, power of two
  int gamma = 2;       // inner S-MatVec count per interface solve
  double tol = 1.0e-12;
  int max_outer = 2000;
  std::uint64_t seed = 7;
  bool literal_eq4_sign = false;
  RunMode mode = RunMode::Solve;
  // Element edge lengths. Zero (the default) means automatic spacing,
  // 1/(n-1), which makes every true sub-domain a unit square; the domain is
  // then a long thin p-by-1 strip regardless of resolution. The coupled
  // benchmark operators mix second-order terms with zeroth-order mass
  // coupling, so their iteration counts depend on this physical scale.
  double hx = 0.0;
  double hy = 0.0;

  /// Throws ConfigError on invalid parameters.
  void validate() const;
};

}  // namespace rsd

#endif
