#ifndef RSD_TYPES_HPP
#define RSD_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsd {

using index_t = std::int32_t;
using Vector = std::vector<double>;
using IndexSet = std::vector<index_t>;  // sorted, duplicate-free

/// Invalid problem parameters (bad P, N, component mismatch, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operator/vector size mismatch.
class DimensionError : public std::logic_error {
 public:
  explicit DimensionError(const std::string& msg) : std::logic_error(msg) {}
};

/// Exactly singular pivot or failed setup factorization.
class FactorizationError : public std::runtime_error {
 public:
  explicit FactorizationError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace rsd

#endif
