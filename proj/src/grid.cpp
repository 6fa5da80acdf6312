#include "rsd/grid.hpp"

#include <string>

namespace rsd {

namespace {
bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }
}  // namespace

void ProblemConfig::validate() const {
  if (p < 2 || !is_power_of_two(p))
    throw ConfigError("P must be a power of two >= 2, got " +
                      std::to_string(p));
  if (n < 3)
    throw ConfigError("N must be >= 3 (the interface column needs interior "
                      "nodes), got " + std::to_string(n));
  if (gamma < 1)
    throw ConfigError("gamma must be >= 1, got " + std::to_string(gamma));
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (!(hx >= 0.0) || !(hy >= 0.0))
    throw ConfigError(
        "element edge lengths must be positive (or zero to request the "
        "automatic unit-sub-domain spacing)");
}

void Grid::finalize() {
  dirichlet_mask_.assign(static_cast<std::size_t>(node_count()), false);
  dof_map_.assign(static_cast<std::size_t>(node_count()) * components, -1);
  for (index_t ix = 0; ix < nx; ++ix) {
    for (index_t iy = 0; iy < ny; ++iy) {
      const index_t node = node_index(ix, iy);
      if (is_boundary(ix, iy)) {
        dirichlet_mask_[node] = true;
        continue;
      }
      for (int comp = 0; comp < components; ++comp) {
        dof_map_[static_cast<std::size_t>(node) * components + comp] =
            dof(ix, iy, comp);
      }
    }
  }
}

Grid build_grid(const ProblemConfig& config) {
  config.validate();
  Grid g;
  g.p = config.p;
  g.n = config.n;
  g.nx = static_cast<index_t>(config.p) * (config.n - 1) + 1;
  g.ny = config.n;
  g.hx = config.hx > 0.0 ? config.hx : 1.0 / (config.n - 1);
  g.hy = config.hy > 0.0 ? config.hy : 1.0 / (config.n - 1);
  g.components = components(config.pde);
  g.finalize();
  return g;
}

}  // namespace rsd
