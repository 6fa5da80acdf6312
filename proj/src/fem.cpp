#include "rsd/fem.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace rsd {

int components(PdeKind kind) {
  return kind == PdeKind::Poisson ? 1 : 2;
}

std::string to_string(PdeKind kind) {
  switch (kind) {
    case PdeKind::Poisson: return "poisson";
    case PdeKind::WeakCoupled: return "weak";
    case PdeKind::StrongCoupled: return "strong";
    case PdeKind::NavierLame: return "lame";
  }
  return "?";
}

PdeKind pde_from_string(const std::string& name) {
  if (name == "poisson") return PdeKind::Poisson;
  if (name == "weak") return PdeKind::WeakCoupled;
  if (name == "strong") return PdeKind::StrongCoupled;
  if (name == "lame") return PdeKind::NavierLame;
  throw ConfigError("unknown pde '" + name +
                    "' (expected poisson|weak|strong|lame)");
}

PdeCoefficients coefficients(PdeKind kind, bool literal_grad_div_sign) {
  PdeCoefficients c;
  switch (kind) {
    case PdeKind::Poisson:
      c.components = 1;
      c.diffusion = {{{1.0, 1.0}, {0.0, 0.0}}};
      break;
    case PdeKind::WeakCoupled:
      c.components = 2;
      c.diffusion = {{{0.01, 1.0}, {1.0, 0.01}}};
      c.mass_coupling = 0.01;
      break;
    case PdeKind::StrongCoupled:
      c.components = 2;
      c.diffusion = {{{0.01, 1.0}, {1.0, 0.01}}};
      c.mass_coupling = 100.0;
      break;
    case PdeKind::NavierLame: {
      c.components = 2;
      const double gd = (literal_grad_div_sign ? -1.0 : 1.0) *
                        (kLameLambda + kLameMu);
      c.diffusion = {{{kLameMu, kLameMu}, {kLameMu, kLameMu}}};
      c.grad_div = gd;
      break;
    }
  }
  return c;
}

namespace {

// Reference bilinear shape functions on [-1,1]^2, counter-clockwise corners.
constexpr std::array<double, 4> kXi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kEta{-1.0, -1.0, 1.0, 1.0};

struct ElementIntegrals {
  // a_xx[i][j] = int dphi_j/dx dphi_i/dx, a_xy[i][j] = int dphi_j/dx dphi_i/dy
  std::array<std::array<double, 4>, 4> a_xx{}, a_yy{}, a_xy{}, mass{};
};

ElementIntegrals integrate(double hx, double hy) {
  ElementIntegrals e;
  const double gp = 1.0 / std::sqrt(3.0);
  const std::array<double, 2> pts{-gp, gp};
  for (double xi : pts) {
    for (double eta : pts) {
      std::array<double, 4> phi, dxi, deta;
      for (int i = 0; i < 4; ++i) {
        phi[i] = 0.25 * (1.0 + xi * kXi[i]) * (1.0 + eta * kEta[i]);
        dxi[i] = 0.25 * kXi[i] * (1.0 + eta * kEta[i]);
        deta[i] = 0.25 * kEta[i] * (1.0 + xi * kXi[i]);
      }
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          e.a_xx[i][j] += (hy / hx) * dxi[j] * dxi[i];
          e.a_yy[i][j] += (hx / hy) * deta[j] * deta[i];
          e.a_xy[i][j] += dxi[j] * deta[i];
          e.mass[i][j] += (hx * hy / 4.0) * phi[i] * phi[j];
        }
      }
    }
  }
  return e;
}

}  // namespace

ElementMatrix element_matrix(PdeKind kind, double hx, double hy,
                             bool literal_grad_div_sign) {
  if (!(hx > 0.0) || !(hy > 0.0))
    throw ConfigError("element_matrix: element edge lengths must be positive");

  const PdeCoefficients cf = coefficients(kind, literal_grad_div_sign);
  const int c = cf.components;
  const ElementIntegrals e = integrate(hx, hy);

  ElementMatrix m;
  m.size = 4 * c;
  m.data.assign(static_cast<std::size_t>(m.size) * m.size, 0.0);

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int comp = 0; comp < c; ++comp) {
        m(i * c + comp, j * c + comp) += cf.diffusion[comp][0] * e.a_xx[i][j] +
                                         cf.diffusion[comp][1] * e.a_yy[i][j];
      }
      if (cf.mass_coupling != 0.0) {
        m(i * c + 0, j * c + 1) += cf.mass_coupling * e.mass[i][j];
        m(i * c + 1, j * c + 0) -= cf.mass_coupling * e.mass[i][j];
      }
      if (cf.grad_div != 0.0) {
        // (div u, div w): the trial derivative picks the trial component's
        // axis, the test derivative the test component's axis.
        m(i * c + 0, j * c + 0) += cf.grad_div * e.a_xx[i][j];
        m(i * c + 0, j * c + 1) += cf.grad_div * e.a_xy[j][i];
        m(i * c + 1, j * c + 0) += cf.grad_div * e.a_xy[i][j];
        m(i * c + 1, j * c + 1) += cf.grad_div * e.a_yy[i][j];
      }
    }
  }
  return m;
}

namespace {

// Scatters one element's matrix for the element at (ex, ey); rows/cols on
// Dirichlet nodes are dropped (homogeneous conditions, algebraic RHS).
void scatter_element(const Grid& grid, const ElementMatrix& em, index_t ex,
                     index_t ey, std::vector<Triplet>& out) {
  const int c = grid.components;
  const std::array<index_t, 4> nxs{ex, ex + 1, ex + 1, ex};
  const std::array<index_t, 4> nys{ey, ey, ey + 1, ey + 1};
  std::array<index_t, 8> dof{};
  for (int a = 0; a < 4; ++a) {
    for (int comp = 0; comp < c; ++comp) {
      dof[a * c + comp] = grid.dof(nxs[a], nys[a], comp);
    }
  }
  for (int i = 0; i < 4 * c; ++i) {
    if (dof[i] < 0) continue;
    for (int j = 0; j < 4 * c; ++j) {
      if (dof[j] < 0) continue;
      out.push_back({dof[i], dof[j], em(i, j)});
    }
  }
}

}  // namespace

CsrMatrix assemble(const Grid& grid, PdeKind kind,
                   bool literal_grad_div_sign) {
  if (grid.components != components(kind))
    throw ConfigError("assemble: grid has " + std::to_string(grid.components) +
                      " components, operator needs " +
                      std::to_string(components(kind)));

  const ElementMatrix em =
      element_matrix(kind, grid.hx, grid.hy, literal_grad_div_sign);
  const index_t ndof = grid.interior_dof_count();

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(grid.nx) * grid.ny * 16 *
               grid.components * grid.components);
  for (index_t ex = 0; ex + 1 < grid.nx; ++ex) {
    for (index_t ey = 0; ey + 1 < grid.ny; ++ey) {
      scatter_element(grid, em, ex, ey, trip);
    }
  }
  return CsrMatrix::from_triplets(ndof, ndof, std::move(trip));
}

std::pair<CsrMatrix, CsrMatrix> split_interface_matrix(
    const Grid& grid, PdeKind kind, const TreeNode& node,
    bool literal_grad_div_sign) {
  if (node.is_leaf())
    throw ConfigError("split_interface_matrix: node is a leaf");

  const ElementMatrix em =
      element_matrix(kind, grid.hx, grid.hy, literal_grad_div_sign);
  const int c = grid.components;
  const index_t icol = node.interface_col;
  const index_t ni = node.interface_size();
  const index_t base = node.iface_begin;

  // Local DOF indices (within the element) lying on the interface column:
  // nodes 1,2 for the element left of the column, nodes 0,3 for the right.
  const auto build_side = [&](bool left) {
    const index_t ex = left ? icol - 1 : icol;
    const std::array<int, 2> locals = left ? std::array<int, 2>{1, 2}
                                           : std::array<int, 2>{0, 3};
    const std::array<index_t, 4> nxs{ex, ex + 1, ex + 1, ex};
    const std::array<index_t, 4> nys0{0, 0, 1, 1};
    std::vector<Triplet> trip;
    for (index_t ey = 0; ey + 1 < grid.ny; ++ey) {
      for (int a : locals) {
        for (int b : locals) {
          for (int ca = 0; ca < c; ++ca) {
            for (int cb = 0; cb < c; ++cb) {
              const index_t gi = grid.dof(nxs[a], ey + nys0[a], ca);
              const index_t gj = grid.dof(nxs[b], ey + nys0[b], cb);
              if (gi < 0 || gj < 0) continue;
              trip.push_back({gi - base, gj - base, em(a * c + ca, b * c + cb)});
            }
          }
        }
      }
    }
    return CsrMatrix::from_triplets(ni, ni, std::move(trip));
  };

  return {build_side(true), build_side(false)};
}

std::pair<Vector, Vector> manufactured_problem(const CsrMatrix& K,
                                               std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(K.rows());
  Vector u_star(n);
  std::mt19937_64 eng(seed);
  for (auto& v : u_star) {
    // Map the top 53 bits to [0,1) then to [-1,1); avoids the
    // distribution-object portability trap.
    v = 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
  }
  Vector f = spmv(K, u_star);
  return {std::move(u_star), std::move(f)};
}

}  // namespace rsd
