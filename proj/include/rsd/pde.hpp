#ifndef RSD_PDE_HPP
#define RSD_PDE_HPP

#include <array>
#include <string>

namespace rsd {

/// The four benchmark operators. Poisson is scalar; the others are
/// two-component systems.
enum class PdeKind { Poisson, WeakCoupled, StrongCoupled, NavierLame };

int components(PdeKind kind);
std::string to_string(PdeKind kind);
PdeKind pde_from_string(const std::string& name);  // poisson|weak|strong|lame

/// Coefficients of one benchmark operator in weak form:
///   sum_c  diffusion[c][0] * (u_c)_x (w_c)_x + diffusion[c][1] * (u_c)_y (w_c)_y
/// + mass_coupling * (u_1 w_0 - u_0 w_1)                   (coupled systems)
/// + grad_div * (div u)(div w)                             (vector elasticity)
struct PdeCoefficients {
  int components = 1;
  std::array<std::array<double, 2>, 2> diffusion{{{1.0, 1.0}, {0.0, 0.0}}};
  double mass_coupling = 0.0;
  double grad_div = 0.0;
};

/// literal_grad_div_sign assembles the elasticity grad-div term with the
/// opposite (non-SPD) sign; see fem.hpp.
PdeCoefficients coefficients(PdeKind kind, bool literal_grad_div_sign = false);

inline constexpr double kLameLambda = 10.0;
inline constexpr double kLameMu = 1.0;

}  // namespace rsd

#endif
