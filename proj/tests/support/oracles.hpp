#ifndef RSD_TESTS_ORACLES_HPP
#define RSD_TESTS_ORACLES_HPP

#include <cstdint>
#include <span>

#include "rsd/csr.hpp"
#include "rsd/dense.hpp"
#include "rsd/grid.hpp"
#include "rsd/pde.hpp"
#include "rsd/tree.hpp"
#include "rsd/types.hpp"

namespace rsd::testing {

/// Independent dense assembly of the interior-DOF operator. Deliberately
/// shares no code with the library path: 3x3 Gauss quadrature (one order
/// higher than needed), its own shape-function derivatives, its own copy of
/// the operator coefficients, dense accumulation.
DenseMatrix dense_assemble(const Grid& grid, PdeKind kind,
                           bool literal_grad_div_sign = false);

/// Exact interface Schur complement of an interior tree node, built from
/// dense blocks of K over the node's full child index sets (no hat
/// approximation):  S = K_II - K_I,VL inv(K_VL) K_VL,I
///                        - K_I,VR inv(K_VR) K_VR,I.
DenseMatrix dense_schur(const CsrMatrix& K, const TreeNode& node);

/// Direct dense solve of K x = b.
Vector dense_solve(const CsrMatrix& K, std::span<const double> b);

/// Deterministic test vector with entries uniform in [-1, 1].
Vector random_vector(index_t n, std::uint64_t seed);

/// ||a - b|| / ||b||, falling back to the absolute norm when b = 0.
double rel_error(std::span<const double> a, std::span<const double> b);

/// Largest absolute entry difference between a sparse and a dense matrix
/// over the full index rectangle (structural zeros count).
double max_abs_diff(const CsrMatrix& a, const DenseMatrix& b);

}  // namespace rsd::testing

#endif
