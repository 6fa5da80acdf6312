#include "rsd/dense.hpp"

#include <cmath>
#include <utility>

namespace rsd {

DenseMatrix DenseMatrix::from_csr(const CsrMatrix& K) {
  DenseMatrix a(K.rows(), K.cols());
  for (index_t i = 0; i < K.rows(); ++i) {
    for (std::int64_t k = K.row_ptr()[i]; k < K.row_ptr()[i + 1]; ++k) {
      a(i, K.col_idx()[k]) = K.values()[k];
    }
  }
  return a;
}

DenseLu::DenseLu(DenseMatrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols())
    throw DimensionError("DenseLu: matrix not square");
  const index_t n = lu_.rows();
  piv_.resize(static_cast<std::size_t>(n));
  for (index_t j = 0; j < n; ++j) {
    index_t p = j;
    double pmax = std::abs(lu_(j, j));
    for (index_t i = j + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, j));
      if (v > pmax) {
        pmax = v;
        p = i;
      }
    }
    piv_[j] = p;
    if (pmax == 0.0) throw FactorizationError("DenseLu: singular pivot");
    if (p != j) {
      for (index_t k = 0; k < n; ++k) std::swap(lu_(j, k), lu_(p, k));
    }
    const double d = lu_(j, j);
    for (index_t i = j + 1; i < n; ++i) {
      const double l = lu_(i, j) / d;
      lu_(i, j) = l;
      for (index_t k = j + 1; k < n; ++k) lu_(i, k) -= l * lu_(j, k);
    }
  }
}

Vector DenseLu::solve(std::span<const double> b) const {
  const index_t n = lu_.rows();
  if (b.size() != static_cast<std::size_t>(n))
    throw DimensionError("DenseLu::solve: dimension mismatch");
  Vector x(b.begin(), b.end());
  // The factorization swaps whole rows, including already-stored L columns,
  // so the stored L is in fully pivoted row order: apply every interchange
  // to the right-hand side before the triangular solves.
  for (index_t j = 0; j < n; ++j)
    if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
  for (index_t j = 0; j < n; ++j) {
    for (index_t i = j + 1; i < n; ++i) x[i] -= lu_(i, j) * x[j];
  }
  for (index_t j = n - 1; j >= 0; --j) {
    x[j] /= lu_(j, j);
    for (index_t i = 0; i < j; ++i) x[i] -= lu_(i, j) * x[j];
  }
  return x;
}

}  // namespace rsd
