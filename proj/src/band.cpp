#include "rsd/band.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsd {

BandedFactorization BandedFactorization::factor(const CsrMatrix& K) {
  if (K.rows() != K.cols())
    throw DimensionError("band_factor: matrix not square");
  const index_t n = K.rows();

  index_t kl = 0, ku = 0;
  for (index_t i = 0; i < n; ++i) {
    const std::int64_t b = K.row_ptr()[i], e = K.row_ptr()[i + 1];
    if (b == e) continue;
    kl = std::max(kl, i - K.col_idx()[b]);
    ku = std::max(ku, K.col_idx()[e - 1] - i);
  }

  BandedFactorization f;
  f.n_ = n;
  f.kl_ = kl;
  f.ku_ = ku;
  f.ldab_ = 2 * kl + ku + 1;
  f.ab_.assign(static_cast<std::size_t>(f.ldab_) * n, 0.0);
  f.ipiv_.resize(static_cast<std::size_t>(n));

  const index_t ldab = f.ldab_;
  const index_t off = kl + ku;  // diagonal offset within a column
  auto* ab = f.ab_.data();
  // A(i, j) lives at ab[j*ldab + off + i - j]
  for (index_t i = 0; i < n; ++i) {
    for (std::int64_t k = K.row_ptr()[i]; k < K.row_ptr()[i + 1]; ++k) {
      const index_t j = K.col_idx()[k];
      ab[static_cast<std::size_t>(j) * ldab + off + i - j] = K.values()[k];
    }
  }

  index_t ju = 0;  // rightmost column touched by eliminations so far
  for (index_t j = 0; j < n; ++j) {
    double* colj = ab + static_cast<std::size_t>(j) * ldab + off;
    const index_t km = std::min(kl, n - 1 - j);

    index_t jp = 0;
    double pmax = std::abs(colj[0]);
    for (index_t t = 1; t <= km; ++t) {
      const double v = std::abs(colj[t]);
      if (v > pmax) {
        pmax = v;
        jp = t;
      }
    }
    f.ipiv_[j] = j + jp;
    if (pmax == 0.0) {
      throw FactorizationError("band_factor: singular pivot at column " +
                               std::to_string(j));
    }
    ju = std::max(ju, std::min<index_t>(j + ku + jp, n - 1));
    if (jp != 0) {
      for (index_t k = j; k <= ju; ++k) {
        double* colk = ab + static_cast<std::size_t>(k) * ldab + off;
        std::swap(colk[j - k], colk[j + jp - k]);
      }
    }
    if (km > 0) {
      const double d = colj[0];
      for (index_t t = 1; t <= km; ++t) colj[t] /= d;
      for (index_t k = j + 1; k <= ju; ++k) {
        double* colk = ab + static_cast<std::size_t>(k) * ldab + off;
        const double fk = colk[j - k];
        if (fk != 0.0) {
          for (index_t t = 1; t <= km; ++t) colk[j + t - k] -= colj[t] * fk;
        }
      }
    }
  }
  return f;
}

void BandedFactorization::solve(std::span<const double> b,
                                std::span<double> x) const {
  if (b.size() != static_cast<std::size_t>(n_) || x.size() != b.size())
    throw DimensionError("band_solve: dimension mismatch");
  std::copy(b.begin(), b.end(), x.begin());

  const index_t off = kl_ + ku_;
  const double* ab = ab_.data();
  for (index_t j = 0; j < n_; ++j) {
    const index_t p = ipiv_[j];
    if (p != j) std::swap(x[j], x[p]);
    const index_t km = std::min(kl_, n_ - 1 - j);
    const double* colj = ab + static_cast<std::size_t>(j) * ldab_ + off;
    const double xj = x[j];
    for (index_t t = 1; t <= km; ++t) x[j + t] -= colj[t] * xj;
  }
  for (index_t j = n_ - 1; j >= 0; --j) {
    const double* colj = ab + static_cast<std::size_t>(j) * ldab_ + off;
    const double xj = x[j] / colj[0];
    x[j] = xj;
    const index_t i0 = std::max<index_t>(0, j - off);
    for (index_t i = i0; i < j; ++i) x[i] -= colj[i - j] * xj;
  }
}

Vector BandedFactorization::solve(std::span<const double> b) const {
  Vector x(b.size());
  solve(b, x);
  return x;
}

BandedFactorization band_factor(const CsrMatrix& K) {
  return BandedFactorization::factor(K);
}

Vector band_solve(const BandedFactorization& F, std::span<const double> b) {
  return F.solve(b);
}

}  // namespace rsd
