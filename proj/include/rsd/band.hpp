#ifndef RSD_BAND_HPP
#define RSD_BAND_HPP

#include <span>
#include <vector>

#include "rsd/csr.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// LU factorization of a banded matrix with partial pivoting confined to the
/// band. Row interchanges widen the upper band by at most the lower
/// bandwidth; storage is allocated for the widened band up front. Immutable
/// once factored.
class BandedFactorization {
 public:
  static BandedFactorization factor(const CsrMatrix& K);

  void solve(std::span<const double> b, std::span<double> x) const;
  Vector solve(std::span<const double> b) const;

  index_t dim() const { return n_; }
  index_t lower_bandwidth() const { return kl_; }
  index_t upper_bandwidth() const { return ku_; }

 private:
  BandedFactorization() = default;

  index_t n_ = 0;
  index_t kl_ = 0;
  index_t ku_ = 0;   // bandwidth of the input, before pivot fill
  index_t ldab_ = 0; // 2*kl_ + ku_ + 1
  std::vector<double> ab_;  // column-major band storage, LAPACK layout
  std::vector<index_t> ipiv_;
};

BandedFactorization band_factor(const CsrMatrix& K);
Vector band_solve(const BandedFactorization& F, std::span<const double> b);

}  // namespace rsd

#endif
