#ifndef RSD_DENSE_HPP
#define RSD_DENSE_HPP

#include <span>
#include <vector>

#include "rsd/csr.hpp"
#include "rsd/types.hpp"

namespace rsd {

/// Small row-major dense matrix. Used by the dense-LU verification route;
/// the iterative solver never touches it.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static DenseMatrix from_csr(const CsrMatrix& K);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  double& operator()(index_t i, index_t j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(index_t i, index_t j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense LU with partial pivoting, factored in place at construction.
class DenseLu {
 public:
  explicit DenseLu(DenseMatrix a);

  Vector solve(std::span<const double> b) const;

 private:
  DenseMatrix lu_;
  std::vector<index_t> piv_;
};

}  // namespace rsd

#endif
