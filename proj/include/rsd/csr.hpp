#ifndef RSD_CSR_HPP
#define RSD_CSR_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rsd/types.hpp"

namespace rsd {

/// One assembled/extracted matrix entry prior to compression.
struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; duplicate triplets are summed on construction.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(index_t rows, index_t cols, std::vector<std::int64_t> row_ptr,
            std::vector<index_t> col_idx, std::vector<double> values);

  static CsrMatrix from_triplets(index_t rows, index_t cols,
                                 std::vector<Triplet> triplets);
  static CsrMatrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<index_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Value at (i, j), zero if the entry is not stored.
  double at(index_t i, index_t j) const;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<index_t> col_idx_;
  std::vector<double> values_;
};

/// y = K x, serial reference kernel.
void spmv_serial(const CsrMatrix& K, std::span<const double> x,
                 std::span<double> y);

/// y = K x, row-parallel when threading is enabled. Bitwise identical to
/// spmv_serial: each row is accumulated in the same order either way.
void spmv(const CsrMatrix& K, std::span<const double> x, std::span<double> y);

Vector spmv(const CsrMatrix& K, const Vector& x);

/// Submatrix with rows/cols renumbered by their position in the (sorted)
/// index sets.
CsrMatrix extract_block(const CsrMatrix& K, const IndexSet& rows,
                        const IndexSet& cols);

/// Matrix Market coordinate output ("%%MatrixMarket matrix coordinate real
/// general"), 1-based indices, full precision.
void write_matrix_market(const CsrMatrix& K, std::ostream& out);
void write_matrix_market(const CsrMatrix& K, const std::string& path);

}  // namespace rsd

#endif
