#include "rsd/csr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "rsd/threading.hpp"

namespace rsd {

CsrMatrix::CsrMatrix(index_t rows, index_t cols,
                     std::vector<std::int64_t> row_ptr,
                     std::vector<index_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 ||
      col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<std::int64_t>(values_.size())) {
    throw DimensionError("CsrMatrix: inconsistent arrays");
  }
}

CsrMatrix CsrMatrix::from_triplets(index_t rows, index_t cols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DimensionError("CsrMatrix::from_triplets: index out of range");
    }
  }
  // Stable sort keeps duplicates in insertion order, so their sum (and with
  // it the whole assembly) is bit-reproducible.
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  std::size_t k = 0;
  for (index_t r = 0; r < rows; ++r) {
    while (k < triplets.size() && triplets[k].row == r) {
      const index_t c = triplets[k].col;
      double v = 0.0;
      while (k < triplets.size() && triplets[k].row == r &&
             triplets[k].col == c) {
        v += triplets[k].value;
        ++k;
      }
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] =
        static_cast<std::int64_t>(m.values_.size());
  }
  return m;
}

CsrMatrix CsrMatrix::identity(index_t n) {
  CsrMatrix m;
  m.rows_ = m.cols_ = n;
  m.row_ptr_.resize(static_cast<std::size_t>(n) + 1);
  m.col_idx_.resize(static_cast<std::size_t>(n));
  m.values_.assign(static_cast<std::size_t>(n), 1.0);
  for (index_t i = 0; i <= n; ++i) m.row_ptr_[i] = i;
  for (index_t i = 0; i < n; ++i) m.col_idx_[i] = i;
  return m;
}

double CsrMatrix::at(index_t i, index_t j) const {
  const auto b = col_idx_.begin() + row_ptr_[i];
  const auto e = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

namespace {

inline double row_dot(const CsrMatrix& K, index_t i,
                      std::span<const double> x) {
  const auto& rp = K.row_ptr();
  const auto& ci = K.col_idx();
  const auto& v = K.values();
  double s = 0.0;
  for (std::int64_t k = rp[i]; k < rp[i + 1]; ++k) {
    s += v[k] * x[static_cast<std::size_t>(ci[k])];
  }
  return s;
}

}  // namespace

void spmv_serial(const CsrMatrix& K, std::span<const double> x,
                 std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(K.cols()) ||
      y.size() != static_cast<std::size_t>(K.rows())) {
    throw DimensionError("spmv: dimension mismatch");
  }
  for (index_t i = 0; i < K.rows(); ++i) y[i] = row_dot(K, i, x);
}

void spmv(const CsrMatrix& K, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(K.cols()) ||
      y.size() != static_cast<std::size_t>(K.rows())) {
    throw DimensionError("spmv: dimension mismatch");
  }
#ifdef RSD_HAVE_OPENMP
  if (threading::enabled()) {
    const index_t n = K.rows();
#pragma omp parallel for schedule(static)
    for (index_t i = 0; i < n; ++i) y[i] = row_dot(K, i, x);
    return;
  }
#endif
  spmv_serial(K, x, y);
}

Vector spmv(const CsrMatrix& K, const Vector& x) {
  Vector y(static_cast<std::size_t>(K.rows()));
  spmv(K, std::span<const double>(x), std::span<double>(y));
  return y;
}

CsrMatrix extract_block(const CsrMatrix& K, const IndexSet& rows,
                        const IndexSet& cols) {
  for (index_t r : rows) {
    if (r < 0 || r >= K.rows())
      throw DimensionError("extract_block: row index out of range");
  }
  std::vector<index_t> col_pos(static_cast<std::size_t>(K.cols()), -1);
  for (std::size_t p = 0; p < cols.size(); ++p) {
    const index_t c = cols[p];
    if (c < 0 || c >= K.cols())
      throw DimensionError("extract_block: column index out of range");
    col_pos[static_cast<std::size_t>(c)] = static_cast<index_t>(p);
  }

  std::vector<std::int64_t> row_ptr(rows.size() + 1, 0);
  std::vector<index_t> col_idx;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const index_t gi = rows[r];
    for (std::int64_t k = K.row_ptr()[gi]; k < K.row_ptr()[gi + 1]; ++k) {
      const index_t p = col_pos[static_cast<std::size_t>(K.col_idx()[k])];
      if (p >= 0) {
        col_idx.push_back(p);
        values.push_back(K.values()[k]);
      }
    }
    row_ptr[r + 1] = static_cast<std::int64_t>(values.size());
  }
  // Source columns are sorted and positions are monotone in the column
  // index, so each extracted row is already sorted.
  return CsrMatrix(static_cast<index_t>(rows.size()),
                   static_cast<index_t>(cols.size()), std::move(row_ptr),
                   std::move(col_idx), std::move(values));
}

void write_matrix_market(const CsrMatrix& K, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << K.rows() << " " << K.cols() << " " << K.nnz() << "\n";
  out.precision(17);
  for (index_t i = 0; i < K.rows(); ++i) {
    for (std::int64_t k = K.row_ptr()[i]; k < K.row_ptr()[i + 1]; ++k) {
      out << (i + 1) << " " << (K.col_idx()[k] + 1) << " " << K.values()[k]
          << "\n";
    }
  }
}

void write_matrix_market(const CsrMatrix& K, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_matrix_market(K, out);
}

}  // namespace rsd
