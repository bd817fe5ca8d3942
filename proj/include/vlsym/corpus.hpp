#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlsym/ast.hpp"
#include "vlsym/poly.hpp"

namespace vlsym {

/// Compressed row storage. `T` is Rational for numeric work or Poly for
/// symbolic entries.
template <class T>
struct CrsMatrix {
  std::uint32_t rows = 0, cols = 0;
  std::vector<T> val;
  std::vector<std::uint32_t> col_ind;
  std::vector<std::uint32_t> row_ptr;  // rows + 1 entries
};

template <class T>
struct DenseMatrix {
  std::uint32_t n = 0, m = 0;
  std::vector<T> data;  // row-major, n * m entries
};

using CrsMatrixNative = CrsMatrix<Rational>;
using DenseMatrixNative = DenseMatrix<Rational>;

/// Structure of a CRS matrix without its values.
struct Skeleton {
  std::uint32_t rows = 0, cols = 0;
  std::vector<std::uint32_t> row_ptr;
  std::vector<std::uint32_t> col_ind;

  std::size_t nonzeros() const { return col_ind.size(); }
  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

/// row_ptr starts at 0, never decreases and ends at NZ; columns increase
/// strictly within a row and stay below cols.
bool well_formed(const Skeleton& s);

template <class T>
Skeleton skeleton_of(const CrsMatrix<T>& m) {
  return Skeleton{m.rows, m.cols, m.row_ptr, m.col_ind};
}

template <class T>
CrsMatrix<T> with_values(const Skeleton& s, std::vector<T> val) {
  return CrsMatrix<T>{s.rows, s.cols, std::move(val), s.col_ind, s.row_ptr};
}

template <class T>
std::vector<T> crs_matvec_native(const CrsMatrix<T>& m, const std::vector<T>& v) {
  std::vector<T> p(m.rows);
  std::uint32_t next = m.row_ptr[0];
  for (std::uint32_t i = 0; i < m.rows; i++) {
    T s = T(0);
    std::uint32_t h = next;
    next = m.row_ptr[i + 1];
    for (; h < next; h++) {
      T x = m.val[h];
      std::uint32_t j = m.col_ind[h];
      T y = v[j];
      s = x * y + s;
    }
    p[i] = s;
  }
  return p;
}

template <class T>
DenseMatrix<T> crs_to_dense_native(const CrsMatrix<T>& m) {
  DenseMatrix<T> d{m.rows, m.cols, std::vector<T>(static_cast<std::size_t>(m.rows) * m.cols, T(0))};
  for (std::uint32_t i = 0; i < m.rows; ++i) {
    for (std::uint32_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      d.data[static_cast<std::size_t>(i) * m.cols + m.col_ind[k]] = m.val[k];
    }
  }
  return d;
}

template <class T>
std::vector<T> dense_matvec_native(const DenseMatrix<T>& d, const std::vector<T>& v) {
  std::vector<T> p(d.n);
  for (std::uint32_t i = 0; i < d.n; ++i) {
    T s = T(0);
    for (std::uint32_t j = 0; j < d.m; ++j) s += d.data[static_cast<std::size_t>(i) * d.m + j] * v[j];
    p[i] = s;
  }
  return p;
}

/// Every well-formed skeleton with exactly `rows` rows and `cols` columns,
/// once each: each row independently stores any subset of the columns.
std::vector<Skeleton> enumerate_skeletons(std::uint32_t rows, std::uint32_t cols);

/// Bundled VL files.
inline const std::vector<std::string> kCleanCorpus = {"driver.vl", "matrix.vl", "sparse.vl"};
inline const std::vector<std::string> kSwapBugCorpus = {"driver.vl", "matrix.vl", "sparse_bug_swap.vl"};
inline const std::vector<std::string> kColmaxBugCorpus = {"driver_bug_colmax.vl", "matrix.vl", "sparse.vl"};

/// Reads `names` from `dir`; throws std::runtime_error for a missing file.
std::vector<SourceFile> load_corpus(const std::string& dir, const std::vector<std::string>& names);

}  // namespace vlsym
