#pragma once

// Exact integer linear algebra on arbitrary-precision matrices: determinants
// by fraction-free elimination, Hermite and Smith normal forms with recorded
// unimodular transforms, linear Diophantine solving, and primitive kernel
// vectors.  No floating point anywhere in this header.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace maslov {

using Int = mpz_class;
using IntVec = std::vector<Int>;

inline Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// g = gcd(a, b) >= 0 together with p, q such that p*a + q*b = g.
struct ExtGcd {
  Int g, p, q;
};

inline ExtGcd ext_gcd(const Int& a, const Int& b) {
  ExtGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.p.get_mpz_t(), r.q.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

// Floor division (rounds toward -infinity), matching the HNF reduction step.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int exact_div(const Int& a, const Int& b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int content(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = int_gcd(g, x);
  return g;
}

// Dense row-major integer matrix.
class IntMat {
 public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

  static IntMat identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  // Convenience literal constructor used pervasively in tests and the CLI.
  static IntMat from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    IntMat m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("from_rows: ragged rows");
      std::size_t j = 0;
      for (long x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  bool operator==(const IntMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const IntMat& o) const { return !(*this == o); }

  IntMat operator*(const IntMat& o) const {
    if (cols_ != o.rows_) throw DimensionError("matmul: inner dimensions differ");
    IntMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& aik = (*this)(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  IntMat operator+(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("add: shapes differ");
    IntMat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }

  IntMat operator-(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError("sub: shapes differ");
    IntMat r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }

  IntMat operator-() const {
    IntMat r = *this;
    for (Int& x : r.a_) x = -x;
    return r;
  }

  IntMat transpose() const {
    IntMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  IntVec row(std::size_t i) const {
    IntVec v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  IntVec col(std::size_t j) const {
    IntVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  // Row vector times matrix.
  IntVec mul_row(const IntVec& x) const {
    if (x.size() != rows_) throw DimensionError("mul_row: length mismatch");
    IntVec r(cols_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) r[j] += x[i] * (*this)(i, j);
    }
    return r;
  }

  // Matrix times column vector.
  IntVec mul_col(const IntVec& x) const {
    if (x.size() != cols_) throw DimensionError("mul_col: length mismatch");
    IntVec r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ' ';
        os << (*this)(i, j);
      }
      os << '\n';
    }
    return os.str();
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

// Nonzero integer vector with coprime entries.
class PrimitiveVector {
 public:
  explicit PrimitiveVector(IntVec v) : v_(std::move(v)) {
    if (v_.empty()) throw NotPrimitiveError("primitive vector: empty");
    Int g = content(v_);
    if (g == 0) throw NotPrimitiveError("primitive vector: zero vector");
    if (g != 1)
      throw NotPrimitiveError("primitive vector: entries share factor " +
                              g.get_str());
  }

  const IntVec& entries() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Int& operator[](std::size_t i) const { return v_[i]; }

 private:
  IntVec v_;
};

// Determinant by Bareiss fraction-free elimination; all divisions exact.
inline Int det_exact(const IntMat& m) {
  if (!m.is_square()) throw DimensionError("det_exact: matrix not square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = exact_div(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

inline bool is_unimodular(const IntMat& m) {
  if (!m.is_square()) return false;
  Int d = det_exact(m);
  return d == 1 || d == -1;
}

// Row-style Hermite normal form: h = t * m with det(t) = ±1; h is upper
// echelon with positive pivots and entries above each pivot reduced into
// [0, pivot).
struct HnfResult {
  IntMat h;  // the normal form
  IntMat t;  // unimodular row transform, t * m = h
};

inline HnfResult hermite_normal_form(const IntMat& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  IntMat h = m;
  IntMat t = IntMat::identity(rows);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && h(p, c) == 0) ++p;
    if (p == rows) continue;  // no pivot in this column
    if (p != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(h(r, j), h(p, j));
      for (std::size_t j = 0; j < rows; ++j) std::swap(t(r, j), t(p, j));
    }
    // Fold every lower row into the pivot row via extended gcd; the 2x2
    // block [[p,q],[-b/g, a/g]] has determinant 1.
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (h(i, c) == 0) continue;
      ExtGcd e = ext_gcd(h(r, c), h(i, c));
      Int ar = exact_div(h(r, c), e.g), ai = exact_div(h(i, c), e.g);
      for (std::size_t j = 0; j < cols; ++j) {
        Int hr = h(r, j), hi = h(i, j);
        h(r, j) = e.p * hr + e.q * hi;
        h(i, j) = -ai * hr + ar * hi;
      }
      for (std::size_t j = 0; j < rows; ++j) {
        Int tr = t(r, j), ti = t(i, j);
        t(r, j) = e.p * tr + e.q * ti;
        t(i, j) = -ai * tr + ar * ti;
      }
    }
    if (h(r, c) < 0) {
      for (std::size_t j = 0; j < cols; ++j) h(r, j) = -h(r, j);
      for (std::size_t j = 0; j < rows; ++j) t(r, j) = -t(r, j);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (h(i, c) == 0) continue;
      Int f = floor_div(h(i, c), h(r, c));
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) h(i, j) -= f * h(r, j);
      for (std::size_t j = 0; j < rows; ++j) t(i, j) -= f * t(r, j);
    }
    ++r;
  }
  return {std::move(h), std::move(t)};
}

// Number of nonzero rows of the Hermite form = exact rank.
inline std::size_t rank_exact(const IntMat& m) {
  HnfResult r = hermite_normal_form(m);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < r.h.rows(); ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < r.h.cols(); ++j)
      if (r.h(i, j) != 0) { nonzero = true; break; }
    if (nonzero) ++rank;
  }
  return rank;
}

// Inverse of a unimodular matrix.  The Hermite form of a unimodular matrix
// is the identity, so the recorded transform is exactly the inverse.
inline IntMat inverse_unimodular(const IntMat& m) {
  if (!m.is_square()) throw DimensionError("inverse: matrix not square");
  HnfResult r = hermite_normal_form(m);
  if (r.h != IntMat::identity(m.rows()))
    throw NotUnimodularError("inverse: matrix is not unimodular");
  return r.t;
}

// Smith normal form: left * m * right = diag(d) with d[i] >= 0 and
// d[i] | d[i+1]; left and right unimodular.
struct SnfDecomposition {
  IntMat left;
  IntVec diag;  // length min(rows, cols)
  IntMat right;
};

namespace detail {

inline void snf_swap_rows(IntMat& a, IntMat& l, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
  for (std::size_t c = 0; c < l.cols(); ++c) std::swap(l(i, c), l(j, c));
}

inline void snf_swap_cols(IntMat& a, IntMat& r, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < a.rows(); ++c) std::swap(a(c, i), a(c, j));
  for (std::size_t c = 0; c < r.rows(); ++c) std::swap(r(c, i), r(c, j));
}

// rows[i] -= f * rows[j]
inline void snf_add_row(IntMat& a, IntMat& l, std::size_t i, std::size_t j,
                        const Int& f) {
  for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) -= f * a(j, c);
  for (std::size_t c = 0; c < l.cols(); ++c) l(i, c) -= f * l(j, c);
}

// cols[i] -= f * cols[j]
inline void snf_add_col(IntMat& a, IntMat& r, std::size_t i, std::size_t j,
                        const Int& f) {
  for (std::size_t c = 0; c < a.rows(); ++c) a(c, i) -= f * a(c, j);
  for (std::size_t c = 0; c < r.rows(); ++c) r(c, i) -= f * r(c, j);
}

}  // namespace detail

inline SnfDecomposition smith_normal_form(const IntMat& m) {
  using namespace detail;
  std::size_t rows = m.rows(), cols = m.cols();
  std::size_t nd = rows < cols ? rows : cols;
  IntMat a = m;
  IntMat l = IntMat::identity(rows);
  IntMat r = IntMat::identity(cols);

  for (std::size_t k = 0; k < nd; ++k) {
    // Find the smallest-magnitude nonzero entry in the trailing block and
    // move it to (k, k).
    for (;;) {
      std::size_t bi = k, bj = k;
      bool found = false;
      for (std::size_t i = k; i < rows; ++i)
        for (std::size_t j = k; j < cols; ++j) {
          if (a(i, j) == 0) continue;
          if (!found ||
              mpz_cmpabs(a(i, j).get_mpz_t(), a(bi, bj).get_mpz_t()) < 0) {
            bi = i; bj = j; found = true;
          }
        }
      if (!found) {
        // trailing block all zero: remaining divisors are 0
        goto done_pivot;
      }
      if (bi != k) snf_swap_rows(a, l, k, bi);
      if (bj != k) snf_swap_cols(a, r, k, bj);
      // Reduce column k and row k by the pivot.
      bool reduced = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (a(i, k) == 0) continue;
        Int f = floor_div(a(i, k), a(k, k));
        snf_add_row(a, l, i, k, f);
        if (a(i, k) != 0) reduced = false;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (a(k, j) == 0) continue;
        Int f = floor_div(a(k, j), a(k, k));
        snf_add_col(a, r, j, k, f);
        if (a(k, j) != 0) reduced = false;
      }
      if (!reduced) continue;  // new smaller remainders appeared; iterate
      // Pivot must divide every entry of the trailing block; if not, fold
      // the offending row in and iterate.
      bool divides = true;
      for (std::size_t i = k + 1; i < rows && divides; ++i)
        for (std::size_t j = k + 1; j < cols && divides; ++j) {
          if (a(i, j) % a(k, k) != 0) {
            snf_add_row(a, l, k, i, Int(-1));
            divides = false;
          }
        }
      if (divides) break;
    }
    if (a(k, k) < 0) {
      for (std::size_t j = 0; j < cols; ++j) a(k, j) = -a(k, j);
      for (std::size_t j = 0; j < rows; ++j) l(k, j) = -l(k, j);
    }
  }
done_pivot:;

  IntVec d(nd);
  for (std::size_t i = 0; i < nd; ++i) d[i] = a(i, i);
  return {std::move(l), std::move(d), std::move(r)};
}

// Solution of the row system x * b = a over the integers.  On success the
// canonical solution has its homogeneous part reduced to zero (all free
// coordinates of the Smith basis set to 0).  On failure the witness names
// the elementary divisor d and the transformed target entry c with d ∤ c
// (d = 0 for an unmatchable zero divisor).
struct DiophantineResult {
  std::optional<IntVec> solution;
  std::size_t obstruction_index = 0;
  Int obstruction_divisor = 0;
  Int obstruction_target = 0;
};

inline DiophantineResult solve_linear_diophantine(const IntMat& b,
                                                  const IntVec& a) {
  std::size_t p = b.rows(), q = b.cols();
  if (a.size() != q)
    throw DimensionError("diophantine: right-hand side length mismatch");
  SnfDecomposition s = smith_normal_form(b);
  // x*b = a  <=>  (x * left^-1) * D = a * right, with D = left*b*right.
  IntVec c = s.right.mul_row(a);
  std::size_t nd = s.diag.size();
  IntVec y(p, Int(0));
  for (std::size_t j = 0; j < q; ++j) {
    const Int dj = j < nd ? s.diag[j] : Int(0);
    if (dj == 0) {
      if (c[j] != 0) return {std::nullopt, j, dj, c[j]};
      continue;
    }
    if (c[j] % dj != 0) return {std::nullopt, j, dj, c[j]};
    if (j < p) y[j] = exact_div(c[j], dj);
  }
  return {s.left.mul_row(y), 0, 0, 0};
}

// Integer kernel vector of a singular square matrix, normalized to coprime
// entries with the first nonzero entry positive.
inline PrimitiveVector primitive_kernel_vector(const IntMat& m) {
  if (!m.is_square()) throw DimensionError("kernel: matrix not square");
  std::size_t n = m.rows();
  SnfDecomposition s = smith_normal_form(m);
  std::size_t k = 0;
  while (k < n && s.diag[k] != 0) ++k;
  if (k == n) throw NoKernelError("kernel: matrix is nonsingular");
  // m * (right * e_k) = left^-1 * D * e_k = 0; columns of a unimodular
  // matrix are already primitive.
  IntVec v = s.right.col(k);
  Int g = content(v);
  if (g != 1)
    for (Int& x : v) x = exact_div(x, g);
  for (const Int& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = -y;
    break;
  }
  return PrimitiveVector(std::move(v));
}

}  // namespace maslov
