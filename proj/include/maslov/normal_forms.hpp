#pragma once

// Conjugacy normal forms of integer matrices with determinant 1 and an
// eigenvalue equal to 1: triangularization over SL(n,Z) for n in {2,3},
// the rank-one unipotent reduction, block-diagonalization via a linear
// Diophantine condition, basis-change transport of Maslov/action vectors,
// and the exact eigenvector check M*mu = mu.
//
// Conventions (see docs/math_conventions.md): conjugators act as
// M' = T*M*T^-1; cycle/index/action data transform as mu' = T*mu, I' = T*I.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "intmat.hpp"

namespace maslov {

using ActionVec = std::vector<double>;

struct EigenSignature {
  bool has_plus_one = false;
  bool has_minus_one = false;
  std::size_t ma_plus = 0;   // algebraic multiplicity of +1
  std::size_t mg_plus = 0;   // geometric multiplicity of +1
  std::size_t ma_minus = 0;  // algebraic multiplicity of -1
  std::size_t mg_minus = 0;  // geometric multiplicity of -1
  bool other_eigenvalues_irrational = false;
};

enum class FormTag {
  Triangular2,       // [[1,k],[0,1]]
  UpperUnipotent3,   // unit upper triangular
  MixedMinusOne3,    // [[1,*,*],[0,-1,*],[0,0,-1]]
  IrrationalBlock3,  // [[1,*,*],[0, B ]] with B in SL(2,Z), no rational eigenvalues
  NoUnitEigenvalue,  // verdict, not a form: the eigenvalue-1 hypothesis fails
};

inline const char* form_tag_name(FormTag t) {
  switch (t) {
    case FormTag::Triangular2: return "Triangular2";
    case FormTag::UpperUnipotent3: return "UpperUnipotent3";
    case FormTag::MixedMinusOne3: return "MixedMinusOne3";
    case FormTag::IrrationalBlock3: return "IrrationalBlock3";
    case FormTag::NoUnitEigenvalue: return "NoUnitEigenvalue";
  }
  return "?";
}

struct ClassificationResult {
  FormTag form;
  IntMat conjugator;   // T with T*M*T^-1 = normal_form, det(T) = 1
  IntMat normal_form;  // M'
  EigenSignature signature;
};

namespace detail {

inline void require_sl(const IntMat& m, const char* who) {
  if (!m.is_square()) throw DimensionError(std::string(who) + ": not square");
  if (det_exact(m) != 1)
    throw NotUnimodularError(std::string(who) + ": determinant is not 1");
}

// Monic characteristic polynomial coefficients c[0..n], c[n] = 1, via sums
// of principal minors: c[n-k] = (-1)^k * e_k.  Exact for any small n.
inline IntVec characteristic_polynomial(const IntMat& m) {
  std::size_t n = m.rows();
  IntVec c(n + 1, Int(0));
  c[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    Int ek = 0;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      IntMat sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
      ek += det_exact(sub);
      // next k-subset of {0..n-1}
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    c[n - k] = (k % 2 == 0) ? ek : Int(-ek);
  }
  return c;
}

inline Int eval_poly(const IntVec& c, const Int& x) {
  Int acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Divide c by (lambda - root); exact when root is a root of c.
inline IntVec deflate(const IntVec& c, const Int& root) {
  std::size_t deg = c.size() - 1;
  IntVec q(deg, Int(0));
  Int carry = c[deg];
  for (std::size_t i = deg; i-- > 0;) {
    q[i] = carry;
    carry = c[i] + root * carry;
  }
  // carry is the remainder = c(root); callers only deflate actual roots
  return q;
}

inline std::size_t root_multiplicity(IntVec c, const Int& root) {
  std::size_t mult = 0;
  while (c.size() > 1 && eval_poly(c, root) == 0) {
    c = deflate(c, root);
    ++mult;
  }
  return mult;
}

// True when the polynomial has at least one rational root.  Rational roots
// of a monic integer polynomial are integers dividing the constant term.
inline bool has_rational_root(const IntVec& c) {
  if (c.size() <= 1) return false;
  Int c0 = c[0];
  if (c0 == 0) return true;  // root 0
  Int d = 1;
  Int bound = abs(c0);
  for (; d <= bound; ++d) {
    if (c0 % d != 0) continue;
    if (eval_poly(c, d) == 0 || eval_poly(c, Int(-d)) == 0) return true;
  }
  return false;
}

}  // namespace detail

// Exact eigenstructure of a determinant-1 integer matrix at eigenvalues ±1.
inline EigenSignature eigen_signature(const IntMat& m) {
  detail::require_sl(m, "eigen_signature");
  std::size_t n = m.rows();
  IntVec cp = detail::characteristic_polynomial(m);
  EigenSignature sig;
  sig.ma_plus = detail::root_multiplicity(cp, Int(1));
  sig.ma_minus = detail::root_multiplicity(cp, Int(-1));
  sig.has_plus_one = sig.ma_plus > 0;
  sig.has_minus_one = sig.ma_minus > 0;
  if (sig.has_plus_one)
    sig.mg_plus = n - rank_exact(m - IntMat::identity(n));
  if (sig.has_minus_one)
    sig.mg_minus = n - rank_exact(m + IntMat::identity(n));
  IntVec rest = cp;
  for (std::size_t i = 0; i < sig.ma_plus; ++i) rest = detail::deflate(rest, Int(1));
  for (std::size_t i = 0; i < sig.ma_minus; ++i) rest = detail::deflate(rest, Int(-1));
  if (rest.size() > 1)
    sig.other_eigenvalues_irrational = !detail::has_rational_root(rest);
  return sig;
}

// S in SL(n,Z) whose first column is the given primitive vector.  Built from
// the Hermite transform W with W*u = e1 as S = W^-1, determinant fixed to +1
// by negating a non-first column.
inline IntMat unimodular_completion(const PrimitiveVector& u) {
  std::size_t n = u.size();
  IntMat col(n, 1);
  for (std::size_t i = 0; i < n; ++i) col(i, 0) = u[i];
  HnfResult r = hermite_normal_form(col);
  // primitivity makes the Hermite form exactly e1
  if (r.h(0, 0) != 1) throw NotPrimitiveError("completion: entries not coprime");
  IntMat s = inverse_unimodular(r.t);
  if (det_exact(s) != 1) {
    if (n < 2)
      throw DimensionError("completion: (-1) has no det-1 completion in dimension 1");
    for (std::size_t i = 0; i < n; ++i) s(i, n - 1) = -s(i, n - 1);
  }
  return s;
}

// Conjugate m so the first column becomes eps*e1, using the primitive
// eigenvector of eigenvalue eps in {+1,-1}.
struct ConjugationResult {
  IntMat t;  // in SL(n,Z)
  IntMat m;  // t * input * t^-1
};

inline ConjugationResult conjugate_to_e1(const IntMat& m, int eps) {
  detail::require_sl(m, "conjugate_to_e1");
  std::size_t n = m.rows();
  IntMat shifted = m;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= eps;
  if (det_exact(shifted) != 0)
    throw NoKernelError("conjugate_to_e1: " + std::to_string(eps) +
                        " is not an eigenvalue");
  PrimitiveVector u = primitive_kernel_vector(shifted);
  IntMat s = unimodular_completion(u);
  IntMat t = inverse_unimodular(s);
  return {t, t * m * s};
}

namespace detail {

inline bool matches_form(const IntMat& m, FormTag tag) {
  auto lower_zero = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (m(i, j) != 0) return false;
    return true;
  };
  switch (tag) {
    case FormTag::Triangular2:
      return m.rows() == 2 && lower_zero(2) && m(0, 0) == 1 && m(1, 1) == 1;
    case FormTag::UpperUnipotent3:
      return m.rows() == 3 && lower_zero(3) && m(0, 0) == 1 && m(1, 1) == 1 &&
             m(2, 2) == 1;
    case FormTag::MixedMinusOne3:
      return m.rows() == 3 && lower_zero(3) && m(0, 0) == 1 && m(1, 1) == -1 &&
             m(2, 2) == -1;
    case FormTag::IrrationalBlock3:
      return m.rows() == 3 && m(0, 0) == 1 && m(1, 0) == 0 && m(2, 0) == 0;
    default:
      return false;
  }
}

// Embed a 2x2 transform into the lower-right block of a 3x3 identity,
// the nested shape T_n = [[1, 0],[0, T_{n-1}]].
inline IntMat embed_lower(const IntMat& t2) {
  IntMat e = IntMat::identity(3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) e(i + 1, j + 1) = t2(i, j);
  return e;
}

}  // namespace detail

// Normal form of a determinant-1 matrix with eigenvalue 1 (n in {2,3}).
// Without eigenvalue 1 the result carries the NoUnitEigenvalue verdict and
// leaves the matrix untouched.
inline ClassificationResult classify(const IntMat& m) {
  detail::require_sl(m, "classify");
  std::size_t n = m.rows();
  EigenSignature sig = eigen_signature(m);
  if (!sig.has_plus_one)
    return {FormTag::NoUnitEigenvalue, IntMat::identity(n), m, sig};
  if (n != 2 && n != 3)
    throw DimensionError("classify: forms computed only for 2x2 and 3x3");

  FormTag tag;
  IntMat t = IntMat::identity(n);
  IntMat nf = m;
  if (n == 2) {
    ConjugationResult c = conjugate_to_e1(m, 1);
    t = c.t;
    nf = c.m;
    tag = FormTag::Triangular2;
  } else {
    ConjugationResult c1 = conjugate_to_e1(m, 1);
    // c1.m = [[1, *],[0, A]] with A in SL(2,Z)
    IntMat a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) a(i, j) = c1.m(i + 1, j + 1);
    if (sig.ma_plus == 3) {
      ConjugationResult c2 = conjugate_to_e1(a, 1);
      IntMat e = detail::embed_lower(c2.t);
      t = e * c1.t;
      nf = t * m * inverse_unimodular(t);
      tag = FormTag::UpperUnipotent3;
    } else if (sig.ma_minus == 2) {
      ConjugationResult c2 = conjugate_to_e1(a, -1);
      IntMat e = detail::embed_lower(c2.t);
      t = e * c1.t;
      nf = t * m * inverse_unimodular(t);
      tag = FormTag::MixedMinusOne3;
    } else {
      t = c1.t;
      nf = c1.m;
      tag = FormTag::IrrationalBlock3;
    }
  }
  if (det_exact(t) != 1 || !detail::matches_form(nf, tag) ||
      t * m != nf * t)
    throw Error("classify: internal conjugation check failed");
  return {tag, t, nf, sig};
}

// Rank-one unipotent reduction: for M = identity + N with rank(N) = 1 and
// N^2 = 0, produce T in SL(3,Z) with T*M*T^-1 = identity + g*E13 where g is
// the content of N.
struct Mg2Reduction {
  IntMat t;
  Int g;
};

inline Mg2Reduction reduce_mg2(const IntMat& m) {
  detail::require_sl(m, "reduce_mg2");
  if (m.rows() != 3) throw DimensionError("reduce_mg2: expects a 3x3 matrix");
  EigenSignature sig = eigen_signature(m);
  if (sig.ma_plus != 3 || sig.mg_plus != 2)
    throw MultiplicityError("reduce_mg2: requires ma=3, mg=2 at eigenvalue 1");
  IntMat nmat = m - IntMat::identity(3);

  // N = u * w^T: u spans the rank-one column space, w holds the weights.
  std::size_t piv = 0;
  while (piv < 3 && nmat(0, piv) == 0 && nmat(1, piv) == 0 && nmat(2, piv) == 0)
    ++piv;
  IntVec ucol = nmat.col(piv);
  Int cg = content(ucol);
  for (Int& x : ucol) x = exact_div(x, cg);
  for (const Int& x : ucol) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : ucol) y = -y;
    break;
  }
  std::size_t i0 = 0;
  while (ucol[i0] == 0) ++i0;
  IntVec w(3);
  for (std::size_t j = 0; j < 3; ++j) w[j] = exact_div(nmat(i0, j), ucol[i0]);
  IntMat check(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) check(i, j) = ucol[i] * w[j];
  if (check != nmat) throw Error("reduce_mg2: rank-one factorization failed");

  IntMat s = unimodular_completion(PrimitiveVector(ucol));
  IntMat t1 = inverse_unimodular(s);
  // w transforms contravariantly: w'^T = w^T * S, and w'[0] = w^T u = 0.
  IntVec wp = s.mul_row(w);
  if (wp[0] != 0) throw Error("reduce_mg2: nilpotency violated");

  // SL(2,Z) gcd rotation taking (w1, w2) to (0, g).
  ExtGcd e = ext_gcd(wp[1], wp[2]);
  IntMat u2(2, 2);
  u2(0, 0) = exact_div(wp[2], e.g);
  u2(1, 0) = exact_div(Int(-wp[1]), e.g);
  u2(0, 1) = e.p;
  u2(1, 1) = e.q;
  IntMat t2 = detail::embed_lower(inverse_unimodular(u2));

  IntMat t = t2 * t1;
  IntMat nf = t * m * inverse_unimodular(t);
  IntMat expect = IntMat::identity(3);
  expect(0, 2) = e.g;
  if (nf != expect) throw Error("reduce_mg2: final form check failed");
  return {t, e.g};
}

// Solvability of d*(A - identity) = a over the integers.  On success the
// matrix [[1, a],[0, A]] is conjugate to [[1, 0],[0, A]] by [[1, d],[0, I]].
struct BlockDiagResult {
  std::optional<IntVec> d;           // solution row when solvable
  std::optional<IntMat> conjugate;   // [[1,0],[0,A]] verified
  std::size_t obstruction_index = 0;
  Int obstruction_divisor = 0;
  Int obstruction_target = 0;
};

inline BlockDiagResult block_diagonalize(const IntVec& a, const IntMat& A) {
  if (A.rows() != 2 || A.cols() != 2 || a.size() != 2)
    throw DimensionError("block_diagonalize: expects a 1x2 row and 2x2 block");
  detail::require_sl(A, "block_diagonalize");
  IntMat b = A - IntMat::identity(2);
  DiophantineResult r = solve_linear_diophantine(b, a);
  if (!r.solution)
    return {std::nullopt, std::nullopt, r.obstruction_index,
            r.obstruction_divisor, r.obstruction_target};
  const IntVec& d = *r.solution;
  IntMat full(3, 3);
  full(0, 0) = 1;
  for (std::size_t j = 0; j < 2; ++j) full(0, j + 1) = a[j];
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) full(i + 1, j + 1) = A(i, j);
  IntMat conj = IntMat::identity(3);
  for (std::size_t j = 0; j < 2; ++j) conj(0, j + 1) = d[j];
  // conj^-1 * full * conj has zero upper-right row exactly when d solves it
  IntMat res = inverse_unimodular(conj) * full * conj;
  IntMat expect = IntMat::identity(3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) expect(i + 1, j + 1) = A(i, j);
  if (res != expect) throw Error("block_diagonalize: substitution check failed");
  return {d, res, 0, 0, 0};
}

// Transport (M, mu, I) to a new cycle basis: M' = T*M*T^-1, mu' = T*mu,
// I' = T*I.  det(T) = ±1 accepted (orientation-reversing relabelings).
struct BasisChange {
  IntMat m;
  IntVec mu;
  ActionVec actions;
};

inline BasisChange change_basis(const IntMat& m, const IntVec& mu,
                                const ActionVec& actions, const IntMat& t) {
  if (!t.is_square() || t.rows() != m.rows())
    throw DimensionError("change_basis: transform shape mismatch");
  if (mu.size() != m.rows() || actions.size() != m.rows())
    throw DimensionError("change_basis: vector length mismatch");
  Int dt = det_exact(t);
  if (dt != 1 && dt != -1)
    throw NotUnimodularError("change_basis: transform must have det ±1");
  std::size_t n = m.rows();
  BasisChange out{t * m * inverse_unimodular(t), t.mul_col(mu),
                  ActionVec(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += t(i, j).get_d() * actions[j];
    out.actions[i] = acc;
  }
  return out;
}

enum class Verdict { Holds, Fails, Vacuous };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Vacuous: return "vacuous";
  }
  return "?";
}

// Exact check that mu is invariant: M*mu = mu.  A zero mu makes the
// statement vacuous rather than true.
inline Verdict check_maslov_invariance(const IntMat& m, const IntVec& mu) {
  if (mu.size() != m.rows())
    throw DimensionError("invariance check: vector length mismatch");
  bool zero = true;
  for (const Int& x : mu)
    if (x != 0) { zero = false; break; }
  if (zero) return Verdict::Vacuous;
  return m.mul_col(mu) == mu ? Verdict::Holds : Verdict::Fails;
}

// Classification of M^2, reporting how many independent invariant
// directions (candidate invariant actions) appear for M versus M^2.
struct DoubleCoverResult {
  ClassificationResult square;
  std::size_t invariant_count_base = 0;    // mg_plus of M
  std::size_t invariant_count_square = 0;  // mg_plus of M^2
};

inline DoubleCoverResult double_cover(const IntMat& m) {
  detail::require_sl(m, "double_cover");
  EigenSignature base = eigen_signature(m);
  DoubleCoverResult out{classify(m * m), base.mg_plus, 0};
  out.invariant_count_square = out.square.signature.mg_plus;
  return out;
}

}  // namespace maslov
