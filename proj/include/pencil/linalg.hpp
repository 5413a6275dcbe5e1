#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pencil/gf.hpp"

namespace pencil {

class Matrix;
class Subspace;

/// Dense univariate polynomial over Fq; coefficients low-to-high with no
/// trailing zeros. The zero polynomial has an empty coefficient list.
class Polynomial {
 public:
  explicit Polynomial(FieldPtr f) : f_(std::move(f)) {}
  Polynomial(FieldPtr f, std::vector<Fq> coeffs);

  static Polynomial zero(const FieldPtr& f) { return Polynomial(f); }
  static Polynomial one(const FieldPtr& f);
  static Polynomial x(const FieldPtr& f);
  static Polynomial constant(const Fq& c);
  /// monic product of (x - r) over the given roots
  static Polynomial from_roots(const FieldPtr& f, const std::vector<Fq>& roots);
  static Polynomial from_root_multiplicities(const FieldPtr& f,
                                             const std::vector<std::pair<Fq, int>>& roots);

  const FieldPtr& field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Fq coeff(int i) const;
  const std::vector<Fq>& coeffs() const { return c_; }
  Fq leading() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Fq& s) const;
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// quotient and remainder; divisor must be nonzero
  std::pair<Polynomial, Polynomial> divrem(const Polynomial& d) const;
  Polynomial operator/(const Polynomial& d) const { return divrem(d).first; }
  Polynomial operator%(const Polynomial& d) const { return divrem(d).second; }
  bool divides(const Polynomial& other) const;

  Polynomial monic() const;
  Polynomial derivative() const;
  Fq eval(const Fq& x) const;
  Polynomial pow(int e) const;

  bool is_squarefree() const;
  /// product of the distinct irreducible factors (handles derivative == 0)
  Polynomial squarefree_part() const;
  /// roots in the coefficient field with multiplicities, by exhaustive scan;
  /// sorted in element_at order
  std::vector<std::pair<Fq, int>> roots_with_multiplicity() const;
  bool splits_completely() const;
  /// degree of the smallest extension of the coefficient field over which
  /// the polynomial splits into linear factors
  int splitting_degree() const;

  Matrix companion() const;
  Polynomial map_coeffs(const FieldEmbedding& e) const;

  std::string str() const;

 private:
  FieldPtr f_;
  std::vector<Fq> c_;
  void trim_();
};

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);
Polynomial poly_lcm(const Polynomial& a, const Polynomial& b);
/// inverse of a modulo m when gcd(a, m) = 1
Polynomial poly_invmod(const Polynomial& a, const Polynomial& m);

/// Dense matrix over Fq, row-major.
class Matrix {
 public:
  Matrix(FieldPtr f, int rows, int cols);
  Matrix(FieldPtr f, int rows, int cols, std::vector<Fq> entries);
  static Matrix identity(const FieldPtr& f, int n);
  static Matrix diag(const std::vector<Fq>& d);
  static Matrix from_rows(const FieldPtr& f, const std::vector<std::vector<Fq>>& rows);
  static Matrix from_int_rows(const FieldPtr& f, const std::vector<std::vector<int64_t>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldPtr& field() const { return f_; }

  const Fq& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
  Fq& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Fq& s) const;
  Matrix operator-() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const;
  Matrix pow(int e) const;
  bool is_symmetric() const;
  bool is_zero() const;

  std::vector<Fq> row(int i) const;
  /// matrix * column vector
  std::vector<Fq> apply(const std::vector<Fq>& v) const;

  /// unique reduced row echelon form (row space preserved)
  Matrix rref() const;
  int rank() const;
  std::optional<Matrix> inverse() const;
  Fq det() const;

  /// RREF basis of the right null space {v : M v = 0}
  Subspace kernel() const;

  /// monic characteristic polynomial det(xI - M), division-free
  Polynomial charpoly() const;
  /// monic minimal polynomial via Krylov subspaces
  Polynomial minpoly() const;

  Matrix map_entries(const FieldEmbedding& e) const;

  std::string str() const;

 private:
  int rows_, cols_;
  FieldPtr f_;
  std::vector<Fq> e_;
};

/// kernel of (M - alpha I)^mult; requires alpha to be a root of charpoly(M)
Subspace generalized_eigenspace(const Matrix& m, const Fq& alpha, int mult);

/// Linear subspace of F_q^N in canonical reduced-row-echelon form with no
/// zero rows. Two subspaces are equal iff their basis matrices are identical.
class Subspace {
 public:
  /// span of the rows of m (canonicalized)
  static Subspace span_of_rows(const Matrix& m);
  static Subspace zero(const FieldPtr& f, int ambient);
  static Subspace full(const FieldPtr& f, int ambient);
  static Subspace span_of_vector(const FieldPtr& f, const std::vector<Fq>& v);

  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const FieldPtr& field() const { return basis_.field(); }

  bool contains_vector(const std::vector<Fq>& v) const;
  bool contains(const Subspace& other) const;

  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  /// span of {M v : v in this}
  Subspace image_under(const Matrix& m) const;
  /// {v : M v in this}
  Subspace preimage_under(const Matrix& m) const;
  /// rows that cut this subspace out: v in S iff cutout() * v == 0
  Matrix cutout_matrix() const;

  /// invoke fn on every vector of the subspace (q^dim of them), in a fixed
  /// coefficient-odometer order; includes the zero vector
  void for_each_vector(const std::function<void(const std::vector<Fq>&)>& fn) const;

  Subspace map(const FieldEmbedding& e) const;

  bool operator==(const Subspace& o) const;
  bool operator!=(const Subspace& o) const { return !(*this == o); }
  bool operator<(const Subspace& o) const;  // canonical key order

  std::string str() const;

 private:
  explicit Subspace(Matrix basis, int ambient) : ambient_(ambient), basis_(std::move(basis)) {}
  int ambient_;
  Matrix basis_;  // RREF, no zero rows
};

/// number of d-dimensional subspaces of F_q^N (Gaussian binomial)
int64_t gaussian_binomial(int N, int d, int64_t q);

/// Visit every d-dimensional subspace of F_q^N exactly once as an RREF
/// representative, grouped by pivot-column pattern.
void for_each_subspace(const FieldPtr& f, int N, int d,
                       const std::function<void(const Subspace&)>& fn);

namespace detail {

/// Berkowitz division-free characteristic polynomial over any commutative
/// ring; returns the coefficients of det(yI - M) from y^n down to y^0.
/// Ops must provide zero(), one(), add(a,b), mul(a,b), neg(a).
template <typename R, typename Ops>
std::vector<R> berkowitz(const std::vector<R>& entries, int n, const Ops& ops) {
  std::vector<R> v = {ops.one()};
  if (n == 0) return v;
  auto at = [&](int i, int j) -> const R& { return entries[static_cast<size_t>(i) * n + j]; };
  v = {ops.one(), ops.neg(at(0, 0))};
  for (int r = 1; r < n; ++r) {
    // principal (r x r) block, border row/column, corner
    std::vector<R> c;
    c.push_back(ops.one());
    c.push_back(ops.neg(at(r, r)));
    std::vector<R> t(r, ops.zero());
    for (int i = 0; i < r; ++i) t[i] = at(i, r);
    for (int j = 2; j <= r + 1; ++j) {
      R dot = ops.zero();
      for (int i = 0; i < r; ++i) dot = ops.add(dot, ops.mul(at(r, i), t[i]));
      c.push_back(ops.neg(dot));
      if (j <= r) {
        std::vector<R> t2(r, ops.zero());
        for (int i = 0; i < r; ++i)
          for (int k2 = 0; k2 < r; ++k2) t2[i] = ops.add(t2[i], ops.mul(at(i, k2), t[k2]));
        t = std::move(t2);
      }
    }
    std::vector<R> nv(r + 2, ops.zero());
    for (int i = 0; i <= r + 1; ++i)
      for (int j = 0; j <= i && j < static_cast<int>(c.size()); ++j)
        if (i - j < static_cast<int>(v.size()))
          nv[i] = ops.add(nv[i], ops.mul(c[j], v[i - j]));
    v = std::move(nv);
  }
  return v;
}

}  // namespace detail

}  // namespace pencil
