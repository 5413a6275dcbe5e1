#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pencil/linalg.hpp"

namespace pencil {

/// Any solution of A x = b, or nullopt when inconsistent.
std::optional<std::vector<Fq>> solve_linear(const Matrix& a, const std::vector<Fq>& b);

/// Coordinates of y in the row basis R (solves R^T c = y).
std::optional<std::vector<Fq>> coords_in_rows(const Matrix& rows, const std::vector<Fq>& y);

/// Quadratic form via its symmetric Gram matrix; Q(v) = v^T G v and
/// b(v,w) = v^T G w (valid in odd characteristic).
class QuadraticForm {
 public:
  explicit QuadraticForm(Matrix gram);
  const Matrix& gram() const { return gram_; }
  int dim() const { return gram_.rows(); }
  const FieldPtr& field() const { return gram_.field(); }

  Fq eval(const std::vector<Fq>& v) const;
  Fq bilinear(const std::vector<Fq>& v, const std::vector<Fq>& w) const;
  bool nondegenerate() const;
  /// discriminant (-1)^{N(N-1)/2} det(G); its square class is what matters
  Fq disc() const;
  bool disc_is_square() const;
  /// {w : b(v, w) = 0}
  Subspace orthogonal_complement_of_vector(const std::vector<Fq>& v) const;
  Subspace orthogonal_complement(const Subspace& s) const;
  bool is_isotropic(const Subspace& s) const;

  QuadraticForm map(const FieldEmbedding& e) const { return QuadraticForm(gram_.map_entries(e)); }

 private:
  Matrix gram_;
};

enum class PencilTag { Generic, RegularNonGeneric, NonRegular };

struct PencilClass {
  PencilTag tag;
  Polynomial f;
  bool disc_square;
};

/// Pencil of quadrics {x Q1 - y Q2} given by two symmetric Gram matrices of
/// the same dimension N >= 3 over one field.
class Pencil {
 public:
  Pencil(Matrix a1, Matrix a2);

  int N() const { return a1_.rows(); }
  const FieldPtr& field() const { return a1_.field(); }
  const Matrix& a1() const { return a1_; }
  const Matrix& a2() const { return a2_; }
  QuadraticForm q1() const { return QuadraticForm(a1_); }
  QuadraticForm q2() const { return QuadraticForm(a2_); }

  /// member lambda*Q1 - Q2, or Q1 itself for lambda = infinity (nullopt)
  QuadraticForm member(const std::optional<Fq>& lambda) const;

  /// f(x) = (-1)^{N(N-1)/2} det(x A1 - A2), degree <= N
  Polynomial poly() const;

  /// self-adjoint operator T = A1^{-1} A2; requires A1 invertible
  Matrix T() const;

  PencilClass classify() const;

  Pencil map(const FieldEmbedding& e) const { return Pencil(a1_.map_entries(e), a2_.map_entries(e)); }

 private:
  Matrix a1_, a2_;
};

/// Roots of f with multiplicities and the generalized eigenspaces of T,
/// pairwise orthogonal for the first form.
struct EigenData {
  std::vector<std::pair<Fq, int>> roots;  // (alpha_i, m_i), element_at order
  std::vector<Subspace> spaces;           // U_{i,T}, dim m_i
  std::vector<Subspace> eigenvectors;     // ker(T - alpha_i), 1-dim when T regular
  int r_plus_1 = 0;

  std::vector<Fq> eigenvector(int i) const;
  int index_of_root(const Fq& alpha) const;  // -1 if absent
  std::vector<int> multiplicities() const;
  /// number of roots with odd multiplicity
  int odd_multiplicity_count() const;
  /// geometric genus of y^2 = f: (#odd-multiplicity roots)/2 - 1
  int geometric_genus() const;
};

/// Requires f == charpoly(T) and f split over the coefficient field
/// (NeedsExtension otherwise); verifies pairwise b1-orthogonality of the
/// generalized eigenspaces.
EigenData eigendata(const Matrix& t, const Polynomial& f, const QuadraticForm& q1);

/// The multiplication algebra model: for monic f of degree N, the form
/// <u, w> = disc_target^{-1} * (coefficient of x^{N-1} in u*w mod f) on
/// k[x]/f, the multiplication-by-x matrix (self-adjoint for the form), and
/// the isotropic subspace spanned by 1, x, ..., x^{floor(N/2)-1}.
struct TraceFormFixture {
  QuadraticForm q;
  Matrix t0;
  Subspace x0;
  Pencil pencil() const { return Pencil(q.gram(), q.gram() * t0); }
};

TraceFormFixture trace_form_fixture(const Polynomial& f, const Fq& disc_target);

/// Reduction of (Q, T) to v^perp / <v> for an isotropic eigenvector v,
/// realized on an explicit complement basis. charpoly drops by (x-alpha)^2.
struct Descent {
  Fq alpha;
  std::vector<Fq> v;
  Matrix complement_rows;  // (N-2) x N, rows w_i; {v, w_1..w_{N-2}} spans v^perp
  QuadraticForm q_bar;
  Matrix t_bar;

  /// image of (X intersect v^perp) in the quotient, in w-coordinates
  Subspace push(const Subspace& x) const;
  /// span{v, lift of Xbar}
  Subspace lift_with_v(const Subspace& xbar) const;
  /// w-coordinates -> ambient vector (a representative of the class)
  std::vector<Fq> to_ambient(const std::vector<Fq>& coords) const;
  /// decompose u in v^perp as a*v + sum coords_i w_i
  std::pair<Fq, std::vector<Fq>> express_in_hyperplane(const std::vector<Fq>& u) const;
};

Descent restrict_and_descend(const QuadraticForm& q, const Matrix& t, const std::vector<Fq>& v);

/// A nonzero isotropic vector of a nondegenerate form of dimension >= 3
/// (always exists over a finite field); deterministic.
std::vector<Fq> find_isotropic_vector(const QuadraticForm& q);

/// One maximal totally isotropic subspace, by hyperbolic-pair splitting
/// (Witt decomposition); its dimension is the Witt index.
Subspace witt_maximal_isotropic(const QuadraticForm& q);

}  // namespace pencil
