#include "pencil/quadrics.hpp"

#include <algorithm>

namespace pencil {

std::optional<std::vector<Fq>> solve_linear(const Matrix& a, const std::vector<Fq>& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw ShapeError("rhs length mismatch");
  const FieldPtr& f = a.field();
  Matrix aug(f, a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  Matrix r = aug.rref();
  std::vector<Fq> x(a.cols(), f->zero());
  for (int i = 0; i < r.rows(); ++i) {
    int p = 0;
    while (p < a.cols() + 1 && r.at(i, p).is_zero()) ++p;
    if (p == a.cols() + 1) continue;         // zero row
    if (p == a.cols()) return std::nullopt;  // 0 = nonzero, inconsistent
    x[p] = r.at(i, a.cols());
  }
  return x;
}

std::optional<std::vector<Fq>> coords_in_rows(const Matrix& rows, const std::vector<Fq>& y) {
  return solve_linear(rows.transpose(), y);
}

// ------------------------------------------------------- QuadraticForm

QuadraticForm::QuadraticForm(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw ShapeError("Gram matrix must be square");
  if (!gram_.is_symmetric()) throw InvalidInput("Gram matrix must be symmetric");
}

Fq QuadraticForm::eval(const std::vector<Fq>& v) const { return bilinear(v, v); }

Fq QuadraticForm::bilinear(const std::vector<Fq>& v, const std::vector<Fq>& w) const {
  if (static_cast<int>(v.size()) != dim() || static_cast<int>(w.size()) != dim())
    throw ShapeError("vector length mismatch");
  const FieldPtr& f = field();
  Fq acc = f->zero();
  for (int i = 0; i < dim(); ++i) {
    if (v[i].is_zero()) continue;
    Fq row = f->zero();
    for (int j = 0; j < dim(); ++j)
      if (!w[j].is_zero()) row = row + gram_.at(i, j) * w[j];
    acc = acc + v[i] * row;
  }
  return acc;
}

bool QuadraticForm::nondegenerate() const { return !gram_.det().is_zero(); }

Fq QuadraticForm::disc() const {
  int n = dim();
  Fq d = gram_.det();
  int sign = (n * (n - 1) / 2) % 2;
  return sign ? -d : d;
}

bool QuadraticForm::disc_is_square() const { return field()->is_square(disc()); }

Subspace QuadraticForm::orthogonal_complement_of_vector(const std::vector<Fq>& v) const {
  Matrix row(field(), 1, dim());
  std::vector<Fq> gv = gram_.apply(v);
  for (int j = 0; j < dim(); ++j) row.at(0, j) = gv[j];
  return row.kernel();
}

Subspace QuadraticForm::orthogonal_complement(const Subspace& s) const {
  if (s.dim() == 0) return Subspace::full(field(), dim());
  return (s.basis() * gram_).kernel();
}

bool QuadraticForm::is_isotropic(const Subspace& s) const {
  const Matrix& b = s.basis();
  for (int i = 0; i < b.rows(); ++i)
    for (int j = i; j < b.rows(); ++j)
      if (!bilinear(b.row(i), b.row(j)).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------- Pencil

Pencil::Pencil(Matrix a1, Matrix a2) : a1_(std::move(a1)), a2_(std::move(a2)) {
  if (a1_.field() != a2_.field()) throw FieldMismatch();
  if (a1_.rows() != a1_.cols() || a2_.rows() != a2_.cols() || a1_.rows() != a2_.rows())
    throw ShapeError("Gram matrices must be square of equal size");
  if (!a1_.is_symmetric() || !a2_.is_symmetric())
    throw InvalidInput("Gram matrices must be symmetric");
  if (N() < 3) throw InvalidInput("pencil dimension must be at least 3");
}

QuadraticForm Pencil::member(const std::optional<Fq>& lambda) const {
  if (!lambda.has_value()) return QuadraticForm(a1_);
  return QuadraticForm(a1_ * *lambda - a2_);
}

namespace {

struct PolyOps {
  FieldPtr f;
  Polynomial zero() const { return Polynomial::zero(f); }
  Polynomial one() const { return Polynomial::one(f); }
  Polynomial add(const Polynomial& a, const Polynomial& b) const { return a + b; }
  Polynomial mul(const Polynomial& a, const Polynomial& b) const { return a * b; }
  Polynomial neg(const Polynomial& a) const { return -a; }
};

}  // namespace

Polynomial Pencil::poly() const {
  const FieldPtr& f = field();
  int n = N();
  // det(x A1 - A2) over the polynomial ring, division-free
  std::vector<Polynomial> entries;
  entries.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries.push_back(Polynomial(f, {-a2_.at(i, j), a1_.at(i, j)}));
  std::vector<Polynomial> cp = detail::berkowitz<Polynomial, PolyOps>(entries, n, PolyOps{f});
  Polynomial det = cp.back();  // charpoly(0) = det(-M)
  if (n % 2 == 1) det = -det;  // det(M) = (-1)^n det(-M)
  int sign = (n * (n - 1) / 2) % 2;
  return sign ? -det : det;
}

Matrix Pencil::T() const {
  auto inv = a1_.inverse();
  if (!inv) throw NeedNondegenerateQ1();
  return *inv * a2_;
}

PencilClass Pencil::classify() const {
  Matrix t = T();  // throws if a1 singular
  Polynomial f = poly();
  bool disc_sq = q1().disc_is_square();
  if (f.degree() >= N() - 1 && f.is_squarefree())
    return {PencilTag::Generic, f, disc_sq};
  if (t.minpoly() == t.charpoly())
    return {PencilTag::RegularNonGeneric, f, disc_sq};
  return {PencilTag::NonRegular, f, disc_sq};
}

// ------------------------------------------------------------- EigenData

std::vector<Fq> EigenData::eigenvector(int i) const {
  if (eigenvectors[i].dim() < 1) throw Error("empty eigenspace");
  return eigenvectors[i].basis().row(0);
}

int EigenData::index_of_root(const Fq& alpha) const {
  for (size_t i = 0; i < roots.size(); ++i)
    if (roots[i].first == alpha) return static_cast<int>(i);
  return -1;
}

std::vector<int> EigenData::multiplicities() const {
  std::vector<int> m;
  m.reserve(roots.size());
  for (const auto& [a, mi] : roots) m.push_back(mi);
  return m;
}

int EigenData::odd_multiplicity_count() const {
  int c = 0;
  for (const auto& [a, mi] : roots)
    if (mi % 2 == 1) ++c;
  return c;
}

int EigenData::geometric_genus() const { return odd_multiplicity_count() / 2 - 1; }

EigenData eigendata(const Matrix& t, const Polynomial& f, const QuadraticForm& q1) {
  if (t.rows() != t.cols()) throw ShapeError("operator must be square");
  if (f != t.charpoly()) throw InvalidInput("polynomial is not the characteristic polynomial");
  auto roots = f.roots_with_multiplicity();
  int total = 0;
  for (const auto& [a, m] : roots) total += m;
  if (total != f.degree()) throw NeedsExtension();

  EigenData ed;
  ed.roots = roots;
  ed.r_plus_1 = static_cast<int>(roots.size());
  for (const auto& [alpha, m] : roots) {
    ed.spaces.push_back(generalized_eigenspace(t, alpha, m));
    Matrix shifted = t - Matrix::identity(t.field(), t.rows()) * alpha;
    ed.eigenvectors.push_back(shifted.kernel());
  }
  for (size_t i = 0; i < ed.spaces.size(); ++i) {
    if (ed.spaces[i].dim() != roots[i].second)
      throw Error("generalized eigenspace has unexpected dimension");
    for (size_t j = i + 1; j < ed.spaces.size(); ++j) {
      const Matrix& bi = ed.spaces[i].basis();
      const Matrix& bj = ed.spaces[j].basis();
      for (int a = 0; a < bi.rows(); ++a)
        for (int b = 0; b < bj.rows(); ++b)
          if (!q1.bilinear(bi.row(a), bj.row(b)).is_zero())
            throw Error("generalized eigenspaces are not pairwise orthogonal");
    }
  }
  return ed;
}

// ----------------------------------------------------- trace-form model

TraceFormFixture trace_form_fixture(const Polynomial& f_in, const Fq& disc_target) {
  if (f_in.degree() < 3) throw InvalidInput("need degree >= 3");
  if (disc_target.is_zero()) throw InvalidInput("disc target must be nonzero");
  Polynomial f = f_in.monic();
  const FieldPtr& k = f.field();
  int n = f.degree();
  Fq scale = disc_target.inv();

  // powers x^0 .. x^{2n-2} mod f
  std::vector<Polynomial> pw;
  pw.push_back(Polynomial::one(k));
  Polynomial x = Polynomial::x(k);
  for (int i = 1; i <= 2 * n - 2; ++i) pw.push_back((pw.back() * x) % f);

  Matrix gram(k, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram.at(i, j) = pw[i + j].coeff(n - 1) * scale;

  Matrix t0 = f.companion();
  std::vector<std::vector<Fq>> x0rows;
  for (int i = 0; i < n / 2; ++i) {
    std::vector<Fq> e(n, k->zero());
    e[i] = k->one();
    x0rows.push_back(std::move(e));
  }
  Subspace x0 = Subspace::span_of_rows(Matrix::from_rows(k, x0rows));

  TraceFormFixture fx{QuadraticForm(gram), std::move(t0), std::move(x0)};
  if (!(fx.q.gram() * fx.t0).is_symmetric()) throw Error("multiplication operator not self-adjoint");
  if (!fx.q.is_isotropic(fx.x0)) throw Error("power basis subspace not isotropic");
  return fx;
}

// ---------------------------------------------------------------- Descent

Subspace Descent::push(const Subspace& x) const {
  const FieldPtr& f = q_bar.field();
  int nb = complement_rows.rows();
  // hyperplane = span{v, complement rows}
  std::vector<std::vector<Fq>> hrows;
  hrows.push_back(v);
  for (int i = 0; i < nb; ++i) hrows.push_back(complement_rows.row(i));
  Subspace h = Subspace::span_of_rows(Matrix::from_rows(complement_rows.field(), hrows));
  Subspace xh = x.intersect(h);
  std::vector<std::vector<Fq>> coords;
  Matrix basis_rows(complement_rows.field(), 1 + nb, static_cast<int>(v.size()));
  for (size_t j = 0; j < v.size(); ++j) basis_rows.at(0, static_cast<int>(j)) = v[j];
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < basis_rows.cols(); ++j) basis_rows.at(1 + i, j) = complement_rows.at(i, j);
  for (int i = 0; i < xh.dim(); ++i) {
    auto c = coords_in_rows(basis_rows, xh.basis().row(i));
    if (!c) throw Error("vector not in hyperplane span");
    coords.push_back(std::vector<Fq>(c->begin() + 1, c->end()));
  }
  if (coords.empty()) return Subspace::zero(f, nb);
  return Subspace::span_of_rows(Matrix::from_rows(f, coords));
}

Subspace Descent::lift_with_v(const Subspace& xbar) const {
  const FieldPtr& f = complement_rows.field();
  std::vector<std::vector<Fq>> rows;
  rows.push_back(v);
  for (int i = 0; i < xbar.dim(); ++i) rows.push_back(to_ambient(xbar.basis().row(i)));
  return Subspace::span_of_rows(Matrix::from_rows(f, rows));
}

std::vector<Fq> Descent::to_ambient(const std::vector<Fq>& coords) const {
  if (static_cast<int>(coords.size()) != complement_rows.rows())
    throw ShapeError("coordinate length mismatch");
  const FieldPtr& f = complement_rows.field();
  std::vector<Fq> out(complement_rows.cols(), f->zero());
  for (int i = 0; i < complement_rows.rows(); ++i) {
    if (coords[i].is_zero()) continue;
    for (int j = 0; j < complement_rows.cols(); ++j)
      out[j] = out[j] + coords[i] * complement_rows.at(i, j);
  }
  return out;
}

std::pair<Fq, std::vector<Fq>> Descent::express_in_hyperplane(const std::vector<Fq>& u) const {
  const FieldPtr& f = complement_rows.field();
  int nb = complement_rows.rows();
  Matrix basis_rows(f, 1 + nb, static_cast<int>(v.size()));
  for (size_t j = 0; j < v.size(); ++j) basis_rows.at(0, static_cast<int>(j)) = v[j];
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < basis_rows.cols(); ++j) basis_rows.at(1 + i, j) = complement_rows.at(i, j);
  auto c = coords_in_rows(basis_rows, u);
  if (!c) throw Error("vector not in the hyperplane");
  return {(*c)[0], std::vector<Fq>(c->begin() + 1, c->end())};
}

std::vector<Fq> find_isotropic_vector(const QuadraticForm& q) {
  const FieldPtr& f = q.field();
  int n = q.dim();
  if (n < 3) throw InvalidInput("need dimension >= 3");
  const Matrix& g = q.gram();
  auto unit = [&](int i) {
    std::vector<Fq> v(n, f->zero());
    v[i] = f->one();
    return v;
  };
  for (int i = 0; i < n; ++i)
    if (g.at(i, i).is_zero()) return unit(i);
  // work inside span{e0, e1, e2}
  Matrix block(f, 3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) block.at(i, j) = g.at(i, j);
  if (block.det().is_zero()) {
    Subspace k = block.kernel();
    std::vector<Fq> kb = k.basis().row(0);
    std::vector<Fq> v(n, f->zero());
    for (int j = 0; j < 3; ++j) v[j] = kb[j];
    // kernel vectors of a symmetric block are isotropic for the block form
    if (!q.eval(v).is_zero()) throw Error("degenerate block gave a non-isotropic vector");
    return v;
  }
  // conic a x^2 + 2(b y + c) x + (d y^2 + 2 e y + h) = 0 has a point with
  // z != 0; scan y and solve the quadratic in x
  Fq a = g.at(0, 0);
  for (int64_t yi = 0; yi < f->q(); ++yi) {
    Fq y = f->element_at(yi);
    Fq bq = g.at(0, 1) * y + g.at(0, 2);
    Fq cq = g.at(1, 1) * y * y + f->from_int(2) * g.at(1, 2) * y + g.at(2, 2);
    // a x^2 + 2 bq x + cq = 0; discriminant bq^2 - a cq
    auto s = f->sqrt(bq * bq - a * cq);
    if (!s) continue;
    Fq x = (-bq + *s) / a;
    std::vector<Fq> v(n, f->zero());
    v[0] = x;
    v[1] = y;
    v[2] = f->one();
    if (!q.eval(v).is_zero()) throw Error("conic solution failed");
    return v;
  }
  throw Error("no isotropic vector found in a ternary block");  // cannot happen
}

Subspace witt_maximal_isotropic(const QuadraticForm& q) {
  const FieldPtr& f = q.field();
  int n = q.dim();
  if (!q.nondegenerate()) throw InvalidInput("form must be nondegenerate");
  if (n == 0) return Subspace::zero(f, 0);
  if (n == 1) return Subspace::zero(f, 1);
  if (n == 2) {
    // binary form a x^2 + 2b xy + c y^2
    Fq a = q.gram().at(0, 0), b = q.gram().at(0, 1), c = q.gram().at(1, 1);
    if (a.is_zero()) return Subspace::span_of_vector(f, {f->one(), f->zero()});
    auto s = f->sqrt(b * b - a * c);
    if (!s) return Subspace::zero(f, 2);  // anisotropic plane
    return Subspace::span_of_vector(f, {(-b + *s) / a, f->one()});
  }
  std::vector<Fq> v = find_isotropic_vector(q);
  // hyperbolic partner: u with b(v,u) != 0, adjusted to be isotropic
  std::vector<Fq> gv = q.gram().apply(v);
  int pick = -1;
  for (int i = 0; i < n; ++i)
    if (!gv[i].is_zero()) pick = i;
  if (pick < 0) throw Error("isotropic vector in the radical");
  std::vector<Fq> u(n, f->zero());
  u[pick] = f->one();
  Fq bvu = q.bilinear(v, u);
  Fq adj = q.eval(u) / (f->from_int(2) * bvu);
  for (int i = 0; i < n; ++i) u[i] = u[i] - adj * v[i];
  // restrict to the orthogonal complement of the hyperbolic plane
  Subspace plane = Subspace::span_of_rows(Matrix::from_rows(f, {v, u}));
  Subspace comp = q.orthogonal_complement(plane);
  if (comp.dim() != n - 2) throw Error("hyperbolic complement has wrong dimension");
  Matrix rows = comp.basis();
  Matrix sub(f, n - 2, n - 2);
  for (int i = 0; i < n - 2; ++i)
    for (int j = 0; j < n - 2; ++j) sub.at(i, j) = q.bilinear(rows.row(i), rows.row(j));
  Subspace inner = witt_maximal_isotropic(QuadraticForm(sub));
  std::vector<std::vector<Fq>> out;
  out.push_back(v);
  for (int i = 0; i < inner.dim(); ++i) {
    std::vector<Fq> w(n, f->zero());
    for (int j = 0; j < n - 2; ++j) {
      const Fq& cj = inner.basis().at(i, j);
      if (cj.is_zero()) continue;
      for (int t = 0; t < n; ++t) w[t] = w[t] + cj * rows.at(j, t);
    }
    out.push_back(std::move(w));
  }
  Subspace result = Subspace::span_of_rows(Matrix::from_rows(f, out));
  if (!q.is_isotropic(result)) throw Error("witt construction produced a non-isotropic space");
  return result;
}

Descent restrict_and_descend(const QuadraticForm& q, const Matrix& t, const std::vector<Fq>& v) {
  const FieldPtr& f = q.field();
  int n = q.dim();
  bool vzero = true;
  for (const auto& c : v)
    if (!c.is_zero()) vzero = false;
  if (vzero) throw BadReductionVector("reduction vector is zero");

  // eigenvector check
  std::vector<Fq> tv = t.apply(v);
  int j0 = 0;
  while (v[j0].is_zero()) ++j0;
  Fq alpha = tv[j0] / v[j0];
  for (int j = 0; j < n; ++j)
    if (tv[j] != alpha * v[j]) throw BadReductionVector("not an eigenvector");
  if (!q.eval(v).is_zero()) throw BadReductionVector("eigenvector is not isotropic");

  Subspace h = q.orthogonal_complement_of_vector(v);
  if (h.dim() != n - 1) throw BadReductionVector("degenerate form");
  if (!h.contains_vector(v)) throw BadReductionVector("v not inside its own orthogonal complement");

  // complement of <v> inside v^perp: drop one basis row carrying a nonzero
  // coefficient in the expression of v
  auto c = coords_in_rows(h.basis(), v);
  if (!c) throw Error("v missing from hyperplane basis span");
  int drop = -1;
  for (size_t i = 0; i < c->size(); ++i)
    if (!(*c)[i].is_zero()) drop = static_cast<int>(i);
  Matrix w(f, n - 2, n);
  int row = 0;
  for (int i = 0; i < h.dim(); ++i) {
    if (i == drop) continue;
    for (int j = 0; j < n; ++j) w.at(row, j) = h.basis().at(i, j);
    ++row;
  }

  Matrix qbar(f, n - 2, n - 2);
  for (int i = 0; i < n - 2; ++i)
    for (int j = 0; j < n - 2; ++j) qbar.at(i, j) = q.bilinear(w.row(i), w.row(j));

  Descent d{alpha, v, w, QuadraticForm(qbar), Matrix(f, n - 2, n - 2)};

  // descended operator: express T w_i in the {v, w} basis, drop the v part
  Matrix basis_rows(f, n - 1, n);
  for (int j = 0; j < n; ++j) basis_rows.at(0, j) = v[j];
  for (int i = 0; i < n - 2; ++i)
    for (int j = 0; j < n; ++j) basis_rows.at(1 + i, j) = w.at(i, j);
  for (int i = 0; i < n - 2; ++i) {
    std::vector<Fq> u = t.apply(w.row(i));
    auto coords = coords_in_rows(basis_rows, u);
    if (!coords) throw Error("T does not preserve the hyperplane");
    for (int r2 = 0; r2 < n - 2; ++r2) d.t_bar.at(r2, i) = (*coords)[1 + r2];
  }

  if (!d.q_bar.nondegenerate()) throw Error("descended form is degenerate");
  if (!(d.q_bar.gram() * d.t_bar).is_symmetric())
    throw Error("descended operator is not self-adjoint");
  Polynomial expected = t.charpoly() /
      Polynomial(f, {-alpha, f->one()}).pow(2);
  if (d.t_bar.charpoly() != expected)
    throw Error("descended operator has wrong characteristic polynomial");
  return d;
}

}  // namespace pencil
