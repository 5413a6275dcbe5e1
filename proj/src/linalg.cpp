#include "pencil/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pencil {

// ------------------------------------------------------------ Polynomial

void Polynomial::trim_() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Polynomial::Polynomial(FieldPtr f, std::vector<Fq> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (c.field() != f_) throw FieldMismatch();
  trim_();
}

Polynomial Polynomial::one(const FieldPtr& f) { return Polynomial(f, {f->one()}); }

Polynomial Polynomial::x(const FieldPtr& f) { return Polynomial(f, {f->zero(), f->one()}); }

Polynomial Polynomial::constant(const Fq& c) { return Polynomial(c.field(), {c}); }

Polynomial Polynomial::from_roots(const FieldPtr& f, const std::vector<Fq>& roots) {
  Polynomial r = one(f);
  for (const auto& a : roots) r = r * Polynomial(f, {-a, f->one()});
  return r;
}

Polynomial Polynomial::from_root_multiplicities(const FieldPtr& f,
                                                const std::vector<std::pair<Fq, int>>& roots) {
  Polynomial r = one(f);
  for (const auto& [a, m] : roots)
    for (int i = 0; i < m; ++i) r = r * Polynomial(f, {-a, f->one()});
  return r;
}

Fq Polynomial::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return f_->zero();
  return c_[i];
}

Fq Polynomial::leading() const {
  if (c_.empty()) return f_->zero();
  return c_.back();
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Fq> c(std::max(c_.size(), o.c_.size()), f_->zero());
  for (size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
  return Polynomial(f_, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Fq> c(std::max(c_.size(), o.c_.size()), f_->zero());
  for (size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
  return Polynomial(f_, std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return zero(f_);
  std::vector<Fq> c(c_.size() + o.c_.size() - 1, f_->zero());
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] = c[i + j] + c_[i] * o.c_[j];
  return Polynomial(f_, std::move(c));
}

Polynomial Polynomial::operator*(const Fq& s) const {
  std::vector<Fq> c = c_;
  for (auto& v : c) v = v * s;
  return Polynomial(f_, std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<Fq> c = c_;
  for (auto& v : c) v = -v;
  return Polynomial(f_, std::move(c));
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (f_ != o.f_) throw FieldMismatch();
  return c_ == o.c_;
}

std::pair<Polynomial, Polynomial> Polynomial::divrem(const Polynomial& d) const {
  if (d.is_zero()) throw DivisionByZero();
  Polynomial rem = *this;
  std::vector<Fq> q(std::max<int>(degree() - d.degree() + 1, 0), f_->zero());
  Fq li = d.leading().inv();
  while (!rem.is_zero() && rem.degree() >= d.degree()) {
    int shift = rem.degree() - d.degree();
    Fq c = rem.leading() * li;
    q[shift] = c;
    std::vector<Fq> sub(shift + d.c_.size(), f_->zero());
    for (size_t i = 0; i < d.c_.size(); ++i) sub[shift + i] = d.c_[i] * c;
    rem = rem - Polynomial(f_, std::move(sub));
  }
  return {Polynomial(f_, std::move(q)), rem};
}

bool Polynomial::divides(const Polynomial& other) const {
  if (is_zero()) return other.is_zero();
  return other.divrem(*this).second.is_zero();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return *this * leading().inv();
}

Polynomial Polynomial::derivative() const {
  if (degree() < 1) return zero(f_);
  std::vector<Fq> c(c_.size() - 1, f_->zero());
  for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * f_->from_int(static_cast<int64_t>(i));
  return Polynomial(f_, std::move(c));
}

Fq Polynomial::eval(const Fq& x) const {
  Fq r = f_->zero();
  for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
  return r;
}

Polynomial Polynomial::pow(int e) const {
  Polynomial r = one(f_);
  Polynomial b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r = x % y;
    x = y;
    y = r;
  }
  return x.monic();
}

Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial::zero(a.field());
  Polynomial g = poly_gcd(a, b);
  return ((a * b) / g).monic();
}

Polynomial poly_invmod(const Polynomial& a, const Polynomial& m) {
  Polynomial r0 = m, r1 = a % m;
  Polynomial s0 = Polynomial::zero(a.field()), s1 = Polynomial::one(a.field());
  while (!r1.is_zero()) {
    auto [q, r2] = r0.divrem(r1);
    Polynomial s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0.degree() != 0) throw DivisionByZero();
  return (s0 * r0.leading().inv()) % m;
}

bool Polynomial::is_squarefree() const {
  if (degree() <= 0) return true;
  Polynomial d = derivative();
  if (d.is_zero()) return false;  // p-th power
  return poly_gcd(*this, d).degree() == 0;
}

namespace {

// p-th root of f = h(x)^p, valid when f' == 0 (coefficients at indices
// divisible by p, each a p-th power)
Polynomial pth_root(const Polynomial& f) {
  const FieldPtr& k = f.field();
  int64_t p = k->p();
  int64_t root_exp = k->q() / p;  // c -> c^(q/p) is the inverse of c -> c^p
  std::vector<Fq> c;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p))
    c.push_back(f.coeff(i).pow(root_exp));
  return Polynomial(k, std::move(c));
}

}  // namespace

Polynomial Polynomial::squarefree_part() const {
  if (degree() <= 0) return monic();
  Polynomial f = monic();
  Polynomial d = f.derivative();
  if (d.is_zero()) return pth_root(f).squarefree_part();
  Polynomial g = poly_gcd(f, d);
  if (g.degree() == 0) return f;
  // part with multiplicity not divisible by p, plus the p-power part
  Polynomial w = f / g;  // each non-p-multiple factor exactly once
  // strip w's factors out of g entirely
  Polynomial rest = g;
  Polynomial wg = poly_gcd(rest, w);
  while (wg.degree() > 0) {
    rest = rest / wg;
    wg = poly_gcd(rest, w);
  }
  if (rest.degree() == 0) return w.monic();
  Polynomial pr = pth_root(rest).squarefree_part();
  // avoid double-counting factors shared between w and the p-power part
  Polynomial shared = poly_gcd(w, pr);
  return (w * (pr / shared)).monic();
}

std::vector<std::pair<Fq, int>> Polynomial::roots_with_multiplicity() const {
  std::vector<std::pair<Fq, int>> out;
  if (degree() < 1) return out;
  Polynomial rem = *this;
  for (int64_t i = 0; i < f_->q(); ++i) {
    Fq a = f_->element_at(i);
    if (!rem.eval(a).is_zero()) continue;
    int mult = 0;
    Polynomial lin(f_, {-a, f_->one()});
    while (rem.eval(a).is_zero() && rem.degree() >= 1) {
      rem = rem / lin;
      ++mult;
    }
    out.emplace_back(a, mult);
    if (rem.degree() < 1) break;
  }
  return out;
}

bool Polynomial::splits_completely() const {
  if (degree() <= 0) return true;
  auto roots = roots_with_multiplicity();
  int total = 0;
  for (const auto& [a, m] : roots) total += m;
  return total == degree();
}

int Polynomial::splitting_degree() const {
  if (degree() <= 0) return 1;
  Polynomial rem = squarefree_part();
  int64_t q = f_->q();
  int lcm_deg = 1;
  Polynomial w = Polynomial::x(f_) % rem;  // x^(q^d) mod rem, iterated
  for (int d = 1; rem.degree() > 0; ++d) {
    // w <- w^q mod rem
    Polynomial acc = Polynomial::one(f_);
    Polynomial base = w;
    int64_t e = q;
    while (e > 0) {
      if (e & 1) acc = (acc * base) % rem;
      base = (base * base) % rem;
      e >>= 1;
    }
    w = acc;
    Polynomial g = poly_gcd(w - Polynomial::x(f_), rem);
    if (g.degree() > 0) {
      lcm_deg = static_cast<int>(std::lcm(lcm_deg, d));
      rem = rem / g;
      w = w % (rem.degree() > 0 ? rem : Polynomial::one(f_));
    }
    if (d > degree()) throw Error("splitting degree loop overran");  // cannot happen
  }
  return lcm_deg;
}

Matrix Polynomial::companion() const {
  Polynomial m = monic();
  int n = m.degree();
  if (n < 1) throw ShapeError("companion matrix needs degree >= 1");
  Matrix c(f_, n, n);
  for (int i = 0; i + 1 < n; ++i) c.at(i + 1, i) = f_->one();
  for (int j = 0; j < n; ++j) c.at(j, n - 1) = -m.coeff(j);
  return c;
}

Polynomial Polynomial::map_coeffs(const FieldEmbedding& e) const {
  std::vector<Fq> c;
  c.reserve(c_.size());
  for (const auto& v : c_) c.push_back(e(v));
  return Polynomial(e.to, std::move(c));
}

std::string Polynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || !c_[i].is_one()) os << c_[i].str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ------------------------------------------------------------ Matrix

Matrix::Matrix(FieldPtr f, int rows, int cols)
    : rows_(rows), cols_(cols), f_(std::move(f)), e_(static_cast<size_t>(rows) * cols, f_->zero()) {}

Matrix::Matrix(FieldPtr f, int rows, int cols, std::vector<Fq> entries)
    : rows_(rows), cols_(cols), f_(std::move(f)), e_(std::move(entries)) {
  if (e_.size() != static_cast<size_t>(rows) * cols) throw ShapeError("entry count mismatch");
  for (const auto& x : e_)
    if (x.field() != f_) throw FieldMismatch();
}

Matrix Matrix::identity(const FieldPtr& f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = f->one();
  return m;
}

Matrix Matrix::diag(const std::vector<Fq>& d) {
  if (d.empty()) throw ShapeError("empty diagonal");
  Matrix m(d[0].field(), static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Matrix Matrix::from_rows(const FieldPtr& f, const std::vector<std::vector<Fq>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(f, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw ShapeError("ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_int_rows(const FieldPtr& f, const std::vector<std::vector<int64_t>>& rows) {
  std::vector<std::vector<Fq>> conv;
  conv.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<Fq> row;
    row.reserve(r.size());
    for (int64_t v : r) row.push_back(f->from_int(v));
    conv.push_back(std::move(row));
  }
  return from_rows(f, conv);
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("shape mismatch in +");
  Matrix m(f_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] + o.e_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("shape mismatch in -");
  Matrix m(f_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - o.e_[i];
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw ShapeError("shape mismatch in *");
  Matrix m(f_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k2 = 0; k2 < cols_; ++k2) {
      const Fq& a = at(i, k2);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) m.at(i, j) = m.at(i, j) + a * o.at(k2, j);
    }
  return m;
}

Matrix Matrix::operator*(const Fq& s) const {
  Matrix m(f_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * s;
  return m;
}

Matrix Matrix::operator-() const {
  Matrix m(f_, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = -e_[i];
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

Matrix Matrix::transpose() const {
  Matrix m(f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

Matrix Matrix::pow(int e) const {
  if (rows_ != cols_) throw ShapeError("pow needs a square matrix");
  Matrix r = identity(f_, rows_);
  Matrix b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<Fq> Matrix::row(int i) const {
  std::vector<Fq> r;
  r.reserve(cols_);
  for (int j = 0; j < cols_; ++j) r.push_back(at(i, j));
  return r;
}

std::vector<Fq> Matrix::apply(const std::vector<Fq>& v) const {
  if (static_cast<int>(v.size()) != cols_) throw ShapeError("vector length mismatch");
  std::vector<Fq> r(rows_, f_->zero());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + at(i, j) * v[j];
  return r;
}

namespace {

struct RrefResult {
  Matrix m;
  std::vector<int> pivots;
};

RrefResult rref_impl(Matrix m) {
  const FieldPtr& f = m.field();
  std::vector<int> pivots;
  int lead = 0;
  for (int r = 0; r < m.rows() && lead < m.cols(); ++r) {
    int i = r;
    while (i < m.rows() && m.at(i, lead).is_zero()) ++i;
    if (i == m.rows()) {
      --r;
      ++lead;
      continue;
    }
    if (i != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(i, j), m.at(r, j));
    Fq li = m.at(r, lead).inv();
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) = m.at(r, j) * li;
    for (int i2 = 0; i2 < m.rows(); ++i2) {
      if (i2 == r || m.at(i2, lead).is_zero()) continue;
      Fq c = m.at(i2, lead);
      for (int j = 0; j < m.cols(); ++j) m.at(i2, j) = m.at(i2, j) - c * m.at(r, j);
    }
    pivots.push_back(lead);
    ++lead;
  }
  (void)f;
  return {std::move(m), std::move(pivots)};
}

}  // namespace

Matrix Matrix::rref() const { return rref_impl(*this).m; }

int Matrix::rank() const { return static_cast<int>(rref_impl(*this).pivots.size()); }

std::optional<Matrix> Matrix::inverse() const {
  if (rows_ != cols_) throw ShapeError("inverse needs a square matrix");
  Matrix aug(f_, rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = f_->one();
  }
  RrefResult r = rref_impl(aug);
  for (int i = 0; i < rows_; ++i)
    if (r.m.at(i, i).is_zero()) return std::nullopt;
  Matrix inv(f_, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = r.m.at(i, cols_ + j);
  return inv;
}

Fq Matrix::det() const {
  if (rows_ != cols_) throw ShapeError("det needs a square matrix");
  Matrix m = *this;
  Fq d = f_->one();
  for (int c = 0; c < cols_; ++c) {
    int i = c;
    while (i < rows_ && m.at(i, c).is_zero()) ++i;
    if (i == rows_) return f_->zero();
    if (i != c) {
      for (int j = 0; j < cols_; ++j) std::swap(m.at(i, j), m.at(c, j));
      d = -d;
    }
    d = d * m.at(c, c);
    Fq li = m.at(c, c).inv();
    for (int i2 = c + 1; i2 < rows_; ++i2) {
      if (m.at(i2, c).is_zero()) continue;
      Fq factor = m.at(i2, c) * li;
      for (int j = c; j < cols_; ++j) m.at(i2, j) = m.at(i2, j) - factor * m.at(c, j);
    }
  }
  return d;
}

Subspace Matrix::kernel() const {
  RrefResult r = rref_impl(*this);
  std::vector<bool> is_pivot(cols_, false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<std::vector<Fq>> basis;
  for (int j = 0; j < cols_; ++j) {
    if (is_pivot[j]) continue;
    std::vector<Fq> v(cols_, f_->zero());
    v[j] = f_->one();
    for (size_t pi = 0; pi < r.pivots.size(); ++pi) v[r.pivots[pi]] = -r.m.at(static_cast<int>(pi), j);
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return Subspace::zero(f_, cols_);
  return Subspace::span_of_rows(Matrix::from_rows(f_, basis));
}

namespace {

struct FqOps {
  FieldPtr f;
  Fq zero() const { return f->zero(); }
  Fq one() const { return f->one(); }
  Fq add(const Fq& a, const Fq& b) const { return a + b; }
  Fq mul(const Fq& a, const Fq& b) const { return a * b; }
  Fq neg(const Fq& a) const { return -a; }
};

}  // namespace

Polynomial Matrix::charpoly() const {
  if (rows_ != cols_) throw ShapeError("charpoly needs a square matrix");
  std::vector<Fq> v = detail::berkowitz<Fq, FqOps>(e_, rows_, FqOps{f_});
  std::reverse(v.begin(), v.end());  // berkowitz returns leading-first
  return Polynomial(f_, std::move(v));
}

Polynomial Matrix::minpoly() const {
  if (rows_ != cols_) throw ShapeError("minpoly needs a square matrix");
  int n = rows_;
  Polynomial result = Polynomial::one(f_);
  for (int start = 0; start < n; ++start) {
    // Krylov chain from e_start
    std::vector<std::vector<Fq>> chain;
    std::vector<Fq> v(n, f_->zero());
    v[start] = f_->one();
    chain.push_back(v);
    for (;;) {
      std::vector<Fq> w = apply(chain.back());
      // solve sum c_j chain[j] = w  (transpose system)
      int m = static_cast<int>(chain.size());
      Matrix sys(f_, n, m + 1);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) sys.at(i, j) = chain[j][i];
      for (int i = 0; i < n; ++i) sys.at(i, m) = w[i];
      RrefResult r = rref_impl(sys);
      bool dependent = true;
      for (int p : r.pivots)
        if (p == m) dependent = false;
      if (dependent) {
        // coefficients read off the reduced system
        std::vector<Fq> coeffs(m + 1, f_->zero());
        for (size_t pi = 0; pi < r.pivots.size(); ++pi) coeffs[r.pivots[pi]] = r.m.at(static_cast<int>(pi), m);
        std::vector<Fq> poly(m + 1, f_->zero());
        for (int j = 0; j < m; ++j) poly[j] = -coeffs[j];
        poly[m] = f_->one();
        result = poly_lcm(result, Polynomial(f_, std::move(poly)));
        break;
      }
      chain.push_back(std::move(w));
    }
    if (result.degree() == n) break;
  }
  return result.monic();
}

Matrix Matrix::map_entries(const FieldEmbedding& e) const {
  Matrix m(e.to, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(i, j) = e(at(i, j));
  return m;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < cols_; ++j) {
      if (j) os << ",";
      os << at(i, j).str();
    }
  }
  os << "]";
  return os.str();
}

Subspace generalized_eigenspace(const Matrix& m, const Fq& alpha, int mult) {
  if (m.rows() != m.cols()) throw ShapeError("needs square matrix");
  Polynomial cp = m.charpoly();
  if (!cp.eval(alpha).is_zero()) throw NotAnEigenvalue();
  Matrix shifted = m - Matrix::identity(m.field(), m.rows()) * alpha;
  return shifted.pow(mult).kernel();
}

// ------------------------------------------------------------ Subspace

Subspace Subspace::span_of_rows(const Matrix& m) {
  RrefResult r = rref_impl(m);
  int rank = static_cast<int>(r.pivots.size());
  Matrix basis(m.field(), rank, m.cols());
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < m.cols(); ++j) basis.at(i, j) = r.m.at(i, j);
  return Subspace(std::move(basis), m.cols());
}

Subspace Subspace::zero(const FieldPtr& f, int ambient) {
  return Subspace(Matrix(f, 0, ambient), ambient);
}

Subspace Subspace::full(const FieldPtr& f, int ambient) {
  return Subspace(Matrix::identity(f, ambient), ambient);
}

Subspace Subspace::span_of_vector(const FieldPtr& f, const std::vector<Fq>& v) {
  return span_of_rows(Matrix::from_rows(f, {v}));
}

bool Subspace::contains_vector(const std::vector<Fq>& v) const {
  if (static_cast<int>(v.size()) != ambient_) throw ShapeError("vector length mismatch");
  std::vector<Fq> w = v;
  for (int i = 0; i < basis_.rows(); ++i) {
    // pivot of row i
    int p = 0;
    while (p < ambient_ && basis_.at(i, p).is_zero()) ++p;
    if (p == ambient_) continue;
    if (!w[p].is_zero()) {
      Fq c = w[p];
      for (int j = 0; j < ambient_; ++j) w[j] = w[j] - c * basis_.at(i, j);
    }
  }
  for (const auto& x : w)
    if (!x.is_zero()) return false;
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  for (int i = 0; i < other.basis_.rows(); ++i)
    if (!contains_vector(other.basis_.row(i))) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw ShapeError("ambient mismatch");
  Matrix stacked(field(), dim() + other.dim(), ambient_);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < ambient_; ++j) stacked.at(i, j) = basis_.at(i, j);
  for (int i = 0; i < other.dim(); ++i)
    for (int j = 0; j < ambient_; ++j) stacked.at(dim() + i, j) = other.basis_.at(i, j);
  return span_of_rows(stacked);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw ShapeError("ambient mismatch");
  // Zassenhaus: rows [B | B; C | 0]; rows of the reduced matrix whose left
  // half is zero carry an intersection basis in the right half
  const FieldPtr& f = field();
  int n = ambient_;
  Matrix big(f, dim() + other.dim(), 2 * n);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < n; ++j) {
      big.at(i, j) = basis_.at(i, j);
      big.at(i, n + j) = basis_.at(i, j);
    }
  for (int i = 0; i < other.dim(); ++i)
    for (int j = 0; j < n; ++j) big.at(dim() + i, j) = other.basis_.at(i, j);
  Matrix red = big.rref();
  std::vector<std::vector<Fq>> inter;
  for (int i = 0; i < red.rows(); ++i) {
    bool left_zero = true;
    for (int j = 0; j < n && left_zero; ++j)
      if (!red.at(i, j).is_zero()) left_zero = false;
    if (!left_zero) continue;
    bool right_zero = true;
    std::vector<Fq> v(n, f->zero());
    for (int j = 0; j < n; ++j) {
      v[j] = red.at(i, n + j);
      if (!v[j].is_zero()) right_zero = false;
    }
    if (!right_zero) inter.push_back(std::move(v));
  }
  if (inter.empty()) return zero(f, n);
  return span_of_rows(Matrix::from_rows(f, inter));
}

Matrix Subspace::cutout_matrix() const {
  Subspace k = basis_.kernel();  // right kernel of the basis rows
  return k.basis();
}

Subspace Subspace::image_under(const Matrix& m) const {
  if (m.cols() != ambient_) throw ShapeError("operator shape mismatch");
  if (dim() == 0) return zero(field(), m.rows());
  return span_of_rows(basis_ * m.transpose());
}

Subspace Subspace::preimage_under(const Matrix& m) const {
  if (m.rows() != ambient_) throw ShapeError("operator shape mismatch");
  Matrix cut = cutout_matrix();
  if (cut.rows() == 0) return full(field(), m.cols());
  return (cut * m).kernel();
}

void Subspace::for_each_vector(const std::function<void(const std::vector<Fq>&)>& fn) const {
  const FieldPtr& f = field();
  int d = dim();
  int64_t q = f->q();
  std::vector<int64_t> idx(d, 0);
  std::vector<Fq> v(ambient_, f->zero());
  for (;;) {
    for (int j = 0; j < ambient_; ++j) v[j] = f->zero();
    for (int i = 0; i < d; ++i) {
      if (idx[i] == 0) continue;
      Fq c = f->element_at(idx[i]);
      for (int j = 0; j < ambient_; ++j) v[j] = v[j] + c * basis_.at(i, j);
    }
    fn(v);
    int i = 0;
    while (i < d && ++idx[i] == q) idx[i++] = 0;
    if (i == d) break;
    if (d == 0) break;
  }
}

Subspace Subspace::map(const FieldEmbedding& e) const {
  return Subspace(basis_.map_entries(e), ambient_);
}

bool Subspace::operator==(const Subspace& o) const {
  return ambient_ == o.ambient_ && basis_ == o.basis_;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
  if (dim() != o.dim()) return dim() < o.dim();
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < ambient_; ++j) {
      const Fq& a = basis_.at(i, j);
      const Fq& b = o.basis_.at(i, j);
      if (a != b) return Field::canonical_less(a, b);
    }
  return false;
}

std::string Subspace::str() const {
  return "span" + basis_.str();
}

// ----------------------------------------------- Grassmannian iteration

int64_t gaussian_binomial(int N, int d, int64_t q) {
  if (d < 0 || d > N) return 0;
  __int128 num = 1, den = 1;
  auto qpow = [&](int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
  };
  __int128 result = 1;
  for (int i = 0; i < d; ++i) {
    num = qpow(N - i) - 1;
    den = qpow(i + 1) - 1;
    result = result * num / den;  // divisibility holds stepwise for Gaussian binomials
  }
  return static_cast<int64_t>(result);
}

namespace {

void subspaces_for_pattern(const FieldPtr& f, int N, const std::vector<int>& pivots,
                           const std::function<void(const Subspace&)>& fn) {
  int d = static_cast<int>(pivots.size());
  std::vector<bool> is_pivot(N, false);
  for (int p : pivots) is_pivot[p] = true;
  // free positions: (row i, col j) with j > pivots[i], j not a pivot column
  std::vector<std::pair<int, int>> free_pos;
  for (int i = 0; i < d; ++i)
    for (int j = pivots[i] + 1; j < N; ++j)
      if (!is_pivot[j]) free_pos.emplace_back(i, j);
  int64_t q = f->q();
  std::vector<int64_t> idx(free_pos.size(), 0);
  Matrix basis(f, d, N);
  for (;;) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < N; ++j) basis.at(i, j) = f->zero();
    for (int i = 0; i < d; ++i) basis.at(i, pivots[i]) = f->one();
    for (size_t t = 0; t < free_pos.size(); ++t)
      basis.at(free_pos[t].first, free_pos[t].second) = f->element_at(idx[t]);
    fn(Subspace::span_of_rows(basis));
    size_t i = 0;
    while (i < idx.size() && ++idx[i] == q) idx[i++] = 0;
    if (i == idx.size()) break;
  }
}

}  // namespace

void for_each_subspace(const FieldPtr& f, int N, int d,
                       const std::function<void(const Subspace&)>& fn) {
  if (d < 0 || d > N) throw InvalidInput("dimension out of range");
  if (d == 0) {
    fn(Subspace::zero(f, N));
    return;
  }
  std::vector<int> pivots(d);
  for (int i = 0; i < d; ++i) pivots[i] = i;
  for (;;) {
    subspaces_for_pattern(f, N, pivots, fn);
    // next combination
    int i = d - 1;
    while (i >= 0 && pivots[i] == N - d + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int j = i + 1; j < d; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

// --------------------------------------------- splitting-field helpers

std::pair<FieldPtr, FieldEmbedding> extend_to_split(const FieldPtr& f, const Polynomial& poly) {
  if (poly.field() != f) throw FieldMismatch();
  if (poly.is_zero()) throw InvalidInput("cannot split the zero polynomial");
  int d = poly.splitting_degree();
  if (d == 1) return {f, identity_embedding(f)};
  FieldPtr ext = Field::extension(f->p(), f->k() * d);
  return {ext, make_embedding(f, ext)};
}

}  // namespace pencil
