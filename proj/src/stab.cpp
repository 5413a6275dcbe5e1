#include "pencil/stab.hpp"

namespace pencil {

namespace {

Matrix canonical_sign(Matrix m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Fq& e = m.at(i, j);
      if (e.is_zero()) continue;
      if (Field::canonical_less(-e, e)) return -m;
      return m;
    }
  return m;
}

}  // namespace

const StabElement* StabGroup::find(uint32_t index_set) const {
  // normalize against the complement pairing
  uint32_t full = (1u << ed.r_plus_1) - 1;
  uint32_t canon = (index_set & 1u) ? (full & ~index_set) : index_set;
  for (const auto& e : elements)
    if (e.index_set == canon) return &e;
  return nullptr;
}

const StabElement& StabGroup::identity() const {
  const StabElement* e = find(0);
  if (!e) throw Error("stabilizer group missing the identity");
  return *e;
}

StabGroup build_stab(const Matrix& t, const EigenData& ed, const QuadraticForm& q, StabFlavor flavor) {
  const FieldPtr& f = t.field();
  int n = t.rows();
  if (t.minpoly() != t.charpoly()) throw NotRegular("stabilizer model needs a regular operator");
  if (flavor == StabFlavor::PSO && n % 2 == 1)
    throw InvalidInput("PSO flavor applies to even-dimensional pencils");

  Polynomial cp = t.charpoly();
  int rp1 = ed.r_plus_1;
  if (rp1 > 30) throw InvalidInput("too many roots");

  // idempotent projectors e_i(T) onto the generalized eigenspaces
  std::vector<Matrix> projectors;
  for (int i = 0; i < rp1; ++i) {
    const auto& [alpha, m] = ed.roots[i];
    Polynomial lin = Polynomial(f, {-alpha, f->one()});
    Polynomial local = lin.pow(m);
    Polynomial h = cp / local;
    Polynomial u = poly_invmod(h % local, local);
    Polynomial eps = (h * u) % cp;
    // evaluate at T
    Matrix e(f, n, n);
    Matrix pw = Matrix::identity(f, n);
    for (int d = 0; d <= eps.degree(); ++d) {
      e = e + pw * eps.coeff(d);
      pw = pw * t;
    }
    if (e * e != e) throw Error("projector is not idempotent");
    projectors.push_back(std::move(e));
  }

  StabGroup g{flavor, t, q.gram(), ed, {}};
  Matrix id = Matrix::identity(f, n);
  uint32_t full = (1u << rp1) - 1;
  (void)full;
  for (uint32_t mask = 0; mask < (1u << rp1); ++mask) {
    if (mask & 1u) continue;  // complement representative has root 0 unset
    Matrix sum(f, n, n);
    for (int i = 0; i < rp1; ++i)
      if ((mask >> i) & 1) sum = sum + projectors[i];
    Matrix lift = id - sum - sum;  // 1 - 2 sum eps_i
    // verification: orthogonal, commutes with T, involution
    if (lift.transpose() * q.gram() * lift != q.gram())
      throw Error("stabilizer element fails orthogonality");
    if (lift * t != t * lift) throw Error("stabilizer element fails commutation");
    if (lift * lift != id) throw Error("stabilizer element is not an involution");
    bool so = lift.det() == f->one();
    if (flavor == StabFlavor::PSO && !so) continue;
    g.elements.push_back(StabElement{mask, canonical_sign(lift), so});
  }
  return g;
}

Subspace act(const StabElement& g, const Subspace& x) {
  return x.image_under(g.mat);
}

bool projectively_equal(const Matrix& a, const Matrix& b) {
  return a == b || a == -b;
}

OrbitReport orbit_report(const StabGroup& g, const std::set<Subspace>& s) {
  OrbitReport rep;
  std::set<Subspace> visited;
  for (const auto& x : s) {
    int stab = 0;
    std::set<Subspace> orbit;
    for (const auto& e : g.elements) {
      Subspace y = act(e, x);
      if (s.count(y) == 0) throw ActionNotClosed();
      if (y == x) ++stab;
      orbit.insert(y);
    }
    rep.stabilizer_order[x] = stab;
    if (visited.count(x) == 0) {
      for (const auto& y : orbit) visited.insert(y);
      rep.orbits.push_back(std::move(orbit));
    }
  }
  return rep;
}

}  // namespace pencil
