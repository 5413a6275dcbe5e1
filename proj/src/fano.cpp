#include "pencil/fano.hpp"

#include <algorithm>
#include <sstream>

namespace pencil {

namespace {

struct IsotropicDfs {
  const std::vector<Matrix>& grams;
  int big_n;
  int d;
  FieldPtr field;
  std::vector<Subspace>* out;

  std::vector<int> pivots;
  std::vector<std::vector<Fq>> rows;
  // grams[l] * row[j], cached for the pairwise checks
  std::vector<std::vector<std::vector<Fq>>> gram_rows;

  bool row_ok(const std::vector<Fq>& cand) const {
    for (size_t l = 0; l < grams.size(); ++l) {
      std::vector<Fq> gc = grams[l].apply(cand);
      Fq self = field->zero();
      for (int j = 0; j < big_n; ++j)
        if (!cand[j].is_zero()) self = self + cand[j] * gc[j];
      if (!self.is_zero()) return false;
      for (const auto& gr : gram_rows[l]) {
        Fq dot = field->zero();
        for (int j = 0; j < big_n; ++j)
          if (!cand[j].is_zero()) dot = dot + cand[j] * gr[j];
        if (!dot.is_zero()) return false;
      }
    }
    return true;
  }

  void fill_row(int i) {
    if (i == d) {
      std::vector<std::vector<Fq>> basis = rows;
      out->push_back(Subspace::span_of_rows(Matrix::from_rows(field, basis)));
      return;
    }
    std::vector<bool> is_pivot(big_n, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = pivots[i] + 1; j < big_n; ++j)
      if (!is_pivot[j]) free_cols.push_back(j);

    std::vector<Fq> cand(big_n, field->zero());
    cand[pivots[i]] = field->one();
    std::vector<int64_t> idx(free_cols.size(), 0);
    int64_t q = field->q();
    for (;;) {
      for (size_t t = 0; t < free_cols.size(); ++t) cand[free_cols[t]] = field->element_at(idx[t]);
      if (row_ok(cand)) {
        rows.push_back(cand);
        for (size_t l = 0; l < grams.size(); ++l) gram_rows[l].push_back(grams[l].apply(cand));
        fill_row(i + 1);
        rows.pop_back();
        for (size_t l = 0; l < grams.size(); ++l) gram_rows[l].pop_back();
      }
      size_t t = 0;
      while (t < idx.size() && ++idx[t] == q) idx[t++] = 0;
      if (t == idx.size()) break;
    }
  }
};

}  // namespace

std::vector<Subspace> enumerate_isotropic(const std::vector<Matrix>& grams, int d) {
  if (grams.empty()) throw InvalidInput("need at least one form");
  const FieldPtr& f = grams[0].field();
  int n = grams[0].rows();
  for (const auto& g : grams)
    if (g.rows() != n || g.cols() != n || g.field() != f)
      throw ShapeError("forms must share shape and field");
  std::vector<Subspace> out;
  if (d == 0) {
    out.push_back(Subspace::zero(f, n));
    return out;
  }
  if (d < 0 || d > n) throw InvalidInput("dimension out of range");

  IsotropicDfs dfs{grams, n, d, f, &out, {}, {}, {}};
  dfs.gram_rows.resize(grams.size());
  std::vector<int> pivots(d);
  for (int i = 0; i < d; ++i) pivots[i] = i;
  for (;;) {
    dfs.pivots = pivots;
    dfs.fill_row(0);
    int i = d - 1;
    while (i >= 0 && pivots[i] == n - d + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (int j = i + 1; j < d; ++j) pivots[j] = pivots[j - 1] + 1;
  }
  return out;
}

std::set<Subspace> enumerate_common_isotropic(const Pencil& p, int dim) {
  if (2 * dim > p.N()) throw InvalidInput("dimension exceeds N/2");
  std::vector<Subspace> v = enumerate_isotropic({p.a1(), p.a2()}, dim);
  return std::set<Subspace>(v.begin(), v.end());
}

ElkiesResult elkies_enumerate(const std::vector<Fq>& c) {
  int big_n = static_cast<int>(c.size());
  if (big_n < 3 || big_n % 2 == 0) throw NotGeneric("need an odd number of coefficients, >= 3");
  const FieldPtr& k = c[0].field();
  for (int i = 0; i < big_n; ++i)
    for (int j = i + 1; j < big_n; ++j)
      if (c[i] == c[j]) throw NotGeneric("coefficients must be distinct");
  int n = (big_n - 1) / 2;

  // moment system: sum_i c_i^t D_i = 0 for t = 0..2n-1
  Matrix sys(k, 2 * n, big_n);
  for (int i = 0; i < big_n; ++i) {
    Fq pw = k->one();
    for (int t = 0; t < 2 * n; ++t) {
      sys.at(t, i) = pw;
      pw = pw * c[i];
    }
  }
  Subspace ker = sys.kernel();
  if (ker.dim() != 1) throw Error("moment system kernel is not a line");
  std::vector<Fq> D = ker.basis().row(0);
  for (const auto& di : D)
    if (di.is_zero()) throw Error("kernel entry vanishes unexpectedly");

  auto [ext, emb] = extend_for_sqrts(k, D);
  std::vector<Fq> d;
  d.reserve(big_n);
  for (const auto& di : D) {
    auto s = ext->sqrt(emb(di));
    if (!s) throw Error("square root missing after extension");
    d.push_back(*s);
  }
  std::vector<Fq> ce;
  ce.reserve(big_n);
  for (const auto& ci : c) ce.push_back(emb(ci));

  ElkiesResult res{ext, emb, D, {}};
  // sign systems with the first sign fixed: flipping every sign gives the
  // same subspace
  for (int64_t mask = 0; mask < (1LL << (big_n - 1)); ++mask) {
    std::vector<Fq> signed_d = d;
    for (int i = 1; i < big_n; ++i)
      if ((mask >> (i - 1)) & 1) signed_d[i] = -signed_d[i];
    std::vector<std::vector<Fq>> rows;
    for (int t = 0; t < n; ++t) {
      std::vector<Fq> row(big_n, ext->zero());
      for (int i = 0; i < big_n; ++i) row[i] = signed_d[i] * ce[i].pow(t);
      rows.push_back(std::move(row));
    }
    res.planes.insert(Subspace::span_of_rows(Matrix::from_rows(ext, rows)));
  }
  return res;
}

int t_stable_dim(const Matrix& t, const Subspace& w) {
  Subspace cur = w;
  for (;;) {
    Subspace next = cur.intersect(cur.preimage_under(t));
    if (next == cur) return cur.dim();
    cur = next;
  }
}

int ProfileKey::total() const {
  int s = 0;
  for (int d : dims) s += d;
  return s;
}

int ProfileKey::a_count(const std::vector<int>& mults) const {
  if (mults.size() != dims.size()) throw ShapeError("profile/multiplicity length mismatch");
  int a = 0;
  for (size_t i = 0; i < dims.size(); ++i)
    if (2 * dims[i] == mults[i]) ++a;
  return a;
}

std::string ProfileKey::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    os << dims[i];
  }
  os << ")";
  return os.str();
}

ProfileKey profile(const Matrix& t, const EigenData& ed, const Subspace& x) {
  ProfileKey key;
  key.dims.reserve(ed.spaces.size());
  for (const auto& u : ed.spaces) key.dims.push_back(t_stable_dim(t, x.intersect(u)));
  return key;
}

std::map<ProfileKey, std::set<Subspace>> partition_by_profile(const Pencil& p) {
  if (p.N() % 2 == 0) throw InvalidInput("odd-dimensional pencils only");
  PencilClass cls = p.classify();
  if (cls.tag == PencilTag::NonRegular) throw NotRegular("profile counting needs a regular pencil");
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  int n = (p.N() - 1) / 2;
  std::map<ProfileKey, std::set<Subspace>> out;
  for (const auto& x : enumerate_common_isotropic(p, n)) out[profile(t, ed, x)].insert(x);
  return out;
}

EvenFanoSets even_fano_sets(const Pencil& p) {
  if (p.N() % 2 == 1) throw InvalidInput("even-dimensional pencils only");
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  int n = (p.N() - 2) / 2;

  EvenFanoSets out;
  out.f0 = enumerate_common_isotropic(p, n);
  for (const auto& x : out.f0) {
    Subspace span = x.sum(x.image_under(t));
    if (t_stable_dim(t, span) == 0) out.f.insert(x);
  }

  if (ed.geometric_genus() >= 0) {
    // singular points of the base locus: eigenvector lines at repeated roots
    std::vector<std::vector<Fq>> singular;
    for (int i = 0; i < ed.r_plus_1; ++i)
      if (ed.roots[i].second >= 2) singular.push_back(ed.eigenvector(i));
    QuadraticForm q1 = p.q1();
    std::set<Subspace> by_membership, by_orthogonality;
    for (const auto& x : out.f0) {
      bool contains_v = false, inside_vperp = false;
      for (const auto& v : singular) {
        if (x.contains_vector(v)) contains_v = true;
        bool sub = true;
        for (int i = 0; i < x.dim() && sub; ++i)
          if (!q1.bilinear(x.basis().row(i), v).is_zero()) sub = false;
        if (sub) inside_vperp = true;
      }
      if (!contains_v) by_membership.insert(x);
      if (!inside_vperp) by_orthogonality.insert(x);
    }
    if (by_membership != out.f || by_orthogonality != out.f)
      throw Error("open-condition characterizations disagree");
    out.equivalence_checked = true;
  }
  return out;
}

namespace {

std::optional<Subspace> contains_pn_impl(const QuadraticForm& q, const Matrix& t) {
  const FieldPtr& f = q.field();
  int n = q.dim();
  if (n == 0) return Subspace::zero(f, 0);
  Polynomial cp = t.charpoly();
  auto roots = cp.roots_with_multiplicity();
  int total = 0;
  for (const auto& [a, m] : roots) total += m;
  if (total != cp.degree()) throw NeedsExtension();
  for (const auto& [a, m] : roots)
    if (m % 2 == 1) return std::nullopt;
  // all multiplicities even: reduce at the first root and lift back with v
  const Fq& alpha = roots[0].first;
  Matrix shifted = t - Matrix::identity(f, n) * alpha;
  Subspace eig = shifted.kernel();
  std::vector<Fq> v = eig.basis().row(0);
  Descent d = restrict_and_descend(q, t, v);
  auto wbar = contains_pn_impl(d.q_bar, d.t_bar);
  if (!wbar) return std::nullopt;
  return d.lift_with_v(*wbar);
}

}  // namespace

std::optional<Subspace> contains_pn(const Pencil& p) {
  if (p.N() % 2 == 1) throw InvalidInput("even-dimensional pencils only");
  Matrix t = p.T();
  auto w = contains_pn_impl(p.q1(), t);
  if (w) {
    // the lemma package: it is common isotropic and T-stable
    if (!p.q1().is_isotropic(*w) || !p.q2().is_isotropic(*w))
      throw Error("constructed subspace is not common isotropic");
    if (t_stable_dim(t, *w) != w->dim()) throw Error("constructed subspace is not T-stable");
  }
  return w;
}

std::set<Subspace> starred_set(const Pencil& p) {
  if (p.N() % 2 == 1) throw InvalidInput("even-dimensional pencils only");
  Matrix t = p.T();
  int n = (p.N() - 2) / 2;
  // Span{X,TX} isotropic for Q1 == X isotropic for b1, b1(.,T.), b1(T.,T.)
  Matrix g1 = p.a1();
  Matrix g2 = g1 * t;                 // = a2
  Matrix g3 = t.transpose() * g1 * t;
  std::vector<Subspace> cand = enumerate_isotropic({g1, g2, g3}, n);
  std::set<Subspace> out;
  for (const auto& x : cand) {
    Subspace span = x.sum(x.image_under(t));
    if (span.dim() == n + 1) out.insert(x);
  }
  return out;
}

EvenProfilePartition even_profile_partition(const Pencil& p) {
  PencilClass cls = p.classify();
  if (cls.tag == PencilTag::NonRegular) throw NotRegular("profile counting needs a regular pencil");
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  int n = (p.N() - 2) / 2;
  EvenProfilePartition out;
  for (const auto& x : starred_set(p)) {
    Subspace span = x.sum(x.image_under(t));
    ProfileKey key = profile(t, ed, span);
    if (key.total() == n + 1)
      out.excluded[key].insert(x);
    else
      out.classes[key].insert(x);
  }
  return out;
}

}  // namespace pencil
