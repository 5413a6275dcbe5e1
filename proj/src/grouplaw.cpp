#include "pencil/grouplaw.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace pencil {

// ------------------------------------------------------------- points

bool PencilParam::operator==(const PencilParam& o) const {
  if (is_infinity() != o.is_infinity()) return false;
  if (is_infinity()) return true;
  return *lambda == *o.lambda;
}

bool PencilParam::operator<(const PencilParam& o) const {
  if (is_infinity() != o.is_infinity()) return is_infinity();
  if (is_infinity()) return false;
  return Field::canonical_less(*lambda, *o.lambda);
}

std::string PencilParam::str() const {
  return is_infinity() ? "inf" : lambda->str();
}

CurvePoint CurvePoint::bar() const {
  CurvePoint c = *this;
  if (!c.weierstrass) c.ruling ^= 1;
  return c;
}

bool CurvePoint::operator==(const CurvePoint& o) const {
  return param == o.param && weierstrass == o.weierstrass &&
         (weierstrass || ruling == o.ruling);
}

bool CurvePoint::operator<(const CurvePoint& o) const {
  if (!(param == o.param)) return param < o.param;
  if (weierstrass != o.weierstrass) return weierstrass;
  if (weierstrass) return false;
  return ruling < o.ruling;
}

std::string CurvePoint::str() const {
  std::ostringstream os;
  os << "(" << param.str() << (weierstrass ? ",W" : (ruling ? ",+" : ",-")) << ")";
  return os.str();
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& [c, m] : terms) d += m;
  return d;
}

Divisor Divisor::operator+(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& t : o.terms) r.terms.push_back(t);
  return r;
}

Divisor Divisor::operator-() const {
  Divisor r = *this;
  for (auto& [c, m] : r.terms) m = -m;
  return r;
}

std::string Divisor::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) os << " ";
    os << (terms[i].second >= 0 ? "+" : "-") << std::abs(terms[i].second) << "*"
       << terms[i].first.str();
  }
  return os.str();
}

// ---------------------------------------------------------- CurveModel

CurveModel::CurveModel(Pencil p) : p_(std::move(p)), t_(p_.T()), ed_() {
  if (p_.N() % 2 == 1) throw InvalidInput("curve model needs an even-dimensional pencil");
  if (t_.minpoly() != t_.charpoly()) throw NotRegular("curve model needs a regular pencil");
  ed_ = eigendata(t_, t_.charpoly(), p_.q1());
}

void CurveModel::ensure_fano() const {
  if (fano_ready_) return;
  EvenFanoSets s = even_fano_sets(p_);
  f0_ = std::move(s.f0);
  f_ = std::move(s.f);
  fano_ready_ = true;
}

QuadraticForm CurveModel::member(const PencilParam& param) const {
  return p_.member(param.lambda);
}

int CurveModel::singular_root_index(const PencilParam& param) const {
  if (param.is_infinity()) return -1;  // a1 is invertible here
  return ed_.index_of_root(*param.lambda);
}

bool CurveModel::member_smooth(const PencilParam& param) const {
  return singular_root_index(param) == -1;
}

bool CurveModel::rulings_rational(const PencilParam& param) const {
  return member_smooth(param) && member(param).disc_is_square();
}

std::vector<Subspace> CurveModel::maximal_isotropics_containing(const Subspace& x,
                                                                const PencilParam& param) const {
  QuadraticForm q = member(param);
  if (!q.is_isotropic(x)) throw InvalidInput("subspace is not isotropic for this member");
  Subspace w = q.orthogonal_complement(x);
  // complement of x inside w
  const FieldPtr& f = field();
  int nn = p_.N();
  std::vector<std::vector<Fq>> comp;
  Matrix probe = x.basis();
  int base_rank = x.dim();
  for (int i = 0; i < w.dim(); ++i) {
    std::vector<std::vector<Fq>> rows;
    for (int r2 = 0; r2 < probe.rows(); ++r2) rows.push_back(probe.row(r2));
    rows.push_back(w.basis().row(i));
    Matrix cand = Matrix::from_rows(f, rows);
    if (cand.rank() > base_rank) {
      probe = cand;
      ++base_rank;
      comp.push_back(w.basis().row(i));
    }
  }
  std::vector<Subspace> out;
  int d = static_cast<int>(comp.size());
  if (d == 0) return out;
  // projective points of the quotient w/x, canonical representatives
  std::vector<std::vector<Fq>> reps;
  {
    int64_t qq = f->q();
    // leading coordinate = 1 at position t, free below
    for (int t = 0; t < d; ++t) {
      std::vector<int64_t> idx(t, 0);
      for (;;) {
        std::vector<Fq> coords(d, f->zero());
        coords[t] = f->one();
        for (int u = 0; u < t; ++u) coords[u] = f->element_at(idx[u]);
        reps.push_back(coords);
        int u = 0;
        while (u < t && ++idx[u] == qq) idx[u++] = 0;
        if (u == t) break;
      }
    }
  }
  for (const auto& coords : reps) {
    std::vector<Fq> vec(nn, f->zero());
    for (int i = 0; i < d; ++i) {
      if (coords[i].is_zero()) continue;
      for (int j = 0; j < nn; ++j) vec[j] = vec[j] + coords[i] * comp[i][j];
    }
    if (!q.eval(vec).is_zero()) continue;
    std::vector<std::vector<Fq>> rows;
    for (int r2 = 0; r2 < x.dim(); ++r2) rows.push_back(x.basis().row(r2));
    rows.push_back(vec);
    out.push_back(Subspace::span_of_rows(Matrix::from_rows(f, rows)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](const Subspace& a, const Subspace& b) { return a == b; }),
            out.end());
  return out;
}

int64_t CurveModel::param_key(const PencilParam& param) const {
  return param.is_infinity() ? -1 : field()->index_of(*param.lambda);
}

bool CurveModel::register_param(const PencilParam& param) {
  if (refs_.count(param_key(param))) return true;
  if (!rulings_rational(param)) return false;
  QuadraticForm q = member(param);
  Subspace ref = witt_maximal_isotropic(q);
  if (ref.dim() != n() + 1) throw Error("square-discriminant member is not split");
  refs_.emplace(param_key(param), ref);
  return true;
}

bool CurveModel::registered(const PencilParam& param) const {
  return refs_.count(param_key(param)) > 0;
}

int CurveModel::ruling_label(const PencilParam& param, const Subspace& y) const {
  auto it = refs_.find(param_key(param));
  if (it == refs_.end()) throw NoBasePoint();
  int codim = y.dim() - y.intersect(it->second).dim();
  return codim & 1;
}

std::vector<CurvePoint> CurveModel::rational_points() {
  std::vector<CurvePoint> pts;
  auto consider = [&](const PencilParam& param) {
    int i = singular_root_index(param);
    if (i >= 0) {
      if (ed_.roots[i].second == 1) pts.push_back(CurvePoint::weier(param));
      return;
    }
    if (register_param(param)) {
      pts.push_back(CurvePoint::smooth(param, 0));
      pts.push_back(CurvePoint::smooth(param, 1));
    }
  };
  consider(PencilParam::infinity());
  for (int64_t i = 0; i < field()->q(); ++i) consider(PencilParam::at(field()->element_at(i)));
  std::sort(pts.begin(), pts.end());
  return pts;
}

PencilParam CurveModel::auxiliary_param(const PencilParam& avoid) const {
  PencilParam inf = PencilParam::infinity();
  if (!(inf == avoid)) return inf;  // a1 is invertible, always smooth
  for (int64_t i = 0; i < field()->q(); ++i) {
    PencilParam cand = PencilParam::at(field()->element_at(i));
    if (cand == avoid) continue;
    if (member_smooth(cand)) return cand;
  }
  throw Error("no smooth auxiliary member");
}

Subspace CurveModel::reflect(const Subspace& x, const std::vector<Fq>& p,
                             const QuadraticForm& q) const {
  const FieldPtr& f = field();
  int nn = p_.N();
  Fq beta = q.eval(p);
  if (beta.is_zero()) throw DegenerateSpan();
  std::vector<Fq> gp = q.gram().apply(p);
  Fq c = f->from_int(2) / beta;
  Matrix r = Matrix::identity(f, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) r.at(i, j) = r.at(i, j) - c * p[i] * gp[j];
  return x.image_under(r);
}

Subspace CurveModel::tau(const CurvePoint& c, const Subspace& x) const {
  if (c.weierstrass) {
    int i = singular_root_index(c.param);
    if (i < 0) throw InvalidInput("not a singular member");
    return tau_weierstrass(i, x);
  }
  auto it = refs_.find(param_key(c.param));
  if (it == refs_.end()) throw NoBasePoint();
  std::vector<Subspace> ys = maximal_isotropics_containing(x, c.param);
  if (ys.size() != 2) throw DegenerateSpan();
  const Subspace* y = nullptr;
  for (const auto& cand : ys)
    if (ruling_label(c.param, cand) == c.ruling) y = &cand;
  if (!y) throw DegenerateSpan();

  PencilParam mu = auxiliary_param(c.param);
  QuadraticForm qmu = member(mu);
  // p in Y \ X with q_mu(p) != 0; pick a transversal vector y0 and walk the
  // coset representatives y0 + X
  std::vector<Fq> y0;
  for (int i = 0; i < y->dim(); ++i) {
    std::vector<Fq> row = y->basis().row(i);
    if (!x.contains_vector(row)) {
      y0 = row;
      break;
    }
  }
  if (y0.empty()) throw DegenerateSpan();
  std::vector<Fq> p_found;
  x.for_each_vector([&](const std::vector<Fq>& xv) {
    if (!p_found.empty()) return;
    std::vector<Fq> cand(y0.size(), field()->zero());
    for (size_t j = 0; j < y0.size(); ++j) cand[j] = y0[j] + xv[j];
    if (!qmu.eval(cand).is_zero()) p_found = cand;
  });
  if (p_found.empty()) throw DegenerateSpan();
  Subspace image = reflect(x, p_found, qmu);
  if (!p_.q1().is_isotropic(image) || !p_.q2().is_isotropic(image))
    throw Error("residual subspace left the base locus");
  return image;
}

Subspace CurveModel::tau_weierstrass(int root_index, const Subspace& x) const {
  if (ed_.roots[root_index].second != 1)
    throw InvalidInput("Weierstrass involution needs a simple root");
  std::vector<Fq> v = ed_.eigenvector(root_index);
  if (x.contains_vector(v)) throw ConeOnX();
  QuadraticForm q1 = p_.q1();
  if (q1.eval(v).is_zero()) throw Error("cone direction unexpectedly isotropic");
  Subspace image = reflect(x, v, q1);
  if (!p_.q1().is_isotropic(image) || !p_.q2().is_isotropic(image))
    throw Error("reflection left the base locus");
  return image;
}

SignedFano CurveModel::plus_point(const SignedFano& v, const CurvePoint& c) const {
  if (v.sign > 0) return SignedFano{tau(c.bar(), v.x), -1};
  return SignedFano{tau(c, v.x), 1};
}

SignedFano CurveModel::minus_point(const SignedFano& v, const CurvePoint& c) const {
  if (v.sign < 0) return SignedFano{tau(c.bar(), v.x), 1};
  return SignedFano{tau(c, v.x), -1};
}

SignedFano CurveModel::act(const SignedFano& v, const Divisor& d) const {
  SignedFano cur = v;
  for (const auto& [c, m] : d.terms) {
    for (int i = 0; i < m; ++i) cur = plus_point(cur, c);
    for (int i = 0; i < -m; ++i) cur = minus_point(cur, c);
  }
  return cur;
}

// ------------------------------------------------------------ f2_infty

F2InftyResult f2_infty(CurveModel& model, const CurvePoint& infinity) {
  F2InftyResult res;
  const Pencil& p = model.pencil();
  if (infinity.weierstrass) {
    int i = model.singular_root_index(infinity.param);
    if (i < 0 || model.eigen().roots[i].second != 1) throw NoBasePoint();
    std::vector<Fq> v = model.eigen().eigenvector(i);
    QuadraticForm q1 = p.q1();
    for (const auto& x : model.F()) {
      if (model.tau_weierstrass(i, x) == x) res.fixed.insert(x);
      bool inside = true;
      for (int r2 = 0; r2 < x.dim() && inside; ++r2)
        if (!q1.bilinear(x.basis().row(r2), v).is_zero()) inside = false;
      if (inside) res.structural.insert(x);
    }
  } else {
    if (!infinity.param.is_infinity())
      throw NoBasePoint();  // distinguished smooth point sits over Q1
    if (!model.register_param(infinity.param)) throw NoBasePoint();
    QuadraticForm q1 = p.q1();
    for (const auto& x : model.F()) {
      if (model.tau(infinity, x) == x) res.fixed.insert(x);
      Subspace span = x.sum(x.image_under(model.T()));
      if (span.dim() == model.n() + 1 && q1.is_isotropic(span) &&
          model.ruling_label(infinity.param, span) == infinity.ruling)
        res.structural.insert(x);
    }
  }
  res.agree = res.fixed == res.structural;
  return res;
}

// ------------------------------------------------------ odd restriction

Subspace OddRestriction::to_coords(const Subspace& x) const {
  std::vector<std::vector<Fq>> rows;
  for (int i = 0; i < x.dim(); ++i) {
    auto c = coords_in_rows(h_rows, x.basis().row(i));
    if (!c) throw InvalidInput("subspace is not inside the hyperplane");
    rows.push_back(*c);
  }
  if (rows.empty()) return Subspace::zero(h_rows.field(), h_rows.rows());
  return Subspace::span_of_rows(Matrix::from_rows(h_rows.field(), rows));
}

Subspace OddRestriction::to_ambient(const Subspace& xh) const {
  if (xh.dim() == 0) return Subspace::zero(h_rows.field(), h_rows.cols());
  return Subspace::span_of_rows(xh.basis() * h_rows);
}

OddRestriction restrict_to_hyperplane(const CurveModel& model, int root_index) {
  if (model.eigen().roots[root_index].second != 1)
    throw InvalidInput("hyperplane restriction needs a simple root");
  std::vector<Fq> v = model.eigen().eigenvector(root_index);
  QuadraticForm q1 = model.pencil().q1();
  Subspace h = q1.orthogonal_complement_of_vector(v);
  Matrix rows = h.basis();
  Matrix a1 = rows * model.pencil().a1() * rows.transpose();
  Matrix a2 = rows * model.pencil().a2() * rows.transpose();
  return OddRestriction{rows, Pencil(a1, a2)};
}

// ----------------------------------------------------------- reports

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

void add_check(Report& rep, const std::string& name, bool pass, const std::string& witness) {
  rep.checks.push_back(CheckResult{name, pass, pass ? "" : witness});
}

}  // namespace

Report verify_two_actions_weierstrass(CurveModel& model, int root_index) {
  Report rep;
  const EigenData& ed = model.eigen();
  CurvePoint inf = CurvePoint::weier(
      PencilParam::at(ed.roots[root_index].first));

  F2InftyResult f2 = f2_infty(model, inf);
  add_check(rep, "fixed-set-matches-hyperplane-section", f2.agree, "characterizations differ");

  OddRestriction restr = restrict_to_hyperplane(model, root_index);
  int n = model.n();
  std::set<Subspace> w_th = enumerate_common_isotropic(restr.restricted, n);
  std::set<Subspace> f2_coords;
  for (const auto& x : f2.fixed) f2_coords.insert(restr.to_coords(x));
  add_check(rep, "fixed-set-equals-restricted-fano-set", f2_coords == w_th,
            "hyperplane section differs from the restricted fano set");

  Matrix t_h = restr.restricted.T();
  EigenData ed_h = eigendata(t_h, t_h.charpoly(), restr.restricted.q1());
  StabGroup stab_h = build_stab(t_h, ed_h, restr.restricted.q1(), StabFlavor::PO);

  // identity divisor acts as the identity permutation
  {
    CurvePoint p0 = inf;
    Divisor d = Divisor::point(p0) - Divisor::point(p0);
    bool ok = true;
    std::string witness;
    for (const auto& x : f2.fixed) {
      SignedFano out = model.act(SignedFano{x, 1}, d);
      if (!(out == SignedFano{x, 1})) {
        ok = false;
        witness = x.str();
        break;
      }
    }
    add_check(rep, "identity-divisor", ok, witness);
  }

  for (int j = 0; j < ed.r_plus_1; ++j) {
    if (j == root_index) continue;
    if (ed.roots[j].second != 1) continue;
    CurvePoint pj = CurvePoint::weier(PencilParam::at(ed.roots[j].first));
    Divisor d = Divisor::point(pj) - Divisor::point(inf);

    int jh = ed_h.index_of_root(ed.roots[j].first);
    const StabElement* g = stab_h.find(1u << jh);
    bool ok = g != nullptr;
    std::string witness = "missing stabilizer element";
    if (ok) {
      for (const auto& x : f2.fixed) {
        SignedFano via_divisor = model.act(SignedFano{x, 1}, d);
        Subspace via_matrix = restr.to_ambient(act(*g, restr.to_coords(x)));
        if (via_divisor.sign != 1 || !(via_divisor.x == via_matrix)) {
          ok = false;
          witness = "generator disagrees at " + x.str();
          break;
        }
      }
    }
    add_check(rep, "generator-" + pj.str(), ok, witness);
  }
  return rep;
}

Report verify_two_actions_smooth(CurveModel& model, const CurvePoint& infinity) {
  Report rep;
  F2InftyResult f2 = f2_infty(model, infinity);
  add_check(rep, "fixed-set-matches-span-ruling", f2.agree, "characterizations differ");

  StabGroup stab = build_stab(model.T(), model.eigen(), model.pencil().q1(), StabFlavor::PSO);
  const EigenData& ed = model.eigen();

  for (int i = 0; i < ed.r_plus_1; ++i) {
    if (ed.roots[i].second != 1) continue;
    for (int j = i + 1; j < ed.r_plus_1; ++j) {
      if (ed.roots[j].second != 1) continue;
      CurvePoint pi = CurvePoint::weier(PencilParam::at(ed.roots[i].first));
      CurvePoint pj = CurvePoint::weier(PencilParam::at(ed.roots[j].first));
      Divisor d = Divisor::point(pi) - Divisor::point(pj);
      const StabElement* g = stab.find((1u << i) | (1u << j));
      bool ok = g != nullptr;
      std::string witness = "missing stabilizer element";
      if (ok) {
        for (const auto& x : f2.fixed) {
          SignedFano via_divisor = model.act(SignedFano{x, 1}, d);
          Subspace via_matrix = act(*g, x);
          if (via_divisor.sign != 1 || !(via_divisor.x == via_matrix)) {
            ok = false;
            witness = "generator disagrees at " + x.str();
            break;
          }
        }
      }
      add_check(rep, "generator-" + pi.str() + "-" + pj.str(), ok, witness);
    }
  }
  return rep;
}

// ------------------------------------------------------- group shadow

namespace {

int codim_between(const Subspace& a, const Subspace& b) {
  return a.dim() - a.intersect(b).dim();
}

// the unique pencil member vanishing identically on s, when one exists
std::optional<PencilParam> member_containing(const Pencil& p, const Subspace& s) {
  QuadraticForm q1 = p.q1();
  QuadraticForm q2 = p.q2();
  std::optional<Fq> lambda;
  for (int i = 0; i < s.dim(); ++i)
    for (int j = i; j < s.dim(); ++j) {
      Fq b1 = q1.bilinear(s.basis().row(i), s.basis().row(j));
      if (b1.is_zero()) continue;
      Fq cand = q2.bilinear(s.basis().row(i), s.basis().row(j)) / b1;
      if (lambda && !(*lambda == cand)) return std::nullopt;
      lambda = cand;
    }
  if (!lambda) return PencilParam::infinity();  // Q1 vanishes identically on s
  if (!p.member(*lambda).is_isotropic(s)) return std::nullopt;
  return PencilParam::at(*lambda);
}

}  // namespace

Report verify_group_shadow(CurveModel& model, int samples, uint64_t seed) {
  Report rep;
  std::mt19937_64 rng(seed);
  std::vector<Subspace> fvec(model.F().begin(), model.F().end());
  std::vector<CurvePoint> pts = model.rational_points();
  std::vector<CurvePoint> smooth_pts;
  for (const auto& c : pts)
    if (!c.weierstrass) smooth_pts.push_back(c);
  if (fvec.empty() || smooth_pts.empty()) {
    add_check(rep, "nonempty-data", false, "no fano elements or no smooth rational points");
    return rep;
  }
  auto pick_x = [&]() { return fvec[rng() % fvec.size()]; };
  auto pick_c = [&]() { return smooth_pts[rng() % smooth_pts.size()]; };
  bool exhaustive = static_cast<int>(fvec.size()) * static_cast<int>(smooth_pts.size()) <= 64;

  // tau is an involution
  {
    bool ok = true;
    std::string witness;
    auto one = [&](const CurvePoint& c, const Subspace& x) {
      if (!ok) return;
      if (!(model.tau(c, model.tau(c, x)) == x)) {
        ok = false;
        witness = c.str() + " at " + x.str();
      }
    };
    if (exhaustive) {
      for (const auto& c : smooth_pts)
        for (const auto& x : fvec) one(c, x);
    } else {
      for (int i = 0; i < samples; ++i) one(pick_c(), pick_x());
    }
    add_check(rep, "tau-involution", ok, witness);
  }

  // residual intersection: Y ∩ B = X ∪ tau(c)X as point sets
  {
    bool ok = true;
    std::string witness;
    for (int i = 0; i < std::min(samples, 40) && ok; ++i) {
      CurvePoint c = pick_c();
      Subspace x = pick_x();
      Subspace x2 = model.tau(c, x);
      std::vector<Subspace> ys = model.maximal_isotropics_containing(x, c.param);
      const Subspace* y = nullptr;
      for (const auto& cand : ys)
        if (model.ruling_label(c.param, cand) == c.ruling) y = &cand;
      if (!y) {
        ok = false;
        witness = "no ruling representative at " + c.str();
        break;
      }
      PencilParam mu = model.auxiliary_param(c.param);
      QuadraticForm qmu = model.member(mu);
      bool local = true;
      y->for_each_vector([&](const std::vector<Fq>& w) {
        if (!local) return;
        bool on_b = qmu.eval(w).is_zero();
        bool on_xs = x.contains_vector(w) || x2.contains_vector(w);
        if (on_b != on_xs) local = false;
      });
      if (!local) {
        ok = false;
        witness = "residual mismatch at " + c.str() + ", " + x.str();
      }
    }
    add_check(rep, "tau-residual-intersection", ok, witness);
  }

  // (x + (c1)) + (c2) = (x + (c2)) + (c1)
  {
    bool ok = true;
    std::string witness;
    auto one = [&](const CurvePoint& c1, const CurvePoint& c2, const SignedFano& v) {
      if (!ok) return;
      SignedFano a = model.plus_point(model.plus_point(v, c1), c2);
      SignedFano b = model.plus_point(model.plus_point(v, c2), c1);
      if (!(a == b)) {
        ok = false;
        witness = c1.str() + "," + c2.str();
      }
    };
    for (int i = 0; i < samples; ++i)
      one(pick_c(), pick_c(), SignedFano{pick_x(), (rng() % 2) ? 1 : -1});
    add_check(rep, "point-addition-commutes", ok, witness);
  }

  // the hyperelliptic class acts trivially
  {
    bool ok = true;
    std::string witness;
    for (int i = 0; i < samples && ok; ++i) {
      CurvePoint c = pick_c();
      SignedFano v{pick_x(), (rng() % 2) ? 1 : -1};
      SignedFano w = model.plus_point(model.plus_point(v, c), c.bar());
      if (!(w == v)) {
        ok = false;
        witness = c.str();
      }
    }
    add_check(rep, "hyperelliptic-class-trivial", ok, witness);
  }

  // degree parity controls the component
  {
    bool ok = true;
    for (int i = 0; i < samples && ok; ++i) {
      SignedFano v{pick_x(), 1};
      Divisor d = Divisor::point(pick_c()) + Divisor::point(pick_c());
      ok = model.act(v, d).sign == 1;
      Divisor d1 = Divisor::point(pick_c());
      ok = ok && model.act(v, d1).sign == -1;
    }
    add_check(rep, "degree-parity", ok, "sign rule violated");
  }

  // tangent-space bound: dim(X^perp1 ∩ X^perp2) <= n+1
  {
    bool ok = true;
    std::string witness;
    QuadraticForm q1 = model.pencil().q1();
    QuadraticForm q2 = model.pencil().q2();
    for (const auto& x : fvec) {
      Subspace tangent = q1.orthogonal_complement(x).intersect(q2.orthogonal_complement(x));
      if (tangent.dim() > model.n() + 1) {
        ok = false;
        witness = x.str();
        break;
      }
    }
    add_check(rep, "tangent-space-bound", ok, witness);
  }

  // connecting divisor: existence, uniqueness, and the codim-1 geometry
  {
    bool ok_unique = true, ok_codim1 = true, ok_commute = true;
    std::string w_unique, w_codim1, w_commute;

    // extension model for conjugate-pair support in degree 2
    std::unique_ptr<CurveModel> ext_model;
    FieldEmbedding emb = identity_embedding(model.field());
    std::vector<CurvePoint> ext_pts;
    if (model.n() >= 2) {
      FieldPtr ext = Field::extension(model.field()->p(), 2 * model.field()->k());
      emb = make_embedding(model.field(), ext);
      ext_model = std::make_unique<CurveModel>(model.pencil().map(emb));
      ext_pts = ext_model->rational_points();
    }

    int tried = 0;
    for (int i = 0; i < samples && tried < 12; ++i) {
      Subspace x = pick_x();
      Subspace x2 = pick_x();
      int r = codim_between(x, x2);
      if (r == 0 || r > 2) continue;
      ++tried;
      std::vector<Divisor> matches;
      SignedFano start{x, 1};
      SignedFano target{x2, r % 2 == 0 ? 1 : -1};
      if (r == 1) {
        for (const auto& c : pts) {
          if (c.weierstrass) {
            // plus at a Weierstrass point is defined; use it
          }
          SignedFano out = model.plus_point(start, c);
          if (out == target) matches.push_back(Divisor::point(c));
        }
      } else {
        // degree 2: search over the quadratic extension's points
        SignedFano starte{x.map(emb), 1};
        SignedFano targete{x2.map(emb), 1};
        for (size_t a = 0; a < ext_pts.size(); ++a)
          for (size_t b = a; b < ext_pts.size(); ++b) {
            SignedFano out = ext_model->plus_point(ext_model->plus_point(starte, ext_pts[a]),
                                                   ext_pts[b]);
            if (out == targete)
              matches.push_back(Divisor::point(ext_pts[a]) + Divisor::point(ext_pts[b]));
          }
      }
      if (matches.size() != 1) {
        ok_unique = false;
        w_unique = "codim " + std::to_string(r) + ": found " + std::to_string(matches.size()) +
                   " connecting divisors";
      } else {
        if (r == 1) {
          // the divisor is the span member with its ruling
          const CurvePoint& c = matches[0].terms[0].first;
          Subspace span = x.sum(x2);
          auto param = member_containing(model.pencil(), span);
          if (!param || !(c.param == *param)) {
            ok_codim1 = false;
            w_codim1 = "span member mismatch";
          } else if (!c.weierstrass &&
                     model.ruling_label(c.param, span) != c.ruling) {
            ok_codim1 = false;
            w_codim1 = "span ruling mismatch";
          }
          // commutativity: the same divisor sends x2 (negated) back
          SignedFano back = model.plus_point(SignedFano{x2, 1}, c);
          if (!(back == SignedFano{x, -1})) {
            ok_commute = false;
            w_commute = "pairing not symmetric";
          }
        }
      }
    }
    add_check(rep, "connecting-divisor-unique", ok_unique, w_unique);
    add_check(rep, "codim1-divisor-geometry", ok_codim1, w_codim1);
    add_check(rep, "pairing-symmetric", ok_commute, w_commute);
  }

  // tangency: X with maximal tangent space satisfies tau(c)X = X for the
  // member containing the tangent space
  {
    bool ok = true;
    std::string witness;
    QuadraticForm q1 = model.pencil().q1();
    QuadraticForm q2 = model.pencil().q2();
    int found = 0;
    for (const auto& x : fvec) {
      Subspace tangent = q1.orthogonal_complement(x).intersect(q2.orthogonal_complement(x));
      if (tangent.dim() != model.n() + 1) continue;
      ++found;
      auto param = member_containing(model.pencil(), tangent);
      if (!param) {
        ok = false;
        witness = "tangent space lies in no member at " + x.str();
        break;
      }
      int fixers = 0;
      for (const auto& c : pts) {
        if (!(c.param == *param)) continue;
        Subspace img = c.weierstrass
                           ? model.tau_weierstrass(model.singular_root_index(c.param), x)
                           : model.tau(c, x);
        if (img == x) ++fixers;
      }
      if (fixers != 1) {
        ok = false;
        witness = "expected exactly one fixing point above the tangent member at " + x.str();
        break;
      }
    }
    add_check(rep, "tangency-self-sum", ok && found > 0,
              found > 0 ? witness : "no tangency elements found");
  }

  return rep;
}

}  // namespace pencil
