#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pencil/grouplaw.hpp"

using namespace pencil;

namespace {

Polynomial lin(const FieldPtr& f, int64_t root) {
  return Polynomial(f, {f->from_int(-root), f->one()});
}

Polynomial shape_poly(const FieldPtr& f, const std::vector<int>& mults) {
  Polynomial g = Polynomial::one(f);
  for (size_t i = 0; i < mults.size(); ++i) g = g * lin(f, static_cast<int64_t>(i + 1)).pow(mults[i]);
  return g;
}

CurveModel generic_even_4(const FieldPtr& f) {
  return CurveModel(trace_form_fixture(shape_poly(f, {1, 1, 1, 1}), f->one()).pencil());
}

}  // namespace

TEST_CASE("curve point involution and divisor bookkeeping") {
  FieldPtr f7 = Field::prime(7);
  CurvePoint c = CurvePoint::smooth(PencilParam::at(f7->from_int(5)), 0);
  CHECK(c.bar().ruling == 1);
  CHECK(c.bar().bar() == c);
  CurvePoint w = CurvePoint::weier(PencilParam::at(f7->from_int(1)));
  CHECK(w.bar() == w);

  Divisor d = Divisor::point(c) + Divisor::point(c.bar()) - Divisor::point(w);
  CHECK(d.degree() == 1);
}

TEST_CASE("rational points and ruling registration") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  std::vector<CurvePoint> pts = m.rational_points();

  int weier = 0, smooth = 0;
  for (const auto& c : pts) (c.weierstrass ? weier : smooth)++;
  CHECK(weier == 4);          // four simple rational roots
  CHECK(smooth % 2 == 0);     // two points per registered member
  CHECK(smooth > 0);

  // smooth members appear exactly when the member discriminant is square
  for (int64_t i = 0; i < 7; ++i) {
    PencilParam param = PencilParam::at(f7->from_int(i));
    if (!m.member_smooth(param)) continue;
    bool listed = false;
    for (const auto& c : pts)
      if (!c.weierstrass && c.param == param) listed = true;
    CHECK(listed == m.member(param).disc_is_square());
  }

  // the two maximal isotropics through any X get opposite labels
  for (const auto& c : pts) {
    if (c.weierstrass) continue;
    for (const auto& x : m.F()) {
      std::vector<Subspace> ys = m.maximal_isotropics_containing(x, c.param);
      REQUIRE(ys.size() == 2);
      CHECK(m.ruling_label(c.param, ys[0]) + m.ruling_label(c.param, ys[1]) == 1);
    }
    break;  // one member is enough here
  }
}

TEST_CASE("tau is an involution and residual intersection is exact") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  std::vector<CurvePoint> pts = m.rational_points();

  for (const auto& c : pts) {
    if (c.weierstrass) continue;
    for (const auto& x : m.F()) {
      Subspace x2 = m.tau(c, x);
      CHECK(m.F().count(x2) == 1);
      CHECK(m.tau(c, x2) == x);
    }
  }
}

TEST_CASE("tau result independent of the reflection vector") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  std::vector<CurvePoint> pts = m.rational_points();
  CurvePoint c = pts.front().weierstrass ? pts.back() : pts.front();
  for (const auto& cc : pts)
    if (!cc.weierstrass) {
      c = cc;
      break;
    }

  const Subspace& x = *m.F().begin();
  Subspace expected = m.tau(c, x);
  // recompute through every admissible reflection vector in Y \ X
  std::vector<Subspace> ys = m.maximal_isotropics_containing(x, c.param);
  const Subspace* y = nullptr;
  for (const auto& cand : ys)
    if (m.ruling_label(c.param, cand) == c.ruling) y = &cand;
  REQUIRE(y != nullptr);
  PencilParam mu = m.auxiliary_param(c.param);
  QuadraticForm qmu = m.member(mu);
  const FieldPtr& f = m.field();
  std::vector<Fq> y0;
  for (int i = 0; i < y->dim(); ++i)
    if (!x.contains_vector(y->basis().row(i))) {
      y0 = y->basis().row(i);
      break;
    }
  REQUIRE(!y0.empty());
  int tested = 0;
  x.for_each_vector([&](const std::vector<Fq>& xv) {
    std::vector<Fq> p(y0.size(), f->zero());
    for (size_t j = 0; j < y0.size(); ++j) p[j] = y0[j] + xv[j];
    if (qmu.eval(p).is_zero()) return;
    // reflect through this p
    Fq beta = qmu.eval(p);
    std::vector<Fq> gp = qmu.gram().apply(p);
    Matrix r = Matrix::identity(f, m.pencil().N());
    Fq c2 = f->from_int(2) / beta;
    for (int i = 0; i < r.rows(); ++i)
      for (int j = 0; j < r.cols(); ++j) r.at(i, j) = r.at(i, j) - c2 * p[i] * gp[j];
    CHECK(x.image_under(r) == expected);
    ++tested;
  });
  CHECK(tested > 1);
}

TEST_CASE("tau_weierstrass is an involution with the right fixed set") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  const EigenData& ed = m.eigen();
  QuadraticForm q1 = m.pencil().q1();

  for (int i = 0; i < ed.r_plus_1; ++i) {
    int fixed = 0;
    for (const auto& x : m.F()) {
      Subspace x2 = m.tau_weierstrass(i, x);
      CHECK(m.tau_weierstrass(i, x2) == x);
      if (x2 == x) ++fixed;
    }
    CHECK(fixed == 4);  // 2^{2n}, n = 1
  }
}

TEST_CASE("divisor action axioms on the N=4 fixture") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  std::vector<CurvePoint> pts = m.rational_points();
  std::vector<CurvePoint> smooth;
  for (const auto& c : pts)
    if (!c.weierstrass) smooth.push_back(c);
  REQUIRE(!smooth.empty());

  for (const auto& c : smooth) {
    for (const auto& x : m.F()) {
      SignedFano v{x, 1};
      // hyperelliptic class acts trivially
      CHECK(m.plus_point(m.plus_point(v, c), c.bar()) == v);
      // minus undoes plus
      CHECK(m.minus_point(m.plus_point(v, c), c) == v);
      // parity of the sign
      CHECK(m.plus_point(v, c).sign == -1);
    }
  }

  // commutation for all pairs on a few elements
  const Subspace& x0 = *m.F().begin();
  for (const auto& c1 : smooth)
    for (const auto& c2 : smooth) {
      SignedFano v{x0, 1};
      CHECK(m.plus_point(m.plus_point(v, c1), c2) == m.plus_point(m.plus_point(v, c2), c1));
    }
}

TEST_CASE("f2_infty at the point over Q1") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  REQUIRE(m.register_param(PencilParam::infinity()));

  for (int ruling = 0; ruling < 2; ++ruling) {
    CurvePoint inf = CurvePoint::smooth(PencilParam::infinity(), ruling);
    F2InftyResult r = f2_infty(m, inf);
    CHECK(r.agree);
    CHECK(r.fixed.size() == 4);  // 2^{2n}
  }

  // the two fixed sets partition the starred set
  F2InftyResult r0 = f2_infty(m, CurvePoint::smooth(PencilParam::infinity(), 0));
  F2InftyResult r1 = f2_infty(m, CurvePoint::smooth(PencilParam::infinity(), 1));
  std::set<Subspace> uni;
  for (const auto& x : r0.fixed) uni.insert(x);
  for (const auto& x : r1.fixed) uni.insert(x);
  CHECK(uni.size() == 8);
  CHECK(uni == starred_set(m.pencil()));
}

TEST_CASE("f2_infty at a rational Weierstrass point equals the hyperplane fano set") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  CurvePoint inf = CurvePoint::weier(PencilParam::at(f7->from_int(1)));
  F2InftyResult r = f2_infty(m, inf);
  CHECK(r.agree);
  CHECK(r.fixed.size() == 4);

  OddRestriction restr = restrict_to_hyperplane(m, 0);
  std::set<Subspace> wth = enumerate_common_isotropic(restr.restricted, 1);
  std::set<Subspace> mapped;
  for (const auto& x : r.fixed) mapped.insert(restr.to_coords(x));
  CHECK(mapped == wth);

  // round trip of the coordinate maps
  for (const auto& x : r.fixed) CHECK(restr.to_ambient(restr.to_coords(x)) == x);
}

TEST_CASE("two actions coincide on the N=4 fixture") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);

  Report rw = verify_two_actions_weierstrass(m, 0);
  for (const auto& c : rw.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.witness);

  Report rs = verify_two_actions_smooth(m, CurvePoint::smooth(PencilParam::infinity(), 0));
  for (const auto& c : rs.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.witness);
}

TEST_CASE("group shadow report on the N=4 fixture") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m = generic_even_4(f7);
  Report r = verify_group_shadow(m, 60, 0);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.witness);
  CHECK(r.all_pass());
}

TEST_CASE("group shadow report on the generic N=6 fixture") {
  FieldPtr f7 = Field::prime(7);
  CurveModel m(trace_form_fixture(shape_poly(f7, {1, 1, 1, 1, 1, 1}), f7->one()).pencil());
  Report r = verify_group_shadow(m, 25, 1);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.witness);
}
