#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pencil/stab.hpp"

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

struct Setup {
  Pencil p;
  Matrix t;
  EigenData ed;
  StabGroup g;
};

Setup diag_setup(const FieldPtr& f, const std::vector<int64_t>& c, StabFlavor flavor) {
  std::vector<Fq> d;
  for (int64_t v : c) d.push_back(f->from_int(v));
  Pencil p(Matrix::identity(f, static_cast<int>(c.size())), Matrix::diag(d));
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  StabGroup g = build_stab(t, ed, p.q1(), flavor);
  return {p, t, ed, g};
}

Setup fixture_setup(const FieldPtr& f, const std::vector<int>& mults, StabFlavor flavor) {
  Pencil p = trace_form_fixture(shape_poly(f, mults), f->one()).pencil();
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  StabGroup g = build_stab(t, ed, p.q1(), flavor);
  return {p, t, ed, g};
}

}  // namespace

TEST_CASE("explicit generator on the diagonal N=3 pencil") {
  FieldPtr f7 = Field::prime(7);
  Setup s = diag_setup(f7, {1, 2, 4}, StabFlavor::PO);
  CHECK(s.g.elements.size() == 4);  // 2^r, r = 2

  // identity
  CHECK(s.g.identity().mat == Matrix::identity(f7, 3));

  // the class negating exactly the alpha=1 eigenspace: diag(-1,1,1)
  // projectively; its canonical index set avoids root 0, so it is stored as
  // the complement {2,3} = diag(1,-1,-1) ~ diag(-1,1,1)
  const StabElement* e = s.g.find(1u);  // subset {alpha_1}
  REQUIRE(e != nullptr);
  Matrix expect = Matrix::diag({f7->from_int(-1), f7->one(), f7->one()});
  CHECK(projectively_equal(e->mat, expect));

  // full subset is -identity = identity projectively
  const StabElement* fe = s.g.find((1u << 3) - 1);
  REQUIRE(fe != nullptr);
  CHECK(projectively_equal(fe->mat, Matrix::identity(f7, 3)));
  CHECK(fe->index_set == 0);
}

TEST_CASE("subset product rule and elementary abelian structure") {
  FieldPtr f7 = Field::prime(7);
  for (auto mults : {std::vector<int>{1, 1, 1, 1, 1}, {2, 1, 1, 1}, {3, 2}, {2, 2, 1}}) {
    Setup s = fixture_setup(f7, mults, StabFlavor::PO);
    int r = s.g.r();
    CHECK(static_cast<int>(s.g.elements.size()) == (1 << r));
    for (const auto& a : s.g.elements) {
      CHECK(a.mat * a.mat == Matrix::identity(f7, s.t.rows()));
      for (const auto& b : s.g.elements) {
        // commutative, and product lands on the symmetric difference class
        CHECK(a.mat * b.mat == b.mat * a.mat);
        const StabElement* c = s.g.find(a.index_set ^ b.index_set);
        REQUIRE(c != nullptr);
        CHECK(projectively_equal(a.mat * b.mat, c->mat));
      }
    }
  }
}

TEST_CASE("elements act trivially on eigenspaces outside the subset") {
  FieldPtr f7 = Field::prime(7);
  Setup s = fixture_setup(f7, {2, 1, 1, 1}, StabFlavor::PO);
  for (const auto& e : s.g.elements) {
    for (int j = 0; j < s.ed.r_plus_1; ++j) {
      if ((e.index_set >> j) & 1) continue;
      // the lift with this index set fixes U_{j,T} pointwise
      const Matrix& basis = s.ed.spaces[j].basis();
      Matrix lift = e.mat;
      // act on the subspace: must fix it pointwise up to the global sign
      bool fixes = true, negates = true;
      for (int i = 0; i < basis.rows(); ++i) {
        std::vector<Fq> v = basis.row(i);
        std::vector<Fq> w = lift.apply(v);
        for (size_t k2 = 0; k2 < v.size(); ++k2) {
          if (w[k2] != v[k2]) fixes = false;
          if (w[k2] != -v[k2]) negates = false;
        }
      }
      CHECK((fixes || negates));
    }
  }
}

TEST_CASE("generic odd: simple transitivity on the fano set") {
  FieldPtr f7 = Field::prime(7);
  Setup s = diag_setup(f7, {1, 2, 4}, StabFlavor::PO);
  std::set<Subspace> w = enumerate_common_isotropic(s.p, 1);
  REQUIRE(w.size() == 4);

  // action preserves the set, the orbit is everything, stabilizers trivial
  OrbitReport rep = orbit_report(s.g, w);
  CHECK(rep.orbits.size() == 1);
  CHECK(rep.orbits[0].size() == 4);
  for (const auto& [x, ord] : rep.stabilizer_order) CHECK(ord == 1);

  // explicit action example: diag(-1,1,1) sends span{(3,2,1)} to span{(4,2,1)}
  const StabElement* e = s.g.find(1u);
  REQUIRE(e != nullptr);
  Subspace x = Subspace::span_of_vector(f7, {f7->from_int(3), f7->from_int(2), f7->one()});
  Subspace y = act(*e, x);
  Subspace expect = Subspace::span_of_vector(f7, {f7->from_int(4), f7->from_int(2), f7->one()});
  CHECK(y == expect);
}

TEST_CASE("action preserves profiles") {
  FieldPtr f7 = Field::prime(7);
  Setup s = fixture_setup(f7, {2, 1, 1, 1}, StabFlavor::PO);
  auto parts = partition_by_profile(s.p);
  for (const auto& [key, cls] : parts)
    for (const auto& x : cls)
      for (const auto& e : s.g.elements) {
        Subspace y = act(e, x);
        CHECK(profile(s.t, s.ed, y) == key);
      }
}

TEST_CASE("regular odd: orbit structure matches stabilizer orders 2^a") {
  FieldPtr f7 = Field::prime(7);
  for (auto mults : {std::vector<int>{2, 1, 1, 1}, {2, 2, 1}, {3, 1, 1}}) {
    Setup s = fixture_setup(f7, mults, StabFlavor::PO);
    auto parts = partition_by_profile(s.p);
    auto multvec = s.ed.multiplicities();
    for (const auto& [key, cls] : parts) {
      OrbitReport rep = orbit_report(s.g, cls);
      CHECK(rep.orbits.size() == 1);  // transitivity per class
      int a = key.a_count(multvec);
      for (const auto& [x, ord] : rep.stabilizer_order) CHECK(ord == (1 << a));
    }
  }
}

TEST_CASE("empty set has no orbits") {
  FieldPtr f7 = Field::prime(7);
  Setup s = diag_setup(f7, {1, 2, 4}, StabFlavor::PO);
  OrbitReport rep = orbit_report(s.g, {});
  CHECK(rep.orbits.empty());
}

TEST_CASE("action not closed is detected") {
  FieldPtr f7 = Field::prime(7);
  Setup s = diag_setup(f7, {1, 2, 4}, StabFlavor::PO);
  std::set<Subspace> w = enumerate_common_isotropic(s.p, 1);
  std::set<Subspace> partial;
  partial.insert(*w.begin());
  CHECK_THROWS_AS(orbit_report(s.g, partial), ActionNotClosed);
}

TEST_CASE("PSO flavor on even pencils") {
  FieldPtr f7 = Field::prime(7);

  SUBCASE("generic N=4: PSO order 2^{2n} = 4, PO order 2^r = 8") {
    Setup po = fixture_setup(f7, {1, 1, 1, 1}, StabFlavor::PO);
    CHECK(po.g.elements.size() == 8);
    Setup pso = fixture_setup(f7, {1, 1, 1, 1}, StabFlavor::PSO);
    CHECK(pso.g.elements.size() == 4);
    for (const auto& e : pso.g.elements) {
      CHECK(e.so_member);
      CHECK(__builtin_popcount(e.index_set) % 2 == 0);  // simple roots: even |I|
    }
  }

  SUBCASE("nodal N=6: determinant filter uses multiplicities") {
    Setup pso = fixture_setup(f7, {2, 1, 1, 1, 1}, StabFlavor::PSO);
    // dets are (-1)^{sum of multiplicities over I}
    for (const auto& e : pso.g.elements) {
      int s = 0;
      for (int i = 0; i < pso.ed.r_plus_1; ++i)
        if ((e.index_set >> i) & 1) s += pso.ed.roots[i].second;
      CHECK(s % 2 == 0);
    }
    // subset {node} alone has even multiplicity sum: in PSO despite |I| odd
    const StabElement* node_only = pso.g.find(1u);
    CHECK(node_only != nullptr);
    // order 2^{r-1}: {I : sum mults even} / complement pairing
    CHECK(pso.g.elements.size() == 8);  // r = 4
  }

  SUBCASE("PSO on odd N rejected") {
    CHECK_THROWS_AS(fixture_setup(f7, {1, 1, 1}, StabFlavor::PSO), InvalidInput);
  }
}

TEST_CASE("non-regular operator rejected") {
  FieldPtr f7 = Field::prime(7);
  Pencil p(Matrix::identity(f7, 3), Matrix::identity(f7, 3));
  Matrix t = p.T();
  EigenData ed = eigendata(t, t.charpoly(), p.q1());
  CHECK_THROWS_AS(build_stab(t, ed, p.q1(), StabFlavor::PO), NotRegular);
}
