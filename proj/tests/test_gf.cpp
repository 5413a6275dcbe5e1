#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pencil/gf.hpp"
#include "pencil/linalg.hpp"

using namespace pencil;

TEST_CASE("prime field basics") {
  FieldPtr f7 = Field::prime(7);
  CHECK(f7->q() == 7);
  CHECK(f7->from_int(3).inv() == f7->from_int(5));  // 3*5 = 15 = 1 mod 7
  CHECK((-f7->zero()) == f7->zero());
  CHECK(f7->from_int(10) == f7->from_int(3));
  CHECK_THROWS_AS(f7->zero().inv(), DivisionByZero);
}

TEST_CASE("field mismatch is rejected") {
  FieldPtr f7 = Field::prime(7);
  FieldPtr f11 = Field::prime(11);
  CHECK_THROWS_AS(f7->one() + f11->one(), FieldMismatch);
}

TEST_CASE("field registry canonicalizes") {
  CHECK(Field::prime(7).get() == Field::prime(7).get());
  CHECK(Field::extension(3, 2).get() == Field::extension(3, 2).get());
}

TEST_CASE("invalid field specs are rejected") {
  CHECK_THROWS_AS(Field::prime(2), InvalidInput);   // even characteristic
  CHECK_THROWS_AS(Field::prime(9), InvalidInput);   // not prime
  CHECK_THROWS_AS(Field::with_modulus(3, {0, 2, 1}), InvalidInput);  // t^2+2t = t(t+2)
}

TEST_CASE("F9 with canonical modulus t^2+1") {
  FieldPtr f9 = Field::extension(3, 2);
  CHECK(f9->spec().modulus == std::vector<int64_t>({1, 0, 1}));
  Fq t = f9->generator();
  CHECK(t * t == f9->from_int(-1));  // t^2 = -1 = 2
  CHECK(t * t == f9->from_int(2));
}

TEST_CASE("sqrt in F7") {
  FieldPtr f7 = Field::prime(7);
  auto s2 = f7->sqrt(f7->from_int(2));
  REQUIRE(s2.has_value());
  CHECK(*s2 == f7->from_int(3));  // 3^2=2, and 3 < 4 lexicographically
  CHECK(*f7->sqrt(f7->zero()) == f7->zero());
  CHECK_FALSE(f7->sqrt(f7->from_int(3)).has_value());  // 3 is a non-residue mod 7
}

TEST_CASE("sqrt agrees with squaring on every element of several fields") {
  for (auto [p, k] : {std::pair<int64_t, int>{7, 1}, {11, 1}, {3, 2}, {7, 2}, {13, 2}}) {
    FieldPtr f = Field::extension(p, k);
    for (int64_t i = 0; i < f->q(); ++i) {
      Fq a = f->element_at(i);
      auto s = f->sqrt(a);
      if (s) {
        CHECK(*s * *s == a);
        // canonical choice: lexicographically smaller of the two roots
        if (!s->is_zero()) CHECK(Field::canonical_less(*s, -*s));
      } else {
        CHECK_FALSE(a.pow((f->q() - 1) / 2).is_one());
      }
    }
  }
}

TEST_CASE("tonelli-shanks path (q > 1024)") {
  FieldPtr f = Field::prime(2003);
  int found = 0;
  for (int64_t i = 1; i < 200; ++i) {
    Fq a = f->element_at(i);
    auto s = f->sqrt(a);
    if (s) {
      CHECK(*s * *s == a);
      ++found;
    }
  }
  CHECK(found > 50);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(0);
  for (auto [p, k] : {std::pair<int64_t, int>{7, 1}, {3, 3}, {11, 2}}) {
    FieldPtr f = Field::extension(p, k);
    std::uniform_int_distribution<int64_t> dist(0, f->q() - 1);
    for (int trial = 0; trial < 200; ++trial) {
      Fq a = f->element_at(dist(rng));
      Fq b = f->element_at(dist(rng));
      Fq c = f->element_at(dist(rng));
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == f->zero());
      if (!a.is_zero()) CHECK(a * a.inv() == f->one());
    }
  }
}

TEST_CASE("frobenius is a ring homomorphism") {
  std::mt19937_64 rng(1);
  FieldPtr f = Field::extension(5, 3);
  std::uniform_int_distribution<int64_t> dist(0, f->q() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    Fq a = f->element_at(dist(rng));
    Fq b = f->element_at(dist(rng));
    CHECK(f->frobenius(a + b) == f->frobenius(a) + f->frobenius(b));
    CHECK(f->frobenius(a * b) == f->frobenius(a) * f->frobenius(b));
  }
}

TEST_CASE("extend_to_split") {
  FieldPtr f7 = Field::prime(7);

  SUBCASE("x^2 - 3 needs F49") {
    Polynomial f(f7, {f7->from_int(-3), f7->zero(), f7->one()});
    auto [ext, emb] = extend_to_split(f7, f);
    CHECK(ext->q() == 49);
    Polynomial fe = f.map_coeffs(emb);
    CHECK(fe.splits_completely());
    // 3 gains a square root
    CHECK(ext->is_square(emb(f7->from_int(3))));
  }

  SUBCASE("already split -> identity") {
    Polynomial f = Polynomial::from_roots(f7, {f7->from_int(0), f7->from_int(1), f7->from_int(2)});
    auto [ext, emb] = extend_to_split(f7, f);
    CHECK(ext == f7);
    CHECK(emb.is_identity());
  }

  SUBCASE("x^2 + 1 over F3 -> F9") {
    FieldPtr f3 = Field::prime(3);
    Polynomial f(f3, {f3->one(), f3->zero(), f3->one()});
    auto [ext, emb] = extend_to_split(f3, f);
    CHECK(ext->q() == 9);
  }

  SUBCASE("embedding is a ring homomorphism") {
    Polynomial f(f7, {f7->from_int(-3), f7->zero(), f7->one()});
    auto [ext, emb] = extend_to_split(f7, f);
    for (int64_t i = 0; i < 7; ++i)
      for (int64_t j = 0; j < 7; ++j) {
        Fq a = f7->element_at(i), b = f7->element_at(j);
        CHECK(emb(a + b) == emb(a) + emb(b));
        CHECK(emb(a * b) == emb(a) * emb(b));
      }
    CHECK(emb(f7->one()) == ext->one());
  }

  SUBCASE("splitting yields deg f linear factors with multiplicity") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int64_t> dist(0, 6);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Fq> cs;
      for (int i = 0; i < 4; ++i) cs.push_back(f7->element_at(dist(rng)));
      cs.push_back(f7->one());
      Polynomial f(f7, cs);
      if (f.degree() < 1) continue;
      auto [ext, emb] = extend_to_split(f7, f);
      Polynomial fe = f.map_coeffs(emb);
      auto roots = fe.roots_with_multiplicity();
      int total = 0;
      for (auto& [r, m] : roots) total += m;
      CHECK(total == fe.degree());
    }
  }
}

TEST_CASE("extend_for_sqrts") {
  FieldPtr f7 = Field::prime(7);

  SUBCASE("all residues -> identity") {
    auto [ext, emb] = extend_for_sqrts(f7, {f7->from_int(2), f7->from_int(4), f7->one()});
    CHECK(ext == f7);
  }

  SUBCASE("non-residue -> F49") {
    auto [ext, emb] = extend_for_sqrts(f7, {f7->from_int(3)});
    CHECK(ext->q() == 49);
    CHECK(ext->is_square(emb(f7->from_int(3))));
  }

  SUBCASE("identity on trivial input") {
    auto [ext, emb] = extend_for_sqrts(f7, {f7->one()});
    CHECK(ext == f7);
    CHECK(emb.is_identity());
  }
}
