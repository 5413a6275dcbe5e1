#include "pencil/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace pencil {
namespace {

int64_t mod_p(int64_t v, int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

int64_t mul_p(int64_t a, int64_t b, int64_t p) {
  return static_cast<int64_t>((__int128)a * b % p);
}

int64_t inv_p(int64_t a, int64_t p) {
  // extended Euclid
  int64_t t = 0, newt = 1, r = p, newr = mod_p(a, p);
  while (newr != 0) {
    int64_t qq = r / newr;
    std::swap(t -= qq * newt, newt);
    std::swap(r -= qq * newr, newr);
  }
  if (r != 1) throw DivisionByZero();
  return mod_p(t, p);
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---- dense polynomials over F_p, low-to-high, used for modulus work ----
using PolyP = std::vector<int64_t>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degp(const PolyP& a) { return static_cast<int>(a.size()) - 1; }

PolyP mulp(const PolyP& a, const PolyP& b, int64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = mod_p(c[i + j] + mul_p(a[i], b[j], p), p);
  }
  trim(c);
  return c;
}

// remainder of a modulo monic-or-not b
PolyP remp(PolyP a, const PolyP& b, int64_t p) {
  trim(a);
  int db = degp(b);
  int64_t lead_inv = inv_p(b.back(), p);
  while (degp(a) >= db) {
    int64_t c = mul_p(a.back(), lead_inv, p);
    int shift = degp(a) - db;
    for (int i = 0; i <= db; ++i)
      a[i + shift] = mod_p(a[i + shift] - mul_p(c, b[i], p), p);
    trim(a);
  }
  return a;
}

PolyP mulmodp(const PolyP& a, const PolyP& b, const PolyP& m, int64_t p) {
  return remp(mulp(a, b, p), m, p);
}

PolyP powmodp(PolyP base, int64_t e, const PolyP& m, int64_t p) {
  PolyP r = {1};
  base = remp(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = mulmodp(r, base, m, p);
    base = mulmodp(base, base, m, p);
    e >>= 1;
  }
  return r;
}

PolyP gcdp(PolyP a, PolyP b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = remp(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    int64_t li = inv_p(a.back(), p);
    for (auto& c : a) c = mul_p(c, li, p);
  }
  return a;
}

// x^(p^i) mod m computed by iterating the p-power map
bool is_irreducible_fp(const PolyP& m, int64_t p) {
  int d = degp(m);
  if (d < 1) return false;
  if (d == 1) return true;
  PolyP x = {0, 1};
  PolyP w = x;
  std::vector<PolyP> frob(d + 1);  // frob[i] = x^(p^i) mod m
  for (int i = 1; i <= d; ++i) {
    w = powmodp(w, p, m, p);
    frob[i] = w;
  }
  // x^(p^d) == x required
  PolyP diff = frob[d];
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = mod_p(diff[1] - 1, p);
  trim(diff);
  if (!diff.empty()) return false;
  // gcd(x^(p^(d/l)) - x, m) == 1 for prime divisors l of d
  for (int l = 2; l <= d; ++l) {
    if (d % l != 0) continue;
    bool lp = true;
    for (int t = 2; t * t <= l; ++t)
      if (l % t == 0) lp = false;
    if (!lp) continue;
    PolyP g = frob[d / l];
    g.resize(std::max<size_t>(g.size(), 2), 0);
    g[1] = mod_p(g[1] - 1, p);
    trim(g);
    if (degp(gcdp(g, m, p)) != 0) return false;
  }
  return true;
}

PolyP canonical_modulus(int64_t p, int k) {
  if (k == 1) return {0, 1};  // t
  // monic degree-k polynomials ordered by sum(c_i p^i) over the low coeffs
  std::vector<int64_t> digits(k, 0);
  for (;;) {
    PolyP m(digits.begin(), digits.end());
    m.push_back(1);
    if (is_irreducible_fp(m, p)) return m;
    int i = 0;
    while (i < k && ++digits[i] == p) digits[i++] = 0;
    if (i == k) throw Error("no irreducible modulus found");  // cannot happen
  }
}

std::map<std::pair<int64_t, PolyP>, std::weak_ptr<const Field>>& registry() {
  static std::map<std::pair<int64_t, PolyP>, std::weak_ptr<const Field>> r;
  return r;
}
std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- Field

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  q_ = 1;
  for (int i = 0; i < spec_.k; ++i) q_ *= spec_.p;
}

FieldPtr Field::with_modulus(int64_t p, std::vector<int64_t> modulus) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw InvalidInput("characteristic must be an odd prime");
  for (auto& c : modulus) c = mod_p(c, p);
  trim(modulus);
  int k = degp(modulus);
  if (k < 1 || modulus.back() != 1)
    throw InvalidInput("modulus must be monic of degree >= 1");
  if (!is_irreducible_fp(modulus, p))
    throw InvalidInput("modulus is reducible");
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto key = std::make_pair(p, modulus);
  auto it = registry().find(key);
  if (it != registry().end()) {
    if (auto f = it->second.lock()) return f;
  }
  FieldSpec spec;
  spec.p = p;
  spec.k = k;
  spec.modulus = modulus;
  FieldPtr f(new Field(std::move(spec)));
  registry()[key] = f;
  return f;
}

FieldPtr Field::prime(int64_t p) { return with_modulus(p, {0, 1}); }

FieldPtr Field::extension(int64_t p, int k) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw InvalidInput("characteristic must be an odd prime");
  if (k < 1) throw InvalidInput("extension degree must be >= 1");
  std::vector<int64_t> m = canonical_modulus(p, k);
  return with_modulus(p, std::move(m));
}

Fq Field::zero() const { return Fq(shared_from_this(), std::vector<int64_t>(spec_.k, 0)); }

Fq Field::one() const { return from_int(1); }

Fq Field::from_int(int64_t v) const {
  std::vector<int64_t> c(spec_.k, 0);
  c[0] = mod_p(v, spec_.p);
  return Fq(shared_from_this(), std::move(c));
}

Fq Field::element(std::vector<int64_t> coeffs) const {
  if (static_cast<int>(coeffs.size()) > spec_.k) {
    // reduce mod modulus
    PolyP r = remp(coeffs, spec_.modulus, spec_.p);
    r.resize(spec_.k, 0);
    return Fq(shared_from_this(), std::move(r));
  }
  coeffs.resize(spec_.k, 0);
  for (auto& c : coeffs) c = mod_p(c, spec_.p);
  return Fq(shared_from_this(), std::move(coeffs));
}

Fq Field::generator() const {
  if (spec_.k == 1) return from_int(mod_p(-spec_.modulus[0], spec_.p));
  std::vector<int64_t> c(spec_.k, 0);
  c[1] = 1;
  return Fq(shared_from_this(), std::move(c));
}

Fq Field::element_at(int64_t index) const {
  std::vector<int64_t> c(spec_.k, 0);
  for (int i = 0; i < spec_.k; ++i) {
    c[i] = index % spec_.p;
    index /= spec_.p;
  }
  return Fq(shared_from_this(), std::move(c));
}

int64_t Field::index_of(const Fq& a) const {
  int64_t idx = 0;
  for (int i = spec_.k - 1; i >= 0; --i) idx = idx * spec_.p + a.c_[i];
  return idx;
}

bool Field::canonical_less(const Fq& a, const Fq& b) {
  return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(),
                                      b.coeffs().begin(), b.coeffs().end());
}

std::vector<int64_t> Field::add_(const std::vector<int64_t>& a, const std::vector<int64_t>& b) const {
  std::vector<int64_t> c(spec_.k);
  for (int i = 0; i < spec_.k; ++i) c[i] = mod_p(a[i] + b[i], spec_.p);
  return c;
}

std::vector<int64_t> Field::sub_(const std::vector<int64_t>& a, const std::vector<int64_t>& b) const {
  std::vector<int64_t> c(spec_.k);
  for (int i = 0; i < spec_.k; ++i) c[i] = mod_p(a[i] - b[i], spec_.p);
  return c;
}

std::vector<int64_t> Field::neg_(const std::vector<int64_t>& a) const {
  std::vector<int64_t> c(spec_.k);
  for (int i = 0; i < spec_.k; ++i) c[i] = mod_p(-a[i], spec_.p);
  return c;
}

std::vector<int64_t> Field::mul_(const std::vector<int64_t>& a, const std::vector<int64_t>& b) const {
  PolyP r = remp(mulp(a, b, spec_.p), spec_.modulus, spec_.p);
  r.resize(spec_.k, 0);
  return r;
}

std::vector<int64_t> Field::inv_(const std::vector<int64_t>& a) const {
  PolyP aa(a);
  trim(aa);
  if (aa.empty()) throw DivisionByZero();
  // extended Euclid in F_p[t]: find u with u*a == 1 mod modulus
  PolyP r0 = spec_.modulus, r1 = aa;
  PolyP s0 = {}, s1 = {1};
  while (!r1.empty()) {
    // divide r0 by r1
    PolyP q;
    PolyP rem = r0;
    int d1 = degp(r1);
    int64_t li = inv_p(r1.back(), spec_.p);
    while (degp(rem) >= d1) {
      int shift = degp(rem) - d1;
      int64_t c = mul_p(rem.back(), li, spec_.p);
      if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
      q[shift] = mod_p(q[shift] + c, spec_.p);
      for (int i = 0; i <= d1; ++i)
        rem[i + shift] = mod_p(rem[i + shift] - mul_p(c, r1[i], spec_.p), spec_.p);
      trim(rem);
    }
    PolyP s2 = s0;
    PolyP qs1 = mulp(q, s1, spec_.p);
    s2.resize(std::max(s2.size(), qs1.size()), 0);
    for (size_t i = 0; i < qs1.size(); ++i) s2[i] = mod_p(s2[i] - qs1[i], spec_.p);
    trim(s2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is the gcd (a unit since modulus irreducible and a != 0)
  if (degp(r0) != 0) throw DivisionByZero();
  int64_t gi = inv_p(r0[0], spec_.p);
  for (auto& c : s0) c = mul_p(c, gi, spec_.p);
  s0.resize(spec_.k, 0);
  return s0;
}

bool Field::is_square(const Fq& a) const {
  if (a.is_zero()) return true;
  return a.pow((q_ - 1) / 2).is_one();
}

std::optional<Fq> Field::sqrt(const Fq& a) const {
  if (a.field().get() != this) throw FieldMismatch();
  if (a.is_zero()) return a;
  if (!is_square(a)) return std::nullopt;
  Fq root = zero();
  if (q_ <= 1024) {
    bool found = false;
    for (int64_t i = 1; i < q_; ++i) {
      Fq s = element_at(i);
      if (s * s == a) {
        root = s;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;  // unreachable: a is a square
  } else {
    // Tonelli-Shanks in F_q
    int64_t m = q_ - 1;
    int s = 0;
    while (m % 2 == 0) {
      m /= 2;
      ++s;
    }
    if (s == 1) {
      root = a.pow((q_ + 1) / 4);
    } else {
      Fq z = zero();
      for (int64_t i = 1; i < q_; ++i) {
        Fq cand = element_at(i);
        if (!cand.is_zero() && !is_square(cand)) {
          z = cand;
          break;
        }
      }
      Fq c = z.pow(m);
      Fq t = a.pow(m);
      Fq r = a.pow((m + 1) / 2);
      int e = s;
      while (!t.is_one()) {
        Fq tt = t;
        int i = 0;
        while (!tt.is_one()) {
          tt = tt * tt;
          ++i;
        }
        Fq b = c;
        for (int j = 0; j < e - i - 1; ++j) b = b * b;
        r = r * b;
        c = b * b;
        t = t * c;
        e = i;
      }
      root = r;
    }
  }
  Fq other = -root;
  return canonical_less(root, other) ? root : other;
}

Fq Field::frobenius(const Fq& a) const { return a.pow(spec_.p); }

std::string Field::str() const {
  std::ostringstream os;
  os << "F_" << q_;
  if (spec_.k > 1) {
    os << " = F_" << spec_.p << "[t]/(";
    bool first = true;
    for (int i = spec_.k; i >= 0; --i) {
      int64_t c = spec_.modulus[i];
      if (c == 0) continue;
      if (!first) os << "+";
      first = false;
      if (i == 0 || c != 1) os << c;
      if (i >= 1) os << "t";
      if (i >= 2) os << "^" << i;
    }
    os << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------- Fq

Fq::Fq(FieldPtr f, std::vector<int64_t> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {}

bool Fq::is_zero() const {
  for (int64_t v : c_)
    if (v != 0) return false;
  return true;
}

bool Fq::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

static void check_same(const Fq& a, const Fq& b) {
  if (a.field().get() != b.field().get()) throw FieldMismatch();
}

Fq Fq::operator+(const Fq& o) const {
  check_same(*this, o);
  return Fq(f_, f_->add_(c_, o.c_));
}

Fq Fq::operator-(const Fq& o) const {
  check_same(*this, o);
  return Fq(f_, f_->sub_(c_, o.c_));
}

Fq Fq::operator*(const Fq& o) const {
  check_same(*this, o);
  return Fq(f_, f_->mul_(c_, o.c_));
}

Fq Fq::operator-() const { return Fq(f_, f_->neg_(c_)); }

Fq Fq::inv() const { return Fq(f_, f_->inv_(c_)); }

Fq Fq::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  Fq r = f_->one();
  Fq b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

bool Fq::operator==(const Fq& o) const {
  check_same(*this, o);
  return c_ == o.c_;
}

std::string Fq::str() const {
  if (f_->k() == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    os << c_[i];
  }
  os << "]";
  return os.str();
}

// ------------------------------------------------------- embeddings

Fq FieldEmbedding::operator()(const Fq& a) const {
  if (a.field() != from) throw FieldMismatch();
  if (is_identity()) return a;
  // evaluate the coefficient vector at gen_image (Horner)
  Fq r = to->zero();
  const auto& c = a.coeffs();
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    r = r * gen_image + to->from_int(c[i]);
  return r;
}

FieldEmbedding identity_embedding(const FieldPtr& f) {
  return FieldEmbedding{f, f, f->generator()};
}

FieldEmbedding make_embedding(const FieldPtr& from, const FieldPtr& to) {
  if (from == to) return identity_embedding(from);
  if (from->p() != to->p() || to->k() % from->k() != 0)
    throw InvalidInput("no embedding between these fields");
  // image of the base generator = first root of the base modulus in `to`,
  // in element_at order
  const auto& m = from->spec().modulus;
  for (int64_t i = 0; i < to->q(); ++i) {
    Fq x = to->element_at(i);
    Fq v = to->zero();
    for (int j = static_cast<int>(m.size()) - 1; j >= 0; --j)
      v = v * x + to->from_int(m[j]);
    if (v.is_zero()) return FieldEmbedding{from, to, x};
  }
  throw Error("embedding root not found");  // cannot happen when k | k'
}

std::pair<FieldPtr, FieldEmbedding> extend_for_sqrts(const FieldPtr& f, const std::vector<Fq>& values) {
  bool all_square = true;
  for (const auto& v : values) {
    if (v.field() != f) throw FieldMismatch();
    if (!f->is_square(v)) {
      all_square = false;
      break;
    }
  }
  if (all_square) return {f, identity_embedding(f)};
  // squares of F_q stay squares in every extension; non-squares become
  // squares exactly in the even-degree extensions, so degree 2 suffices
  FieldPtr ext = Field::extension(f->p(), 2 * f->k());
  return {ext, make_embedding(f, ext)};
}

}  // namespace pencil
