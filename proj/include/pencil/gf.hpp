#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pencil/errors.hpp"

namespace pencil {

class Field;
class Polynomial;
using FieldPtr = std::shared_ptr<const Field>;

/// Description of F_{p^k} as F_p[t]/(modulus), modulus monic irreducible of
/// degree k, coefficients low-to-high. p must be an odd prime.
struct FieldSpec {
  int64_t p = 0;
  int k = 0;
  std::vector<int64_t> modulus;  // size k+1, modulus[k] == 1

  bool operator==(const FieldSpec& o) const {
    return p == o.p && k == o.k && modulus == o.modulus;
  }
};

/// Element of a finite field, stored as k residues mod p (low-to-high).
class Fq {
 public:
  Fq() = default;
  Fq(FieldPtr f, std::vector<int64_t> coeffs);

  const FieldPtr& field() const { return f_; }
  const std::vector<int64_t>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;

  Fq operator+(const Fq& o) const;
  Fq operator-(const Fq& o) const;
  Fq operator*(const Fq& o) const;
  Fq operator-() const;
  Fq inv() const;
  Fq operator/(const Fq& o) const { return *this * o.inv(); }
  Fq pow(int64_t e) const;
  bool operator==(const Fq& o) const;
  bool operator!=(const Fq& o) const { return !(*this == o); }

  std::string str() const;

 private:
  FieldPtr f_;
  std::vector<int64_t> c_;
  friend class Field;
};

/// Immutable finite field F_{p^k} of odd characteristic. Instances are
/// canonicalized through a process-wide registry so that two fields with the
/// same spec compare equal by pointer; all values are safe to share across
/// threads read-only.
class Field : public std::enable_shared_from_this<Field> {
 public:
  /// Prime field F_p with the canonical degree-1 modulus t.
  static FieldPtr prime(int64_t p);
  /// F_{p^k} with the canonical modulus: the first monic irreducible of
  /// degree k in the order of increasing sum(c_i p^i).
  static FieldPtr extension(int64_t p, int k);
  /// Field with an explicit modulus; validates primality and irreducibility.
  static FieldPtr with_modulus(int64_t p, std::vector<int64_t> modulus);

  const FieldSpec& spec() const { return spec_; }
  int64_t p() const { return spec_.p; }
  int k() const { return spec_.k; }
  int64_t q() const { return q_; }

  Fq zero() const;
  Fq one() const;
  Fq from_int(int64_t v) const;
  Fq element(std::vector<int64_t> coeffs) const;
  /// Residue class of t; equals the root of the modulus (0 for prime fields).
  Fq generator() const;

  /// Elements indexed 0..q-1 by sum(c_i p^i); a fixed enumeration order.
  Fq element_at(int64_t index) const;
  int64_t index_of(const Fq& a) const;

  /// Lexicographic comparison of coefficient vectors, index 0 first.
  static bool canonical_less(const Fq& a, const Fq& b);

  bool is_square(const Fq& a) const;
  /// Square root if one exists; of the two roots returns the one with the
  /// lexicographically smaller coefficient vector. Exhaustive search for
  /// q <= 1024, Tonelli-Shanks above.
  std::optional<Fq> sqrt(const Fq& a) const;

  Fq frobenius(const Fq& a) const;  // a^p

  std::string str() const;

 private:
  explicit Field(FieldSpec spec);
  FieldSpec spec_;
  int64_t q_;

  std::vector<int64_t> add_(const std::vector<int64_t>&, const std::vector<int64_t>&) const;
  std::vector<int64_t> sub_(const std::vector<int64_t>&, const std::vector<int64_t>&) const;
  std::vector<int64_t> mul_(const std::vector<int64_t>&, const std::vector<int64_t>&) const;
  std::vector<int64_t> neg_(const std::vector<int64_t>&) const;
  std::vector<int64_t> inv_(const std::vector<int64_t>&) const;
  friend class Fq;
};

/// Ring embedding of one field into a larger one, determined by the image of
/// the base generator t. Identity embeddings have from == to.
struct FieldEmbedding {
  FieldPtr from;
  FieldPtr to;
  Fq gen_image;

  Fq operator()(const Fq& a) const;
  bool is_identity() const { return from == to; }
};

FieldEmbedding identity_embedding(const FieldPtr& f);

/// Embedding F_{p^k} -> F_{p^k'} for k | k'; the generator maps to the first
/// root of the base modulus in element_at order (deterministic).
FieldEmbedding make_embedding(const FieldPtr& from, const FieldPtr& to);

/// Smallest-degree extension over which f splits into linear factors, with
/// the embedding of the base field. Returns the identity when f already
/// splits.
std::pair<FieldPtr, FieldEmbedding> extend_to_split(const FieldPtr& f, const Polynomial& poly);

/// Smallest extension in which every listed value is a square: the field
/// itself, or its quadratic extension.
std::pair<FieldPtr, FieldEmbedding> extend_for_sqrts(const FieldPtr& f, const std::vector<Fq>& values);

}  // namespace pencil
