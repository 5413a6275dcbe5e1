#pragma once

#include <map>
#include <set>
#include <string>

#include "pencil/quadrics.hpp"

namespace pencil {

/// All d-dimensional subspaces on which every listed symmetric form vanishes
/// identically, by depth-first extension of isotropic flags: RREF rows are
/// filled pivot pattern by pivot pattern and a partial flag is pruned as
/// soon as one bilinear condition fails.
std::vector<Subspace> enumerate_isotropic(const std::vector<Matrix>& grams, int d);

/// Subspaces of the given linear dimension isotropic for both forms of the
/// pencil, over the pencil's own field.
std::set<Subspace> enumerate_common_isotropic(const Pencil& p, int dim);

/// Explicit construction of the maximal common isotropic subspaces of the
/// diagonalized odd pencil sum x_i^2 / sum c_i x_i^2: solve the moment
/// system for (D_1..D_N), extend the field so every D_i has a square root
/// d_i, and take spans of (d_i P(c_i)) over P of degree <= n-1, one sign
/// system per plane.
struct ElkiesResult {
  FieldPtr field;                 // working field containing the d_i
  FieldEmbedding emb;             // base field -> working field
  std::vector<Fq> kernel_vector;  // (D_1..D_N) over the base field
  std::set<Subspace> planes;      // 2^{2n} subspaces over the working field
};
ElkiesResult elkies_enumerate(const std::vector<Fq>& c);

/// Dimension of the largest T-stable subspace of W, by iterating
/// W <- W ∩ T^{-1}(W) until it stabilizes.
int t_stable_dim(const Matrix& t, const Subspace& w);

/// Per-root dimensions (d_1..d_{r+1}) of the maximal T-stable subspaces of
/// X ∩ U_{i,T}; a = #{i : 2 d_i = m_i}.
struct ProfileKey {
  std::vector<int> dims;

  bool operator<(const ProfileKey& o) const { return dims < o.dims; }
  bool operator==(const ProfileKey& o) const { return dims == o.dims; }
  int total() const;
  int a_count(const std::vector<int>& mults) const;
  std::string str() const;
};

ProfileKey profile(const Matrix& t, const EigenData& ed, const Subspace& x);

/// Odd regular pencils: the total partition of the maximal common isotropic
/// subspaces by profile. Requires the pencil regular and f split.
std::map<ProfileKey, std::set<Subspace>> partition_by_profile(const Pencil& p);

/// Even case: F0 = all n-dimensional common isotropic subspaces (N = 2n+2);
/// F = those whose Span{X,TX} has no nonzero T-stable subspace. When the
/// geometric genus is >= 0 the two singular-point characterizations of F
/// are checked against the definition.
struct EvenFanoSets {
  std::set<Subspace> f0;
  std::set<Subspace> f;
  bool equivalence_checked = false;
};
EvenFanoSets even_fano_sets(const Pencil& p);

/// The unique (n+1)-dimensional common isotropic subspace when every root
/// multiplicity is even (reducible curve); absent otherwise. Built by the
/// recursive reduction to v^perp/v.
std::optional<Subspace> contains_pn(const Pencil& p);

/// Even case: {X n-dim : Span{X,TX} is (n+1)-dimensional and Q1-isotropic}.
std::set<Subspace> starred_set(const Pencil& p);

/// Even case: the starred set partitioned by the profile of Span{X,TX}.
/// Classes with sum d_i = n+1 (Span{X,TX} T-stable) are reported separately
/// as excluded; they can be infinite families over larger fields.
struct EvenProfilePartition {
  std::map<ProfileKey, std::set<Subspace>> classes;
  std::map<ProfileKey, std::set<Subspace>> excluded;
};
EvenProfilePartition even_profile_partition(const Pencil& p);

}  // namespace pencil
