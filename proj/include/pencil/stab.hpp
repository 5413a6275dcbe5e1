#pragma once

#include <cstdint>
#include <map>
#include <set>

#include "pencil/fano.hpp"

namespace pencil {

enum class StabFlavor { PO, PSO };

/// Involution attached to a subset I of the roots: the polynomial in T that
/// acts as -1 on the generalized eigenspaces U_{i,T} for i in I and as +1 on
/// the others, i.e. 1 - 2 sum_{i in I} eps_i(T) with eps_i the idempotent of
/// k[x]/f supported at alpha_i. For simple roots eps_i(T) reduces to
/// h_i(T)/h_i(alpha_i) with h_i = f/(x - alpha_i). Stored projectively with
/// a canonical sign and a canonical index set (complementary subsets give
/// the same class).
struct StabElement {
  uint32_t index_set;
  Matrix mat;
  bool so_member;  // determinant of the lift is +1
};

struct StabGroup {
  StabFlavor flavor;
  Matrix t;
  Matrix gram;
  EigenData ed;
  std::vector<StabElement> elements;

  int r() const { return ed.r_plus_1 - 1; }
  const StabElement* find(uint32_t index_set) const;
  const StabElement& identity() const;
};

/// All projective classes of the subset involutions; PSO keeps only classes
/// with determinant-one lifts (even case). Orthogonality w.r.t. Q,
/// commutation with T and involutivity are verified matrix-exactly for
/// every element.
StabGroup build_stab(const Matrix& t, const EigenData& ed, const QuadraticForm& q, StabFlavor flavor);

Subspace act(const StabElement& g, const Subspace& x);

/// matrices equal up to a global sign
bool projectively_equal(const Matrix& a, const Matrix& b);

struct OrbitReport {
  std::vector<std::set<Subspace>> orbits;
  std::map<Subspace, int> stabilizer_order;
};

/// Orbit decomposition of S under the group; throws ActionNotClosed when an
/// image leaves S.
OrbitReport orbit_report(const StabGroup& g, const std::set<Subspace>& s);

}  // namespace pencil
