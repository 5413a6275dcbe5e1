#pragma once

#include <stdexcept>
#include <string>

namespace pencil {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero field element") {}
};

struct FieldMismatch : Error {
  FieldMismatch() : Error("operands belong to different fields") {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error(what) {}
};

struct NotAnEigenvalue : Error {
  NotAnEigenvalue() : Error("value is not a root of the characteristic polynomial") {}
};

struct NeedNondegenerateQ1 : Error {
  NeedNondegenerateQ1() : Error("first Gram matrix must be invertible") {}
};

struct NeedsExtension : Error {
  NeedsExtension() : Error("polynomial does not split over the given field") {}
};

struct BadReductionVector : Error {
  explicit BadReductionVector(const std::string& what) : Error(what) {}
};

struct NotGeneric : Error {
  explicit NotGeneric(const std::string& what) : Error(what) {}
};

struct NotRegular : Error {
  explicit NotRegular(const std::string& what) : Error(what) {}
};

struct NotReducibleHere : Error {
  NotReducibleHere() : Error("no reduction available at this root") {}
};

struct ReducibleCurve : Error {
  ReducibleCurve() : Error("discriminant curve is reducible (geometric genus -1)") {}
};

struct ConeOnX : Error {
  ConeOnX() : Error("cone point lies on the subspace") {}
};

struct DegenerateSpan : Error {
  DegenerateSpan() : Error("no admissible reflection vector in the span") {}
};

struct ActionNotClosed : Error {
  ActionNotClosed() : Error("set is not closed under the group action") {}
};

struct NoBasePoint : Error {
  NoBasePoint() : Error("no rational distinguished point on the curve") {}
};

struct FixtureDegenerate : Error {
  explicit FixtureDegenerate(const std::string& what) : Error(what) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

}  // namespace pencil
