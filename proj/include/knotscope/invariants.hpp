#pragma once

#include <optional>
#include <string>

#include "knotscope/bigint.hpp"
#include "knotscope/diagram.hpp"
#include "knotscope/error.hpp"
#include "knotscope/int_matrix.hpp"
#include "knotscope/laurent_poly.hpp"

namespace knotscope {

// Largest crossing count accepted by the 2^c state enumeration.
inline constexpr int kStateSumMaxCrossings = 24;
// Largest number of simultaneously open arcs in the contraction route.
inline constexpr int kContractionMaxFrontier = 28;

// Kauffman bracket <D> in the variable A, normalised so that the crossingless
// unknot is 1. Computed by contracting crossings one at a time while tracking
// how the open arc ends are paired; throws BudgetExceeded when the frontier
// would exceed kContractionMaxFrontier.
LaurentPoly kauffman_bracket(const Diagram& d);

// Same polynomial by direct enumeration of all 2^c smoothings. Throws
// BudgetExceeded above kStateSumMaxCrossings crossings.
LaurentPoly kauffman_bracket_states(const Diagram& d);

// |<D>(zeta)| for zeta = exp(i pi / 4), i.e. |V(-1)|.
BigInt jones_det(const Diagram& d);
BigInt jones_det_from_bracket(const LaurentPoly& bracket);

IntMatrix goeritz_matrix(const Diagram& d);
BigInt goeritz_det(const Diagram& d);

// Fox-calculus Jacobian of the Wirtinger presentation at t = -1.
IntMatrix alexander_matrix(const Diagram& d);
BigInt alexander_det(const Diagram& d);

struct DeterminantRoutes {
  BigInt goeritz;
  BigInt alexander;
  std::optional<BigInt> jones; // absent when the bracket budget is exceeded

  bool agree() const;
  std::string str() const;
};

DeterminantRoutes determinant_routes(const Diagram& d);

class DisagreementError : public Error {
public:
  explicit DisagreementError(DeterminantRoutes routes);
  const DeterminantRoutes& routes() const noexcept { return routes_; }

private:
  DeterminantRoutes routes_;
};

// Common value of every computed route; throws DisagreementError otherwise.
BigInt determinant(const Diagram& d);

} // namespace knotscope
