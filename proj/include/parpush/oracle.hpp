#pragma once

#include <cstddef>
#include <vector>

#include "parpush/linalg.hpp"
#include "parpush/parabolic.hpp"
#include "parpush/rational.hpp"

/// Brute-force local models used as referee for the direct-image rules.
/// Everything here works one ramification point at a time, on truncated
/// power series, without reference to the closed-form weight and residue
/// rules of the pushforward module.
namespace parpush::oracle {

inline constexpr std::size_t kDefaultPrecision = 16;

/// D = d + A(w) dw/w near a point, A(w) = sum_{k < precision} A_k w^k.
class LaurentModel {
 public:
  LaurentModel(std::size_t rank, std::size_t precision);

  /// A(w) = diag(taus), constant in w.
  static LaurentModel diagonal(const std::vector<Rational>& taus, std::size_t precision = kDefaultPrecision);

  std::size_t rank() const { return rank_; }
  std::size_t precision() const { return coeffs_.size(); }
  Matrix& coefficient(std::size_t k) { return coeffs_.at(k); }
  const Matrix& coefficient(std::size_t k) const { return coeffs_.at(k); }
  /// Constant term of A: the residue at w = 0.
  const Matrix& residue() const { return coeffs_.front(); }

 private:
  std::size_t rank_;
  std::vector<Matrix> coeffs_;
};

/// Direct image under t = w^b in the basis {w^c e_j : 0 <= c < b} (index
/// c * rank + j), using t d/dt = (1/b) w d/dw. Output precision is
/// precision / b. Throws PrecisionLoss when precision < 2b.
LaurentModel pushforward(const LaurentModel& m, int b);

/// Same connection on L_n = L(n y): generator w^{-n} e_j.
LaurentModel twist(const LaurentModel& m, long long n);

/// Pullback under w = s^delta.
LaurentModel pullback(const LaurentModel& m, int delta);

/// Eigenvalues of the residue with multiplicity, ascending, via the exact
/// characteristic polynomial. Throws PrecisionLoss if some eigenvalue is
/// not rational (it cannot then be compared exactly).
std::vector<Rational> residue_spectrum(const LaurentModel& m);

/// One monomial class w^c e_j of the pushed fiber grouped by flag step.
struct MonomialPiece {
  int level = 0;
  std::size_t step = 0;
  long long dim = 0;
  Rational weight;
};

struct FiltrationReport {
  /// dim F_l for l = 0..b, F_l spanned by monomials of vanishing order >= l.
  std::vector<long long> filtration_dims;
  /// Graded dims per level c (sum over flag steps).
  std::vector<long long> level_dims;
  /// Monomial classes by (level, step); weight = parabolic order / b.
  std::vector<MonomialPiece> pieces;
};

/// Counts monomials w^c e_j in the fiber of the direct image of a rank-r
/// germ with flag `flag` under a cycle of length b.
FiltrationReport filtration_dims(long long r, int b, const WeightedFlag& flag);

}  // namespace parpush::oracle
