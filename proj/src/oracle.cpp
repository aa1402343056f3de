#include "parpush/oracle.hpp"

#include <map>
#include <utility>

#include "parpush/error.hpp"

namespace parpush::oracle {

LaurentModel::LaurentModel(std::size_t rank, std::size_t precision)
    : rank_(rank), coeffs_(precision, Matrix(rank, rank)) {
  if (rank == 0 || precision == 0) throw Error(ErrorCode::OutOfRange, "Laurent model needs positive rank and precision");
}

LaurentModel LaurentModel::diagonal(const std::vector<Rational>& taus, std::size_t precision) {
  LaurentModel m(taus.size(), precision);
  for (std::size_t i = 0; i < taus.size(); ++i) m.coefficient(0)(i, i) = taus[i];
  return m;
}

LaurentModel pushforward(const LaurentModel& m, int b) {
  if (b < 1) throw Error(ErrorCode::OutOfRange, "ramification index must be positive");
  const std::size_t n = m.precision();
  const auto ub = static_cast<std::size_t>(b);
  if (n < 2 * ub) {
    throw Error(ErrorCode::PrecisionLoss, "precision " + std::to_string(n) + " is below 2b = " + std::to_string(2 * ub));
  }
  const std::size_t r = m.rank();
  LaurentModel out(r * ub, n / ub);
  const Rational inv_b = Rational::normalize(1, b);

  // D(w^c e_j) = (1/b) (c w^c e_j + sum_k sum_i A_k[i][j] w^(c+k) e_i) dt/t
  // and w^(c+k) = t^q w^c' with c + k = q b + c'.
  for (std::size_t c = 0; c < ub; ++c) {
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t col = c * r + j;
      out.coefficient(0)(col, col) += Rational(static_cast<long>(c)) * inv_b;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t q = (c + k) / ub;
        if (q >= out.precision()) break;
        const std::size_t shifted = (c + k) % ub;
        for (std::size_t i = 0; i < r; ++i) {
          const Rational& a = m.coefficient(k)(i, j);
          if (!a.is_zero()) out.coefficient(q)(shifted * r + i, col) += a * inv_b;
        }
      }
    }
  }
  return out;
}

LaurentModel twist(const LaurentModel& m, long long n) {
  // D(w^-n e_j) = w^-n (-n e_j + sum_i A_ij e_i) dw/w.
  LaurentModel out = m;
  out.coefficient(0) -= Matrix::scalar(m.rank(), Rational(n));
  return out;
}

LaurentModel pullback(const LaurentModel& m, int delta) {
  if (delta < 1) throw Error(ErrorCode::OutOfRange, "pullback degree must be positive");
  const auto ud = static_cast<std::size_t>(delta);
  // dw/w = delta ds/s and w^k = s^(k delta).
  LaurentModel out(m.rank(), (m.precision() - 1) * ud + 1);
  for (std::size_t k = 0; k < m.precision(); ++k) out.coefficient(k * ud) = m.coefficient(k) * Rational(delta);
  return out;
}

std::vector<Rational> residue_spectrum(const LaurentModel& m) {
  const Polynomial chi = characteristic_polynomial(m.residue());
  std::vector<Rational> spectrum;
  for (const auto& [root, mult] : rational_roots(chi)) {
    for (int i = 0; i < mult; ++i) spectrum.push_back(root);
  }
  if (static_cast<int>(spectrum.size()) != chi.degree()) {
    throw Error(ErrorCode::PrecisionLoss, "residue has eigenvalues outside Q");
  }
  return spectrum;
}

FiltrationReport filtration_dims(long long r, int b, const WeightedFlag& flag) {
  if (b < 1) throw Error(ErrorCode::OutOfRange, "ramification index must be positive");
  if (flag.rank() != r) throw Error(ErrorCode::MalformedBundle, "flag rank differs from the germ rank");

  // Adapted basis e_0..e_{r-1}: e_j lies in the graded piece step_of[j].
  std::vector<std::size_t> step_of;
  for (std::size_t s = 0; s < flag.size(); ++s) {
    for (long long d = 0; d < flag.steps()[s].dim; ++d) step_of.push_back(s);
  }

  FiltrationReport report;
  report.filtration_dims.assign(static_cast<std::size_t>(b) + 1, 0);
  report.level_dims.assign(static_cast<std::size_t>(b), 0);
  std::map<std::pair<int, std::size_t>, MonomialPiece> grouped;
  for (int c = 0; c < b; ++c) {
    for (std::size_t j = 0; j < step_of.size(); ++j) {
      // w^c e_j vanishes to order c at y, so it lies in F_0, ..., F_c.
      for (int l = 0; l <= c; ++l) ++report.filtration_dims[static_cast<std::size_t>(l)];
      ++report.level_dims[static_cast<std::size_t>(c)];
      const Rational order = Rational(c) + flag.steps()[step_of[j]].weight;
      auto& piece = grouped[{c, step_of[j]}];
      piece.level = c;
      piece.step = step_of[j];
      piece.dim += 1;
      piece.weight = order / Rational(b);
    }
  }
  for (auto& [key, piece] : grouped) report.pieces.push_back(std::move(piece));
  return report;
}

}  // namespace parpush::oracle
