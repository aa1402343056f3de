#include "parpush/linalg.hpp"

#include <stdexcept>

#include "parpush/error.hpp"

namespace parpush {

Matrix Matrix::identity(std::size_t n) { return scalar(n, Rational(1)); }

Matrix Matrix::scalar(std::size_t n, const Rational& s) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

Rational Matrix::trace() const {
  Rational t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::linear(const Rational& root) { return Polynomial({-root, Rational(1)}); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return *this * (Rational(1) / leading());
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * Rational(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Rational& s) {
  std::vector<Rational> c = a.coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial(), a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  for (int k = a.degree() - db; k >= 0; --k) {
    const Rational q = rem[static_cast<std::size_t>(k + db)] / b.leading();
    quot[static_cast<std::size_t>(k)] = q;
    if (q.is_zero()) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= q * b.coeffs_[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial characteristic_polynomial(const Matrix& m) {
  if (!m.is_square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[n] = Rational(1);
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + Matrix::scalar(n, c[n - k + 1]);
    c[n - k] = -(m * mk).trace() / Rational(static_cast<long>(k));
  }
  return Polynomial(std::move(c));
}

namespace {

// Sturm chain scaled to primitive integer polynomials: positive scaling
// keeps every sign, and evaluation at a/d becomes integer Horner on
// d^n p(a/d).
using IntPoly = std::vector<Integer>;

IntPoly primitive_integer(const Polynomial& p) {
  Integer l = 1;
  for (const auto& c : p.coefficients()) {
    const Integer d = c.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  IntPoly out;
  Integer g = 0;
  for (const auto& c : p.coefficients()) {
    out.push_back(c.numerator() * (l / c.denominator()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (g > 1) {
    for (auto& c : out) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

int sign_at(const IntPoly& p, const Integer& a, const Integer& d) {
  if (p.empty()) return 0;
  Integer v = p.back();
  Integer dpow = 1;
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    dpow *= d;
    v = v * a + p[i] * dpow;
  }
  return sgn(v);
}

int sign_changes(const std::vector<IntPoly>& chain, const Integer& a, const Integer& d) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sign_at(p, a, d);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Integer lcm_of_denominators(const Polynomial& p) {
  Integer l = 1;
  for (const auto& c : p.coefficients()) {
    const Integer d = c.denominator();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

}  // namespace

std::vector<std::pair<Rational, int>> rational_roots(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  std::vector<std::pair<Rational, int>> out;
  if (p.degree() == 0) return out;

  const Polynomial monic = p.monic();
  const Polynomial squarefree = Polynomial::divmod(monic, Polynomial::gcd(monic, monic.derivative())).first;

  std::vector<Polynomial> chain{squarefree, squarefree.derivative()};
  while (chain.back().degree() > 0) {
    Polynomial r = Polynomial::divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(r * Rational(-1));
  }

  // A rational root of a monic polynomial with coefficients in (1/L)Z has
  // the form k/L, k an integer (Gauss). Isolate candidates k by bisection,
  // probing only at half-integers (k +- 1/2)/L, which are never roots.
  const Integer L = lcm_of_denominators(monic);
  Rational bound(1);
  for (const auto& c : monic.coefficients()) bound = std::max(bound, c.abs() + Rational(1));
  const Integer kmax = (bound * Rational(L)).floor() + 1;
  const Rational inv_l = Rational::normalize(1, L);
  std::vector<IntPoly> ichain;
  for (const auto& q : chain) ichain.push_back(primitive_integer(q));
  const Integer two_l = 2 * L;

  std::vector<Rational> found;
  auto isolate = [&](auto&& self, const Integer& lo, const Integer& hi) -> void {
    // Probes (lo - 1/2) / L and (hi + 1/2) / L.
    if (sign_changes(ichain, Integer(2 * lo - 1), two_l) - sign_changes(ichain, Integer(2 * hi + 1), two_l) == 0) return;
    if (lo == hi) {
      const Rational candidate = Rational(lo) * inv_l;
      if (squarefree(candidate).is_zero()) found.push_back(candidate);
      return;
    }
    Integer mid;
    mpz_fdiv_q_2exp(mid.get_mpz_t(), Integer(lo + hi).get_mpz_t(), 1);
    self(self, lo, mid);
    self(self, Integer(mid + 1), hi);
  };
  isolate(isolate, Integer(-kmax), kmax);

  for (const auto& root : found) {
    Polynomial rest = monic;
    int mult = 0;
    for (;;) {
      auto [q, r] = Polynomial::divmod(rest, Polynomial::linear(root));
      if (!r.is_zero()) break;
      rest = std::move(q);
      ++mult;
    }
    out.emplace_back(root, mult);
  }
  return out;
}

}  // namespace parpush
