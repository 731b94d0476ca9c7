#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace holext {

/// Univariate polynomial with coefficients in ascending degree. Trailing
/// zeros are trimmed so that the degree is the index of the last coefficient;
/// the zero polynomial has no coefficients and no degree.
template <class T>
class BasicPolynomial {
 public:
  using value_type = T;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::vector<T> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
  }

  static BasicPolynomial constant(T c) { return BasicPolynomial(std::vector<T>{c}); }
  static BasicPolynomial monomial(std::size_t degree, T c = T{1}) {
    std::vector<T> v(degree + 1, T{});
    v[degree] = c;
    return BasicPolynomial(std::move(v));
  }

  const std::vector<T>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// std::nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const noexcept {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
  }

  T coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : T{}; }

  template <class U>
  auto operator()(const U& z) const {
    using R = decltype(T{} * z);
    R acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  BasicPolynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * T(static_cast<int>(k));
    return BasicPolynomial(std::move(d));
  }

  friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b) {
    std::vector<T> v(std::max(a.coeffs_.size(), b.coeffs_.size()), T{});
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] = v[k] + a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] = v[k] + b.coeffs_[k];
    return BasicPolynomial(std::move(v));
  }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> v(a.coeffs_.size() + b.coeffs_.size() - 1, T{});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        v[i + j] = v[i + j] + a.coeffs_[i] * b.coeffs_[j];
    return BasicPolynomial(std::move(v));
  }

  friend BasicPolynomial operator*(const T& c, const BasicPolynomial& p) {
    std::vector<T> v = p.coeffs_;
    for (auto& x : v) x = c * x;
    return BasicPolynomial(std::move(v));
  }

  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == T{}) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using Polynomial1D = BasicPolynomial<std::complex<double>>;

/// z^n by repeated squaring; ipow(0, 0) == 1.
template <class T>
T ipow(T z, std::size_t n) {
  T result{1};
  while (n > 0) {
    if (n & 1U) result *= z;
    z *= z;
    n >>= 1U;
  }
  return result;
}

/// Chebyshev polynomial of the first kind T_n in the power basis.
inline Polynomial1D chebyshev_t(std::size_t n) {
  using C = std::complex<double>;
  Polynomial1D prev = Polynomial1D::constant(C{1});
  if (n == 0) return prev;
  Polynomial1D cur = Polynomial1D::monomial(1);
  const Polynomial1D two_z = Polynomial1D::monomial(1, C{2});
  for (std::size_t k = 1; k < n; ++k) {
    Polynomial1D next = two_z * cur + C{-1} * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace holext
