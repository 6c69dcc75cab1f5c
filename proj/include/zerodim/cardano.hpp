#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include "errors.hpp"

namespace zerodim {

// Radical solution of -x h^3 - h + 1 = 0 around h(0) = 1, and the derived
// generating function g(u) = d/du [u h(u^2)].
//
// All roots are principal. sqrt(1+y) +- sqrt(y) always has nonnegative real
// part and the two factors multiply to 1, so the cube roots never meet their
// cut; the only cut left is 1 + y on (-inf, 0]. The odd dependence on
// sqrt(y) cancels between numerator and denominator, so h is continuous
// across negative y.

namespace detail {

using cplx = std::complex<double>;

inline constexpr double y_per_x = 27.0 / 4.0;

// (-1)^p C^{(3)}_p for p < 24, from the ratio of consecutive terms
inline const std::array<double, 24>& h_series() {
  static const std::array<double, 24> c = [] {
    std::array<double, 24> out{};
    double cat = 1.0;
    for (int p = 0; p < 24; ++p) {
      out[p] = (p % 2 ? -1.0 : 1.0) * cat;
      const double q = p;
      cat *= (3 * q + 1) * (3 * q + 2) * (3 * q + 3) / ((q + 1) * (2 * q + 1) * (2 * q + 2)) * (2 * q + 1) /
             (2 * q + 3);
    }
    return out;
  }();
  return c;
}

inline void check_cut(cplx one_plus_y, const char* what) {
  if (one_plus_y.imag() == 0.0 && one_plus_y.real() <= 0.0)
    throw branch_error(std::string(what) + ": argument on the branch cut 1 + 27x/4 <= 0");
}

// h below the seam: 1e-3 keeps the tail under 1e-20
inline constexpr double h_seam = 1e-3;
// h' loses a factor 1/|x| to cancellation in closed form, so it switches
// later; 24 terms at |x| = 1e-2 leave a tail near (0.0675)^24.
inline constexpr double hp_seam = 1e-2;

}  // namespace detail

// Delta_+-(y) = (sqrt(1+y) +- sqrt(y))^{1/3}
inline std::pair<std::complex<double>, std::complex<double>> delta_pm(std::complex<double> y) {
  const auto s1 = std::sqrt(1.0 + y);
  const auto sy = std::sqrt(y);
  return {std::pow(s1 + sy, 1.0 / 3.0), std::pow(s1 - sy, 1.0 / 3.0)};
}

inline std::complex<double> h_series_eval(std::complex<double> x, int terms = 24) {
  const auto& c = detail::h_series();
  std::complex<double> acc = 0.0;
  for (int p = terms - 1; p >= 0; --p) acc = acc * x + c[p];
  return acc;
}

inline std::complex<double> h_prime_series_eval(std::complex<double> x, int terms = 24) {
  const auto& c = detail::h_series();
  std::complex<double> acc = 0.0;
  for (int p = terms - 1; p >= 1; --p) acc = acc * x + static_cast<double>(p) * c[p];
  return acc;
}

// Closed forms, valid away from x = 0. sqrt(y) is tied to sqrt(3x) so the
// pair flips together.
inline std::complex<double> h_closed(std::complex<double> x) {
  using detail::cplx;
  const cplx s3x = std::sqrt(3.0 * x);
  const cplx sy = 1.5 * s3x;
  const cplx s1 = std::sqrt(1.0 + detail::y_per_x * x);
  const cplx dp = std::pow(s1 + sy, 1.0 / 3.0), dm = std::pow(s1 - sy, 1.0 / 3.0);
  return (dp - dm) / s3x;
}

inline std::complex<double> h_prime_closed(std::complex<double> x) {
  using detail::cplx;
  const cplx s3x = std::sqrt(3.0 * x);
  const cplx sy = 1.5 * s3x;
  const cplx y = detail::y_per_x * x;
  const cplx s1 = std::sqrt(1.0 + y);
  const cplx wp = s1 + sy, wm = s1 - sy;
  const cplx dp = std::pow(wp, 1.0 / 3.0), dm = std::pow(wm, 1.0 / 3.0);
  const cplx dpp = (1.0 / s1 + 1.0 / sy) / (6.0 * dp * dp);
  const cplx dmp = (1.0 / s1 - 1.0 / sy) / (6.0 * dm * dm);
  return (81.0 / 4.0 * x * (dpp - dmp) - 1.5 * (dp - dm)) / (3.0 * x * s3x);
}

inline std::complex<double> h_of(std::complex<double> x) {
  detail::check_cut(1.0 + detail::y_per_x * x, "h");
  if (std::abs(x) < detail::h_seam) return h_series_eval(x);
  return h_closed(x);
}

inline std::complex<double> h_prime(std::complex<double> x) {
  detail::check_cut(1.0 + detail::y_per_x * x, "h'");
  if (std::abs(x) < detail::hp_seam) return h_prime_series_eval(x);
  return h_prime_closed(x);
}

// Two-term explicit form. With c = sqrt(27/4) and s = sqrt(1 + c^2 u^2):
// g = [(1 + cu/s) (s + cu)^{-2/3} + (1 - cu/s) (s - cu)^{-2/3}] / 2
inline std::complex<double> g_of(std::complex<double> u) {
  using detail::cplx;
  const double c = std::sqrt(detail::y_per_x);
  const cplx v = c * u;
  const cplx one_plus = 1.0 + v * v;
  detail::check_cut(one_plus, "g");
  const cplx s = std::sqrt(one_plus);
  return 0.5 * ((1.0 + v / s) * std::pow(s + v, -2.0 / 3.0) + (1.0 - v / s) * std::pow(s - v, -2.0 / 3.0));
}

// g = (3^{5/2}/2) u (Delta'_+ - Delta'_-) at y = 27u^2/4 with sqrt(y) = c u;
// removable at u = 0.
inline std::complex<double> g_of_derivative_form(std::complex<double> u) {
  using detail::cplx;
  if (u == cplx{}) return 1.0;
  const double c = std::sqrt(detail::y_per_x);
  const cplx sy = c * u;
  const cplx one_plus = 1.0 + sy * sy;
  detail::check_cut(one_plus, "g");
  const cplx s1 = std::sqrt(one_plus);
  const cplx dpp = (1.0 / s1 + 1.0 / sy) * std::pow(s1 + sy, -2.0 / 3.0) / 6.0;
  const cplx dmp = (1.0 / s1 - 1.0 / sy) * std::pow(s1 - sy, -2.0 / 3.0) / 6.0;
  return std::pow(3.0, 2.5) / 2.0 * u * (dpp - dmp);
}

// g from h and h' directly: h(u^2) + 2u^2 h'(u^2)
inline std::complex<double> g_from_h(std::complex<double> u) {
  const auto x = u * u;
  return h_of(x) + 2.0 * x * h_prime(x);
}

}  // namespace zerodim
