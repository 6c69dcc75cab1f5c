#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "contour_quadrature.hpp"
#include "domains.hpp"
#include "log_surface.hpp"

namespace zerodim {

inline quadrature_estimate exact_one() {
  quadrature_estimate q;
  q.value = 1.0;
  q.converged = true;
  return q;
}

// Z_k(lambda) = int dphi/sqrt(2pi) e^{-phi^2/2 - lambda phi^{2k}/2}
// Z^c_k(lambda) = int_0^inf dr e^{-r - lambda r^k}
inline quadrature_estimate standard_eval(const model_spec& m, const log_surface_point& lambda,
                                         double tolerance = 1e-10) {
  m.validate();
  if (lambda.is_origin()) return exact_one();
  if (!(std::abs(lambda.argument()) < std::numbers::pi / 2))
    throw domain_error("standard representation needs |arg lambda| < pi/2; use the rotated one");
  const cplx lam = lambda.value();
  const int k = m.k;
  if (m.is_real()) {
    const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi);
    auto q = half_line_integrate(
        [&](double x) {
          const double x2 = x * x;
          return norm * std::exp(-0.5 * x2 - 0.5 * lam * std::pow(x2, k));
        },
        tolerance);
    return q;
  }
  return half_line_integrate([&](double r) { return std::exp(-r - lam * std::pow(r, k)); }, tolerance);
}

// After phi = lambda^{-1/2k} psi:
//   Z_k = lambda^{-1/2k} int dpsi/sqrt(2pi) e^{-psi^{2k}/2 - lambda^{-1/k} psi^2/2}
//   Z^c_k = lambda^{-1/k} int_0^inf ds e^{-s^k - lambda^{-1/k} s}
// Defined on D^k_rho, which reaches |arg lambda| < k pi/2.
inline quadrature_estimate rotated_eval(const model_spec& m, const log_surface_point& lambda,
                                        double tolerance = 1e-10, double rho = 1.0) {
  m.validate();
  if (lambda.is_origin()) throw domain_error("rotated representation is undefined at lambda = 0");
  if (!in_domain(lambda, {domain_kind::D, m.k, rho}))
    throw domain_error("lambda outside D^" + std::to_string(m.k) + "_rho for the rotated representation");
  const int k = m.k;
  const cplx c = lambda.pow(-1.0 / k);
  quadrature_estimate q;
  cplx pref;
  if (m.is_real()) {
    pref = lambda.pow(-1.0 / (2.0 * k));
    const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi);
    q = half_line_integrate(
        [&](double x) {
          const double x2 = x * x;
          return norm * std::exp(-0.5 * std::pow(x2, k) - 0.5 * c * x2);
        },
        tolerance / std::abs(lambda.pow(-1.0 / (2.0 * k))));
  } else {
    pref = c;
    q = half_line_integrate([&](double s) { return std::exp(-std::pow(s, k) - c * s); },
                            tolerance / std::abs(c));
  }
  q.value *= pref;
  q.abs_error *= std::abs(pref);
  q.converged = q.converged && q.abs_error <= tolerance;
  return q;
}

}  // namespace zerodim
