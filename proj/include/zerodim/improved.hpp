#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cardano.hpp"
#include "contour_quadrature.hpp"
#include "errors.hpp"
#include "log_surface.hpp"
#include "standard.hpp"

namespace zerodim {

// Improved representation of the complex k = 3 model:
//   Z(lambda) = int dmu(a) e^{S(a, abar)},  S = S1 + S2 - log 2
//   S1 = log[(sqrt(1+v^2) + v)^{1/3} + (sqrt(1+v^2) - v)^{1/3}]
//   S2 = -log(1 + v^2) / 2,  v = sqrt(27 lambda / 4) a abar
// S only sees w = a abar; treating a and abar as independent, S = F(a b).

namespace detail {

struct improved_parts {
  cplx s;       // sqrt(1 + v^2)
  cplx p_cube;  // (s + v)^{1/3}
  cplx m_cube;  // (s - v)^{1/3}
};

inline improved_parts improved_split(cplx v) {
  const cplx one_plus = 1.0 + v * v;
  if (one_plus.imag() == 0.0 && one_plus.real() <= 0.0)
    throw branch_error("improved action: 1 + v^2 on the cut (-inf, 0]");
  const cplx s = std::sqrt(one_plus);
  // (s + v)(s - v) = 1; take the larger factor and invert it for the other
  cplx P = s + v, M = s - v;
  if (std::abs(P) >= std::abs(M))
    M = 1.0 / P;
  else
    P = 1.0 / M;
  return {s, std::pow(P, 1.0 / 3.0), std::pow(M, 1.0 / 3.0)};
}

inline cplx improved_v(const log_surface_point& lambda, cplx w) {
  return std::sqrt(27.0 / 4.0) * lambda.pow(0.5) * w;
}

}  // namespace detail

// S as a function of w = a b
inline std::complex<double> action_S_of_w(const log_surface_point& lambda, std::complex<double> w) {
  const auto v = detail::improved_v(lambda, w);
  const auto parts = detail::improved_split(v);
  const auto S1 = std::log(parts.p_cube + parts.m_cube);
  const auto S2 = -0.5 * std::log(1.0 + v * v);
  return S1 + S2 - std::numbers::ln2;
}

inline std::complex<double> action_S(const log_surface_point& lambda, std::complex<double> a) {
  return action_S_of_w(lambda, std::norm(a));
}

// e^S without the logs
inline std::complex<double> improved_weight(const log_surface_point& lambda, double w) {
  const auto parts = detail::improved_split(detail::improved_v(lambda, w));
  return (parts.p_cube + parts.m_cube) / (2.0 * parts.s);
}

// The integrand is bounded and analytic in lambda while 1 + v^2 stays off
// its cut, i.e. for |arg lambda| < pi on the first sheet. Agreement with the
// rotated standard integral has been checked up to |arg| = 3pi/4; beyond
// pi/2 there is no unrotated oracle, so results there are flagged.
inline bool improved_in_branch_region(const log_surface_point& lambda) {
  return lambda.is_origin() || std::abs(lambda.argument()) < std::numbers::pi;
}
inline bool improved_validated(const log_surface_point& lambda) {
  return lambda.is_origin() || std::abs(lambda.argument()) <= 0.75 * std::numbers::pi;
}

inline quadrature_estimate improved_eval(const log_surface_point& lambda, double tolerance = 1e-10) {
  if (lambda.is_origin()) return exact_one();
  if (!improved_in_branch_region(lambda))
    throw domain_error("improved representation needs |arg lambda| < pi");
  return gaussian2d_integrate([&](cplx a) { return improved_weight(lambda, std::norm(a)); }, tolerance);
}

struct derivative_bound_report {
  int p = 0;
  int q = 0;
  double max_abs = 0.0;
  std::complex<double> argmax{};
  // K from max = (p+q)! K^{p+q} |lambda|^{(p+q)/4}
  double implied_K = 0.0;
  // max over equal-width shells in |a|, innermost first
  std::vector<double> shell_outer_radius;
  std::vector<double> shell_max;
  // the maximum sits in the outermost shell
  bool growth = false;
  // worst |D(r) - D(r/2)| between the two stencil radii
  double stencil_disagreement = 0.0;
};

namespace detail {

// Distance in w from w0 to the cut of F: u = sqrt(lambda) w on
// {i t : |t| >= 2/sqrt(27)}.
inline double improved_cut_distance(const log_surface_point& lambda, cplx w0) {
  const cplx sl = lambda.pow(0.5);
  const cplx u0 = sl * w0;
  const double t0 = 2.0 / std::sqrt(27.0);
  auto ray = [&](double sgn) {
    const double im = sgn * u0.imag();
    if (im >= t0) return std::abs(u0.real());
    return std::abs(u0 - cplx(0.0, sgn * t0));
  };
  return std::min(ray(1.0), ray(-1.0)) / std::abs(sl);
}

// d^p/da^p d^q/db^q F(a b) at (a0, b0) by the trapezoid rule on circles of
// radius r in both variables.
inline cplx circle_derivative(const log_surface_point& lambda, cplx a0, cplx b0, int p, int q, double r, int n) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> ea(n), eb(n), za(n), zb(n);
  for (int j = 0; j < n; ++j) {
    const double phi = two_pi * j / n;
    za[j] = a0 + std::polar(r, phi);
    zb[j] = b0 + std::polar(r, phi);
    ea[j] = std::polar(1.0, -p * phi);
    eb[j] = std::polar(1.0, -q * phi);
  }
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    cplx row = 0.0;
    for (int l = 0; l < n; ++l) row += eb[l] * action_S_of_w(lambda, za[j] * zb[l]);
    acc += ea[j] * row;
  }
  double fact = 1.0;
  for (int i = 2; i <= p; ++i) fact *= i;
  for (int i = 2; i <= q; ++i) fact *= i;
  return acc * fact / (static_cast<double>(n) * n * std::pow(r, p + q));
}

}  // namespace detail

// Polar grid of n_radial x n_angle points with |a| in (0, radius].
inline std::vector<std::complex<double>> polar_grid(double radius, int n_radial, int n_angle) {
  std::vector<std::complex<double>> out;
  for (int i = 1; i <= n_radial; ++i)
    for (int j = 0; j < n_angle; ++j)
      out.push_back(std::polar(radius * i / n_radial, 2.0 * std::numbers::pi * j / n_angle));
  return out;
}

inline derivative_bound_report action_derivative_bound_check(const log_surface_point& lambda, int p, int q,
                                                             const std::vector<std::complex<double>>& grid,
                                                             int shells = 5) {
  if (p < 0 || q < 0 || p + q < 1 || p + q > 4)
    throw usage_error("derivative order p + q must be between 1 and 4");
  if (grid.empty()) throw usage_error("derivative scan needs a nonempty grid");
  if (lambda.is_origin()) throw usage_error("derivative scan needs lambda != 0");
  if (!improved_in_branch_region(lambda)) throw domain_error("improved action needs |arg lambda| < pi");
  constexpr int n = 32;
  derivative_bound_report rep;
  rep.p = p;
  rep.q = q;
  double rmax = 0.0;
  for (auto a : grid) rmax = std::max(rmax, std::abs(a));
  if (shells < 1) shells = 1;
  rep.shell_max.assign(shells, 0.0);
  for (int s = 0; s < shells; ++s) rep.shell_outer_radius.push_back(rmax * (s + 1) / shells);
  for (auto a0 : grid) {
    const cplx b0 = std::conj(a0);
    // keep a b inside a quarter of the distance to the cut: 2|a0| r + r^2 <= d/4
    const double d = detail::improved_cut_distance(lambda, a0 * b0);
    const double A = std::abs(a0);
    const double r = -A + std::sqrt(A * A + 0.25 * d);
    if (!(r > 0.0) || !std::isfinite(r)) throw convergence_error("derivative stencil radius collapsed");
    const cplx big = detail::circle_derivative(lambda, a0, b0, p, q, r, n);
    const cplx small = detail::circle_derivative(lambda, a0, b0, p, q, 0.5 * r, n);
    rep.stencil_disagreement = std::max(rep.stencil_disagreement, std::abs(big - small));
    const double m = std::abs(small);
    if (m > rep.max_abs) {
      rep.max_abs = m;
      rep.argmax = a0;
    }
    int s = rmax > 0.0 ? static_cast<int>(std::ceil(A / rmax * shells)) - 1 : 0;
    s = std::clamp(s, 0, shells - 1);
    rep.shell_max[s] = std::max(rep.shell_max[s], m);
  }
  if (rep.stencil_disagreement > 1e-6 * rep.max_abs + 1e-12)
    throw convergence_error("derivative stencils at r and r/2 disagree by " +
                            std::to_string(rep.stencil_disagreement));
  double fact = 1.0;
  for (int i = 2; i <= p + q; ++i) fact *= i;
  const int n_tot = p + q;
  rep.implied_K = std::pow(rep.max_abs / (fact * std::pow(lambda.modulus(), n_tot / 4.0)), 1.0 / n_tot);
  double inner = 0.0;
  for (int s = 0; s + 1 < shells; ++s) inner = std::max(inner, rep.shell_max[s]);
  rep.growth = shells > 1 && rep.shell_max.back() > inner;
  return rep;
}

}  // namespace zerodim
