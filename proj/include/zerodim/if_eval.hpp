#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "contour_quadrature.hpp"
#include "domains.hpp"
#include "if_matrix.hpp"
#include "standard.hpp"

namespace zerodim {

// Contour amplitude used by if_eval.
//
// For k = 3 the deformation can be certified directly: on the contours
// Re Q <= a eps^2 + 2 sqrt2 eps with a = 2 (real) or 4 (complex), and
// 1 - g^2 Q = g^2 (lambda^{-1/3} - Q) stays away from zero while that bound
// is below Re lambda^{-1/3}. The largest eps <= 1/2 keeping it under
// 3/4 Re lambda^{-1/3} is used; every smaller eps passes the same test, so
// the integral does not depend on the choice. Elsewhere the lemma's
// epsilon_for(k) is used.
struct if_epsilon_choice {
  double epsilon = 0.0;
  bool certified = false;
  // Lower bound on |det(1 - g M)| over the contours, when known.
  double det_floor = 0.0;
};

inline double if_certificate_bound(const model_spec& m, double eps) {
  const double a = m.is_real() ? 2.0 : 4.0;
  return a * eps * eps + 2.0 * std::numbers::sqrt2 * eps;
}

inline if_epsilon_choice certified_if_epsilon(const model_spec& m, const log_surface_point& lambda) {
  m.validate();
  const double lemma_eps = epsilon_for(m.k);
  const double lemma_floor = std::pow(0.5 * std::sin(std::numbers::pi / (4.0 * m.k)), 2);
  if (m.k != 3 || lambda.is_origin()) return {lemma_eps, false, lemma_floor};
  const double re_c = lambda.pow(-1.0 / 3.0).real();
  const double R = 0.75 * re_c;
  if (!(R > 0.0)) return {lemma_eps, false, lemma_floor};
  const double a = m.is_real() ? 2.0 : 4.0;
  const double b = 2.0 * std::numbers::sqrt2;
  double eps = std::min(0.5, (-b + std::sqrt(b * b + 4.0 * a * R)) / (2.0 * a));
  if (eps < lemma_eps) return {lemma_eps, false, lemma_floor};
  const double g2 = std::pow(lambda.modulus(), 1.0 / 3.0);
  return {eps, true, g2 * (re_c - if_certificate_bound(m, eps))};
}

struct if_options {
  std::optional<double> epsilon;
  std::optional<double> tolerance;
  double rho = 1.0;
  int max_k_real = 5;
  int max_k_complex = 3;
  // Unset: chosen from the dimension (see quadrature_for_dimension).
  std::optional<multi_options> quadrature;
};

// 4D tensor grids start one level down and compare against a 3/4 rule; the
// level-0 grid alone is ~1e11 calls and level -1 already meets 1e-4.
inline multi_options quadrature_for_dimension(int d) {
  multi_options q;
  q.max_dimension = std::max(q.max_dimension, d);
  if (d >= 4) {
    q.min_level = -1;
    q.coarse_fraction = 0.75;
  }
  return q;
}

struct if_result {
  quadrature_estimate estimate;
  double epsilon = 0.0;
  bool certified = false;
  int dimension = 0;
};

inline double default_tolerance_for_dimension(int d) {
  switch (d) {
    case 1: return 1e-10;
    case 2: return 1e-6;
    case 3: return 1e-5;
    default: return 1e-4;
  }
}

namespace detail {

inline cplx fast_inverse(cplx d) {
  const double inv = 1.0 / (d.real() * d.real() + d.imag() * d.imag());
  return {d.real() * inv, -d.imag() * inv};
}

// Principal square root without the overflow guards of std::sqrt; the
// arguments here are O(1) to O(1e6).
inline cplx fast_sqrt(cplx d) {
  const double x = d.real(), y = d.imag();
  const double r = std::sqrt(x * x + y * y);
  if (x >= 0.0) {
    const double t = std::sqrt(0.5 * (r + x));
    return {t, t > 0.0 ? 0.5 * y / t : 0.0};
  }
  const double t = std::sqrt(0.5 * (r - x));
  return {0.5 * std::abs(y) / t, std::copysign(t, y)};
}

// k = 3 kernels with Q written out in the quadrature coordinates.
// Real:    Q = -alpha^2 + 2i beta = -(a + b)^2/2 + i sqrt2 (a - b)
// Complex: Q = -alpha alphabar + i (beta + betabar)
//            = -((x_a + x_b)^2 + (y_a + y_b)^2)/2 + i sqrt2 (x_a - x_b)
struct if_kernel_real3 {
  double gr, gi;
  cplx operator()(const cplx* z) const {
    constexpr double s2 = 1.41421356237309504880;
    const double ur = z[0].real() + z[1].real(), ui = z[0].imag() + z[1].imag();
    const double qr = -0.5 * (ur * ur - ui * ui) - s2 * (z[0].imag() - z[1].imag());
    const double qi = -ur * ui + s2 * (z[0].real() - z[1].real());
    const double dr = 1.0 - (gr * qr - gi * qi), di = -(gr * qi + gi * qr);
    return fast_inverse(fast_sqrt({dr, di}));
  }
};

struct if_kernel_complex3 {
  double gr, gi;
  cplx operator()(const cplx* z) const {
    constexpr double s2 = 1.41421356237309504880;
    const double Xr = z[0].real() + z[2].real(), Xi = z[0].imag() + z[2].imag();
    const double Yr = z[1].real() + z[3].real(), Yi = z[1].imag() + z[3].imag();
    const double qr = -0.5 * (Xr * Xr - Xi * Xi + Yr * Yr - Yi * Yi) - s2 * (z[0].imag() - z[2].imag());
    const double qi = -(Xr * Xi + Yr * Yi) + s2 * (z[0].real() - z[2].real());
    const double dr = 1.0 - (gr * qr - gi * qi), di = -(gr * qi + gi * qr);
    const double inv = 1.0 / (dr * dr + di * di);
    return {dr * inv, -di * inv};
  }
};

// Maps quadrature coordinates to Psi and evaluates the determinant power.
// Real model: sigma is one coordinate, a crossed pair (a, b) gives
//   alpha = (a + b)/sqrt2, beta = (a - b)/sqrt2.
// Complex model: sigma = x + iy, sigmabar = x - iy; a crossed pair uses
//   a = x_a + i y_a, abar = x_a - i y_a (same for b) and the same rotation.
struct if_kernel {
  int k = 3;
  bool real = true;
  bool has_sigma = false;
  int pairs = 0;
  cplx g2{};

  cplx operator()(const cplx* z) const {
    constexpr double r2 = 0.70710678118654752440;
    const cplx I{0.0, 1.0};
    std::array<cplx, 6> h{}, hb{};
    int n = 0;
    const cplx* p = z;
    if (has_sigma) {
      if (real) {
        h[n] = hb[n] = p[0];
        p += 1;
      } else {
        h[n] = p[0] + I * p[1];
        hb[n] = p[0] - I * p[1];
        p += 2;
      }
      ++n;
    }
    for (int j = 0; j < pairs; ++j) {
      if (real) {
        h[n] = hb[n] = r2 * (p[0] + p[1]);
        h[n + 1] = hb[n + 1] = r2 * (p[0] - p[1]);
        p += 2;
      } else {
        const cplx a = p[0] + I * p[1], ab = p[0] - I * p[1];
        const cplx b = p[2] + I * p[3], bb = p[2] - I * p[3];
        h[n] = r2 * (a + b);
        hb[n] = r2 * (ab + bb);
        h[n + 1] = r2 * (a - b);
        hb[n + 1] = r2 * (ab - bb);
        p += 4;
      }
      n += 2;
    }
    h[n] = hb[n] = 1.0;
    // indices here are 0-based: h[0] = h_1
    cplx q{};
    int s = 0;
    if (k % 2) {
      q = -h[0] * hb[0];
      s = 1;
    }
    cplx cross{};
    for (; s + 1 <= n; s += 2) cross += h[s] * hb[s + 1] + h[s + 1] * hb[s];
    q += I * cross;
    const cplx d = 1.0 - g2 * q;
    return real ? fast_inverse(fast_sqrt(d)) : fast_inverse(d);
  }
};

}  // namespace detail

// Z_k(lambda) from the intermediate-field integral
//   int dchi(Psi) det(1 - g_k M_k(Psi))^{-1/2}   (real)
//   int dchi(Psi) det(1 - g_k M_k(Psi))^{-1}     (complex)
// with the crossed measures realized from independent +-i Gaussians, each
// on the tanh contour whose sign matches its covariance.
inline if_result if_eval(const model_spec& m, const log_surface_point& lambda, const if_options& opt = {}) {
  m.validate();
  const int cap = m.is_real() ? opt.max_k_real : opt.max_k_complex;
  if (m.k > cap)
    throw usage_error("intermediate-field evaluation capped at k <= " + std::to_string(cap) + " for the " +
                      to_string(m.field) + " model");
  if (!in_domain(lambda, {domain_kind::E, m.k - 1, opt.rho}))
    throw domain_error("lambda outside E^" + std::to_string(m.k - 1) + "_rho");

  if_result res;
  res.dimension = psi_quadrature_dimension(m);
  const double tol = opt.tolerance.value_or(default_tolerance_for_dimension(res.dimension));
  if (!(tol > 0.0)) throw usage_error("tolerance must be positive");

  auto choice = certified_if_epsilon(m, lambda);
  res.epsilon = choice.epsilon;
  res.certified = choice.certified;
  if (opt.epsilon) {
    const double e = *opt.epsilon;
    if (!(e > 0.0 && e < 1.0)) throw usage_error("epsilon must lie in (0, 1)");
    if (e > choice.epsilon && e > epsilon_for(m.k))
      throw usage_error("epsilon above the certified range for this lambda");
    res.epsilon = e;
    res.certified = choice.certified && e <= choice.epsilon;
    if (res.certified) {
      const double g2 = std::pow(lambda.modulus(), 1.0 / 3.0);
      choice.det_floor = g2 * (lambda.pow(-1.0 / 3.0).real() - if_certificate_bound(m, e));
    }
  }
  if (lambda.is_origin()) {
    res.estimate = exact_one();
    return res;
  }

  const double power = m.is_real() ? 0.5 : 1.0;
  const double bound = std::pow(choice.det_floor, -power);
  const double var = m.is_real() ? 1.0 : 0.5;
  std::vector<contour_axis> axes;
  const bool has_sigma = m.k % 2 == 0;
  const int pairs = (m.k - 1) / 2;
  if (has_sigma) {
    const double T = real_gaussian_truncation(var, tol, bound);
    for (int j = 0; j < (m.is_real() ? 1 : 2); ++j)
      axes.push_back({{0.0, contour_sign::plus, T, tol}, cplx(var, 0.0)});
  }
  const double T = imaginary_gaussian_truncation(res.epsilon, var, tol, bound);
  for (int j = 0; j < pairs; ++j) {
    const int reps = m.is_real() ? 1 : 2;
    for (int r = 0; r < reps; ++r) axes.push_back({{res.epsilon, contour_sign::minus, T, tol}, cplx(0.0, -var)});
    for (int r = 0; r < reps; ++r) axes.push_back({{res.epsilon, contour_sign::plus, T, tol}, cplx(0.0, var)});
  }
  const cplx g = lambda.g(m.k);
  const cplx g2 = g * g;
  multi_options q = opt.quadrature ? *opt.quadrature : quadrature_for_dimension(res.dimension);
  q.max_dimension = std::max(q.max_dimension, res.dimension);
  if (m.k == 3 && m.is_real())
    res.estimate = multi_contour_integrate(detail::if_kernel_real3{g2.real(), g2.imag()}, axes, tol, q);
  else if (m.k == 3)
    res.estimate = multi_contour_integrate(detail::if_kernel_complex3{g2.real(), g2.imag()}, axes, tol, q);
  else
    res.estimate = multi_contour_integrate(detail::if_kernel{m.k, m.is_real(), has_sigma, pairs, g2}, axes, tol, q);
  return res;
}

}  // namespace zerodim
