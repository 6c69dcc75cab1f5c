#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "contour_quadrature.hpp"
#include "errors.hpp"
#include "exact_series.hpp"
#include "log_surface.hpp"
#include "standard.hpp"

namespace zerodim {

using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_complex = boost::multiprecision::cpp_complex_50;

namespace detail {

inline mp_complex mp_power(const log_surface_point& lambda, unsigned n) {
  if (n == 0) return mp_complex(1);
  if (lambda.is_origin()) return mp_complex(0);
  const mp_real r = boost::multiprecision::pow(mp_real(lambda.modulus()), n);
  const mp_real phase = mp_real(lambda.argument()) * n;
  return mp_complex(r * cos(phase), r * sin(phase));
}

inline cplx to_cplx(const mp_complex& z) {
  return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

}  // namespace detail

// sum_{n<N} a_n lambda^n in 50-digit arithmetic
inline std::complex<double> taylor_partial_sum(const coefficient_series& s, const log_surface_point& lambda,
                                               std::size_t N) {
  if (N > s.order())
    throw usage_error("partial sum order " + std::to_string(N) + " exceeds the " + std::to_string(s.order()) +
                      " stored coefficients");
  mp_complex acc(0);
  for (std::size_t n = 0; n < N; ++n)
    acc += mp_complex(mp_real(s.coeffs[n])) * detail::mp_power(lambda, static_cast<unsigned>(n));
  return detail::to_cplx(acc);
}

// Z(lambda) by the standard integral, or the rotated one off its sector.
inline quadrature_estimate partition_value(const model_spec& m, const log_surface_point& lambda, double tolerance) {
  if (lambda.is_origin() || std::abs(lambda.argument()) < std::numbers::pi / 2)
    return standard_eval(m, lambda, tolerance);
  return rotated_eval(m, lambda, tolerance);
}

struct remainder_value {
  std::complex<double> value;
  double abs_error = 0.0;
};

// R^N Z(lambda) = Z(lambda) - sum_{n<N} a_n lambda^n
inline remainder_value taylor_remainder(const model_spec& m, const log_surface_point& lambda, unsigned N,
                                        double tolerance = 1e-12) {
  const auto z = partition_value(m, lambda, tolerance);
  if (!z.converged) throw convergence_error("partition function quadrature did not converge");
  const auto s = partition_series(m, N);
  return {z.value - taylor_partial_sum(s, lambda, N), z.abs_error};
}

struct growth_fit {
  // log|R^N| - N log|lambda| ~ log A + N log B + order N log N
  double log_A = 0.0;
  double log_B = 0.0;
  double order_estimate = 0.0;
  std::vector<unsigned> N;
  std::vector<double> log_remainder;
};

// Least squares over N = 1..N_max.
inline growth_fit remainder_growth_fit(const model_spec& m, const log_surface_point& lambda, unsigned N_max,
                                       double tolerance = 1e-12) {
  if (N_max < 6) throw usage_error("remainder growth fit needs N_max >= 6");
  if (lambda.is_origin()) throw usage_error("remainder growth fit needs lambda != 0");
  growth_fit out;
  const auto z = partition_value(m, lambda, tolerance);
  if (!z.converged) throw convergence_error("partition function quadrature did not converge");
  const auto s = partition_series(m, N_max);
  const unsigned rows = N_max;
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd y(rows);
  for (unsigned N = 1; N <= N_max; ++N) {
    const auto R = z.value - taylor_partial_sum(s, lambda, N);
    if (!(std::abs(R) > 10.0 * z.abs_error))
      throw convergence_error("remainder at N = " + std::to_string(N) + " is below the quadrature error");
    const double v = std::log(std::abs(R)) - N * std::log(lambda.modulus());
    out.N.push_back(N);
    out.log_remainder.push_back(v);
    A(N - 1, 0) = 1.0;
    A(N - 1, 1) = N;
    A(N - 1, 2) = N * std::log(static_cast<double>(N));
    y(N - 1) = v;
  }
  Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  out.log_A = c(0);
  out.log_B = c(1);
  out.order_estimate = c(2);
  return out;
}

// P(u)/Q(u), Q(0) = 1; coefficients kept at 50 digits.
struct pade_approximant {
  std::vector<mp_complex> p;
  std::vector<mp_complex> q;

  int m() const { return static_cast<int>(p.size()) - 1; }
  int n() const { return static_cast<int>(q.size()) - 1; }

  static mp_complex horner(const std::vector<mp_complex>& c, const mp_complex& u) {
    mp_complex acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
  }
  std::complex<double> operator()(std::complex<double> u) const {
    const mp_complex U(u.real(), u.imag());
    return detail::to_cplx(horner(p, U) / horner(q, U));
  }

  // Roots of Q (double precision companion matrix).
  std::vector<std::complex<double>> poles() const {
    std::vector<cplx> c;
    for (const auto& v : q) c.push_back(detail::to_cplx(v));
    double scale = 0.0;
    for (auto v : c) scale = std::max(scale, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= 1e-30 * scale) c.pop_back();
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + d);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b);
    });
    return out;
  }
};

// [m/n] Pade from c_0..c_{m+n}.
inline pade_approximant pade(const std::vector<mp_complex>& c, int m, int n) {
  if (m < 0 || n < 0) throw usage_error("Pade degrees must be nonnegative");
  if (c.size() < static_cast<std::size_t>(m + n + 1))
    throw usage_error("Pade [" + std::to_string(m) + "/" + std::to_string(n) + "] needs " +
                      std::to_string(m + n + 1) + " coefficients");
  auto coef = [&](int j) { return j < 0 ? mp_complex(0) : c[j]; };
  pade_approximant out;
  out.q.assign(n + 1, mp_complex(0));
  out.q[0] = mp_complex(1);
  bool all_zero = true;
  for (int j = 0; j <= m + n; ++j)
    if (c[j] != mp_complex(0)) all_zero = false;
  if (all_zero) {
    out.p.assign(m + 1, mp_complex(0));
    return out;
  }
  if (n > 0) {
    // sum_{i=1..n} q_i c_{l-i} = -c_l for l = m+1..m+n
    using mat = Eigen::Matrix<mp_complex, Eigen::Dynamic, Eigen::Dynamic>;
    using vec = Eigen::Matrix<mp_complex, Eigen::Dynamic, 1>;
    mat A(n, n);
    vec b(n);
    for (int r = 0; r < n; ++r) {
      const int l = m + 1 + r;
      for (int i = 1; i <= n; ++i) A(r, i - 1) = coef(l - i);
      b(r) = -coef(l);
    }
    Eigen::FullPivLU<mat> lu(A);
    lu.setThreshold(mp_real("1e-40"));
    if (lu.rank() < n) throw singular_error("degenerate Pade table entry: singular linear system");
    vec qs = lu.solve(b);
    for (int i = 1; i <= n; ++i) out.q[i] = qs(i - 1);
  }
  out.p.assign(m + 1, mp_complex(0));
  for (int l = 0; l <= m; ++l)
    for (int i = 0; i <= std::min(l, n); ++i) out.p[l] += out.q[i] * coef(l - i);
  return out;
}

inline std::vector<mp_complex> to_mp(const coefficient_series& s) {
  std::vector<mp_complex> out;
  for (const auto& r : s.coeffs) out.emplace_back(mp_real(r));
  return out;
}

struct pole_scan_result {
  std::vector<std::complex<double>> poles;
  // half the distance from 0 to the nearest pole
  double strip_half_width = 0.0;
  // poles with Re u > 0 and |Im u| < strip_half_width
  std::vector<std::complex<double>> in_strip;
  bool ok() const { return in_strip.empty(); }
};

inline pole_scan_result pade_pole_scan(const pade_approximant& B) {
  pole_scan_result r;
  r.poles = B.poles();
  if (r.poles.empty()) {
    r.strip_half_width = std::numeric_limits<double>::infinity();
    return r;
  }
  double nearest = std::numeric_limits<double>::infinity();
  for (auto p : r.poles) nearest = std::min(nearest, std::abs(p));
  r.strip_half_width = 0.5 * nearest;
  for (auto p : r.poles)
    if (p.real() > 0.0 && std::abs(p.imag()) < r.strip_half_width) r.in_strip.push_back(p);
  return r;
}

// f(lambda) = 1/(k lambda) int_0^inf B(u) e^{-(u/lambda)^{1/k}} (u/lambda)^{1/k-1} du
//           = int_0^inf B(lambda t^k) e^{-t} dt        (t = (u/lambda)^{1/k})
template <class Bfun>
quadrature_estimate borel_inverse_fn(int order, Bfun&& B, const log_surface_point& lambda, double tolerance = 1e-10) {
  if (order < 1) throw usage_error("Borel-Leroy order must be positive");
  if (lambda.is_origin()) {
    auto q = exact_one();
    q.value = B(cplx(0.0));
    return q;
  }
  const cplx lam = lambda.value();
  return half_line_integrate([&](double t) { return B(lam * std::pow(t, order)) * std::exp(-t); }, tolerance);
}

// Pade version; refuses poles on the integration ray {lambda s : s >= 0}.
inline quadrature_estimate borel_inverse(int order, const pade_approximant& B, const log_surface_point& lambda,
                                         double tolerance = 1e-10) {
  if (!lambda.is_origin()) {
    const cplx dir = std::polar(1.0, lambda.argument());
    for (auto p : B.poles()) {
      const double along = (p * std::conj(dir)).real();
      const double off = std::abs((p * std::conj(dir)).imag());
      if (along >= 0.0 && off <= 1e-9 * (1.0 + std::abs(p)))
        throw singular_error("Pade pole on the inverse-Borel integration ray");
    }
  }
  return borel_inverse_fn(order, [&](cplx u) { return B(u); }, lambda, tolerance);
}

}  // namespace zerodim
