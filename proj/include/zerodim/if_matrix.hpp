#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "contour_quadrature.hpp"
#include "if_layout.hpp"
#include "log_surface.hpp"

namespace zerodim {

// One remaining intermediate field: its value and the value of its barred
// partner. In the real model the two coincide.
struct psi_entry {
  cplx value;
  cplx partner;
};

using psi_point = std::vector<psi_entry>;

inline psi_point real_psi(std::initializer_list<cplx> values) {
  psi_point p;
  for (cplx v : values) p.push_back({v, v});
  return p;
}

struct if_matrix {
  int k = 0;
  field_kind field = field_kind::real;
  Eigen::MatrixXcd H;
  Eigen::MatrixXcd C;
  Eigen::MatrixXcd M;
};

inline void check_psi(const model_spec& m, const psi_point& psi) {
  m.validate();
  if (static_cast<int>(psi.size()) != m.k - 1)
    throw usage_error("Psi must have k-1 = " + std::to_string(m.k - 1) + " entries, got " +
                      std::to_string(psi.size()));
}

// H: first row (0, Psi, 1), first column (0, Psibar, 1), zero elsewhere.
// C: identity on plain variables of Phi, [[0,-i],[-i,0]] on crossed pairs.
//   odd k:  Phi = (phi, sigma, alpha_2, beta_2, ...)
//   even k: Phi = (phi, alpha_1, beta_1, ...)
// M = i C H.
inline if_matrix build_if_matrix(const model_spec& m, const psi_point& psi) {
  check_psi(m, psi);
  const int n = m.k + 1;
  const cplx I{0.0, 1.0};
  if_matrix out{m.k, m.field, Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n), {}};
  for (int j = 1; j < m.k; ++j) {
    out.H(0, j) = psi[j - 1].value;
    out.H(j, 0) = m.is_real() ? psi[j - 1].value : psi[j - 1].partner;
  }
  out.H(0, m.k) = 1.0;
  out.H(m.k, 0) = 1.0;
  const int plain = m.k % 2 ? 2 : 1;
  for (int j = 0; j < plain; ++j) out.C(j, j) = 1.0;
  for (int j = plain; j + 1 < n; j += 2) {
    out.C(j, j + 1) = -I;
    out.C(j + 1, j) = -I;
  }
  out.M = I * out.C * out.H;
  return out;
}

// Q(Psi) with det(1 - g M) = 1 - g^2 Q. Equal to sum_j M[0][j] M[j][0];
// with h = (Psi, 1) and hbar the partners:
//   odd k:  Q = -h_1 hbar_1 + i sum_{p=2,4,..,k-1} (h_p hbar_{p+1} + h_{p+1} hbar_p)
//   even k: Q =               i sum_{p=1,3,..,k-1} (same)
inline cplx if_quadratic_invariant(const model_spec& m, const psi_point& psi) {
  check_psi(m, psi);
  const cplx I{0.0, 1.0};
  auto h = [&](int j) -> cplx { return j == m.k ? cplx(1.0) : psi[j - 1].value; };
  auto hb = [&](int j) -> cplx { return j == m.k ? cplx(1.0) : (m.is_real() ? psi[j - 1].value : psi[j - 1].partner); };
  cplx q{};
  int p = 1;
  if (m.k % 2) {
    q = -h(1) * hb(1);
    p = 2;
  }
  for (; p + 1 <= m.k; p += 2) q += I * (h(p) * hb(p + 1) + h(p + 1) * hb(p));
  return q;
}

namespace detail {

// Principal sqrt of D, which equals the branch continued from 1 along the
// straight segment 1 -> D unless that segment passes through 0.
inline cplx continued_sqrt_from_one(cplx d) {
  if (d.imag() == 0.0 && d.real() <= 0.0)
    throw branch_error("square-root continuation from 1 passes through zero");
  return std::sqrt(d);
}

inline bool nearly_singular(cplx d, cplx g2q) {
  return std::abs(d) <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(g2q));
}

}  // namespace detail

// det(1 - g M)^{-1/2} (real) or det(1 - g M)^{-1} (complex).
// For s in [0, 1], det(1 - s g M) = 1 - s^2 g^2 Q runs along the segment
// from 1 to D, so continuing the square root from 1 gives the principal
// branch unless D lies on (-inf, 0].
inline cplx if_integrand(const model_spec& m, const log_surface_point& lambda, const psi_point& psi) {
  const cplx g = lambda.g(m.k);
  const cplx g2q = g * g * if_quadratic_invariant(m, psi);
  const cplx d = 1.0 - g2q;
  if (detail::nearly_singular(d, g2q)) throw singular_error("det(1 - g M) vanishes");
  if (m.is_real()) return 1.0 / detail::continued_sqrt_from_one(d);
  return 1.0 / d;
}

// det(1 - g M)^{-1/2} by following the square root along g' = s g,
// s = 0..1, in `steps` steps and picking the sign nearest the previous value.
// Independent of the closed form above; works for any square matrix.
inline cplx tracked_inverse_sqrt_det(const Eigen::MatrixXcd& M, cplx g, int steps = 2000) {
  const long n = M.rows();
  const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n);
  cplx root = 1.0;
  for (int j = 1; j <= steps; ++j) {
    const cplx det = (one - (g * (double(j) / steps)) * M).determinant();
    if (std::abs(det) == 0.0) throw singular_error("determinant vanishes along the continuation path");
    const cplx r = std::sqrt(det);
    root = std::abs(r - root) <= std::abs(r + root) ? r : -r;
  }
  return 1.0 / root;
}

}  // namespace zerodim
