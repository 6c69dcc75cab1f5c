#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "contour_quadrature.hpp"
#include "domains.hpp"
#include "errors.hpp"
#include "if_matrix.hpp"
#include "log_surface.hpp"

namespace zerodim {

inline Eigen::MatrixXcd one_minus_gM(const model_spec& m, const psi_point& psi, const log_surface_point& lambda) {
  const auto M = build_if_matrix(m, psi);
  const long n = M.M.rows();
  return Eigen::MatrixXcd::Identity(n, n) - lambda.g(m.k) * M.M;
}

struct eigen_split {
  std::pair<std::complex<double>, std::complex<double>> nontrivial;
  // max |x - 1| over the other k-1 eigenvalues
  double trivial_deviation = 0.0;
};

// The two eigenvalues of 1 - g M farthest from 1, from the full matrix.
inline eigen_split nontrivial_eigenvalues(const model_spec& m, const psi_point& psi,
                                          const log_surface_point& lambda) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(one_minus_gM(m, psi, lambda), false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    const double da = std::abs(a - 1.0), db = std::abs(b - 1.0);
    return da != db ? da > db : a.real() < b.real();
  });
  eigen_split out;
  out.nontrivial = {ev[0], ev[1]};
  for (std::size_t j = 2; j < ev.size(); ++j) out.trivial_deviation = std::max(out.trivial_deviation, std::abs(ev[j] - 1.0));
  return out;
}

// Operator 2-norm of (1 - g M)^{-1} = 1 / smallest singular value.
inline double resolvent_norm(const model_spec& m, const psi_point& psi, const log_surface_point& lambda) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(one_minus_gM(m, psi, lambda));
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 64.0 * std::numeric_limits<double>::epsilon() * s(0))) throw singular_error("1 - g M is singular");
  return 1.0 / smin;
}

// Linear part of M: M(Psi) - M(0).
inline Eigen::MatrixXcd linear_part(const model_spec& m, const psi_point& psi) {
  psi_point zero(psi.size(), psi_entry{0.0, 0.0});
  return build_if_matrix(m, psi).M - build_if_matrix(m, zero).M;
}

inline double resolvent_bound(int k) { return 2.0 / std::sin(std::numbers::pi / (4.0 * k)); }
inline double eigenvalue_floor(int k) { return 0.5 * std::sin(std::numbers::pi / (4.0 * k)); }
inline double hilbert_schmidt_bound(int k) { return 2.0 * epsilon_for(k) * std::sqrt(static_cast<double>(k)); }

// Psi from quadrature-style coordinates z, laid out as in if_eval:
// real: [sigma] (a_1 b_1) (a_3 b_3) ...; complex: each real slot doubled
// into (x, y). Crossed pairs rotate as alpha = (a+b)/sqrt2, beta = (a-b)/sqrt2.
inline psi_point psi_from_coordinates(const model_spec& m, const std::vector<cplx>& z) {
  constexpr double r2 = 0.70710678118654752440;
  const cplx I{0.0, 1.0};
  const bool has_sigma = m.k % 2 == 0;
  const int pairs = (m.k - 1) / 2;
  const std::size_t need = (has_sigma ? 1 : 0) * (m.is_real() ? 1 : 2) + pairs * (m.is_real() ? 2 : 4);
  if (z.size() != need) throw usage_error("wrong number of contour coordinates");
  psi_point psi;
  std::size_t p = 0;
  if (has_sigma) {
    if (m.is_real()) {
      psi.push_back({z[p], z[p]});
      p += 1;
    } else {
      psi.push_back({z[p] + I * z[p + 1], z[p] - I * z[p + 1]});
      p += 2;
    }
  }
  for (int j = 0; j < pairs; ++j) {
    if (m.is_real()) {
      const cplx a = z[p], b = z[p + 1];
      psi.push_back({r2 * (a + b), r2 * (a + b)});
      psi.push_back({r2 * (a - b), r2 * (a - b)});
      p += 2;
    } else {
      const cplx a = z[p] + I * z[p + 1], ab = z[p] - I * z[p + 1];
      const cplx b = z[p + 2] + I * z[p + 3], bb = z[p + 2] - I * z[p + 3];
      psi.push_back({r2 * (a + b), r2 * (ab + bb)});
      psi.push_back({r2 * (a - b), r2 * (ab - bb)});
      p += 4;
    }
  }
  return psi;
}

// Contour sign per coordinate, 0 for undeformed sigma axes.
inline std::vector<int> coordinate_signs(const model_spec& m) {
  std::vector<int> s;
  const int reps = m.is_real() ? 1 : 2;
  if (m.k % 2 == 0)
    for (int r = 0; r < reps; ++r) s.push_back(0);
  for (int j = 0; j < (m.k - 1) / 2; ++j) {
    for (int r = 0; r < reps; ++r) s.push_back(-1);
    for (int r = 0; r < reps; ++r) s.push_back(+1);
  }
  return s;
}

struct bound_sample_report {
  int k = 0;
  field_kind field = field_kind::real;
  long samples = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double bound = 0.0;
  double eig_floor = 0.0;
  double hs_bound = 0.0;
  double max_norm = 0.0;
  double min_eig_modulus = std::numeric_limits<double>::infinity();
  double max_hs = 0.0;
  long norm_violations = 0;
  long eig_violations = 0;
  long hs_violations = 0;
  long singular = 0;
  // worst resolvent-norm sample
  double worst_lambda_modulus = 0.0;
  double worst_lambda_argument = 0.0;
  std::vector<double> worst_t;
  long violations() const { return norm_violations + eig_violations + hs_violations + singular; }
};

// Samples t in [-10, 10] per coordinate (a quarter of the samples on a
// deterministic lattice, the rest from mt19937_64(seed)) and lambda with
// modulus in (0, 1] and argument uniform in the open sector of E^{k-1}_1.
inline bound_sample_report bound_sample_check(const model_spec& m, long samples, std::uint64_t seed) {
  m.validate();
  if (samples < 0) throw usage_error("sample count must be nonnegative");
  bound_sample_report rep;
  rep.k = m.k;
  rep.field = m.field;
  rep.samples = samples;
  rep.seed = seed;
  rep.epsilon = epsilon_for(m.k);
  rep.bound = resolvent_bound(m.k);
  rep.eig_floor = eigenvalue_floor(m.k);
  rep.hs_bound = hilbert_schmidt_bound(m.k);
  if (samples == 0) {
    rep.min_eig_modulus = 0.0;
    return rep;
  }

  const auto signs = coordinate_signs(m);
  const std::size_t d = signs.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> T(-10.0, 10.0), U(0.0, 1.0);
  const double sector = (m.k - 1) * std::numbers::pi / 2.0;
  const long lattice = samples / 4;
  std::vector<double> t(d);
  std::vector<cplx> z(d), y(d);

  for (long i = 0; i < samples; ++i) {
    if (i < lattice) {
      // coordinate j walks the grid -10..10 (41 points) with its own stride
      for (std::size_t j = 0; j < d; ++j) {
        const long idx = (i * (2 * static_cast<long>(j) + 1) + static_cast<long>(j) * 13) % 41;
        t[j] = -10.0 + 0.5 * idx;
      }
    } else {
      for (auto& v : t) v = T(rng);
    }
    double r;
    do r = U(rng);
    while (r == 0.0);
    double th;
    do th = sector * (2.0 * U(rng) - 1.0);
    while (std::abs(th) >= sector);
    const log_surface_point lambda(r, th);

    for (std::size_t j = 0; j < d; ++j) {
      const double im = signs[j] * rep.epsilon * std::tanh(t[j]);
      z[j] = cplx(t[j], im);
      y[j] = cplx(im, 0.0);
    }
    const auto psi = psi_from_coordinates(m, z);

    const double hs = linear_part(m, psi_from_coordinates(m, y)).norm();
    rep.max_hs = std::max(rep.max_hs, hs);
    if (hs > rep.hs_bound * (1.0 + 1e-12)) ++rep.hs_violations;

    const auto ev = nontrivial_eigenvalues(m, psi, lambda);
    const double emin = std::min(std::abs(ev.nontrivial.first), std::abs(ev.nontrivial.second));
    rep.min_eig_modulus = std::min(rep.min_eig_modulus, emin);
    if (emin < rep.eig_floor) ++rep.eig_violations;

    double norm;
    try {
      norm = resolvent_norm(m, psi, lambda);
    } catch (const singular_error&) {
      ++rep.singular;
      continue;
    }
    if (norm > rep.max_norm) {
      rep.max_norm = norm;
      rep.worst_lambda_modulus = r;
      rep.worst_lambda_argument = th;
      rep.worst_t = t;
    }
    if (norm > rep.bound) ++rep.norm_violations;
  }
  return rep;
}

// arg(+-g sqrt(Q)) in [pi/4k, pi - pi/4k] or its mirror.
inline bool argument_sector_ok(const model_spec& m, const psi_point& psi, const log_surface_point& lambda) {
  const cplx v = lambda.g(m.k) * std::sqrt(if_quadratic_invariant(m, psi));
  if (v == cplx{}) return true;
  const double a = std::abs(std::arg(v));
  const double lo = std::numbers::pi / (4.0 * m.k);
  const double slack = 1e-12;
  return a >= lo - slack && a <= std::numbers::pi - lo + slack;
}

}  // namespace zerodim
