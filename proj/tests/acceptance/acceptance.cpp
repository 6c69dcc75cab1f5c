// One PASS/FAIL line per criterion. Usage: acceptance [--slow] [c01 c02 ...]
// With no ids every criterion runs; c05 needs --slow (the 4D integral).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <zerodim/zerodim.hpp>

using namespace zerodim;

namespace {

struct outcome {
  bool pass = true;
  std::string detail;
};

struct criterion {
  std::string id;
  double budget_s;
  bool slow;
  std::function<outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= z;
  return r;
}

double odd_df(int n) {
  double r = 1;
  for (int j = 1; j <= n; ++j) r *= 2 * j - 1;
  return r;
}

contour_axis imaginary_axis(double s, double C, double eps, double tol, int degree = 0, double growth = 0.0) {
  return {{eps, sign_of(s), imaginary_gaussian_truncation(eps, C, tol, 1.0, degree, growth), tol}, cplx(0.0, s * C)};
}

outcome c01() {
  outcome o;
  for (unsigned p = 0; p <= 20; ++p) {
    if ((2 * p + 1) * catalan3(p) != binomial(3 * p, p)) o.pass = false;
    if (binomial(3 * p, p) * factorial(2 * p) != factorial(3 * p) / factorial(p)) o.pass = false;
  }
  const auto b = borel_leroy_coefficients(partition_series({3, field_kind::complex}, 20), 2);
  for (unsigned p = 0; p <= 20; ++p)
    if (b.coeffs[p] != rational(g_series_coefficient(p))) o.pass = false;
  o.detail = "p <= 20, exact integer/rational comparisons";
  return o;
}

outcome c02() {
  outcome o;
  double worst_moment = 0, worst_exp = 0, worst_cx = 0, worst_ratio = 0;
  auto invariance = [&](const quadrature_estimate& a, const quadrature_estimate& b) {
    const double e = std::max(a.abs_error, b.abs_error);
    const double d = std::abs(a.value - b.value);
    worst_ratio = std::max(worst_ratio, e > 0 ? d / e : (d == 0 ? 0.0 : INFINITY));
  };
  for (double s : {1.0, -1.0}) {
    for (int n = 0; n <= 5; ++n) {
      const cplx expect = std::pow(cplx(0, s), n) * odd_df(n);
      auto f = [n](const cplx* z) { return ipow(z[0], 2 * n); };
      const auto a = multi_contour_integrate(f, {imaginary_axis(s, 1.0, 0.95, 1e-9, 2 * n)}, 1e-8);
      const auto b = multi_contour_integrate(f, {imaginary_axis(s, 1.0, 0.475, 1e-9, 2 * n)}, 1e-8);
      worst_moment = std::max(worst_moment, std::abs(a.value - expect));
      invariance(a, b);
    }
    const double av = 0.3;
    auto e = [av](const cplx* z) { return std::exp(av * z[0]); };
    const auto a = multi_contour_integrate(e, {imaginary_axis(s, 1.0, 0.8, 1e-10, 0, av)}, 1e-10);
    const auto b = multi_contour_integrate(e, {imaginary_axis(s, 1.0, 0.4, 1e-10, 0, av)}, 1e-10);
    worst_exp = std::max(worst_exp, std::abs(a.value - std::exp(cplx(0, s) * av * av / 2.0)));
    invariance(a, b);
    // z = x + i y, zbar = x - i y with x, y of covariance s i / 2; the 2D
    // grid cost grows fast as eps shrinks, so start from the widest contour
    double fact = 1;
    for (int n = 0; n <= 4; ++n) {
      if (n > 1) fact *= n;
      auto f = [n](const cplx* z) { return ipow(z[0] * z[0] + z[1] * z[1], n); };
      const auto c = multi_contour_integrate(
          f, {imaginary_axis(s, 0.5, 0.95, 4e-7, 2 * n), imaginary_axis(s, 0.5, 0.95, 4e-7, 2 * n)}, 4e-7);
      const auto d = multi_contour_integrate(
          f, {imaginary_axis(s, 0.5, 0.475, 4e-7, 2 * n), imaginary_axis(s, 0.5, 0.475, 4e-7, 2 * n)}, 4e-7);
      worst_cx = std::max(worst_cx, std::abs(c.value - std::pow(cplx(0, s), n) * fact));
      invariance(c, d);
    }
  }
  o.pass = worst_moment < 1e-8 && worst_exp < 1e-8 && worst_cx < 1e-6 && worst_ratio <= 3.0;
  o.detail = fmt("moments %.1e, exp %.1e, complex %.1e", worst_moment, worst_exp, worst_cx) +
             fmt(", eps/2 shift %.2f x error", worst_ratio);
  return o;
}

outcome c03() {
  outcome o;
  const model_spec m{3, field_kind::real};
  for (double lam : {0.01, 0.05, 0.1}) {
    const auto L = log_surface_point::real(lam);
    const auto r = if_eval(m, L);
    const auto s = standard_eval(m, L);
    const double rel = std::abs(r.estimate.value - s.value) / std::abs(s.value);
    if (!(rel < 1e-5) || !r.estimate.converged) o.pass = false;
    o.detail += fmt("%g: %.1e  ", lam, rel);
  }
  return o;
}

outcome c04() {
  outcome o;
  const model_spec m{3, field_kind::complex};
  double worst = 0, worst_id = 0;
  for (double lam : {0.01, 0.1, 0.5, 1.0}) {
    const auto L = log_surface_point::real(lam);
    const auto s = standard_eval(m, L);
    worst = std::max(worst, std::abs(improved_eval(L).value - s.value) / std::abs(s.value));
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const cplx a(-5.0 + 10.0 * i / 19, -5.0 + 10.0 * j / 19);
        worst_id = std::max(worst_id, std::abs(std::exp(action_S(L, a)) - g_of(std::sqrt(lam) * std::norm(a))));
      }
  }
  o.pass = worst < 1e-8 && worst_id < 1e-12;
  o.detail = fmt("rel %.1e, e^S identity %.1e", worst, worst_id);
  return o;
}

outcome c05() {
  outcome o;
  const model_spec m{3, field_kind::complex};
  const auto L = log_surface_point::real(0.05);
  const auto r = if_eval(m, L);
  const auto s = standard_eval(m, L);
  const double rel = std::abs(r.estimate.value - s.value) / std::abs(s.value);
  o.pass = r.estimate.converged && rel < 1e-3;
  o.detail = fmt("rel %.1e, reported error %.1e, %.2e evaluations", rel, r.estimate.abs_error,
                 static_cast<double>(r.estimate.evaluations));
  return o;
}

// Taylor coefficients by a discrete Cauchy integral on |x| = rho.
std::vector<cplx> cauchy_coeffs(const std::function<cplx(cplx)>& f, double rho, int n_coef) {
  constexpr int N = 64;
  std::vector<cplx> c(n_coef);
  for (int j = 0; j < N; ++j) {
    const double t = 2 * std::numbers::pi * j / N;
    const cplx v = f(std::polar(rho, t));
    for (int n = 0; n < n_coef; ++n) c[n] += v * std::polar(std::pow(rho, -n), -n * t) / double(N);
  }
  return c;
}

outcome c06() {
  outcome o;
  double worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const cplx x = std::polar(4.0 / 27.0 * (i + 0.5) / 10.0, 2 * std::numbers::pi * j / 10.0 - std::numbers::pi + 0.1);
      const cplx h = h_of(x);
      worst = std::max(worst, std::abs(-x * h * h * h - h + 1.0));
    }
  const auto hc = cauchy_coeffs([](cplx x) { return h_of(x); }, 0.02, 3);
  const auto gc = cauchy_coeffs([](cplx u) { return g_of(u); }, 0.05, 5);
  const std::vector<double> h_expect{1, -1, 3}, g_expect{1, 0, -3, 0, 15};
  double dev = 0;
  for (int n = 0; n < 3; ++n) dev = std::max(dev, std::abs(hc[n] - h_expect[n]));
  for (int n = 0; n < 5; ++n) dev = std::max(dev, std::abs(gc[n] - g_expect[n]));
  o.pass = worst < 1e-12 && dev < 1e-8;
  o.detail = fmt("cubic residual %.1e, expansion coefficients off by %.1e", worst, dev);
  return o;
}

outcome c07() {
  outcome o;
  for (int k : {3, 4, 5}) {
    const auto r = bound_sample_check({k, field_kind::real}, 10000, 1);
    if (r.violations() != 0) o.pass = false;
    o.detail += "k=" + std::to_string(k) + fmt(": norm %.3g/%.3g", r.max_norm, r.bound) +
                " (" + std::to_string(r.norm_violations) + " over)" +
                fmt(", eig %.3g/%.3g", r.min_eig_modulus, r.eig_floor) + fmt(", hs %.3g/%.3g", r.max_hs, r.hs_bound);
    if (r.eig_violations || r.hs_violations || r.singular)
      o.detail += " [eig " + std::to_string(r.eig_violations) + ", hs " + std::to_string(r.hs_violations) +
                  ", singular " + std::to_string(r.singular) + "]";
    o.detail += "  ";
  }
  return o;
}

outcome c08() {
  outcome o;
  const model_spec m{3, field_kind::complex};
  const auto P = pade(to_mp(borel_leroy_coefficients(partition_series(m, 16), 2)), 8, 8);
  for (double lam : {0.005, 0.01, 0.02}) {
    const auto L = log_surface_point::real(lam);
    const auto z = standard_eval(m, L).value;
    const double rel = std::abs(borel_inverse(2, P, L).value - z) / std::abs(z);
    if (!(rel < 1e-4)) o.pass = false;
    o.detail += fmt("%g: %.1e  ", lam, rel);
  }
  const auto scan = pade_pole_scan(P);
  if (!scan.ok()) o.pass = false;
  o.detail += std::to_string(scan.in_strip.size()) + " poles in strip" + fmt(" |Im u| < %.3g", scan.strip_half_width);
  return o;
}

outcome c09() {
  outcome o;
  for (auto [m, name] : {std::pair{model_spec{2, field_kind::real}, "k=2 real"},
                         std::pair{model_spec{3, field_kind::complex}, "k=3 complex"}}) {
    const auto f = remainder_growth_fit(m, log_surface_point::real(0.05), 10);
    if (!(std::abs(f.order_estimate - (m.k - 1)) <= 0.4)) o.pass = false;
    o.detail += std::string(name) + fmt(": %.3f  ", f.order_estimate);
  }
  return o;
}

outcome c10() {
  outcome o;
  for (auto f : {field_kind::real, field_kind::complex})
    for (unsigned n = 0; n <= 2; ++n)
      if (if_perturbative_coefficient({3, f}, n) != gaussian_rational(coefficient({3, f}, n))) o.pass = false;
  o.detail = "k=3, n <= 2, both models, exact Gaussian rationals";
  return o;
}

outcome c11() {
  outcome o;
  const auto grid = polar_grid(10.0, 20, 20);
  for (auto [p, q] : {std::pair{1, 0}, std::pair{1, 1}}) {
    const auto lo = action_derivative_bound_check(log_surface_point::real(1e-4), p, q, grid);
    const auto hi = action_derivative_bound_check(log_surface_point::real(1e-2), p, q, grid);
    const double expected = std::pow(100.0, (p + q) / 4.0);
    const double ratio = hi.max_abs / lo.max_abs;
    if (lo.growth || hi.growth || !(ratio > expected / 2 && ratio < expected * 2)) o.pass = false;
    o.detail += "(" + std::to_string(p) + "," + std::to_string(q) + ")" +
                fmt(": ratio %.3f vs %.3f", ratio, expected) + (lo.growth || hi.growth ? " growth  " : "  ");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--slow")
      slow = true;
    else
      only.insert(a);
  }
  const std::vector<criterion> all{
      {"c01", 1, false, c01},   {"c02", 10, false, c02}, {"c03", 60, false, c03}, {"c04", 10, false, c04},
      {"c05", 900, true, c05},  {"c06", 1, false, c06},  {"c07", 60, false, c07}, {"c08", 60, false, c08},
      {"c09", 120, false, c09}, {"c10", 60, false, c10}, {"c11", 30, false, c11},
  };
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    if (c.slow && !slow) {
      std::printf("%s SKIP (needs --slow)\n", c.id.c_str());
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over time budget %.0f s]", c.budget_s);
    }
    std::printf("%s %s %.2fs %s\n", c.id.c_str(), o.pass ? "PASS" : "FAIL", dt, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
