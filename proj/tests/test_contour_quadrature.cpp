#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include <zerodim/contour_quadrature.hpp>

using namespace zerodim;
using Catch::Matchers::WithinAbs;

namespace {

const cplx I{0.0, 1.0};

double odd_df(int n) {
  double r = 1;
  for (int j = 1; j <= n; ++j) r *= 2 * j - 1;
  return r;
}

// Axis carrying the normalized weight of covariance c = s*i*C.
contour_axis imaginary_axis(double s, double C, double eps, double tol, int degree = 0, double growth = 0.0) {
  return {{eps, sign_of(s), imaginary_gaussian_truncation(eps, C, tol, 1.0, degree, growth), tol}, cplx(0.0, s * C)};
}

// z^n by repeated products; std::pow(complex, int) goes through exp/log.
cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= z;
  return r;
}

// Plain trapezoid on [-L, L]; spectrally accurate for entire, fast-decaying integrands.
template <class F>
double trapezoid(F f, double L, int n) {
  const double h = 2 * L / n;
  double s = 0;
  for (int j = 0; j <= n; ++j) s += (j == 0 || j == n ? 0.5 : 1.0) * f(-L + j * h);
  return s * h;
}

}  // namespace

TEST_CASE("contour parametrization", "[contour]") {
  auto p = contour_point(0.0, {0.1, contour_sign::plus, 5, 1e-8});
  CHECK(p.z == cplx(0, 0));
  CHECK_THAT(p.dz_dt.real(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(p.dz_dt.imag(), WithinAbs(0.1, 1e-15));

  auto far = contour_point(40.0, {0.3, contour_sign::plus, 50, 1e-8});
  CHECK_THAT(far.z.imag(), WithinAbs(0.3, 1e-15));
  CHECK_THAT(far.dz_dt.real(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(far.dz_dt.imag(), WithinAbs(0.0, 1e-15));

  auto m = contour_point(1.0, {0.5, contour_sign::minus, 5, 1e-8});
  CHECK(m.z.real() == 1.0);
  CHECK_THAT(m.z.imag(), WithinAbs(-0.5 * 0.76159415595576488812, 1e-15));
}

TEST_CASE("contour spec validation", "[contour]") {
  CHECK_THROWS_AS((contour_spec{1.0, contour_sign::plus, 5, 1e-8}.validate()), usage_error);
  CHECK_THROWS_AS((contour_spec{0.1, contour_sign::plus, -1, 1e-8}.validate()), usage_error);
  CHECK_THROWS_AS((contour_spec{0.1, contour_sign::plus, 5, 0}.validate()), usage_error);
  CHECK_NOTHROW((contour_spec{0.0, contour_sign::plus, 5, 1e-8}.validate()));
}

TEST_CASE("real line quadrature", "[contour]") {
  const double norm = 1.0 / std::sqrt(2 * std::numbers::pi);
  auto q = real_line_integrate([&](double x) { return norm * std::exp(-x * x / 2); }, 1e-12);
  CHECK(q.converged);
  CHECK_THAT(q.value.real(), WithinAbs(1.0, 1e-12));

  auto q4 = real_line_integrate([&](double x) { return norm * std::exp(-x * x / 2) * std::pow(x, 4); }, 1e-10);
  CHECK(q4.converged);
  CHECK_THAT(q4.value.real(), WithinAbs(3.0, 1e-10));

  auto f = [&](double x) { return norm * std::exp(-x * x / 2 - std::pow(x, 4) / 2); };
  auto z = real_line_integrate(f, 1e-13);
  const double ref = trapezoid(f, 12.0, 4000);
  CHECK(z.converged);
  CHECK_THAT(z.value.real(), WithinAbs(ref, 1e-12));
  CHECK(trapezoid(f, 12.0, 2000) == Catch::Approx(ref).epsilon(1e-14));
}

TEST_CASE("half line quadrature", "[contour]") {
  auto q = half_line_integrate([](double r) { return std::exp(-r) * r * r; }, 1e-12);
  CHECK(q.converged);
  CHECK_THAT(q.value.real(), WithinAbs(2.0, 1e-12));
}

TEST_CASE("normalized imaginary Gaussian", "[contour]") {
  const double tol = 1e-10;
  const double eps = 0.3;
  contour_spec spec{eps, contour_sign::plus, imaginary_gaussian_truncation(eps, 1.0, tol), tol};
  auto q = contour_integrate([](cplx z) { return std::exp(-z * z / (2.0 * I)) / std::sqrt(2 * std::numbers::pi * I); },
                             spec);
  CHECK(q.converged);
  CHECK(q.abs_error <= tol);
  CHECK(std::abs(q.value - 1.0) < tol);
  CHECK(q.truncation == spec.truncation);
}

TEST_CASE("imaginary Gaussian moments", "[contour]") {
  for (double s : {1.0, -1.0}) {
    for (int n = 0; n <= 5; ++n) {
      auto ax = imaginary_axis(s, 1.0, 0.95, 1e-9, 2 * n);
      auto q = multi_contour_integrate([n](const cplx* z) { return ipow(z[0], 2 * n); }, {ax}, 1e-8);
      const cplx expect = std::pow(cplx(0, s), n) * odd_df(n);
      INFO("sign=" << s << " n=" << n << " got " << q.value);
      CHECK(q.converged);
      CHECK(std::abs(q.value - expect) < 1e-8);

      auto odd = multi_contour_integrate([n](const cplx* z) { return ipow(z[0], 2 * n + 1); },
                                         {imaginary_axis(s, 1.0, 0.95, 1e-10, 2 * n + 1)}, 1e-8);
      CHECK(std::abs(odd.value) < 1e-10);

      // same moment on the flatter contour: larger cancellation, honest error
      auto half = multi_contour_integrate([n](const cplx* z) { return ipow(z[0], 2 * n); },
                                          {imaginary_axis(s, 1.0, 0.475, 1e-9, 2 * n)}, 1e-8);
      CHECK(std::abs(half.value - q.value) <= 3 * std::max(half.abs_error, q.abs_error));
      CHECK(std::abs(half.value - expect) <= half.abs_error);
    }
  }
}

TEST_CASE("exponential moment", "[contour]") {
  for (double s : {1.0, -1.0}) {
    const double a = 0.3;
    for (double eps : {0.8, 0.4}) {
      auto q = multi_contour_integrate([a](const cplx* z) { return std::exp(a * z[0]); },
                                       {imaginary_axis(s, 1.0, eps, 1e-10, 0, a)}, 1e-10);
      const cplx expect = std::exp(cplx(0, s) * a * a / 2.0);
      CHECK(q.converged);
      CHECK(std::abs(q.value - expect) < 1e-8);
    }
  }
}

TEST_CASE("contour independence", "[contour]") {
  // sum_j c_j z^j up to degree 8 with covariance -2i.
  auto poly = [](const cplx* zp) {
    const cplx z = zp[0];
    return 1.0 + 0.5 * z - 0.25 * z * z + cplx(0.1, 0.2) * ipow(z, 4) + 0.01 * ipow(z, 7) - 0.003 * ipow(z, 8);
  };
  for (double eps : {0.9, 0.6}) {
    auto a = multi_contour_integrate(poly, {imaginary_axis(-1, 2.0, eps, 1e-9, 8)}, 1e-6);
    auto b = multi_contour_integrate(poly, {imaginary_axis(-1, 2.0, eps / 2, 1e-9, 8)}, 1e-6);
    CHECK(a.converged);
    CHECK(std::abs(a.value - b.value) <= 3 * std::max(a.abs_error, b.abs_error));
  }
}

TEST_CASE("deterministic estimates", "[contour]") {
  auto f = [](const cplx* z) { return std::exp(0.2 * z[0]) * z[1] * z[1]; };
  std::vector<contour_axis> ax{imaginary_axis(1, 1, 0.6, 1e-8, 2), imaginary_axis(-1, 1, 0.6, 1e-8, 2)};
  auto a = multi_contour_integrate(f, ax, 1e-8);
  auto b = multi_contour_integrate(f, ax, 1e-8);
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("one axis reduces to contour_integrate", "[contour]") {
  contour_spec spec{0.25, contour_sign::minus, imaginary_gaussian_truncation(0.25, 1.0, 1e-10, 1, 3), 1e-10};
  auto f = [](cplx z) { return std::exp(z * z / (2.0 * I)) * z * z * z * (1.0 + z); };
  auto a = contour_integrate(f, spec);
  auto b = multi_contour_integrate([&](const cplx* z) { return f(z[0]); }, {contour_axis{spec, std::nullopt}},
                                   spec.tolerance);
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);
}

TEST_CASE("two-dimensional normalization and crossed pair", "[contour]") {
  const double tol = 1e-6;
  std::vector<contour_axis> ax{imaginary_axis(-1, 1, 0.6, tol), imaginary_axis(1, 1, 0.6, tol)};
  auto one = multi_contour_integrate([](const cplx*) { return cplx(1.0); }, ax, tol);
  CHECK(one.converged);
  CHECK(std::abs(one.value - 1.0) < tol);

  // Densities written out by hand on bare axes.
  std::vector<contour_axis> bare = ax;
  for (auto& a : bare) a.covariance.reset();
  auto dens = multi_contour_integrate(
      [](const cplx* z) {
        return detail::gaussian_weight(z[0], cplx(0, -1)) * detail::gaussian_weight(z[1], cplx(0, 1));
      },
      bare, tol);
  CHECK(std::abs(dens.value - 1.0) < tol);

  // a ~ -i, b ~ +i; alpha = (a+b)/sqrt2, beta = (a-b)/sqrt2.
  std::vector<contour_axis> ax2{imaginary_axis(-1, 1, 0.6, tol, 2), imaginary_axis(1, 1, 0.6, tol, 2)};
  auto moment = [&](auto obs) {
    return multi_contour_integrate(
        [&](const cplx* z) {
          const cplx al = (z[0] + z[1]) / std::sqrt(2.0);
          const cplx be = (z[0] - z[1]) / std::sqrt(2.0);
          return obs(al, be);
        },
        ax2, tol);
  };
  auto ab = moment([](cplx a, cplx b) { return a * b; });
  CHECK(ab.converged);
  CHECK(std::abs(ab.value - cplx(0, -1)) < 1e-6);
  CHECK(std::abs(moment([](cplx a, cplx) { return a * a; }).value) < 1e-6);
  CHECK(std::abs(moment([](cplx, cplx b) { return b * b; }).value) < 1e-6);
}

TEST_CASE("complex imaginary Gaussian moments", "[contour]") {
  // z = x + i y, zbar = x - i y with x, y independent of covariance s*i/2.
  const double tol = 1e-7;
  for (double s : {1.0, -1.0})
    for (int n = 0; n <= 4; ++n) {
      std::vector<contour_axis> ax{imaginary_axis(s, 0.5, 0.6, tol, 2 * n), imaginary_axis(s, 0.5, 0.6, tol, 2 * n)};
      auto q = multi_contour_integrate([n](const cplx* z) { return ipow(z[0] * z[0] + z[1] * z[1], n); }, ax, tol);
      double fact = 1;
      for (int j = 2; j <= n; ++j) fact *= j;
      INFO("s=" << s << " n=" << n);
      CHECK(q.converged);
      CHECK(std::abs(q.value - std::pow(cplx(0, s), n) * fact) < 1e-6);
    }
}

TEST_CASE("dimension cap", "[contour]") {
  std::vector<contour_axis> ax(5, imaginary_axis(1, 1, 0.3, 1e-4));
  CHECK_THROWS_AS(multi_contour_integrate([](const cplx*) { return cplx(1); }, ax, 1e-4), usage_error);
}

TEST_CASE("complex Gaussian quadrature", "[contour]") {
  auto one = gaussian2d_integrate([](cplx) { return cplx(1); }, 1e-12);
  CHECK(one.converged);
  CHECK(std::abs(one.value - 1.0) < 1e-12);
  auto two = gaussian2d_integrate([](cplx a) { return std::pow(std::norm(a), 2); }, 1e-11);
  CHECK(std::abs(two.value - 2.0) < 1e-11);
  auto four = gaussian2d_integrate([](cplx a) { return std::pow(std::norm(a), 4); }, 1e-10);
  CHECK(std::abs(four.value - 24.0) < 1e-10);
  // angular dependence: |a|^2 a^2 has zero mean, a abar a abar does not
  auto ang = gaussian2d_integrate([](cplx a) { return a * a * std::norm(a) + std::conj(a) * a; }, 1e-11);
  CHECK(std::abs(ang.value - 1.0) < 1e-11);
}
