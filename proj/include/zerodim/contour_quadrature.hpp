#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace zerodim {

using cplx = std::complex<double>;

enum class contour_sign : int { minus = -1, plus = 1 };

inline contour_sign sign_of(double x) { return x < 0 ? contour_sign::minus : contour_sign::plus; }

// z(t) = t + sign * i * epsilon * tanh(t), integrated over |t| <= truncation.
// epsilon = 0 is accepted and means the undeformed real axis.
struct contour_spec {
  double epsilon = 0.1;
  contour_sign sign = contour_sign::plus;
  double truncation = 10.0;
  double tolerance = 1e-10;

  void validate() const {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw usage_error("contour epsilon must lie in [0, 1)");
    if (!(truncation > 0.0) || !std::isfinite(truncation)) throw usage_error("contour truncation must be positive");
    if (!(tolerance > 0.0)) throw usage_error("quadrature tolerance must be positive");
  }
};

struct contour_point_result {
  cplx z;
  cplx dz_dt;
};

inline contour_point_result contour_point(double t, const contour_spec& spec) {
  const double s = static_cast<int>(spec.sign) * spec.epsilon;
  const double th = std::tanh(t);
  return {cplx(t, s * th), cplx(1.0, s * (1.0 - th * th))};
}

struct quadrature_estimate {
  cplx value{};
  double abs_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
  // Largest half-width |t| <= T used on any axis; 0 for the doubly
  // exponential schemes that map the whole line.
  double truncation = 0.0;
  int level = 0;
};

// One integration variable of a tensor-product rule. When `covariance` is
// set, the normalized Gaussian weight e^{-z^2/2c}/sqrt(2 pi c) is folded into
// the node weights and f only supplies the observable.
struct contour_axis {
  contour_spec spec;
  std::optional<cplx> covariance;
};

struct multi_options {
  int max_dimension = 4;
  int min_level = 0;
  int max_level = 6;
  // Refinement stops (non-converged) rather than exceed this many calls of f.
  double max_evaluations = 4e10;
  // Panel width in s = |t| + t^2/2 at level 0.
  double base_panel = 8.0;
  // Error per axis is |fine - coarse| with the coarse rule on this fraction
  // of the fine panels. Halving is the safe default; Gauss panels converge
  // so fast that 3/4 still overestimates, and in 4D that saves a level.
  double coarse_fraction = 0.5;
};

namespace detail {

inline constexpr int gl_points = 15;

struct axis_nodes {
  std::vector<cplx> z;
  std::vector<cplx> w;
};

inline cplx gaussian_weight(cplx z, cplx c) {
  return std::exp(-z * z / (2.0 * c)) / std::sqrt(2.0 * std::numbers::pi * c);
}

// e^{-z^2/2c}/sqrt(2 pi c) at z = t + iy. For purely imaginary c the phase
// (t^2 - y^2)/(2|c|) grows like t^2; it is carried in double-double and
// reduced modulo 2 pi so the weight keeps full relative accuracy far out.
inline cplx accurate_gaussian_weight(double t, double y, cplx c) {
  if (c.real() != 0.0 || c.imag() == 0.0) return gaussian_weight(cplx(t, y), c);
  const double ci = c.imag();
  const double t2 = t * t, t2_lo = std::fma(t, t, -t2);
  const double y2 = y * y, y2_lo = std::fma(y, y, -y2);
  const double a = t2 - y2;
  const double a_lo = ((t2 - a) - y2) + t2_lo - y2_lo;
  const double den = 2.0 * ci;
  const double q = a / den;
  const double q_lo = (std::fma(-q, den, a) + a_lo) / den;
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double kq = std::nearbyint(q / two_pi_hi);
  const double phase = (std::fma(-kq, two_pi_hi, q) - kq * two_pi_lo) + q_lo;
  // -z^2/(2c) = (i A - B)/(2 ci) with A = t^2 - y^2, B = 2 t y
  const double log_mag = -(t * y) / ci;
  return std::polar(std::exp(log_mag), phase) / std::sqrt(2.0 * std::numbers::pi * c);
}

inline cplx axis_weight(double t, const contour_axis& ax) {
  auto p = contour_point(t, ax.spec);
  cplx w = p.dz_dt;
  if (ax.covariance) w *= accurate_gaussian_weight(t, p.z.imag(), *ax.covariance);
  return w;
}

// Even number of panels on [0, T] at level 0; level L has base * 2^L, and
// level -1 is allowed so level 0 always has a coarser partner.
inline long panels_at(const contour_axis& ax, double base_panel, int level) {
  const double T = ax.spec.truncation;
  const double smax = T + 0.5 * T * T;
  long base = 2 * static_cast<long>(std::ceil(smax / (2.0 * base_panel)));
  if (base < 2) base = 2;
  return level >= 0 ? base << level : base >> (-level);
}

// Panel count of the comparison rule for a fine rule with np panels.
inline long coarse_panels(long np, double fraction) {
  return std::max(1L, std::lround(static_cast<double>(np) * fraction));
}

inline axis_nodes make_axis_nodes_n(const contour_axis& ax, long np) {
  using gl = boost::math::quadrature::gauss<double, gl_points>;
  const auto& x = gl::abscissa();
  const auto& wt = gl::weights();
  const double T = ax.spec.truncation;
  const double ds = (T + 0.5 * T * T) / static_cast<double>(np);
  auto t_of_s = [](double s) { return s / (1.0 + std::sqrt(1.0 + 2.0 * s)) * 2.0; };
  axis_nodes out;
  out.z.reserve(2 * np * gl_points);
  out.w.reserve(2 * np * gl_points);
  auto push = [&](double t, double w) {
    auto p = contour_point(t, ax.spec);
    out.z.push_back(p.z);
    out.w.push_back(w * axis_weight(t, ax));
  };
  for (long j = 0; j < np; ++j) {
    const double ta = t_of_s(ds * j);
    const double tb = j + 1 == np ? T : t_of_s(ds * (j + 1));
    const double mid = 0.5 * (ta + tb);
    const double half = 0.5 * (tb - ta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double h = half * wt[i];
      if (x[i] == 0.0) {
        push(mid, h);
        push(-mid, h);
      } else {
        for (double sgn : {1.0, -1.0}) {
          push(sgn * (mid + half * x[i]), h);
          push(sgn * (mid - half * x[i]), h);
        }
      }
    }
  }
  return out;
}

inline axis_nodes make_axis_nodes(const contour_axis& ax, double base_panel, int level) {
  return make_axis_nodes_n(ax, panels_at(ax, base_panel, level));
}

// The doubly exponential rules sample abscissas far beyond any physical
// scale, where products like inf * 0 appear. Integrands here decay, so a
// non-finite value out there is read as zero; nearby it is passed on.
inline cplx far_field_guard(double x, cplx v) {
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) return v;
  return std::abs(x) > 64.0 ? cplx{} : v;
}

struct tensor_sum_result {
  cplx value{};
  double magnitude = 0.0;
};

// Nested sums, innermost axis last. Nodes come in (+t, -t) pairs and each
// pair is added before it meets the running total, so odd integrands cancel
// exactly; each level sums its own line before handing it outward, keeping
// the reduction order fixed.
template <int D, int J, class F>
inline tensor_sum_result tensor_sum(F& f, const axis_nodes* const* ax, cplx* z) {
  const axis_nodes& a = *ax[J];
  const std::size_t n = a.z.size();
  tensor_sum_result acc;
  auto term = [&](std::size_t i) -> tensor_sum_result {
    z[J] = a.z[i];
    const cplx w = a.w[i];
    if constexpr (J + 1 == D) {
      const cplx fv = f(static_cast<const cplx*>(z));
      const double vr = w.real() * fv.real() - w.imag() * fv.imag();
      const double vi = w.real() * fv.imag() + w.imag() * fv.real();
      return {{vr, vi}, std::abs(vr) + std::abs(vi)};
    } else {
      auto inner = tensor_sum<D, J + 1>(f, ax, z);
      return {w * inner.value, std::abs(w) * inner.magnitude};
    }
  };
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) {
    auto p = term(i);
    auto m = term(i + 1);
    acc.value += p.value + m.value;
    acc.magnitude += p.magnitude + m.magnitude;
  }
  if (i < n) {
    auto p = term(i);
    acc.value += p.value;
    acc.magnitude += p.magnitude;
  }
  return acc;
}

// Sum with axis `fixed` pinned at parameter t (weight included).
template <int D, class F>
inline cplx boundary_sum(F& f, const std::array<const axis_nodes*, D>& ax, int fixed, double t,
                         const contour_axis& fixed_axis) {
  axis_nodes pin;
  pin.z.push_back(contour_point(t, fixed_axis.spec).z);
  pin.w.push_back(axis_weight(t, fixed_axis));
  std::array<const axis_nodes*, D> view = ax;
  view[fixed] = &pin;
  std::array<cplx, D> z{};
  return tensor_sum<D, 0>(f, view.data(), z.data()).value;
}

template <int D, class F>
quadrature_estimate multi_integrate_fixed(F& f, const std::vector<contour_axis>& axes, double tolerance,
                                          const multi_options& opt) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  quadrature_estimate best;
  for (const auto& a : axes) best.truncation = std::max(best.truncation, a.spec.truncation);

  {
    double first = 1.0 + opt.coarse_fraction * D;
    for (int j = 0; j < D; ++j) first *= 2.0 * gl_points * panels_at(axes[j], opt.base_panel, opt.min_level);
    if (first > opt.max_evaluations) {
      best.abs_error = std::numeric_limits<double>::infinity();
      return best;
    }
  }

  // Tail beyond |t| = T on each axis, from the decay of the boundary slices.
  double tail = 0.0;
  {
    std::array<axis_nodes, D> mid;
    std::array<const axis_nodes*, D> view{};
    for (int j = 0; j < D; ++j) {
      mid[j] = make_axis_nodes(axes[j], opt.base_panel, opt.min_level);
      view[j] = &mid[j];
    }
    for (int j = 0; j < D; ++j) {
      const double T = axes[j].spec.truncation;
      const double delta = std::min(1.0, 0.1 * T);
      for (double sgn : {1.0, -1.0}) {
        const double b_out = std::abs(boundary_sum<D>(f, view, j, sgn * T, axes[j]));
        const double b_in = std::abs(boundary_sum<D>(f, view, j, sgn * (T - delta), axes[j]));
        std::size_t per = 1;
        for (int l = 0; l < D; ++l)
          if (l != j) per *= mid[l].z.size();
        best.evaluations += 2 * per;
        if (b_out == 0.0) continue;
        const double kappa = std::log(b_in / b_out) / delta;
        tail += kappa > 0.0 ? b_out / kappa : std::numeric_limits<double>::infinity();
      }
    }
  }

  for (int level = opt.min_level; level <= opt.max_level; ++level) {
    std::array<axis_nodes, D> fine, coarse;
    double predicted = 1.0;
    for (int j = 0; j < D; ++j) {
      fine[j] = make_axis_nodes(axes[j], opt.base_panel, level);
      coarse[j] = make_axis_nodes_n(axes[j], coarse_panels(panels_at(axes[j], opt.base_panel, level), opt.coarse_fraction));
      predicted *= static_cast<double>(fine[j].z.size());
    }
    predicted *= 1.0 + opt.coarse_fraction * D;
    if (level > opt.min_level && static_cast<double>(best.evaluations) + predicted > opt.max_evaluations) break;

    std::array<const axis_nodes*, D> view{};
    std::array<cplx, D> z{};
    for (int j = 0; j < D; ++j) view[j] = &fine[j];
    auto full = tensor_sum<D, 0>(f, view.data(), z.data());
    std::size_t evals = 1;
    for (int j = 0; j < D; ++j) evals *= fine[j].z.size();
    best.evaluations += evals;

    double quad_err = 0.0;
    for (int j = 0; j < D; ++j) {
      view[j] = &coarse[j];
      quad_err += std::abs(full.value - tensor_sum<D, 0>(f, view.data(), z.data()).value);
      best.evaluations += evals / fine[j].z.size() * coarse[j].z.size();
      view[j] = &fine[j];
    }
    // each term is good to a few ulps; cancellation costs eps * sum |v|
    const double roundoff = 4.0 * eps * full.magnitude;
    best.value = full.value;
    best.abs_error = quad_err + tail + roundoff;
    best.level = level;
    best.converged = best.abs_error <= tolerance;
    if (best.converged || !(tail + roundoff < tolerance)) break;
  }
  return best;
}

}  // namespace detail

// Tensor-product contour integral of f(z_1..z_d) dz_1..dz_d. f receives a
// pointer to d complex coordinates. Axes carrying a covariance get the
// normalized Gaussian weight built in.
template <class F>
quadrature_estimate multi_contour_integrate(F&& f, const std::vector<contour_axis>& axes, double tolerance,
                                            const multi_options& opt = {}) {
  const int d = static_cast<int>(axes.size());
  if (d < 1) throw usage_error("multi_contour_integrate needs at least one axis");
  if (d > opt.max_dimension || d > 6)
    throw usage_error("integration dimension " + std::to_string(d) + " exceeds the cap of " +
                      std::to_string(std::min(opt.max_dimension, 6)));
  if (!(tolerance > 0.0)) throw usage_error("quadrature tolerance must be positive");
  for (const auto& a : axes) a.spec.validate();
  switch (d) {
    case 1: return detail::multi_integrate_fixed<1>(f, axes, tolerance, opt);
    case 2: return detail::multi_integrate_fixed<2>(f, axes, tolerance, opt);
    case 3: return detail::multi_integrate_fixed<3>(f, axes, tolerance, opt);
    case 4: return detail::multi_integrate_fixed<4>(f, axes, tolerance, opt);
    case 5: return detail::multi_integrate_fixed<5>(f, axes, tolerance, opt);
    default: return detail::multi_integrate_fixed<6>(f, axes, tolerance, opt);
  }
}

// int f(z(t)) z'(t) dt over |t| <= T. Any measure prefactor is part of f.
template <class F>
quadrature_estimate contour_integrate(F&& f, const contour_spec& spec, const multi_options& opt = {}) {
  auto g = [&f](const cplx* z) -> cplx { return f(z[0]); };
  return multi_contour_integrate(g, {contour_axis{spec, std::nullopt}}, spec.tolerance, opt);
}

// Half-width T at which a normalized imaginary-Gaussian weight with
// covariance of modulus c, times an integrand bounded by
// bound * (1 + |z|)^degree * e^{growth |z|}, leaves both tails below
// tolerance / 10.
inline double imaginary_gaussian_truncation(double epsilon, double c, double tolerance, double bound = 1.0,
                                            int degree = 0, double growth = 0.0) {
  if (!(epsilon > c * growth)) throw usage_error("imaginary Gaussian truncation needs epsilon > c * growth");
  const double pref = 20.0 * bound * (1.0 + epsilon) / std::sqrt(2.0 * std::numbers::pi * c);
  double T = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double rate = (epsilon * std::tanh(T) - c * growth) / c;
    if (rate <= 0.0) {
      T *= 2.0;
      continue;
    }
    const double rhs = std::log(std::max(pref / rate * std::pow(2.0 + T, degree) / tolerance, 2.0)) / rate;
    if (std::abs(rhs - T) < 1e-9 * T) return rhs;
    T = rhs;
  }
  return T;
}

// Same for an ordinary Gaussian of variance c on the undeformed axis.
inline double real_gaussian_truncation(double c, double tolerance, double bound = 1.0, int degree = 0) {
  double T = std::sqrt(2.0 * c);
  for (int it = 0; it < 100; ++it) {
    const double q =
        20.0 * bound * std::sqrt(c) * std::pow(1.0 + T, degree) / (T * std::sqrt(2.0 * std::numbers::pi) * tolerance);
    const double next = std::sqrt(2.0 * c * std::log(std::max(q, 2.0)));
    if (std::abs(next - T) < 1e-9 * T) return next;
    T = next;
  }
  return T;
}

// Whole real line, doubly exponential (sinh-sinh) rule.
template <class F>
quadrature_estimate real_line_integrate(F&& f, double tolerance) {
  if (!(tolerance > 0.0)) throw usage_error("quadrature tolerance must be positive");
  std::size_t count = 0;
  auto g = [&](double x) -> cplx {
    ++count;
    return detail::far_field_guard(x, cplx(f(x)));
  };
  boost::math::quadrature::sinh_sinh<double> rule(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  quadrature_estimate q;
  q.value = rule.integrate(g, std::min(1e-3 * tolerance, 1e-6), &err, &l1, &levels);
  q.abs_error = std::max(err, 8.0 * std::numeric_limits<double>::epsilon() * l1);
  q.converged = std::isfinite(q.value.real()) && std::isfinite(q.value.imag()) && q.abs_error <= tolerance;
  q.evaluations = count;
  q.level = static_cast<int>(levels);
  return q;
}

// [0, infinity), doubly exponential (exp-sinh) rule.
template <class F>
quadrature_estimate half_line_integrate(F&& f, double tolerance) {
  if (!(tolerance > 0.0)) throw usage_error("quadrature tolerance must be positive");
  std::size_t count = 0;
  auto g = [&](double x) -> cplx {
    ++count;
    return detail::far_field_guard(x, cplx(f(x)));
  };
  boost::math::quadrature::exp_sinh<double> rule(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  quadrature_estimate q;
  q.value = rule.integrate(g, std::min(1e-3 * tolerance, 1e-6), &err, &l1, &levels);
  q.abs_error = std::max(err, 8.0 * std::numeric_limits<double>::epsilon() * l1);
  q.converged = std::isfinite(q.value.real()) && std::isfinite(q.value.imag()) && q.abs_error <= tolerance;
  q.evaluations = count;
  q.level = static_cast<int>(levels);
  return q;
}

// int f(a) dmu(a) for the normalized complex Gaussian
// dmu(a) = e^{-|a|^2} d^2a / pi. Polar form: radius^2 = rho is integrated
// against e^{-rho} on [0, inf); the angle by a nested periodic trapezoid.
template <class F>
quadrature_estimate gaussian2d_integrate(F&& f, double tolerance) {
  if (!(tolerance > 0.0)) throw usage_error("quadrature tolerance must be positive");
  constexpr int max_angles = 4096;
  double angular_err = 0.0;
  bool angular_ok = true;
  std::size_t count = 0;
  auto ring = [&](double rho) -> cplx {
    const double r = std::sqrt(rho);
    int m = 4;
    cplx sum{};
    for (int j = 0; j < m; ++j) sum += f(std::polar(r, 2.0 * std::numbers::pi * j / m));
    count += m;
    cplx mean = sum / double(m);
    for (;;) {
      cplx extra{};
      for (int j = 0; j < m; ++j) extra += f(std::polar(r, 2.0 * std::numbers::pi * (j + 0.5) / m));
      count += m;
      sum += extra;
      m *= 2;
      const cplx next = sum / double(m);
      const double diff = std::abs(next - mean);
      mean = next;
      const double weighted = diff * std::exp(-rho);
      if (diff <= 1e-3 * tolerance || weighted <= 1e-3 * tolerance) {
        angular_err = std::max(angular_err, weighted);
        break;
      }
      if (m >= max_angles) {
        angular_err = std::max(angular_err, weighted);
        angular_ok = false;
        break;
      }
    }
    return detail::far_field_guard(rho, std::exp(-rho) * mean);
  };
  boost::math::quadrature::exp_sinh<double> rule(12);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  quadrature_estimate q;
  q.value = rule.integrate(ring, std::min(1e-3 * tolerance, 1e-6), &err, &l1, &levels);
  q.abs_error = std::max(err, 8.0 * std::numeric_limits<double>::epsilon() * l1) + angular_err;
  q.converged = angular_ok && std::isfinite(q.value.real()) && std::isfinite(q.value.imag()) &&
                q.abs_error <= tolerance;
  q.evaluations = count;
  q.level = static_cast<int>(levels);
  return q;
}

}  // namespace zerodim
