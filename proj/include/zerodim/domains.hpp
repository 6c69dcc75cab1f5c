#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "log_surface.hpp"

namespace zerodim {

enum class domain_kind { D, E };

// D^order_rho: Re lambda^{-1/order} > 1/rho on the log surface, i.e.
//   |theta| < order pi/2 and r^{1/order} < rho cos(theta/order).
// E^order_rho: the sector r < rho, |theta| < order pi/2.
struct domain_spec {
  domain_kind kind = domain_kind::D;
  int order = 1;
  double rho = 1.0;

  void validate() const {
    if (order < 1) throw usage_error("domain order must be positive");
    if (!(rho > 0.0)) throw usage_error("domain scale rho must be positive");
  }
};

inline bool in_domain(const log_surface_point& lambda, const domain_spec& spec) {
  spec.validate();
  const double half_width = spec.order * std::numbers::pi / 2.0;
  if (lambda.is_origin()) return true;
  const double theta = lambda.argument();
  if (!(std::abs(theta) < half_width)) return false;
  if (spec.kind == domain_kind::E) return lambda.modulus() < spec.rho;
  return std::pow(lambda.modulus(), 1.0 / spec.order) < spec.rho * std::cos(theta / spec.order);
}

// Contour amplitude for which the resolvent lemma is stated.
inline double epsilon_for(int k) {
  if (k < 2) throw usage_error("k must be at least 2");
  return std::sin(std::numbers::pi / (4.0 * k)) / (4.0 * std::sqrt(static_cast<double>(k)));
}

}  // namespace zerodim
