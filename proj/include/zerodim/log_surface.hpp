#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace zerodim {

enum class field_kind { real, complex };

inline std::string to_string(field_kind f) { return f == field_kind::real ? "real" : "complex"; }

inline field_kind parse_field_kind(const std::string& s) {
  if (s == "real") return field_kind::real;
  if (s == "complex") return field_kind::complex;
  throw usage_error("unknown model '" + s + "' (expected real or complex)");
}

// Which partition function: phi^{2k} (real) or (phibar phi)^k (complex).
struct model_spec {
  int k = 3;
  field_kind field = field_kind::real;

  void validate() const {
    if (k < 2) throw usage_error("k must be at least 2, got " + std::to_string(k));
  }
  bool is_real() const { return field == field_kind::real; }
};

// A coupling on the Riemann surface of the logarithm. The argument is never
// wrapped, so lambda and lambda * e^{2 pi i} are different points.
class log_surface_point {
 public:
  log_surface_point() = default;
  log_surface_point(double modulus, double argument) : r_(modulus), theta_(argument) {
    if (!(modulus >= 0.0) || !std::isfinite(modulus))
      throw domain_error("coupling modulus must be finite and nonnegative");
    if (!std::isfinite(argument)) throw domain_error("coupling argument must be finite");
  }

  static log_surface_point real(double x) {
    if (x < 0.0) return {-x, std::numbers::pi};
    return {x, 0.0};
  }

  double modulus() const { return r_; }
  double argument() const { return theta_; }
  bool is_origin() const { return r_ == 0.0; }

  // lambda^alpha = r^alpha e^{i alpha theta}
  std::complex<double> pow(double alpha) const {
    if (r_ == 0.0) {
      if (alpha > 0.0) return 0.0;
      if (alpha == 0.0) return 1.0;
      throw domain_error("negative power of a zero coupling");
    }
    return std::polar(std::pow(r_, alpha), alpha * theta_);
  }

  std::complex<double> value() const { return std::polar(r_, theta_); }

  // g_k = lambda^{1/(2k)}
  std::complex<double> g(int k) const { return pow(1.0 / (2.0 * k)); }

  log_surface_point conj() const { return {r_, -theta_}; }
  log_surface_point scaled(double factor) const { return {r_ * factor, theta_}; }

 private:
  double r_ = 0.0;
  double theta_ = 0.0;
};

}  // namespace zerodim
