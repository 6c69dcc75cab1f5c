#pragma once

#include <compare>
#include <string>
#include <vector>

#include "log_surface.hpp"

namespace zerodim {

// A named intermediate field: sigma, alpha_j or beta_j, optionally barred.
struct field_label {
  enum class name : int { sigma = 0, alpha = 1, beta = 2 };
  name n = name::sigma;
  int index = 0;
  bool bar = false;

  auto operator<=>(const field_label&) const = default;

  field_label conjugate() const { return {n, index, !bar}; }

  std::string str() const {
    std::string s = n == name::sigma ? "sigma" : n == name::alpha ? "alpha" : "beta";
    if (n != name::sigma) s += std::to_string(index);
    if (bar) s += "bar";
    return s;
  }
};

// The k-1 fields Psi left after integrating Phi, in matrix order:
//   odd k:  alpha_1, beta_1, alpha_3, beta_3, ..., alpha_{k-2}, beta_{k-2}
//   even k: sigma, alpha_2, beta_2, ..., alpha_{k-2}, beta_{k-2}
inline std::vector<field_label> psi_labels(int k) {
  if (k < 2) throw usage_error("k must be at least 2");
  std::vector<field_label> out;
  int first = 1;
  if (k % 2 == 0) {
    out.push_back({field_label::name::sigma, 0, false});
    first = 2;
  }
  for (int j = first; j <= k - 2; j += 2) {
    out.push_back({field_label::name::alpha, j, false});
    out.push_back({field_label::name::beta, j, false});
  }
  return out;
}

// Number of real integration axes needed for dchi(Psi): sigma is one plain
// axis (two for the complex model), every crossed pair is two (four).
inline int psi_quadrature_dimension(const model_spec& m) {
  int d = m.k % 2 == 0 ? 1 : 0;
  d += 2 * ((m.k - 1) / 2);
  return m.is_real() ? d : 2 * d;
}

}  // namespace zerodim
