#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "if_layout.hpp"
#include "log_surface.hpp"

namespace zerodim {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline big_int factorial(unsigned n) {
  big_int r = 1;
  for (unsigned j = 2; j <= n; ++j) r *= j;
  return r;
}

inline big_int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  big_int r = 1;
  for (unsigned j = 1; j <= k; ++j) {
    r *= n - k + j;
    r /= j;
  }
  return r;
}

// prod_{j=1}^p (2j-1), i.e. (2p-1)!! in the usual notation.
inline big_int odd_double_factorial(unsigned p) {
  big_int r = 1;
  for (unsigned j = 1; j <= p; ++j) r *= 2 * j - 1;
  return r;
}

// a_{k,n} = (-1)^n (2kn-1)!! / (2^n n!)
inline rational real_coefficient(int k, unsigned n) {
  model_spec{k, field_kind::real}.validate();
  big_int den = factorial(n);
  den <<= n;
  rational r(odd_double_factorial(static_cast<unsigned>(k) * n), den);
  return n % 2 ? rational(-r) : r;
}

// a^c_{k,n} = (-1)^n (kn)! / n!
inline big_int complex_coefficient(int k, unsigned n) {
  model_spec{k, field_kind::complex}.validate();
  big_int r = 1;
  for (unsigned j = n + 1; j <= static_cast<unsigned>(k) * n; ++j) r *= j;
  return n % 2 ? big_int(-r) : r;
}

inline rational coefficient(const model_spec& m, unsigned n) {
  return m.is_real() ? real_coefficient(m.k, n) : rational(complex_coefficient(m.k, n));
}

// C^{(3)}_p = C(3p+1, p)/(3p+1) = C(3p, p)/(2p+1)
inline big_int catalan3(unsigned p) {
  big_int a = binomial(3 * p + 1, p);
  big_int b = binomial(3 * p, p);
  if (a % (3 * p + 1) != 0 || b % (2 * p + 1) != 0 || a / (3 * p + 1) != b / (2 * p + 1))
    throw std::logic_error("catalan3: closed forms disagree");
  return b / (2 * p + 1);
}

// Coefficient of u^{2p} in g(u): (-1)^p C(3p, p).
inline big_int g_series_coefficient(unsigned p) {
  big_int c = binomial(3 * p, p);
  return p % 2 ? big_int(-c) : c;
}

struct coefficient_series {
  model_spec model;
  std::vector<rational> coeffs;

  std::size_t order() const { return coeffs.size(); }
};

// Coefficients a_0 .. a_{max_n} of Z_k or Z^c_k.
inline coefficient_series partition_series(const model_spec& m, unsigned max_n) {
  m.validate();
  coefficient_series s{m, {}};
  s.coeffs.reserve(max_n + 1);
  for (unsigned n = 0; n <= max_n; ++n) s.coeffs.push_back(coefficient(m, n));
  return s;
}

// b_n = a_n / (order * n)!
inline coefficient_series borel_leroy_coefficients(const coefficient_series& s, int order) {
  if (order < 1) throw usage_error("Borel-Leroy order must be positive");
  coefficient_series out{s.model, {}};
  out.coeffs.reserve(s.coeffs.size());
  for (std::size_t n = 0; n < s.coeffs.size(); ++n)
    out.coeffs.push_back(s.coeffs[n] / rational(factorial(static_cast<unsigned>(order * n))));
  return out;
}

// Exact a + ib over integers or rationals.
template <class T>
struct gaussian {
  T re = 0;
  T im = 0;

  gaussian() = default;
  gaussian(T r, T i = 0) : re(std::move(r)), im(std::move(i)) {}
  gaussian(int r) : re(r), im(0) {}
  template <class U>
  explicit gaussian(const gaussian<U>& o) : re(o.re), im(o.im) {}

  static gaussian i_unit() { return {0, 1}; }

  friend gaussian operator+(const gaussian& a, const gaussian& b) { return {a.re + b.re, a.im + b.im}; }
  friend gaussian operator-(const gaussian& a, const gaussian& b) { return {a.re - b.re, a.im - b.im}; }
  friend gaussian operator-(const gaussian& a) { return {-a.re, -a.im}; }
  friend gaussian operator*(const gaussian& a, const gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  gaussian& operator+=(const gaussian& b) { return *this = *this + b; }
  gaussian& operator*=(const gaussian& b) { return *this = *this * b; }
  friend bool operator==(const gaussian& a, const gaussian& b) { return a.re == b.re && a.im == b.im; }
  bool is_zero() const { return re == 0 && im == 0; }

  friend std::ostream& operator<<(std::ostream& os, const gaussian& g) {
    return os << g.re << (g.im < 0 ? " - " : " + ") << (g.im < 0 ? T(-g.im) : g.im) << "i";
  }
};

using gaussian_int = gaussian<big_int>;
using gaussian_rational = gaussian<rational>;

// Covariances <x y> between intermediate fields; missing pairs are 0.
class covariance_table {
 public:
  void set(const field_label& a, const field_label& b, gaussian_int v) { entries_[key(a, b)] = std::move(v); }

  gaussian_int get(const field_label& a, const field_label& b) const {
    auto it = entries_.find(key(a, b));
    return it == entries_.end() ? gaussian_int{} : it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  static std::pair<field_label, field_label> key(const field_label& a, const field_label& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::map<std::pair<field_label, field_label>, gaussian_int> entries_;
};

// Covariance of dchi(Psi): sigma standard, (alpha_j, beta_j) crossed.
// Real: <sigma sigma> = 1, <alpha beta> = -i.
// Complex: <sigma sigmabar> = 1, <alpha betabar> = <alphabar beta> = -i.
inline covariance_table crossed_table(const model_spec& m) {
  m.validate();
  const gaussian_int minus_i{0, -1};
  covariance_table t;
  for (const auto& l : psi_labels(m.k)) {
    if (l.n == field_label::name::sigma) {
      t.set(l, m.is_real() ? l : l.conjugate(), 1);
    } else if (l.n == field_label::name::alpha) {
      field_label b{field_label::name::beta, l.index, false};
      if (m.is_real()) {
        t.set(l, b, minus_i);
      } else {
        t.set(l, b.conjugate(), minus_i);
        t.set(l.conjugate(), b, minus_i);
      }
    }
  }
  return t;
}

namespace detail {

class pairing_counter {
 public:
  pairing_counter(std::vector<field_label> labels, const covariance_table& t) : labels_(std::move(labels)) {
    const std::size_t L = labels_.size();
    cov_.resize(L * L);
    for (std::size_t a = 0; a < L; ++a)
      for (std::size_t b = 0; b < L; ++b) cov_[a * L + b] = t.get(labels_[a], labels_[b]);
  }

  // Sum over perfect pairings of the multiset with the given multiplicities.
  // The first remaining field is paired with each admissible partner; equal
  // partners are grouped and counted by multiplicity.
  gaussian_int moment(std::vector<int> counts) {
    int total = 0;
    for (int c : counts) total += c;
    if (total % 2) return {};
    return rec(counts);
  }

 private:
  gaussian_int rec(std::vector<int>& counts) {
    std::size_t i = 0;
    while (i < counts.size() && counts[i] == 0) ++i;
    if (i == counts.size()) return 1;
    auto it = memo_.find(counts);
    if (it != memo_.end()) return it->second;
    const std::vector<int> key = counts;
    const std::size_t L = labels_.size();
    gaussian_int acc;
    --counts[i];
    for (std::size_t j = i; j < L; ++j) {
      if (counts[j] == 0) continue;
      const gaussian_int& c = cov_[i * L + j];
      if (c.is_zero()) continue;
      const int mult = counts[j];
      --counts[j];
      acc += gaussian_int(big_int(mult)) * c * rec(counts);
      ++counts[j];
    }
    ++counts[i];
    memo_.emplace(key, acc);
    return acc;
  }

  std::vector<field_label> labels_;
  std::vector<gaussian_int> cov_;
  std::map<std::vector<int>, gaussian_int> memo_;
};

}  // namespace detail

// Gaussian expectation of a monomial under the measure with covariance `table`.
inline gaussian_int x_measure_moment(const std::vector<field_label>& monomial, const covariance_table& table) {
  std::vector<field_label> distinct;
  std::vector<int> counts;
  for (const auto& l : monomial) {
    std::size_t j = 0;
    while (j < distinct.size() && distinct[j] != l) ++j;
    if (j == distinct.size()) {
      distinct.push_back(l);
      counts.push_back(0);
    }
    ++counts[j];
  }
  detail::pairing_counter pc(std::move(distinct), table);
  return pc.moment(std::move(counts));
}

// Sparse polynomial in the intermediate fields with exact Gaussian-rational
// coefficients. Exponent vectors index into `labels`.
struct field_polynomial {
  std::vector<field_label> labels;
  std::map<std::vector<int>, gaussian_rational> terms;

  field_polynomial operator*(const field_polynomial& o) const {
    field_polynomial r{labels, {}};
    for (const auto& [ea, ca] : terms)
      for (const auto& [eb, cb] : o.terms) {
        std::vector<int> e(ea.size());
        for (std::size_t j = 0; j < e.size(); ++j) e[j] = ea[j] + eb[j];
        r.terms[e] += ca * cb;
      }
    std::erase_if(r.terms, [](const auto& kv) { return kv.second.is_zero(); });
    return r;
  }
};

// The rank-two invariant Q(Psi) with det(1 - g M) = 1 - g^2 Q, as a polynomial.
// Q = sum_j M[0][j] M[j][0] with M = i C H; see if_matrix.hpp for the numeric twin.
inline field_polynomial quadratic_invariant_polynomial(const model_spec& m) {
  m.validate();
  const auto psi = psi_labels(m.k);
  field_polynomial q;
  q.labels = psi;
  if (!m.is_real())
    for (const auto& l : psi) q.labels.push_back(l.conjugate());
  const std::size_t L = q.labels.size();
  const std::size_t n = psi.size();
  // h_1..h_{k-1} = Psi, h_k = 1 (index n => constant); hbar the conjugates.
  auto add = [&](gaussian_rational c, std::size_t p, bool p_bar, std::size_t r, bool r_bar) {
    std::vector<int> e(L, 0);
    auto slot = [&](std::size_t j, bool bar) {
      if (j == n) return;
      e[(bar && !m.is_real()) ? n + j : j] += 1;
    };
    slot(p, p_bar);
    slot(r, r_bar);
    q.terms[e] += c;
  };
  const gaussian_rational i_unit{0, 1};
  std::size_t p0 = 0;
  if (m.k % 2 == 1) {
    add(gaussian_rational{-1}, 0, false, 0, true);
    p0 = 1;
  }
  for (std::size_t p = p0; p + 1 <= n; p += 2) {
    add(i_unit, p, false, p + 1, true);
    add(i_unit, p + 1, false, p, true);
  }
  std::erase_if(q.terms, [](const auto& kv) { return kv.second.is_zero(); });
  return q;
}

// <Q^m> under dchi, exactly.
inline gaussian_rational if_moment_of_q_power(const model_spec& m, unsigned power) {
  field_polynomial q = quadratic_invariant_polynomial(m);
  field_polynomial acc{q.labels, {}};
  acc.terms[std::vector<int>(q.labels.size(), 0)] = gaussian_rational{1};
  for (unsigned j = 0; j < power; ++j) acc = acc * q;
  detail::pairing_counter pc(q.labels, crossed_table(m));
  gaussian_rational total;
  for (const auto& [e, c] : acc.terms) total += c * gaussian_rational(pc.moment(e));
  return total;
}

// n-th Taylor coefficient in lambda of the IF integral, from expanding
// det^{-1/2} (real) or det^{-1} (complex) in g and integrating term by term.
// g^{2m} = lambda^{m/k}, so only m = kn contributes to lambda^n.
inline gaussian_rational if_perturbative_coefficient(const model_spec& m, unsigned n, unsigned cap = 4) {
  m.validate();
  if (n > cap)
    throw usage_error("if_perturbative_coefficient: order " + std::to_string(n) + " above cap " +
                      std::to_string(cap));
  const unsigned power = static_cast<unsigned>(m.k) * n;
  gaussian_rational mom = if_moment_of_q_power(m, power);
  if (m.is_real()) {
    big_int four_pow = 1;
    four_pow <<= 2 * power;
    mom *= gaussian_rational(rational(binomial(2 * power, power), four_pow));
  }
  return mom;
}

inline std::string to_decimal(const big_int& v) { return v.str(); }

}  // namespace zerodim
