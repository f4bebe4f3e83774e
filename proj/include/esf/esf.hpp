#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "esf/rational.hpp"

namespace esf {

// The reciprocals' denominators m, m+d, ..., m+(n-1)d. The default object of
// interest is odd_reciprocals(n): 1, 3, ..., 2n-1.
struct OddProgression {
  std::uint64_t m = 1;
  std::uint64_t d = 2;
  std::uint64_t n = 0;

  OddProgression(std::uint64_t m_, std::uint64_t d_, std::uint64_t n_) : m(m_), d(d_), n(n_) {
    if (m == 0 || n == 0) throw std::invalid_argument("OddProgression: m, n must be positive");
  }

  static OddProgression odd_reciprocals(std::uint64_t n) { return OddProgression(1, 2, n); }

  std::uint64_t term(std::uint64_t i) const { return m + i * d; }
  bool is_odd_reciprocals() const { return m == 1 && d == 2; }
};

// Integer elementary symmetric functions E_0..E_n of the denominators
// {m+id}. S_k(n) = E_{n-k}/E_n, so the whole computation stays in integers
// and each result is reduced exactly once.
inline std::vector<Int> denominator_esf_row(const OddProgression& prog) {
  std::vector<Int> e(prog.n + 1);
  e[0] = 1;
  for (std::uint64_t i = 0; i < prog.n; ++i) {
    const unsigned long a = static_cast<unsigned long>(prog.term(i));
    for (std::uint64_t j = i + 1; j >= 1; --j)
      mpz_addmul_ui(e[j].get_mpz_t(), e[j - 1].get_mpz_t(), a);
  }
  return e;
}

struct EsfVector {
  std::uint64_t n = 0;
  std::vector<Rational> values;  // values[k-1] = S_k(n)

  const Rational& at(std::uint64_t k) const {
    if (k < 1 || k > n) throw std::out_of_range("EsfVector: k out of range");
    return values[k - 1];
  }
};

inline EsfVector esf_all(const OddProgression& prog) {
  const auto e = denominator_esf_row(prog);
  EsfVector out;
  out.n = prog.n;
  out.values.reserve(prog.n);
  for (std::uint64_t k = 1; k <= prog.n; ++k)
    out.values.emplace_back(e[prog.n - k], e[prog.n]);
  return out;
}

inline Rational esf_single(const OddProgression& prog, std::uint64_t k) {
  if (k < 1 || k > prog.n) throw std::out_of_range("esf_single: k out of range");
  const auto e = denominator_esf_row(prog);
  return Rational(e[prog.n - k], e[prog.n]);
}

// prod_{i=0}^{n-1} (1+2i)
inline Int odd_term_product(std::uint64_t n) {
  Int p = 1;
  for (std::uint64_t i = 0; i < n; ++i) p *= 2 * i + 1;
  return p;
}

// Closed forms for S_k(k+1), S_k(k+2), S_k(k+3) over 1, 1/3, ..., 1/(2n-1).
inline Rational closed_form(std::uint64_t k, std::uint64_t n) {
  if (k < 1 || n < k + 1 || n > k + 3)
    throw std::invalid_argument("closed_form: requires n - k in {1, 2, 3}");
  const Int kk(static_cast<unsigned long>(k));
  switch (n - k) {
    case 1:
      return Rational((kk + 1) * (kk + 1), odd_term_product(k + 1));
    case 2:
      return Rational((kk + 1) * (kk + 2) * (3 * kk * kk + 11 * kk + 9),
                      6 * odd_term_product(k + 2));
    default:
      return Rational(
          (kk + 1) * (kk + 2) * (kk + 3) * (kk + 3) * (kk * kk + 5 * kk + 5),
          6 * odd_term_product(k + 3));
  }
}

// Independent route to S_k(n): exact power sums p_j = sum_i 1/(m+id)^j and
// Newton's identities k e_k = sum_{j=1..k} (-1)^{j-1} e_{k-j} p_j.
inline Rational esf_newton_oracle(const OddProgression& prog, std::uint64_t k) {
  if (k < 1 || k > prog.n) throw std::out_of_range("esf_newton_oracle: k out of range");
  std::vector<Rational> p(k + 1);  // p[j] = j-th power sum
  for (std::uint64_t i = 0; i < prog.n; ++i) {
    const Rational x(Int(1), Int(static_cast<unsigned long>(prog.term(i))));
    Rational xj = x;
    for (std::uint64_t j = 1; j <= k; ++j) {
      p[j] += xj;
      xj *= x;
    }
  }
  std::vector<Rational> e(k + 1);
  e[0] = Rational(1);
  for (std::uint64_t i = 1; i <= k; ++i) {
    Rational acc;
    int sign = 1;
    for (std::uint64_t j = 1; j <= i; ++j) {
      const Rational term = e[i - j] * p[j];
      acc = sign > 0 ? acc + term : acc - term;
      sign = -sign;
    }
    e[i] = acc / Rational(static_cast<long>(i));
  }
  return e[k];
}

}  // namespace esf
