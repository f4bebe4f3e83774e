#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "esf/esf.hpp"
#include "esf/primes.hpp"
#include "esf/rational.hpp"

namespace esf {

// A Lemma-style hypothesis failed; what() names the first failed hypothesis.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t vp_int(const Int& x, std::uint64_t p) {
  if (x == 0) throw std::domain_error("vp_int: valuation of zero is infinite");
  Int rest;
  return mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Int(static_cast<unsigned long>(p)).get_mpz_t());
}

inline std::int64_t vp_rat(const Rational& q, std::uint64_t p) {
  if (q.is_zero()) throw std::domain_error("vp_rat: valuation of zero is infinite");
  return static_cast<std::int64_t>(vp_int(q.num(), p)) -
         static_cast<std::int64_t>(vp_int(q.den(), p));
}

// t = -1 if p(1 + 2*floor(n/p)) > 2n-1, else 0. With this correction,
// floor(n/p) + t + 1 counts the multiples of p among 1, 3, ..., 2n-1.
inline int compute_t(std::uint64_t n, std::uint64_t p) {
  if (p > 2 * n - 1) throw std::invalid_argument("compute_t: requires p <= 2n-1");
  const std::uint64_t q = n / p;
  return p * (1 + 2 * q) > 2 * n - 1 ? -1 : 0;
}

// |{ i : 0 <= i <= n-1, p | 1+2i }| by direct scan.
inline std::uint64_t count_multiples_oracle(std::uint64_t n, std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    if ((1 + 2 * i) % p == 0) ++count;
  return count;
}

// Witness that v_p(S_k(n)) = -k, hence S_k(n) is not an integer. For k >= 2
// this is the prime-window construction; k = 1 uses the variant hypothesis
// set p <= 2n-1 < 3p (exactly one term denominator divisible by p).
struct ValuationCertificate {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t p = 0;
  int t = 0;                       // in {-1, 0}
  std::uint64_t reduced_index = 0; // floor(n/p) + t + 1
  Rational small_esf;              // S_k(reduced_index)
  std::int64_t claimed_valuation = 0;  // -k

  // Field order is fixed; these lines are compared byte-for-byte.
  std::string to_json() const {
    std::ostringstream os;
    os << "{\"type\":\"prime_valuation\",\"n\":" << n << ",\"k\":" << k << ",\"p\":" << p
       << ",\"t\":" << t << ",\"reduced_index\":" << reduced_index << ",\"small_esf\":\""
       << small_esf.str() << "\",\"valuation\":" << claimed_valuation << "}";
    return os.str();
  }
};

namespace detail {

// S_k(r) for r in [k, k+3]: Lemma-style closed forms, plus the plain product
// at the r = k endpoint, which the closed forms do not cover.
inline Rational small_esf_value(std::uint64_t k, std::uint64_t r) {
  if (r == k) return Rational(Int(1), odd_term_product(k));
  return closed_form(k, r);
}

}  // namespace detail

// Hypotheses are checked up front and never assumed, whoever the caller is.
inline ValuationCertificate issue_valuation_certificate(std::uint64_t n, std::uint64_t k,
                                                        std::uint64_t p) {
  if (k < 2 || k > n) throw HypothesisError("requires 1 < k <= n");
  if (!is_prime_trial(p)) throw HypothesisError("p is not prime");
  if (p <= 2 * k + 6) throw HypothesisError("p must exceed 2k+6");
  const PrimeWindow w(n, k);
  if (p * (k + 3) <= n) throw HypothesisError("p must exceed n/(k+3)");
  if (p * k > n) throw HypothesisError("p must be at most n/k");
  if (mpz_divisible_ui_p(w.forbidden_factor.get_mpz_t(), p))
    throw HypothesisError("p divides (3k^2+11k+9)(k^2+5k+5)");

  ValuationCertificate c;
  c.n = n;
  c.k = k;
  c.p = p;
  c.t = compute_t(n, p);
  c.reduced_index = n / p + c.t + 1;
  if (c.reduced_index < k || c.reduced_index > k + 3)
    throw HypothesisError("reduced index outside [k, k+3]");
  c.small_esf = detail::small_esf_value(k, c.reduced_index);
  if (vp_rat(c.small_esf, p) != 0)
    throw HypothesisError("v_p(S_k(reduced_index)) != 0");
  c.claimed_valuation = -static_cast<std::int64_t>(k);
  return c;
}

// k = 1: the largest-prime certificate. p odd prime with p <= 2n-1 < 3p
// makes p itself the only multiple of p among 1, 3, ..., 2n-1, so
// v_p(S_1(n)) = -1.
inline ValuationCertificate issue_k1_certificate(std::uint64_t n, std::uint64_t p) {
  if (n < 2) throw HypothesisError("requires n > 1");
  if (!is_prime_trial(p) || p == 2) throw HypothesisError("p is not an odd prime");
  if (p > 2 * n - 1) throw HypothesisError("p must be at most 2n-1");
  if (3 * p <= 2 * n - 1) throw HypothesisError("requires 3p > 2n-1");

  ValuationCertificate c;
  c.n = n;
  c.k = 1;
  c.p = p;
  c.t = compute_t(n, p);
  c.reduced_index = n / p + c.t + 1;
  if (c.reduced_index != 1) throw HypothesisError("reduced index must be 1");
  c.small_esf = Rational(1);
  c.claimed_valuation = -1;
  return c;
}

// Full from-scratch recheck of every stored invariant. On failure, the
// optional reason receives the first violated condition.
inline bool check_valuation_certificate(const ValuationCertificate& c,
                                        std::string* reason = nullptr) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  if (c.n < 2 || c.k < 1 || c.k > c.n) return fail("bad n, k");
  if (!is_prime_trial(c.p)) return fail("p is not prime");
  if (c.t != 0 && c.t != -1) return fail("t outside {-1, 0}");
  if (c.p > 2 * c.n - 1) return fail("p exceeds 2n-1");
  if (c.t != compute_t(c.n, c.p)) return fail("t-rule mismatch");
  if (c.reduced_index != c.n / c.p + c.t + 1) return fail("reduced index mismatch");

  if (c.k == 1) {
    if (c.p == 2) return fail("p must be odd");
    if (3 * c.p <= 2 * c.n - 1) return fail("3p must exceed 2n-1");
    if (c.reduced_index != 1) return fail("reduced index must be 1");
    if (c.small_esf != Rational(1)) return fail("small esf must be 1");
    if (c.claimed_valuation != -1) return fail("claimed valuation must be -1");
    return true;
  }

  if (c.p <= 2 * c.k + 6) return fail("p must exceed 2k+6");
  if (c.p * (c.k + 3) <= c.n) return fail("p must exceed n/(k+3)");
  if (c.p * c.k > c.n) return fail("p must be at most n/k");
  const PrimeWindow w(c.n, c.k);
  if (mpz_divisible_ui_p(w.forbidden_factor.get_mpz_t(), c.p))
    return fail("p divides forbidden factor");
  if (c.reduced_index < c.k || c.reduced_index > c.k + 3)
    return fail("reduced index outside [k, k+3]");
  if (c.small_esf != detail::small_esf_value(c.k, c.reduced_index))
    return fail("small esf mismatch");
  if (vp_rat(c.small_esf, c.p) != 0) return fail("v_p(small esf) != 0");
  if (c.claimed_valuation != -static_cast<std::int64_t>(c.k))
    return fail("claimed valuation must be -k");
  return true;
}

}  // namespace esf
