#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "esf/esf.hpp"
#include "esf/rational.hpp"

namespace esf {

// Relative margin for the float-based diagnostic inequalities. These are
// proof-replication checks, never certificates.
inline constexpr double kDiagnosticMargin = 1e-9;

// Relative slack on the analytic applicability boundary k >= threshold.
// Pairs inside the slack band are routed to the valuation/exact paths.
inline constexpr double kThresholdSlack = 0x1p-40;

// e(log(2n-1)/2 + 1): S_k(n) < 1 whenever threshold <= k <= n.
inline double lemma23_threshold(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("lemma23_threshold: n must be positive");
  return std::numbers::e * (0.5 * std::log(static_cast<double>(2 * n - 1)) + 1.0);
}

inline bool analytic_bound_applies(std::uint64_t n, std::uint64_t k) {
  const double thr = lemma23_threshold(n);
  return k <= n && static_cast<double>(k) >= thr * (1.0 + kThresholdSlack);
}

struct BoundCertificate {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double threshold = 0;       // e(log(2n-1)/2 + 1)
  double harmonic_upper = 0;  // log(2n-1)/2 + 1, an upper bound for S_1(n)

  std::string to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"type\":\"analytic_bound\",\"n\":" << n << ",\"k\":" << k
       << ",\"threshold\":" << threshold << ",\"harmonic_upper\":" << harmonic_upper
       << ",\"conclusion\":\"0 < S_k(n) < 1\"}";
    return os.str();
  }
};

// True iff exact S_1(n) < log(2n-1)/2 + 1, decided conservatively: the right
// side is rounded down before the exact comparison, so a true answer is
// certain and a borderline case reads false.
inline bool harmonic_upper_bound_check(std::uint64_t n) {
  const double rhs = 0.5 * std::log(static_cast<double>(2 * n - 1)) + 1.0;
  const double rhs_down = rhs - std::abs(rhs) * 1e-12;
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), rhs_down);
  const Rational bound(Int(q.get_num()), Int(q.get_den()));
  return esf_single(OddProgression::odd_reciprocals(n), 1) < bound;
}

inline BoundCertificate issue_bound_certificate(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::domain_error("issue_bound_certificate: requires k <= n");
  if (!analytic_bound_applies(n, k))
    throw std::domain_error("issue_bound_certificate: k below Lemma threshold");
  if (n <= 400) {
    // at this scale the claim is cheap to verify exactly
    const Rational v = esf_single(OddProgression::odd_reciprocals(n), k);
    if (!(Rational(0) < v && v < Rational(1)))
      throw std::logic_error("issue_bound_certificate: exact check 0 < S_k(n) < 1 failed");
  }
  BoundCertificate c;
  c.n = n;
  c.k = k;
  c.threshold = lemma23_threshold(n);
  c.harmonic_upper = 0.5 * std::log(static_cast<double>(2 * n - 1)) + 1.0;
  return c;
}

inline bool check_bound_certificate(const BoundCertificate& c, std::string* reason = nullptr) {
  auto fail = [&](const char* why) {
    if (reason) *reason = why;
    return false;
  };
  if (c.n < 1 || c.k < 1 || c.k > c.n) return fail("bad n, k");
  if (!analytic_bound_applies(c.n, c.k)) return fail("k below threshold");
  const double thr = lemma23_threshold(c.n);
  if (std::abs(c.threshold - thr) > std::abs(thr) * kDiagnosticMargin)
    return fail("stored threshold mismatch");
  const double hu = 0.5 * std::log(static_cast<double>(2 * c.n - 1)) + 1.0;
  if (std::abs(c.harmonic_upper - hu) > std::abs(hu) * kDiagnosticMargin)
    return fail("stored harmonic bound mismatch");
  if (c.n <= 400) {
    const Rational v = esf_single(OddProgression::odd_reciprocals(c.n), c.k);
    if (!(Rational(0) < v && v < Rational(1))) return fail("exact S_k(n) not in (0, 1)");
  }
  return true;
}

// The three auxiliary functions driving the asymptotic case split.
inline double f_eval(double x) {
  if (x <= 0.5) throw std::domain_error("f_eval: requires x > 1/2");
  return std::pow(x, 0.3) - std::numbers::e / 2 * std::log(2 * x - 1) - std::numbers::e - 3;
}

inline double g_eval(double x) { return (x + 3) * (3 * x * x + 11 * x + 9); }

inline double h_eval(double x) {
  if (x <= 0.5) throw std::domain_error("h_eval: requires x > 1/2");
  return std::numbers::e * (0.5 * std::log(2 * x - 1) + 1.0);
}

// 6*0.7^(1/2) t + e t^2 + e log 2 + 2e + 3 <= 3*0.7^(3/2) t^3, the reduced
// form of the final inequality; holds for t >= 3.10.
inline bool inequality_33_check(double t) {
  if (t <= 0) throw std::domain_error("inequality_33_check: requires t > 0");
  const double e = std::numbers::e;
  const double lhs = 6 * std::sqrt(0.7) * t + e * t * t + e * std::numbers::ln2 + 2 * e + 3;
  const double rhs = 3 * std::pow(0.7, 1.5) * t * t * t;
  return lhs <= rhs + std::abs(rhs) * kDiagnosticMargin;
}

}  // namespace esf
