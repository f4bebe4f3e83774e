#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "esf/bounds.hpp"
#include "esf/esf.hpp"
#include "esf/padic.hpp"
#include "esf/primes.hpp"
#include "esf/rational.hpp"

namespace esf {

struct ExactNonInteger {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  Rational value;

  std::string to_json() const {
    std::ostringstream os;
    os << "{\"type\":\"exact_non_integer\",\"n\":" << n << ",\"k\":" << k << ",\"value\":\""
       << value.str() << "\"}";
    return os.str();
  }
};

using Certificate = std::variant<BoundCertificate, ValuationCertificate, ExactNonInteger>;

enum class CertKind { AnalyticBound = 0, PrimeValuation = 1, ExactNonInteger = 2 };

inline const char* kind_name(CertKind k) {
  switch (k) {
    case CertKind::AnalyticBound: return "analytic_bound";
    case CertKind::PrimeValuation: return "prime_valuation";
    default: return "exact_non_integer";
  }
}

inline CertKind certificate_kind(const Certificate& c) {
  if (std::holds_alternative<BoundCertificate>(c)) return CertKind::AnalyticBound;
  if (std::holds_alternative<ValuationCertificate>(c)) return CertKind::PrimeValuation;
  return CertKind::ExactNonInteger;
}

inline std::string certificate_to_json(const Certificate& c) {
  return std::visit([](const auto& v) { return v.to_json(); }, c);
}

struct Outcome {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  CertKind kind = CertKind::ExactNonInteger;
  std::uint64_t p = 0;
  std::int64_t valuation = 0;
  bool has_prime = false;
  bool ok = false;
};

struct Failure {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::string reason;
};

struct SweepReport {
  std::string sweep;
  std::uint64_t n_min = 0, n_max = 0, k_min = 0, k_max = 0;
  std::uint64_t pairs = 0;
  std::array<std::uint64_t, 3> counts{};  // indexed by CertKind
  std::vector<Failure> failures;
  std::vector<Outcome> outcomes;
  bool outcomes_included = true;  // large sweeps keep counts only
  double wall_time = 0;

  bool success() const { return failures.empty(); }

  std::string to_json(bool include_wall_time = true) const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"schema\":\"esf-report/1\",\"sweep\":\"" << sweep << "\",\"n_min\":" << n_min
       << ",\"n_max\":" << n_max << ",\"k_min\":" << k_min << ",\"k_max\":" << k_max
       << ",\"pairs\":" << pairs << ",\"counts\":{\"analytic_bound\":" << counts[0]
       << ",\"prime_valuation\":" << counts[1] << ",\"exact_non_integer\":" << counts[2]
       << "},\"failures\":[";
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (i) os << ",";
      os << "{\"n\":" << failures[i].n << ",\"k\":" << failures[i].k << ",\"reason\":\""
         << failures[i].reason << "\"}";
    }
    os << "],\"outcomes_included\":" << (outcomes_included ? "true" : "false");
    if (outcomes_included) {
      os << ",\"outcomes\":[";
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        if (i) os << ",";
        os << "{\"n\":" << o.n << ",\"k\":" << o.k << ",\"kind\":\"" << kind_name(o.kind) << "\"";
        if (o.has_prime) os << ",\"p\":" << o.p << ",\"valuation\":" << o.valuation;
        os << ",\"ok\":" << (o.ok ? "true" : "false") << "}";
      }
      os << "]";
    }
    if (include_wall_time) os << ",\"wall_time\":" << wall_time;
    os << "}";
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "n,k,kind,p,valuation,ok\n";
    if (outcomes_included) {
      for (const Outcome& o : outcomes) {
        os << o.n << "," << o.k << "," << kind_name(o.kind) << ",";
        if (o.has_prime)
          os << o.p << "," << o.valuation;
        else
          os << ",";
        os << "," << (o.ok ? "true" : "false") << "\n";
      }
    } else {
      for (const Failure& f : failures)
        os << f.n << "," << f.k << ",,,,false\n";
    }
    return os.str();
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "sweep " << sweep << ": n in [" << n_min << ", " << n_max << "], k in [" << k_min
       << ", " << k_max << "]\n"
       << "  pairs             " << pairs << "\n"
       << "  analytic_bound    " << counts[0] << "\n"
       << "  prime_valuation   " << counts[1] << "\n"
       << "  exact_non_integer " << counts[2] << "\n"
       << "  failures          " << failures.size() << "\n";
    for (const Failure& f : failures)
      os << "    n=" << f.n << " k=" << f.k << ": " << f.reason << "\n";
    return os.str();
  }
};

struct UncertifiableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifierConfig {
  std::uint64_t sieve_limit = 30000;
  std::uint64_t exact_cap = 1000;  // hard ceiling 5000
  unsigned threads = 0;            // 0 = hardware parallelism
  std::uint64_t outcome_cap = 200000;
  std::filesystem::path sieve_cache;  // empty = no cache file
};

// Per-k threshold 0.5 * e^(2k/e - 2); window primes are only asserted to
// exist for n strictly above it.
inline std::uint64_t window_sweep_lower(std::uint64_t k) {
  const double bound = 0.5 * std::exp(2.0 * static_cast<double>(k) / std::numbers::e - 2.0);
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

namespace detail {

struct NResult {
  std::vector<Outcome> outcomes;
  std::vector<Failure> failures;
  std::array<std::uint64_t, 3> counts{};
  std::uint64_t pairs = 0;
};

// Applies fn to each n in [n0, n1] and returns results in n order, so the
// merged report is identical however many workers ran.
template <typename Fn>
std::vector<NResult> map_over_n(std::uint64_t n0, std::uint64_t n1, unsigned threads, Fn&& fn) {
  if (n1 < n0) return {};
  const std::uint64_t count = n1 - n0 + 1;
  std::vector<NResult> out(count);
  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (workers > count) workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(n0 + i);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i; (i = next.fetch_add(1)) < count;) out[i] = fn(n0 + i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

inline void merge(SweepReport& report, std::vector<NResult>&& parts, bool store_outcomes) {
  for (auto& part : parts) {
    report.pairs += part.pairs;
    for (int i = 0; i < 3; ++i) report.counts[i] += part.counts[i];
    for (auto& f : part.failures) report.failures.push_back(std::move(f));
    if (store_outcomes)
      for (auto& o : part.outcomes) report.outcomes.push_back(o);
  }
  report.outcomes_included = store_outcomes;
}

}  // namespace detail

class Verifier {
public:
  explicit Verifier(VerifierConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.exact_cap > 5000)
      throw std::invalid_argument("Verifier: exact_cap ceiling is 5000");
  }

  const VerifierConfig& config() const { return cfg_; }

  // Lazily built; grows when a sweep needs a larger range.
  const SieveTable& sieve(std::uint64_t min_limit) {
    const std::uint64_t want = std::max(cfg_.sieve_limit, std::max<std::uint64_t>(min_limit, 2));
    if (!sieve_ || sieve_->limit() < want) {
      if (!cfg_.sieve_cache.empty())
        sieve_.emplace(SieveTable::load_or_build(cfg_.sieve_cache, want));
      else
        sieve_.emplace(want);
    }
    return *sieve_;
  }

  Certificate certify(std::uint64_t n, std::uint64_t k) {
    if (n < 2) throw std::invalid_argument("certify: requires n > 1");
    if (k < 1 || k > n) throw std::invalid_argument("certify: requires 1 <= k <= n");
    if (k == 1) {
      const SieveTable& s = sieve(2 * n - 1);
      if (auto p = k1_prime(s, n)) return issue_k1_certificate(n, *p);
    } else if (analytic_bound_applies(n, k)) {
      return issue_bound_certificate(n, k);
    } else {
      const SieveTable& s = sieve(n / k);
      if (auto p = find_window_prime(PrimeWindow(n, k), s))
        return issue_valuation_certificate(n, k, *p);
    }
    if (n <= cfg_.exact_cap) {
      Rational v = esf_single(OddProgression::odd_reciprocals(n), k);
      if (!v.is_integer()) return ExactNonInteger{n, k, std::move(v)};
    }
    throw UncertifiableError("certify: no strategy applies for n=" + std::to_string(n) +
                             " k=" + std::to_string(k));
  }

  bool check_certificate(const Certificate& c, std::string* reason = nullptr) const {
    if (const auto* b = std::get_if<BoundCertificate>(&c))
      return check_bound_certificate(*b, reason);
    if (const auto* v = std::get_if<ValuationCertificate>(&c))
      return check_valuation_certificate(*v, reason);
    const auto& e = std::get<ExactNonInteger>(c);
    if (e.n < 2 || e.k < 1 || e.k > e.n) {
      if (reason) *reason = "bad n, k";
      return false;
    }
    const Rational v = esf_single(OddProgression::odd_reciprocals(e.n), e.k);
    if (v != e.value) {
      if (reason) *reason = "stored value mismatch";
      return false;
    }
    if (v.is_integer()) {
      if (reason) *reason = "value is an integer";
      return false;
    }
    return true;
  }

  // Every S_k(n), 2 <= n <= n_max, 1 <= k <= n, evaluated exactly and
  // asserted non-integer.
  SweepReport sweep_exact(std::uint64_t n_max) {
    if (n_max > cfg_.exact_cap)
      throw std::length_error("sweep_exact: n_max exceeds exact_cap");
    if (n_max < 2) throw std::invalid_argument("sweep_exact: n_max must be at least 2");
    SweepReport report;
    report.sweep = "exact";
    report.n_min = 2;
    report.n_max = n_max;
    report.k_min = 1;
    report.k_max = n_max;
    const std::uint64_t total = n_max * (n_max + 1) / 2 - 1;
    const bool store = total <= cfg_.outcome_cap;
    const auto t0 = std::chrono::steady_clock::now();
    auto parts = detail::map_over_n(2, n_max, cfg_.threads, [&](std::uint64_t n) {
      detail::NResult r;
      const EsfVector row = esf_all(OddProgression::odd_reciprocals(n));
      for (std::uint64_t k = 1; k <= n; ++k) {
        const bool ok = !row.at(k).is_integer();
        ++r.pairs;
        ++r.counts[static_cast<int>(CertKind::ExactNonInteger)];
        if (store) r.outcomes.push_back({n, k, CertKind::ExactNonInteger, 0, 0, false, ok});
        if (!ok) r.failures.push_back({n, k, "S_k(n) is an integer"});
      }
      return r;
    });
    detail::merge(report, std::move(parts), store);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  }

  // For each k in [k_min, k_max] and each n in [n_min, n_max] above the
  // per-k existence threshold: find a window prime, issue the valuation
  // certificate, and recheck it.
  SweepReport sweep_window(std::uint64_t k_min, std::uint64_t k_max, std::uint64_t n_min,
                           std::uint64_t n_max) {
    if (k_min < 2 || k_min > k_max) throw std::invalid_argument("sweep_window: bad k range");
    if (n_min > n_max) throw std::invalid_argument("sweep_window: bad n range");
    const SieveTable& table = sieve(n_max / k_min);
    SweepReport report;
    report.sweep = "window";
    report.n_min = n_min;
    report.n_max = n_max;
    report.k_min = k_min;
    report.k_max = k_max;
    std::uint64_t total = 0;
    for (std::uint64_t k = k_min; k <= k_max; ++k) {
      const std::uint64_t lo = effective_n_min(k, n_min);
      if (lo <= n_max) total += n_max - lo + 1;
    }
    const bool store = total <= cfg_.outcome_cap;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = k_min; k <= k_max; ++k) {
      const std::uint64_t lo = effective_n_min(k, n_min);
      if (lo > n_max) continue;
      auto parts = detail::map_over_n(lo, n_max, cfg_.threads, [&, k](std::uint64_t n) {
        detail::NResult r;
        r.pairs = 1;
        ++r.counts[static_cast<int>(CertKind::PrimeValuation)];
        const auto p = find_window_prime(PrimeWindow(n, k), table);
        if (!p) {
          if (store) r.outcomes.push_back({n, k, CertKind::PrimeValuation, 0, 0, false, false});
          r.failures.push_back({n, k, "no admissible window prime"});
          return r;
        }
        bool ok = false;
        std::string reason;
        try {
          const ValuationCertificate c = issue_valuation_certificate(n, k, *p);
          ok = check_valuation_certificate(c, &reason);
        } catch (const HypothesisError& e) {
          reason = e.what();
        }
        if (store)
          r.outcomes.push_back(
              {n, k, CertKind::PrimeValuation, *p, -static_cast<std::int64_t>(k), true, ok});
        if (!ok) r.failures.push_back({n, k, reason.empty() ? "certificate check failed" : reason});
        return r;
      });
      detail::merge(report, std::move(parts), store);
    }
    report.outcomes_included = store;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  }

  // The full finite verification surface: every pair 2 <= n <= n_max,
  // 1 <= k <= n is certified by one of the three strategies.
  SweepReport verify_theorem(std::uint64_t n_max) {
    if (n_max < 2) throw std::invalid_argument("verify_theorem: n_max must be at least 2");
    const SieveTable& table = sieve(2 * n_max - 1);
    SweepReport report;
    report.sweep = "theorem";
    report.n_min = 2;
    report.n_max = n_max;
    report.k_min = 1;
    report.k_max = n_max;
    const std::uint64_t total = n_max * (n_max + 1) / 2 - 1;
    const bool store = total <= cfg_.outcome_cap;
    const auto t0 = std::chrono::steady_clock::now();
    auto parts = detail::map_over_n(2, n_max, cfg_.threads, [&](std::uint64_t n) {
      return theorem_row(table, n, store);
    });
    detail::merge(report, std::move(parts), store);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  }

private:
  // Largest prime p <= 2n-1; usable for the k=1 certificate iff 3p > 2n-1.
  static std::optional<std::uint64_t> k1_prime(const SieveTable& s, std::uint64_t n) {
    for (std::uint64_t p = 2 * n - 1; p >= 3; --p)
      if (s.is_prime(p)) return 3 * p > 2 * n - 1 ? std::optional(p) : std::nullopt;
    return std::nullopt;
  }

  static std::uint64_t effective_n_min(std::uint64_t k, std::uint64_t n_min) {
    return std::max({n_min, k, window_sweep_lower(k)});
  }

  // Smallest k the analytic branch accepts for this n (always >= 3, since
  // the threshold exceeds e).
  static std::uint64_t analytic_k_start(std::uint64_t n) {
    const double thr = lemma23_threshold(n) * (1.0 + kThresholdSlack);
    return static_cast<std::uint64_t>(std::ceil(thr));
  }

  detail::NResult theorem_row(const SieveTable& table, std::uint64_t n, bool store) {
    detail::NResult r;
    const std::uint64_t k_analytic = analytic_k_start(n);

    std::optional<EsfVector> row;
    if (n <= 400) row = esf_all(OddProgression::odd_reciprocals(n));

    // k = 1
    {
      ++r.pairs;
      bool ok = false;
      CertKind kind = CertKind::PrimeValuation;
      std::uint64_t p = 0;
      std::string reason = "uncertifiable";
      if (auto prime = k1_prime(table, n)) {
        p = *prime;
        try {
          ok = check_valuation_certificate(issue_k1_certificate(n, p), &reason);
        } catch (const HypothesisError& e) {
          reason = e.what();
        }
      } else if (n <= cfg_.exact_cap) {
        kind = CertKind::ExactNonInteger;
        const Rational v = row ? row->at(1) : esf_single(OddProgression::odd_reciprocals(n), 1);
        ok = !v.is_integer();
        if (!ok) reason = "S_1(n) is an integer";
      }
      ++r.counts[static_cast<int>(kind)];
      if (store) r.outcomes.push_back({n, 1, kind, p, -1, p != 0, ok});
      if (!ok) r.failures.push_back({n, 1, reason});
    }

    // 2 <= k < analytic threshold: prime window, then exact fallback
    const std::uint64_t k_stop = std::min(n, k_analytic - 1);
    for (std::uint64_t k = 2; k <= k_stop; ++k) {
      ++r.pairs;
      bool ok = false;
      CertKind kind = CertKind::PrimeValuation;
      std::uint64_t p = 0;
      std::string reason;
      const auto prime = find_window_prime(PrimeWindow(n, k), table);
      if (prime) {
        p = *prime;
        try {
          ok = check_valuation_certificate(issue_valuation_certificate(n, k, p), &reason);
        } catch (const HypothesisError& e) {
          reason = e.what();
        }
      } else if (n <= cfg_.exact_cap) {
        kind = CertKind::ExactNonInteger;
        const Rational v = row ? row->at(k) : esf_single(OddProgression::odd_reciprocals(n), k);
        ok = !v.is_integer();
        if (!ok) reason = "S_k(n) is an integer";
      } else {
        reason = "uncertifiable: no window prime and n above exact cap";
      }
      ++r.counts[static_cast<int>(kind)];
      if (store)
        r.outcomes.push_back({n, k, kind, p, -static_cast<std::int64_t>(k), p != 0, ok});
      if (!ok) r.failures.push_back({n, k, reason.empty() ? "certificate check failed" : reason});
    }

    // analytic tail [k_analytic, n]: applicability is monotone in k, so one
    // issued certificate covers the branch condition; for n <= 400 each
    // value is additionally checked exactly against 0 < S_k(n) < 1.
    if (k_analytic <= n) {
      const std::uint64_t tail = n - k_analytic + 1;
      r.pairs += tail;
      r.counts[static_cast<int>(CertKind::AnalyticBound)] += tail;
      bool branch_ok = false;
      std::string reason;
      try {
        branch_ok = check_bound_certificate(issue_bound_certificate(n, k_analytic), &reason);
      } catch (const std::exception& e) {
        reason = e.what();
      }
      if (!branch_ok)
        r.failures.push_back({n, k_analytic, reason.empty() ? "bound certificate failed" : reason});
      if (!row && !store) return r;
      for (std::uint64_t k = k_analytic; k <= n; ++k) {
        bool ok = branch_ok;
        if (row) {
          const Rational& v = row->at(k);
          ok = branch_ok && Rational(0) < v && v < Rational(1);
          if (branch_ok && !ok) r.failures.push_back({n, k, "exact S_k(n) not in (0, 1)"});
        }
        if (store) r.outcomes.push_back({n, k, CertKind::AnalyticBound, 0, 0, false, ok});
      }
    }
    return r;
  }

  VerifierConfig cfg_;
  std::optional<SieveTable> sieve_;
};

}  // namespace esf
