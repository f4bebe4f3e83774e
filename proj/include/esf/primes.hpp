#pragma once

#include <gmpxx.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <vector>

#include "esf/rational.hpp"

namespace esf {

inline constexpr std::uint64_t kDefaultSieveMax = 100'000'000;

// Deterministic trial division; used wherever a primality answer must not
// depend on any sieve (certificate checking, sieve self-validation).
inline bool is_prime_trial(std::uint64_t x) {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (std::uint64_t d = 3; d * d <= x; d += 2)
    if (x % d == 0) return false;
  return true;
}

// Eratosthenes bitset over [0, limit] with per-block prefix counts so that
// pi(x) is O(1).
class SieveTable {
public:
  explicit SieveTable(std::uint64_t limit, std::uint64_t max_limit = kDefaultSieveMax)
      : limit_(limit) {
    if (limit < 2) throw std::invalid_argument("SieveTable: limit must be >= 2");
    if (limit > max_limit) throw std::length_error("SieveTable: limit exceeds configured maximum");
    bits_.assign(limit / 64 + 1, ~std::uint64_t{0});
    clear_bit(0);
    clear_bit(1);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
      if (!test_bit(i)) continue;
      for (std::uint64_t j = i * i; j <= limit; j += i) clear_bit(j);
    }
    // stray bits past limit must stay clear for popcount-based counting
    for (std::uint64_t j = limit + 1; j < bits_.size() * 64; ++j) clear_bit(j);
    build_counts();
  }

  std::uint64_t limit() const { return limit_; }

  bool is_prime(std::uint64_t i) const {
    if (i > limit_) throw std::out_of_range("SieveTable: index beyond limit");
    return test_bit(i);
  }

  // pi(floor(x)) for real x in [0, limit].
  std::uint64_t prime_count(double x) const {
    if (x < 0 || x > static_cast<double>(limit_))
      throw std::out_of_range("SieveTable: prime_count argument out of range");
    return prime_count_int(static_cast<std::uint64_t>(std::floor(x)));
  }

  std::uint64_t prime_count_int(std::uint64_t x) const {
    if (x > limit_) throw std::out_of_range("SieveTable: prime_count argument out of range");
    const std::uint64_t block = x / 64;
    const std::uint64_t mask = (x % 64 == 63) ? ~std::uint64_t{0}
                                              : ((std::uint64_t{1} << (x % 64 + 1)) - 1);
    return counts_[block] + std::popcount(bits_[block] & mask);
  }

  // Cache format: "ESFSIEVE1", limit as 8-byte little-endian, then the
  // bitset as ceil((limit+1)/8) bytes, bit i at byte i/8, LSB first.
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("SieveTable: cannot open cache for writing");
    out.write(kMagic, 9);
    unsigned char hdr[8];
    for (int i = 0; i < 8; ++i) hdr[i] = static_cast<unsigned char>((limit_ >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(hdr), 8);
    const std::uint64_t nbytes = limit_ / 8 + 1;
    out.write(reinterpret_cast<const char*>(bits_.data()), static_cast<std::streamsize>(nbytes));
    if (!out) throw std::runtime_error("SieveTable: cache write failed");
  }

  static std::optional<SieveTable> load(const std::filesystem::path& path,
                                        std::uint64_t expected_limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[9];
    if (!in.read(magic, 9) || std::memcmp(magic, kMagic, 9) != 0) return std::nullopt;
    unsigned char hdr[8];
    if (!in.read(reinterpret_cast<char*>(hdr), 8)) return std::nullopt;
    std::uint64_t limit = 0;
    for (int i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(hdr[i]) << (8 * i);
    if (limit != expected_limit || limit < 2 || limit > kDefaultSieveMax) return std::nullopt;
    SieveTable t(private_tag{}, limit);
    const std::uint64_t nbytes = limit / 8 + 1;
    if (!in.read(reinterpret_cast<char*>(t.bits_.data()), static_cast<std::streamsize>(nbytes)))
      return std::nullopt;
    for (std::uint64_t j = limit + 1; j < t.bits_.size() * 64; ++j) t.clear_bit(j);
    // reject caches whose flags disagree with trial division on a spot check
    for (std::uint64_t i : {std::uint64_t{2}, std::uint64_t{3}, std::uint64_t{4}, limit / 2, limit})
      if (t.test_bit(i) != is_prime_trial(i)) return std::nullopt;
    t.build_counts();
    return t;
  }

  static SieveTable load_or_build(const std::filesystem::path& path, std::uint64_t limit) {
    if (auto t = load(path, limit)) return std::move(*t);
    SieveTable t(limit);
    try {
      t.save(path);
    } catch (const std::runtime_error&) {
      // cache is an optimization; building succeeded, so carry on
    }
    return t;
  }

private:
  struct private_tag {};
  SieveTable(private_tag, std::uint64_t limit) : limit_(limit) {
    bits_.assign(limit / 64 + 1, 0);
  }

  bool test_bit(std::uint64_t i) const { return (bits_[i / 64] >> (i % 64)) & 1; }
  void clear_bit(std::uint64_t i) { bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  void build_counts() {
    counts_.assign(bits_.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t b = 0; b < bits_.size(); ++b) {
      counts_[b] = acc;
      acc += static_cast<std::uint64_t>(std::popcount(bits_[b]));
    }
  }

  static constexpr const char kMagic[10] = "ESFSIEVE1";

  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> counts_;
};

// Panaitopol's two-sided pi(x) bounds.
inline double panaitopol_upper(double x) {
  if (x < 6) throw std::domain_error("panaitopol_upper: requires x >= 6");
  const double lx = std::log(x);
  return x / (lx - 1 - 1 / std::sqrt(lx));
}

inline double panaitopol_lower(double x) {
  if (x < 59) throw std::domain_error("panaitopol_lower: requires x >= 59");
  const double lx = std::log(x);
  return x / (lx - 1 + 1 / std::sqrt(lx));
}

// The interval (n/(k+3), n/k] together with the side conditions a usable
// valuation prime must satisfy. All comparisons are exact integer ones:
// p > n/(k+3)  <=>  p(k+3) > n,  and  p <= n/k  <=>  pk <= n.
struct PrimeWindow {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t min_exclusive_bound = 0;  // 2k+6
  Int forbidden_factor;                   // (3k^2+11k+9)(k^2+5k+5)

  PrimeWindow(std::uint64_t n_, std::uint64_t k_) : n(n_), k(k_) {
    if (n == 0 || k == 0) throw std::invalid_argument("PrimeWindow: n, k must be positive");
    min_exclusive_bound = 2 * k + 6;
    const Int kk(static_cast<unsigned long>(k));
    forbidden_factor = (3 * kk * kk + 11 * kk + 9) * (kk * kk + 5 * kk + 5);
  }

  bool contains(std::uint64_t p) const { return p * (k + 3) > n && p * k <= n; }

  bool admits(std::uint64_t p) const {
    return contains(p) && p > min_exclusive_bound &&
           !mpz_divisible_ui_p(forbidden_factor.get_mpz_t(), p);
  }
};

// Smallest prime admitted by the window, or absent.
inline std::optional<std::uint64_t> find_window_prime(const PrimeWindow& w,
                                                      const SieveTable& table) {
  const std::uint64_t hi = w.n / w.k;
  if (hi > table.limit()) throw std::out_of_range("find_window_prime: sieve does not cover n/k");
  std::uint64_t lo = w.n / (w.k + 3) + 1;
  if (lo < 2) lo = 2;
  for (std::uint64_t p = lo; p <= hi; ++p)
    if (table.is_prime(p) && w.admits(p)) return p;
  return std::nullopt;
}

}  // namespace esf
