#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "esf/padic.hpp"
#include "esf/primes.hpp"

using esf::Int;
using esf::Rational;
using esf::ValuationCertificate;

namespace {
Rational rat(long n, long d) { return Rational(Int(n), Int(d)); }
}

TEST_CASE("integer valuations") {
  CHECK(esf::vp_int(Int(45), 3) == 2);
  CHECK(esf::vp_int(Int(7), 5) == 0);
  CHECK(esf::vp_int(Int(817), 43) == 1);  // 817 = 19 * 43, the k=2 forbidden factor
  CHECK(esf::vp_int(Int(-24), 2) == 3);
  CHECK_THROWS_AS(esf::vp_int(Int(0), 3), std::domain_error);
}

TEST_CASE("rational valuations") {
  CHECK(esf::vp_rat(rat(4, 3), 3) == -1);
  CHECK(esf::vp_rat(rat(9, 5), 3) == 2);
  CHECK_THROWS_AS(esf::vp_rat(Rational(0), 3), std::domain_error);

  const Rational s = esf_single(esf::OddProgression::odd_reciprocals(100), 2);
  CHECK(esf::vp_rat(s, 23) == -2);
}

TEST_CASE("valuation is a homomorphism on random samples") {
  std::mt19937_64 rng(0xe5f0002);
  std::uniform_int_distribution<long> dist(1, 50000);
  for (std::uint64_t p : {2, 3, 5, 7, 23}) {
    for (int i = 0; i < 200; ++i) {
      const Rational q = rat(dist(rng), dist(rng));
      const Rational r = rat(dist(rng), dist(rng));
      CHECK(esf::vp_rat(q * r, p) == esf::vp_rat(q, p) + esf::vp_rat(r, p));
      const Rational sum = q + r;
      if (!sum.is_zero())
        CHECK(esf::vp_rat(sum, p) >= std::min(esf::vp_rat(q, p), esf::vp_rat(r, p)));
    }
  }
}

TEST_CASE("the t-rule") {
  CHECK(esf::compute_t(100, 23) == -1);  // 23 * 9 = 207 > 199
  CHECK(esf::compute_t(115, 23) == -1);  // 23 * 11 = 253 > 229
  CHECK(esf::compute_t(12, 3) == -1);    // 3 * 9 = 27 > 23
  CHECK(esf::compute_t(5, 3) == 0);      // 3 * 3 = 9 <= 9
  CHECK_THROWS_AS(esf::compute_t(5, 11), std::invalid_argument);
}

TEST_CASE("counting odd multiples directly") {
  CHECK(esf::count_multiples_oracle(100, 23) == 4);  // 23, 69, 115, 161
  CHECK(esf::count_multiples_oracle(3, 3) == 1);
  CHECK(esf::count_multiples_oracle(12, 3) == 4);  // 3, 9, 15, 21
}

TEST_CASE("t-rule agrees with the count oracle for all n <= 2000") {
  const esf::SieveTable sieve(4000);
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    for (std::uint64_t p = 3; p <= 2 * n - 1; p += 2) {
      if (!sieve.is_prime(p)) continue;
      REQUIRE(esf::count_multiples_oracle(n, p) ==
              n / p + static_cast<std::uint64_t>(esf::compute_t(n, p) + 1));
    }
  }
}

TEST_CASE("issuing a valuation certificate") {
  SECTION("n=100 k=2 p=23") {
    const ValuationCertificate c = esf::issue_valuation_certificate(100, 2, 23);
    CHECK(c.t == -1);
    // 4 odd multiples of 23 below 199, so the reduced sum has 4 terms
    CHECK(c.reduced_index == 4);
    CHECK(c.small_esf == rat(86, 105));
    CHECK(c.claimed_valuation == -2);
    CHECK(esf::check_valuation_certificate(c));
  }

  SECTION("n=50 k=2 p=17") {
    const ValuationCertificate c = esf::issue_valuation_certificate(50, 2, 17);
    CHECK(esf::check_valuation_certificate(c));
    CHECK(c.p > 10);  // 2k+6
  }

  SECTION("hypothesis violations name the first failed condition") {
    CHECK_THROWS_WITH(esf::issue_valuation_certificate(100, 2, 43),
                      Catch::Matchers::ContainsSubstring("forbidden")
                          || Catch::Matchers::ContainsSubstring("divides"));
    CHECK_THROWS_AS(esf::issue_valuation_certificate(100, 2, 24), esf::HypothesisError);
    CHECK_THROWS_AS(esf::issue_valuation_certificate(100, 2, 7), esf::HypothesisError);
    CHECK_THROWS_AS(esf::issue_valuation_certificate(100, 1, 23), esf::HypothesisError);
    CHECK_THROWS_AS(esf::issue_valuation_certificate(7, 2, 3), esf::HypothesisError);
  }
}

TEST_CASE("certificate tamper detection") {
  ValuationCertificate c = esf::issue_valuation_certificate(100, 2, 23);
  std::string reason;

  SECTION("claimed valuation altered") {
    c.claimed_valuation = -1;
    CHECK_FALSE(esf::check_valuation_certificate(c, &reason));
    CHECK(reason == "claimed valuation must be -k");
  }
  SECTION("prime replaced by a forbidden-factor divisor") {
    c.p = 19;  // 19 | 817
    CHECK_FALSE(esf::check_valuation_certificate(c, &reason));
  }
  SECTION("small esf altered") {
    c.small_esf = rat(2, 5);
    CHECK_FALSE(esf::check_valuation_certificate(c, &reason));
    CHECK(reason == "small esf mismatch");
  }
  SECTION("t altered") {
    c.t = 0;
    CHECK_FALSE(esf::check_valuation_certificate(c, &reason));
  }
}

TEST_CASE("k=1 certificates") {
  const ValuationCertificate c = esf::issue_k1_certificate(100, 197);
  CHECK(c.reduced_index == 1);
  CHECK(c.small_esf == Rational(1));
  CHECK(esf::check_valuation_certificate(c));
  CHECK(esf::vp_rat(esf_single(esf::OddProgression::odd_reciprocals(100), 1), 197) == -1);

  CHECK_THROWS_AS(esf::issue_k1_certificate(100, 31), esf::HypothesisError);  // 3*31 < 199
  CHECK_THROWS_AS(esf::issue_k1_certificate(100, 200), esf::HypothesisError);
}

TEST_CASE("certificate JSON is byte stable") {
  const ValuationCertificate c = esf::issue_valuation_certificate(100, 2, 23);
  CHECK(c.to_json() ==
        "{\"type\":\"prime_valuation\",\"n\":100,\"k\":2,\"p\":23,\"t\":-1,"
        "\"reduced_index\":4,\"small_esf\":\"86/105\",\"valuation\":-2}");
}

TEST_CASE("issued certificates match the exact valuation, n <= 300") {
  const esf::SieveTable sieve(1000);
  for (std::uint64_t n = 10; n <= 300; n += 7) {
    const auto row = esf_all(esf::OddProgression::odd_reciprocals(n));
    for (std::uint64_t k = 2; k <= std::min<std::uint64_t>(n, 9); ++k) {
      const auto p = find_window_prime(esf::PrimeWindow(n, k), sieve);
      if (!p) continue;
      const ValuationCertificate c = esf::issue_valuation_certificate(n, k, *p);
      REQUIRE(esf::check_valuation_certificate(c));
      REQUIRE(esf::vp_rat(row.at(k), *p) == -static_cast<std::int64_t>(k));
    }
  }
}

TEST_CASE("window primes exceed sqrt(2n-1), so v_p(1+2i) <= 1") {
  const esf::SieveTable sieve(3000);
  for (std::uint64_t n : {100, 500, 1234, 5000}) {
    for (std::uint64_t k = 2; k <= 9; ++k) {
      const auto p = find_window_prime(esf::PrimeWindow(n, k), sieve);
      if (!p) continue;
      REQUIRE(*p * *p > 2 * n - 1);
      for (std::uint64_t i = 0; i < n; ++i)
        REQUIRE(esf::vp_int(Int(static_cast<unsigned long>(1 + 2 * i)), *p) <= 1);
    }
  }
}
