#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "esf/bounds.hpp"

using esf::Rational;

TEST_CASE("threshold e(log(2n-1)/2 + 1)") {
  CHECK(esf::lemma23_threshold(1) == Catch::Approx(std::numbers::e));
  CHECK(esf::lemma23_threshold(23000) == Catch::Approx(17.3).margin(0.05));
  CHECK(esf::lemma23_threshold(400) == Catch::Approx(11.8).margin(0.1));
  // h is the same function
  CHECK(esf::lemma23_threshold(23000) == Catch::Approx(esf::h_eval(23000)));
}

TEST_CASE("bound certificates") {
  SECTION("n=400 k=12 is above threshold") {
    const esf::BoundCertificate c = esf::issue_bound_certificate(400, 12);
    CHECK(c.threshold == Catch::Approx(11.8).margin(0.1));
    CHECK(esf::check_bound_certificate(c));
  }
  SECTION("n=100 k=5 is below threshold") {
    CHECK_THROWS_AS(esf::issue_bound_certificate(100, 5), std::domain_error);
  }
  SECTION("k = n endpoint") {
    const esf::BoundCertificate c = esf::issue_bound_certificate(10, 10);
    CHECK(esf::check_bound_certificate(c));
    CHECK_THROWS_AS(esf::issue_bound_certificate(10, 11), std::domain_error);
  }
  SECTION("tampered certificates fail the recheck") {
    esf::BoundCertificate c = esf::issue_bound_certificate(400, 12);
    std::string reason;
    c.k = 5;
    CHECK_FALSE(esf::check_bound_certificate(c, &reason));
    CHECK(reason == "k below threshold");
    c = esf::issue_bound_certificate(400, 12);
    c.threshold = 3.0;
    CHECK_FALSE(esf::check_bound_certificate(c, &reason));
  }
}

TEST_CASE("exact S_k(n) < 1 wherever the analytic branch applies, n <= 150") {
  for (std::uint64_t n = 2; n <= 150; ++n) {
    const auto row = esf_all(esf::OddProgression::odd_reciprocals(n));
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (!esf::analytic_bound_applies(n, k)) continue;
      REQUIRE(Rational(0) < row.at(k));
      REQUIRE(row.at(k) < Rational(1));
    }
  }
}

TEST_CASE("harmonic upper bound on S_1(n)") {
  CHECK(esf::harmonic_upper_bound_check(2));
  CHECK_FALSE(esf::harmonic_upper_bound_check(1));  // reads 1 < 1
  CHECK(esf::harmonic_upper_bound_check(400));
  for (std::uint64_t n = 2; n <= 200; ++n) CHECK(esf::harmonic_upper_bound_check(n));
}

TEST_CASE("log k! exceeds k log(threshold/e) in the proof chain") {
  // log k! > k log k - k > k log(log(2n-1)/2 + 1) whenever k >= threshold
  for (std::uint64_t n : {50, 400, 23000}) {
    const double thr = esf::lemma23_threshold(n);
    const std::uint64_t k = static_cast<std::uint64_t>(std::ceil(thr));
    double log_factorial = 0;
    for (std::uint64_t i = 2; i <= k; ++i) log_factorial += std::log(static_cast<double>(i));
    const double harmonic = 0.5 * std::log(static_cast<double>(2 * n - 1)) + 1.0;
    CHECK(log_factorial > static_cast<double>(k) * std::log(harmonic));
  }
}

TEST_CASE("f, g, h spot values") {
  CHECK(esf::f_eval(23000) > 0.0);
  CHECK(esf::h_eval(23000) >= 17.3);
  CHECK(esf::g_eval(17.3) == Catch::Approx(22273).epsilon(0.01));
  CHECK(0.5 * std::exp(2 * 17.3 / std::numbers::e - 2) > esf::g_eval(17.3));
  CHECK_THROWS_AS(esf::f_eval(0.5), std::domain_error);
  CHECK_THROWS_AS(esf::h_eval(0.25), std::domain_error);
}

TEST_CASE("f positive and increasing on [23000, 1e7]") {
  double prev = esf::f_eval(23000);
  CHECK(prev > 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = 23000 + (1e7 - 23000) * i / 1000.0;
    const double fx = esf::f_eval(x);
    CHECK(fx > 0.0);
    CHECK(fx > prev);
    prev = fx;
  }
}

TEST_CASE("exp bound dominates g on [17.3, 50]") {
  for (int i = 0; i <= 1000; ++i) {
    const double x = 17.3 + (50 - 17.3) * i / 1000.0;
    CHECK(0.5 * std::exp(2 * x / std::numbers::e - 2) > esf::g_eval(x));
  }
}

TEST_CASE("reduced cubic inequality") {
  CHECK(esf::inequality_33_check(3.10));
  CHECK_FALSE(esf::inequality_33_check(2.0));
  CHECK(esf::inequality_33_check(10.0));
  CHECK_THROWS_AS(esf::inequality_33_check(0.0), std::domain_error);
  // t = sqrt(log n) at the 23000 threshold sits inside the valid region
  CHECK(std::sqrt(std::log(23000.0)) >= 3.10);
  for (int i = 0; i <= 1000; ++i)
    CHECK(esf::inequality_33_check(3.10 + (100 - 3.10) * i / 1000.0));
}

TEST_CASE("n/(k+3) > n^0.7 for k below h(n), n >= 23000") {
  for (double n : {23000.0, 1e5, 1e6, 5e6}) {
    const double h = esf::h_eval(n);
    for (double k = 2; k < h; ++k)
      CHECK(n / (k + 3) > std::pow(n, 0.7));
  }
}
