#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "corpus.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/spectrum.hpp"

using namespace sgrf;

namespace {

std::vector<double> coeffs(const AngularPowerSpectrum& s, std::size_t begin, std::size_t count) {
  std::vector<double> out(count);
  s.coefficients(begin, out);
  return out;
}

// sum_{n >= 1} 1/n^2 by long-double partial sums plus the midpoint tail estimate.
long double basel_oracle() {
  long double s = 0.0L;
  const long N = 2000000;
  for (long n = N; n >= 1; --n) s += 1.0L / (static_cast<long double>(n) * n);
  return s + 1.0L / (N + 0.5L);
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("normalize scales a finite head to unit mass") {
    const AngularPowerSpectrum raw(corpus::half(), 1.0, {2.0, 2.0});
    const AngularPowerSpectrum n = normalize(raw);
    CHECK(n.coefficient(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(n.coefficient(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(n.is_normalized());

    const AngularPowerSpectrum one = normalize(corpus::constant());
    CHECK(one.coefficient(0) == 1.0);
  }

  TEST_CASE("normalize is idempotent") {
    for (const auto& e : corpus::all()) {
      CAPTURE(e.name);
      const AngularPowerSpectrum once = normalize(e.spec);
      const AngularPowerSpectrum twice = normalize(once);
      const auto a = coeffs(once, 0, 200);
      const auto b = coeffs(twice, 0, 200);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * (1.0 + a[i]));
      CHECK(twice.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }

  TEST_CASE("1/n^2 head with a power tail sums to pi^2/6") {
    const int L = 10000;
    std::vector<double> head(L + 1, 0.0);
    for (int n = 1; n <= L; ++n) head[n] = 1.0 / (static_cast<double>(n) * n);
    // Sum_{k >= n} 1/k^2 = 1/(n - 1/2) + O(n^-3); the tail amplitude here is
    // fitted at n = L + 1 so the descriptor matches the true tail mass.
    const double amp = (L + 1.0) / (L + 0.5);
    const AngularPowerSpectrum raw(corpus::half(), 1.0, head, TailDescriptor::power(1.0, 0.0, amp));
    const double oracle = static_cast<double>(basel_oracle());
    CHECK(std::abs(oracle - std::numbers::pi * std::numbers::pi / 6.0) <= 1e-12);
    CHECK(std::abs(raw.total_mass() - oracle) <= 1e-11);
    const AngularPowerSpectrum n = normalize(raw);
    CHECK(n.coefficient(1) == doctest::Approx(1.0 / oracle).epsilon(1e-11));
  }

  TEST_CASE("telescoping power tail gives A_n = 1/n exactly") {
    const AngularPowerSpectrum s = corpus::inverse_n();
    CHECK(s.tail_sum(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.coefficient(0) == 0.0);
    for (std::size_t n = 1; n <= 5000; n += (n < 50 ? 1 : 97)) {
      CAPTURE(n);
      CHECK(std::abs(s.tail_sum(n) * n - 1.0) <= 1e-13);
      const double a = 1.0 / (n * (n + 1.0));
      CHECK(std::abs(s.coefficient(n) - a) <= 1e-13 * a);
    }
    CHECK(std::abs(s.tail_sum(1000000000) * 1e9 - 1.0) <= 1e-12);
  }

  TEST_CASE("tail sums of a finite spectrum vanish past the support") {
    const AngularPowerSpectrum s = normalize(AngularPowerSpectrum(corpus::half(), 1.0, {1, 1, 1, 1, 1, 1}));
    CHECK(s.head_degree() == 5);
    CHECK(s.tail_sum(6) == 0.0);
    CHECK(s.tail_sum(100) == 0.0);
    CHECK(s.tail_sum(0) == doctest::Approx(1.0));
  }

  TEST_CASE("consecutive tail sums differ by a nonnegative coefficient") {
    for (const auto& e : corpus::all()) {
      CAPTURE(e.name);
      for (std::size_t n = 0; n <= static_cast<std::size_t>(e.spec.head_degree()) + 50; ++n) {
        const double a = e.spec.coefficient(n);
        CHECK(a >= 0.0);
        CHECK(std::abs((e.spec.tail_sum(n) - e.spec.tail_sum(n + 1)) - a) <= 1e-14);
      }
    }
  }

  TEST_CASE("variance spectrum conversion on S^2") {
    const AngularPowerSpectrum one = variances_to_aps({{4.0 * std::numbers::pi, 0.0, 0.0}, 2});
    CHECK(one.coefficient(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(one.coefficient(1) == 0.0);

    const AngularPowerSpectrum s = variances_to_aps({{0.0, 0.0, 0.0, 1.0}, 2});
    CHECK(s.coefficient(3) == doctest::Approx(7.0 / (4.0 * std::numbers::pi)).epsilon(1e-15));

    const VarianceSpectrum v{{0.3, 1.7, 0.0, 2.5, 0.01, 4.0}, 2};
    const VarianceSpectrum back = aps_to_variances(variances_to_aps(v));
    REQUIRE(back.v.size() == v.v.size());
    for (std::size_t i = 0; i < v.v.size(); ++i) CHECK(std::abs(back.v[i] - v.v[i]) <= 1e-12 * (1.0 + v.v[i]));
  }

  TEST_CASE("variance round trip on higher spheres") {
    for (int d : {3, 4, 7}) {
      CAPTURE(d);
      const VarianceSpectrum v{{1.0, 0.5, 0.25, 0.125, 2.0}, d};
      const AngularPowerSpectrum a = variances_to_aps(v);
      CHECK(a.dimension() == d);
      const VarianceSpectrum back = aps_to_variances(a);
      for (std::size_t i = 0; i < v.v.size(); ++i) CHECK(std::abs(back.v[i] - v.v[i]) <= 1e-12 * v.v[i]);
      const AngularPowerSpectrum again = variances_to_aps(back);
      for (std::size_t i = 0; i < v.v.size(); ++i) {
        CHECK(std::abs(again.coefficient(i) - a.coefficient(i)) <= 1e-12 * (1.0 + a.coefficient(i)));
      }
    }
  }

  TEST_CASE("fractional transform: identity, constant degree, semigroup") {
    const AngularPowerSpectrum finite = normalize(AngularPowerSpectrum(corpus::half(), 1.0, {0.2, 0.3, 0.1, 0.4}));
    const AngularPowerSpectrum id = fractional_transform(finite, 0.0, false);
    for (std::size_t n = 0; n < 4; ++n) CHECK(id.coefficient(n) == finite.coefficient(n));

    const AngularPowerSpectrum up = fractional_transform(finite, 0.8, false);
    CHECK(up.coefficient(0) == finite.coefficient(0));
    CHECK(up.coefficient(2) == doctest::Approx(0.1 * std::pow(1.0 + 2.0 * 3.0, 0.8)).epsilon(1e-14));

    for (const auto& spec : {finite, corpus::power(2.5), corpus::power(3.0, 1.0, 2), corpus::geometric(0.5)}) {
      const AngularPowerSpectrum composed = fractional_transform(fractional_transform(spec, 0.3, false), 0.7, false);
      const AngularPowerSpectrum direct = fractional_transform(spec, 1.0, false);
      for (std::size_t n : {0, 1, 2, 3, 5, 17, 100, 1000, 123456}) {
        const double a = direct.coefficient(n);
        CAPTURE(n);
        CHECK(std::abs(composed.coefficient(n) - a) <= 1e-12 * std::max(a, 1e-300));
      }
    }
  }

  TEST_CASE("fractional transforms with +sigma and -sigma cancel") {
    for (const auto& e : corpus::tailed()) {
      CAPTURE(e.name);
      for (double sigma : {0.1, 0.25, -0.2}) {
        AngularPowerSpectrum there = e.spec;
        try {
          there = fractional_transform(e.spec, sigma, false);
        } catch (const DivergenceError&) {
          continue;  // the tail cannot absorb this multiplier
        }
        const AngularPowerSpectrum back = fractional_transform(there, -sigma, false);
        for (std::size_t n : {0, 1, 2, 9, 64, 4097, 1000000}) {
          const double a = e.spec.coefficient(n);
          CAPTURE(n);
          CHECK(std::abs(back.coefficient(n) - a) <= 1e-12 * std::max(a, 1e-300));
        }
      }
    }
  }

  TEST_CASE("fractional transform of a power tail shifts the exponent") {
    const AngularPowerSpectrum s = fractional_transform(corpus::inverse_n(), 0.25, true);
    CHECK(s.tail().kind == TailKind::Power);
    CHECK(s.tail().gamma == doctest::Approx(0.5));
    CHECK(s.is_normalized(1e-9));
    CHECK_THROWS_AS(fractional_transform(corpus::inverse_n(), 0.5, true), DivergenceError);
    CHECK_THROWS_AS(fractional_transform(corpus::log_only(3.0), 0.01, true), DivergenceError);
  }

  TEST_CASE("transformed tail mass matches explicit partial sums") {
    const AngularPowerSpectrum s = fractional_transform(corpus::power(1.5), 0.2, false);
    // A_n - A_{n+M} equals the explicit block sum.
    for (std::size_t n : {3, 40, 2000}) {
      const std::size_t M = 100000;
      std::vector<double> block(M);
      s.coefficients(n, block);
      long double sum = 0.0L;
      for (double a : block) sum += a;
      const double diff = s.tail_sum(n) - s.tail_sum(n + M);
      CAPTURE(n);
      CHECK(std::abs(diff - static_cast<double>(sum)) <= 1e-10 * diff);
    }
  }

  TEST_CASE("summability decisions") {
    CHECK(summability_check(corpus::linear(), 5.0) == Summability::Converges);
    CHECK(summability_check(corpus::power(1.5), 1.0) == Summability::Converges);
    CHECK(summability_check(corpus::power(1.5), 1.5) == Summability::Diverges);
    CHECK(summability_check(corpus::power(1.5, 2.0, 2), 1.5) == Summability::Converges);
    CHECK(summability_check(corpus::power(1.5, 1.0, 2), 1.5) == Summability::Diverges);
    CHECK(summability_check(corpus::geometric(0.5), 10.0) == Summability::Converges);
    CHECK(summability_check(corpus::log_only(3.0), 0.1) == Summability::Diverges);
    CHECK_THROWS_AS(summability_check(corpus::power(1.5), 0.0), DomainError);
  }

  TEST_CASE("summable spectra have Cauchy partial sums") {
    // Per-degree increments of sum a_n n^gamma stay below 1e-6 for N in
    // [1e5, 1e6], and decade block sums shrink.
    for (const auto& e : corpus::all()) {
      for (double gamma : {0.5, 1.0, 1.5}) {
        if (summability_check(e.spec, gamma) != Summability::Converges) continue;
        CAPTURE(e.name);
        CAPTURE(gamma);
        std::vector<double> a(900001);
        e.spec.coefficients(100000, a);
        double max_inc = 0.0;
        double block[9] = {};
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double n = 100000.0 + static_cast<double>(i);
          const double inc = a[i] * std::pow(n, gamma);
          max_inc = std::max(max_inc, inc);
          if (i < 900000) block[i / 100000] += inc;
        }
        CHECK(max_inc <= 1e-6);
        for (int b = 1; b < 9; ++b) CHECK(block[b] <= block[b - 1] * (1.0 + 1e-12) + 1e-300);
      }
    }
  }

  TEST_CASE("truncation degree") {
    const AngularPowerSpectrum s = corpus::inverse_n();
    CHECK(truncation_degree(s, 1.5e-3, 1u << 20) == 666);
    CHECK(truncation_degree(corpus::linear(), 1e-12, 10) == 1);
    CHECK_THROWS_AS(truncation_degree(s, 1e-9, 1000), TruncationError);
    try {
      truncation_degree(s, 1e-6, 1000);
    } catch (const TruncationError& e) {
      CHECK(e.required_terms() >= 999999);
    }
  }

  TEST_CASE("invalid spectra are rejected") {
    CHECK_THROWS_AS(normalize(AngularPowerSpectrum(corpus::half(), 1.0, {0.0, 0.0})), DivergenceError);
    CHECK_THROWS_AS(AngularPowerSpectrum(corpus::half(), 1.0, {0.5, -0.1}), DomainError);
    CHECK_THROWS_AS(AngularPowerSpectrum(corpus::half(), 1.0, {}), DomainError);
    CHECK_THROWS_AS(AngularPowerSpectrum(corpus::half(), -1.0, {1.0}), DomainError);
    CHECK_THROWS_AS(AngularPowerSpectrum::from_tail(corpus::half(), TailDescriptor::power(1.0), 0), DomainError);
    CHECK_THROWS_AS(AngularPowerSpectrum::from_tail(corpus::half(), TailDescriptor::power(-1.0), 1), DomainError);
    CHECK_THROWS_AS(AngularPowerSpectrum::from_tail(corpus::half(), TailDescriptor::geometric(1.5), 1), DomainError);
    CHECK_THROWS_AS(tail_kind_from_string("cubic"), ConfigError);
    CHECK(tail_kind_from_string(to_string(TailKind::LogOnly)) == TailKind::LogOnly);
  }
}
