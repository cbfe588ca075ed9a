#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vending/classic_rd.hpp"
#include "vending/decoder_actions.hpp"
#include "vending/encoder_actions.hpp"

using namespace vending;
using testutil::h2;

namespace {

ProblemSpec markov_spec(const StochasticKernel& y_given_a, const CostVector& cost) {
  ProblemSpec s;
  s.mode = Mode::encoder_markov;
  s.px = ProbVector{0.5, 0.5};
  const std::size_t na = y_given_a.input_size(), ny = y_given_a.output_size();
  std::vector<double> rows;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t y = 0; y < ny; ++y) rows.push_back(y_given_a(a, y));
  s.p_y_given_xa = StochasticKernel(2 * na, ny, rows);
  s.rho = DistortionMatrix::hamming(2);
  s.lambda = cost;
  return s;
}

StochasticKernel bsc(double p) { return StochasticKernel({{1 - p, p}, {p, 1 - p}}); }

// Direct evaluation of the closed form, written without the zero-region test.
double gaussian_formula(double vx, double vn, double d, double c) {
  const double a = std::sqrt(c) / std::sqrt(vx);
  return 0.5 * std::log2(vn / ((1 + a) * (1 + a) * vx + vn) * vx / d);
}

}  // namespace

TEST_CASE("encoder lossless rate") {
  const auto zs = testutil::zs_spec(0.5);
  CHECK(std::abs(encoder_lossless_rate(zs, zs.unconstrained_cost()).rate) < 1e-6);
  CHECK(std::abs(encoder_lossless_rate(zs, 0.0).rate - 0.688722) < 1e-6);
  // Degenerate action: Slepian-Wolf rate.
  ProblemSpec one;
  one.px = ProbVector{0.3, 0.7};
  one.p_y_given_xa = StochasticKernel({{0.8, 0.2}, {0.25, 0.75}});
  one.rho = DistortionMatrix::hamming(2);
  one.lambda = CostVector{0.0};
  CHECK(encoder_lossless_rate(one, 0.0).rate ==
        doctest::Approx(slepian_wolf_rate(one.px, one.p_y_given_xa)).epsilon(1e-8));
}

TEST_CASE("encoder lossless rate never exceeds the decoder-side value") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto s = testutil::random_spec(rng, 2 + t % 2, 2, 2);
    for (double frac : {0.0, 0.4, 1.0}) {
      const double c = frac * s.lambda.max();
      const double enc = encoder_lossless_rate(s, c).rate;
      const double dec = lossless_rate_decoder(s, c).result.rate;
      REQUIRE(enc <= dec + 1e-7);
      REQUIRE(enc >= 0.0);
    }
  }
}

TEST_CASE("Gaussian closed form") {
  CHECK(gaussian_rdc({1, 1, 0.25, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
  for (double c : {0.0, 0.3, 1.0, 4.0}) {
    const double boundary = 1.0 / ((1 + std::sqrt(c)) * (1 + std::sqrt(c)) + 1);
    CHECK(gaussian_zero_rate_distortion(1, 1, c) == doctest::Approx(boundary).epsilon(1e-15));
    CHECK(gaussian_rdc({1, 1, boundary, c}) == 0.0);
    CHECK(gaussian_rdc({1, 1, boundary * 1.5, c}) == 0.0);
    // continuous at the boundary
    CHECK(gaussian_rdc({1, 1, boundary * (1 - 1e-9), c}) < 1e-8);
  }
  CHECK(gaussian_rdc({2.0, 0.5, 2.5, 0.0}) == 0.0);
  for (double vx : {0.5, 2.0})
    for (double d : {0.05, 0.1})
      CHECK(gaussian_rdc({vx, 0.7, d, 0.2}) == doctest::Approx(gaussian_formula(vx, 0.7, d, 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_rdc({1, 1, 0.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_rdc({1, -1, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("Gaussian rate is nonincreasing in c and d") {
  for (int i = 1; i <= 30; ++i) {
    const double d = 0.02 * i;
    double prev = 1e9;
    for (int j = 0; j <= 30; ++j) {
      const double r = gaussian_rdc({1, 1, d, 0.1 * j});
      REQUIRE(r <= prev);
      REQUIRE(r >= 0.0);
      REQUIRE(gaussian_rdc({1, 1, d + 0.01, 0.1 * j}) <= r);
      prev = r;
    }
  }
}

TEST_CASE("Markov decomposition") {
  const CostVector free{0.0, 0.0};
  CHECK(std::abs(markov_rdc(markov_spec(bsc(0.5), free), 0.25, 0.0) - 0.188722) < 1e-6);
  for (double d : {0.0, 0.1, 0.3})
    CHECK(markov_rdc(markov_spec(StochasticKernel::identity(2), free), d, 0.0) == 0.0);
  const double expected = std::max(0.0, (1 - h2(0.05)) - (1 - h2(0.11)));
  CHECK(markov_rdc(markov_spec(bsc(0.11), free), 0.05, 0.0) == doctest::Approx(expected).epsilon(1e-8));
  CHECK(std::abs(expected - 0.2136) < 1e-3);
  CHECK_THROWS_AS(markov_rdc(testutil::zs_spec(0.5), 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("bounds on the Z/S instance at D = 0 coincide with the lossless rate") {
  const auto zs = testutil::zs_spec(0.5);
  for (double c : {0.0, 0.25, 1.0}) {
    const auto b = encoder_bounds(zs, 0.0, c);
    const double exact = encoder_lossless_rate(zs, c).rate;
    CHECK(b.certified_exact);
    CHECK(std::abs(b.lower - exact) < 1e-6);
    CHECK(std::abs(b.upper_closed_switch - exact) < 2e-3);
    CHECK(std::abs(b.upper_open_switch - exact) < 2e-3);
  }
}

TEST_CASE("bounds on Markov instances match the decomposition") {
  const CostVector cost{0.0, 1.0};
  for (double p : {0.11, 0.3}) {
    const auto s = markov_spec(bsc(p), cost);
    for (double d : {0.05, 0.2}) {
      const double exact = markov_rdc(s, d, 0.3);
      const auto b = encoder_bounds(s, d, 0.3);
      CHECK(b.certified_exact);
      CHECK(std::abs(b.lower - exact) < 1e-6);
      CHECK(std::abs(b.upper_closed_switch - exact) < 2e-3);
      CHECK(std::abs(b.upper_open_switch - exact) < 2e-3);
    }
  }
}

TEST_CASE("lower bound can be strictly loose") {
  // Degenerate A; Y is X erased w.p. 1/2 and the encoder sees it too. The
  // known rate e R_b(1/2, D/e) sits strictly above R(D) - I(X;Y).
  ProblemSpec s;
  s.px = ProbVector{0.5, 0.5};
  s.p_y_given_xa = testutil::erasure(0.5);
  s.rho = DistortionMatrix::hamming(2);
  s.lambda = CostVector{0.0};
  const double d = 0.1;
  const auto b = encoder_bounds(s, d, 0.0);
  const double known = erased_si_wz(0.5, 0.5, d);
  CHECK(std::abs(b.upper_closed_switch - known) < 1e-4);
  CHECK(b.lower == doctest::Approx((1 - h2(d)) - 0.5).epsilon(1e-6));
  CHECK(b.lower < known - 0.05);
  CHECK_FALSE(b.certified_exact);
}

TEST_CASE("bounds ordering on random instances") {
  std::mt19937_64 rng(99);
  SolverConfig cfg;
  cfg.restarts = 4;
  for (int t = 0; t < 8; ++t) {
    const auto s = testutil::random_spec(rng, 2, 2, 2);
    const auto b = encoder_bounds(s, 0.05 + 0.03 * t, 0.5 * s.lambda.max(), cfg);
    REQUIRE(b.feasible);
    REQUIRE(b.lower <= b.upper_closed_switch + 1e-9);
    REQUIRE(b.upper_closed_switch <= b.upper_open_switch + 1e-9);
    if (b.certified_exact) REQUIRE(b.upper_closed_switch - b.lower <= 2e-3);
  }
}
