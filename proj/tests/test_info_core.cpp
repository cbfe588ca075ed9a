#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vending/info_core.hpp"

using namespace vending;
using testutil::h2;

namespace {

// Direct -sum p log2 p, written out independently of the library.
double plain_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// Z/S pair, rows x*2 + a: action 0 is a Z-channel (1 -> 0 w.p. delta),
// action 1 an S-channel (0 -> 1 w.p. delta).
StochasticKernel zs_channel_full(double delta) {
  return StochasticKernel({{1.0, 0.0}, {1.0 - delta, delta}, {delta, 1.0 - delta}, {0.0, 1.0}});
}

}  // namespace

TEST_CASE("entropy of simple vectors") {
  CHECK(entropy(ProbVector{1.0, 0.0}) == doctest::Approx(0.0));
  CHECK(entropy(ProbVector{0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(entropy(ProbVector{0.25, 0.75}) == doctest::Approx(plain_entropy({0.25, 0.75})).epsilon(1e-14));
  CHECK(entropy(ProbVector{0.25, 0.75}) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK(entropy(ProbVector::uniform(8)) == doctest::Approx(3.0));
}

TEST_CASE("prob vector validation") {
  CHECK_THROWS_AS(ProbVector({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(ProbVector({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(ProbVector(std::vector<double>{}), std::invalid_argument);
  ProbVector p({0.3, 0.7 + 1e-12});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("binary entropy and bernoulli rate distortion") {
  CHECK(binary_entropy(0.4) == doctest::Approx(plain_entropy({0.4, 0.6})).epsilon(1e-14));
  CHECK(std::abs(binary_entropy(0.4) - 0.970950) < 1e-6);
  CHECK(std::abs(bernoulli_rd(0.5, 0.25) - 0.188722) < 1e-6);
  CHECK(bernoulli_rd(0.5, 0.25) == doctest::Approx(1.0 - plain_entropy({0.25, 0.75})));
  CHECK(bernoulli_rd(0.5, 0.5) == 0.0);
  CHECK(bernoulli_rd(0.2, 0.3) == 0.0);
  CHECK(bernoulli_rd(0.9, 0.05) == doctest::Approx(h2(0.9) - h2(0.05)));
  CHECK_THROWS_AS(binary_entropy(1.5), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli_rd(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("mutual information basics") {
  // independent joint
  JointDist ind({"X", "Y"}, {2, 3}, {0.1, 0.2, 0.2, 0.1, 0.2, 0.2});
  CHECK(mutual_information(ind, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
  JointDist copy({"X", "Y"}, {2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_information(copy, {"X"}, {"Y"}) == doctest::Approx(1.0));
  // fair X through a Z-channel with crossover 1/2
  JointDist z({"X", "Y"}, {2, 2}, {0.5, 0.0, 0.25, 0.25});
  const double expected = h2(0.25) - 0.5;
  CHECK(mutual_information(z, {"X"}, {"Y"}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(mutual_information(z, {"X"}, {"Y"}) - 0.3112781) < 1e-7);
  CHECK_THROWS_AS(mutual_information(z, {"X"}, {"X"}), std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(z, {"X"}, {"W"}), std::invalid_argument);
}

TEST_CASE("conditional mutual information reductions") {
  std::mt19937_64 rng(7);
  auto mass = testutil::dirichlet(rng, 8);
  JointDist j({"X", "Y", "U"}, {2, 2, 2}, mass);
  CHECK(conditional_mutual_information(j, {"X"}, {"Y"}, {}) ==
        doctest::Approx(mutual_information(j, {"X"}, {"Y"})).epsilon(1e-12));
  // U independent of (X, Y)
  std::vector<double> prod;
  auto xy = testutil::dirichlet(rng, 4);
  for (double v : xy) {
    prod.push_back(v * 0.3);
    prod.push_back(v * 0.7);
  }
  JointDist k({"X", "Y", "U"}, {2, 2, 2}, prod);
  CHECK(conditional_mutual_information(k, {"U"}, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_mutual_information(k, {"U"}, {"X"}, {"X"}), std::invalid_argument);
}

TEST_CASE("factorize deterministic chain") {
  // (A, U) = (x, x) with |A| = |U| = 2, Y = X
  StochasticKernel au({{1, 0, 0, 0}, {0, 0, 0, 1}});
  StochasticKernel y({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  auto j = factorize(ProbVector{0.5, 0.5}, au, y);
  CHECK(j.labels() == std::vector<std::string>{"X", "A", "U", "Y"});
  CHECK(j.at({0, 0, 0, 0}) == doctest::Approx(0.5));
  CHECK(j.at({1, 1, 1, 1}) == doctest::Approx(0.5));
  int atoms = 0;
  for (double v : j.data()) atoms += v > 0.0;
  CHECK(atoms == 2);
}

TEST_CASE("factorize dimension errors name the axis") {
  StochasticKernel au({{0.5, 0.5}, {0.5, 0.5}});
  StochasticKernel y3({{1, 0}, {1, 0}, {0, 1}});
  try {
    factorize(ProbVector{0.5, 0.5}, au, y3);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.axis() == "A");
  }
  StochasticKernel au3({{0.5, 0.5}, {0.5, 0.5}, {1, 0}});
  CHECK_THROWS_AS(factorize(ProbVector{0.5, 0.5}, au3, StochasticKernel({{1, 0}, {1, 0}})),
                  DimensionError);
}

TEST_CASE("lossless objective of the symmetric Z/S kernel") {
  const double alpha = 0.4, delta = 0.5;
  StochasticKernel a({{1 - alpha, alpha}, {alpha, 1 - alpha}});
  auto j = factorize(ProbVector{0.5, 0.5}, a, zs_channel_full(delta));
  const double value = mutual_information(j, {"X"}, {"A"}) + conditional_entropy(j, {"X"}, {"Y", "A"});
  const double t = 1 - alpha + alpha * delta;
  const double closed = 1 - h2(alpha) + h2(alpha * delta / t) * t;
  CHECK(value == doctest::Approx(closed).epsilon(1e-12));
  CHECK(std::abs(value - 0.678072) < 1e-6);
}

TEST_CASE("randomized factorization properties") {
  std::mt19937_64 rng(12345);
  int trials = 0;
  for (; trials < 150; ++trials) {
    const std::size_t nx = 2 + trials % 2, na = 2, nu = 2 + trials % 3, ny = 2 + (trials / 3) % 2;
    auto px = ProbVector(testutil::dirichlet(rng, nx));
    auto au = testutil::random_kernel(rng, nx, na * nu);
    auto y = testutil::random_kernel(rng, nx * na, ny);
    auto j = factorize(px, au, y);

    double total = 0.0;
    for (double v : j.data()) total += v;
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
    auto mx = j.marginal({"X"});
    for (std::size_t x = 0; x < nx; ++x) REQUIRE(std::abs(mx.data()[x] - px[x]) < 1e-12);

    // U - (A, X) - Y: P(y | x, a, u) does not depend on u.
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t u = 0; u < nu; ++u) {
          double m = 0.0;
          for (std::size_t yy = 0; yy < ny; ++yy) m += j.at({x, a, u, yy});
          if (m < 1e-14) continue;
          for (std::size_t yy = 0; yy < ny; ++yy)
            REQUIRE(std::abs(j.at({x, a, u, yy}) / m - y(x * na + a, yy)) < 1e-10);
        }

    // I(X;A)+I(X;U|Y,A) = I(X;U,Y,A)+H(Y|A,X)-H(Y|A)
    const double lhs = mutual_information(j, {"X"}, {"A"}) +
                       conditional_mutual_information(j, {"X"}, {"U"}, {"Y", "A"});
    const double rhs = mutual_information(j, {"X"}, {"U", "Y", "A"}) +
                       conditional_entropy(j, {"Y"}, {"A", "X"}) - conditional_entropy(j, {"Y"}, {"A"});
    REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-9));

    // H(X|A,Y)+I(X;A)-I(Y;A) = H(X)-I(Y;A,X)
    const double l2 = conditional_entropy(j, {"X"}, {"A", "Y"}) + mutual_information(j, {"X"}, {"A"}) -
                      mutual_information(j, {"Y"}, {"A"});
    const double r2 = j.entropy({"X"}) - mutual_information(j, {"Y"}, {"A", "X"});
    REQUIRE(std::abs(l2 - r2) < 1e-9);

    REQUIRE(mutual_information(j, {"X"}, {"Y"}) >= 0.0);
    REQUIRE(j.entropy({"X"}) <= std::log2(static_cast<double>(nx)) + 1e-12);
  }
  CHECK(trials >= 100);
}

TEST_CASE("indirect factorization keeps the X marginal") {
  std::mt19937_64 rng(99);
  auto px = ProbVector(testutil::dirichlet(rng, 2));
  auto pz = testutil::random_kernel(rng, 2, 3);
  auto au = testutil::random_kernel(rng, 3, 4);
  auto y = testutil::random_kernel(rng, 2 * 3 * 2, 2);
  auto j = factorize_indirect(px, pz, au, y);
  CHECK(j.labels() == std::vector<std::string>{"X", "Z", "A", "U", "Y"});
  auto mx = j.marginal({"X"});
  CHECK(mx.data()[0] == doctest::Approx(px[0]).epsilon(1e-12));
  // A depends on X only through Z
  CHECK(conditional_mutual_information(j, {"X"}, {"A", "U"}, {"Z"}) == doctest::Approx(0.0).epsilon(1e-9));
}
