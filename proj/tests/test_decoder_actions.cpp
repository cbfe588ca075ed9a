#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vending/classic_rd.hpp"
#include "vending/decoder_actions.hpp"

using namespace vending;
using testutil::h2;

namespace {

// I(X;A) + H(X|Y,A) on the Z/S instance for P(A=1|X=0) = p0, P(A=1|X=1) = p1,
// written out by hand.
double zs_lossless_objective(double delta, double p0, double p1) {
  // joint P(x, a, y)
  double j[2][2][2] = {};
  const double w[2][2][2] = {{{1, 0}, {1 - delta, delta}}, {{delta, 1 - delta}, {0, 1}}};
  const double pa[2][2] = {{1 - p0, p0}, {1 - p1, p1}};
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a)
      for (int y = 0; y < 2; ++y) j[x][a][y] = 0.5 * pa[x][a] * w[x][a][y];
  double ixa = 0.0, hxya = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double ma = 0.5 * (pa[0][a] + pa[1][a]);
    for (int x = 0; x < 2; ++x)
      if (pa[x][a] > 0) ixa += 0.5 * pa[x][a] * std::log2(pa[x][a] / ma);
    for (int y = 0; y < 2; ++y) {
      const double may = j[0][a][y] + j[1][a][y];
      for (int x = 0; x < 2; ++x)
        if (j[x][a][y] > 0) hxya -= j[x][a][y] * std::log2(j[x][a][y] / may);
    }
  }
  return ixa + hxya;
}

double greedy_closed_form(double delta) {
  return h2(delta / (1 + delta)) * (1 + delta) / 2;
}

}  // namespace

TEST_CASE("Z/S lossless optimum and crossover") {
  const auto spec = testutil::zs_spec(0.5);
  const auto mix = lossless_rate_decoder(spec, spec.unconstrained_cost());
  REQUIRE(mix.result.feasible);
  CHECK(std::abs(mix.result.rate - 0.678072) < 1e-4);
  // 1-D scan of the symmetric family
  double best = 1e9, arg = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double a = 0.5 * i / 100000.0;
    const double v = zs_lossless_objective(0.5, a, 1 - a);
    if (v < best) best = v, arg = a;
  }
  CHECK(mix.result.rate == doctest::Approx(best).epsilon(1e-7));
  CHECK(std::abs(arg - 0.4) < 1e-4);
  REQUIRE(mix.support.size() == 1);
  const auto& k = mix.support[0].second.p_au_given_x;
  CHECK(std::abs(k(0, 1) - 0.4) < 1e-3);
  CHECK(std::abs(k(1, 0) - 0.4) < 1e-3);
}

TEST_CASE("lossless rate special cases") {
  const auto noiseless = testutil::zs_spec(0.0);
  CHECK(lossless_rate_decoder(noiseless, 1.0).result.rate == doctest::Approx(0.0).epsilon(1e-8));
  const auto zs = testutil::zs_spec(0.5);
  CHECK(std::abs(lossless_rate_decoder(zs, 0.0).result.rate - 0.688722) < 1e-6);
  CHECK_FALSE(lossless_rate_decoder(zs, 0.0).support.empty());
}

TEST_CASE("lossless rate under a binding cost beats time-sharing") {
  const auto zs = testutil::zs_spec(0.5);
  const double c = 0.25;
  const double got = lossless_rate_decoder(zs, c).result.rate;
  // The objective is convex in P_{A|X}, so the cost binds: p1 = 2c - p0.
  double best = 1e9;
  for (int i = 0; i <= 200000; ++i) {
    const double p0 = 2 * c * i / 200000.0;
    best = std::min(best, zs_lossless_objective(0.5, p0, 2 * c - p0));
  }
  CHECK(got == doctest::Approx(best).epsilon(1e-7));
  const double chord = 2 * c * 0.678072 + (1 - 2 * c) * 0.688722;
  CHECK(chord - got >= 1e-4);
}

TEST_CASE("greedy rate") {
  for (int i = 1; i < 50; ++i) {
    const double delta = i / 50.0;
    REQUIRE(greedy_rate(testutil::zs_spec(delta), 0.0) ==
            doctest::Approx(greedy_closed_form(delta)).epsilon(1e-12));
  }
  CHECK(std::abs(greedy_rate(testutil::zs_spec(0.5), 0.0) - 0.688722) < 1e-6);
  CHECK(greedy_rate(testutil::zs_spec(0.0), 0.0) == doctest::Approx(0.0));
  CHECK(greedy_rate(testutil::zs_spec(1.0), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(greedy_closed_form(0.5) - lossless_rate_decoder(testutil::zs_spec(0.5), 1.0).result.rate >= 0.01);
}

TEST_CASE("general solver at D = 0 agrees with the lossless path") {
  const auto zs = testutil::zs_spec(0.5);
  const double general = rdc_decoder(zs, 0.0, 1.0).rate;
  const double dedicated = lossless_rate_decoder(zs, 1.0).result.rate;
  CHECK(std::abs(general - dedicated) < 1e-6);
  CHECK(general <= dedicated + 1e-6);
}

TEST_CASE("time-sharing bound on Z/S") {
  const auto zs = testutil::zs_spec(0.5);
  // Both actions have the same Slepian-Wolf rate, so mixing them cannot help.
  const auto ts = timeshare_bound(zs, 0.0, 1.0);
  CHECK(std::abs(ts.rate - 0.688722) < 1e-6);
  CHECK(std::abs(rdc_independent(zs, 0.0, 1.0).rate - ts.rate) < 1e-6);
  CHECK(ts.rate >= rdc_decoder(zs, 0.0, 1.0).rate);
}

TEST_CASE("ternary example at half cost") {
  const auto t = testutil::ternary_spec();
  CHECK(std::abs(rdc_decoder(t, 0.0, 0.5).rate - 1.0) < 1e-3);
  CHECK(std::abs(rdc_decoder(t, 0.1, 0.5).rate - (1 - h2(0.1))) < 2e-3);
  // Paying for every reading still gives 1 - h(D) (Wyner-Ziv = conditional RD).
  CHECK(std::abs(lossless_rate_decoder(t, 0.5).result.rate - 1.0) < 1e-6);
}

TEST_CASE("observe or not with Y = X") {
  const auto spec = testutil::observe_spec(ProbVector{0.5, 0.5}, StochasticKernel::identity(2));
  const double d = 0.1, c = 0.3;
  const double expected = (1 - c) * bernoulli_rd(0.5, d / (1 - c));
  CHECK(std::abs(rdc_decoder(spec, d, c).rate - expected) < 2e-4);
  CHECK(std::abs(rdc_independent(spec, d, c).rate - expected) < 2e-4);
  CHECK(std::abs(timeshare_bound(spec, d, c).rate - expected) < 2e-4);
}

TEST_CASE("observe or not with erasures against the two-parameter formula") {
  const auto spec = testutil::observe_spec(ProbVector{0.5, 0.5}, testutil::erasure(0.5));
  const double d = 0.25, e = 0.5;
  auto rb = [](double p, double dd) { return bernoulli_rd(p, std::clamp(dd, 0.0, 1.0)); };
  for (double c : {0.25, 0.5}) {
    // beta in [max(0, 1-2C), min(1, 2-2C)], D1 in [0, min(D/C, e)]
    const double blo = std::max(0.0, 1 - 2 * c), bhi = std::min(1.0, 2 - 2 * c);
    const double dhi = std::min(d / c, e);
    double best = 1e9;
    const int n = 1200;
    for (int i = 0; i <= n; ++i)
      for (int k = 0; k <= n; ++k) {
        const double beta = blo + (bhi - blo) * i / n, d1 = dhi * k / n;
        const double p0 = beta / (2 * (1 - c)), p1 = (1 - beta) / (2 * c);
        const double v = 1 - (h2(p0) * (1 - c) + h2(p1) * c) +
                         rb(p0, (d - c * d1) / (1 - c)) * (1 - c) + e * rb(p1, d1 / e) * c;
        best = std::min(best, v);
      }
    const double rd = rdc_decoder(spec, d, c).rate;
    CHECK(rd <= best + 1e-7);
    CHECK(std::abs(rd - best) < 1e-4);
    CHECK(rd <= rdc_independent(spec, d, c).rate + 1e-7);
  }
}

TEST_CASE("causal variant") {
  // Side information independent of (X, A): classical rate-distortion.
  ProblemSpec s;
  s.px = ProbVector{0.3, 0.7};
  s.p_y_given_xa = StochasticKernel({{0.6, 0.4}, {0.6, 0.4}, {0.6, 0.4}, {0.6, 0.4}});
  s.rho = DistortionMatrix::hamming(2);
  s.lambda = CostVector{0.0, 1.0};
  for (double d : {0.05, 0.15}) {
    CHECK(std::abs(rdc_causal(s, d, 1.0).rate - rd_function(s.px, s.rho, d)) < 1e-5);
  }
  // With Y = X offered for a price, causality costs nothing at D = 0.
  const auto obs = testutil::observe_spec(ProbVector{0.3, 0.7}, StochasticKernel::identity(2));
  for (double c : {0.2, 0.5}) {
    const double causal = rdc_causal(obs, 0.0, c).rate;
    const double lossless = lossless_rate_decoder(obs, c).result.rate;
    CHECK(std::abs(causal - lossless) < 1e-5);
  }
  const auto zs = testutil::zs_spec(0.5);
  CHECK(rdc_causal(zs, 0.1, 0.25).rate >= rdc_decoder(zs, 0.1, 0.25).rate - 1e-6);
}

TEST_CASE("indirect variant") {
  std::mt19937_64 rng(5);
  const auto base = testutil::random_spec(rng, 2, 2, 2);
  // Z = X collapses to the direct problem.
  ProblemSpec ind = base;
  ind.mode = Mode::indirect;
  ind.p_z_given_x = StochasticKernel::identity(2);
  std::vector<double> rows;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t z = 0; z < 2; ++z)
      for (std::size_t a = 0; a < 2; ++a) {
        auto r = base.p_y_given_xa.row(x * 2 + a);
        rows.insert(rows.end(), r.begin(), r.end());
      }
  ind.p_y_given_xza = StochasticKernel(8, 2, rows);
  for (double d : {0.0, 0.1}) {
    const double c = 0.5 * base.lambda.max();
    CHECK(std::abs(rdc_indirect(ind, d, c).rate - rdc_decoder(base, d, c).rate) < 1e-5);
  }
  // Z independent of X: nothing to communicate.
  ProblemSpec blind = ind;
  blind.p_z_given_x = StochasticKernel({{0.3, 0.7}, {0.3, 0.7}});
  const double best_constant = std::min(base.px[0], base.px[1]);
  CHECK(rdc_indirect(blind, best_constant, 0.0).rate == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(rdc_indirect(base, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("indirect BSC observation with erased readings against the grid") {
  // X fair, Z = X through BSC(0.1); action 1 reveals Z erased w.p. 1/2.
  ProblemSpec s;
  s.mode = Mode::indirect;
  s.px = ProbVector{0.5, 0.5};
  s.p_z_given_x = StochasticKernel({{0.9, 0.1}, {0.1, 0.9}});
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t z = 0; z < 2; ++z) {
      rows.push_back({0.0, 0.0, 1.0});
      rows.push_back(z == 0 ? std::vector<double>{0.5, 0.0, 0.5} : std::vector<double>{0.0, 0.5, 0.5});
    }
  s.p_y_given_xza = StochasticKernel(rows);
  s.p_y_given_xa = StochasticKernel({{1.0}, {1.0}, {1.0}, {1.0}});
  s.rho = DistortionMatrix::hamming(2);
  s.lambda = CostVector{0.0, 1.0};
  SolverConfig cfg;
  cfg.u_size = 2;
  for (const LagrangeWeights w : {LagrangeWeights{2.0, 0.5}, LagrangeWeights{5.0, 1.0}}) {
    const auto fast = minimize_lagrangian(Functional::indirect, s, w, cfg);
    const auto grid = grid_oracle(Functional::indirect, s, w, 6, cfg);
    CHECK(fast.lagrangian <= grid.lagrangian + 1e-9);
    CHECK(std::abs(fast.lagrangian - grid.lagrangian) < 2e-3);
  }
  const double solved = rdc_indirect(s, 0.25, 0.5, cfg).rate;
  const auto coarse = grid_oracle_constrained(Functional::indirect, s, 0.25, 0.5, 6, cfg);
  CHECK(solved <= coarse.rate + 1e-9);
  CHECK(solved >= 0.0);
}

TEST_CASE("decoder-side ordering on random instances") {
  std::mt19937_64 rng(314);
  SolverConfig cfg;
  for (int t = 0; t < 6; ++t) {
    const auto s = testutil::random_spec(rng, 2, 2, 2);
    const double d = 0.05 + 0.05 * t, c = 0.5 * s.lambda.max();
    const double rd = rdc_decoder(s, d, c, cfg).rate;
    const double ts = timeshare_bound(s, d, c, cfg).rate;
    const double ind = rdc_independent(s, d, c, cfg).rate;
    const double ca = rdc_causal(s, d, c, cfg).rate;
    REQUIRE(rd <= ts + 1e-6);
    REQUIRE(std::abs(ts - ind) < 2e-3);
    REQUIRE(rd <= ca + 1e-6);
  }
}

TEST_CASE("input checks") {
  ProblemSpec g;
  g.mode = Mode::gaussian;
  g.gaussian = GaussianSpec{};
  CHECK_THROWS(rdc_decoder(g, 0.1, 0.1));
  const auto zs = testutil::zs_spec(0.5);
  CHECK(rdc_decoder(zs, 0.1, 0.0).rate >= 0.0);
  CHECK_THROWS_AS(rdc_decoder(zs, -0.1, 0.5), std::invalid_argument);
  ProblemSpec pricey = zs;
  pricey.lambda = CostVector{0.2, 1.0};
  CHECK_FALSE(rdc_decoder(pricey, 0.1, 0.1).feasible);
  CHECK_FALSE(timeshare_bound(pricey, 0.1, 0.1).feasible);
}
