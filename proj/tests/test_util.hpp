#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "vending/info_core.hpp"
#include "vending/problem.hpp"

namespace testutil {

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(n);
  double z = 0.0;
  for (auto& x : v) {
    x = ex(rng);
    z += x;
  }
  for (auto& x : v) x /= z;
  return v;
}

inline vending::StochasticKernel random_kernel(std::mt19937_64& rng, std::size_t in,
                                               std::size_t out) {
  std::vector<double> flat;
  for (std::size_t i = 0; i < in; ++i) {
    auto r = dirichlet(rng, out);
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return vending::StochasticKernel(in, out, std::move(flat));
}

// Random decoder-side instance with Hamming distortion and costs in [0, 1].
inline vending::ProblemSpec random_spec(std::mt19937_64& rng, std::size_t nx,
                                        std::size_t na, std::size_t ny) {
  vending::ProblemSpec s;
  s.mode = vending::Mode::decoder;
  s.px = vending::ProbVector(dirichlet(rng, nx));
  s.p_y_given_xa = random_kernel(rng, nx * na, ny);
  s.rho = vending::DistortionMatrix::hamming(nx);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cost(na);
  for (auto& c : cost) c = u(rng);
  cost[0] = 0.0;
  s.lambda = vending::CostVector(cost);
  return s;
}

// Z/S pair at crossover delta, rows x*2 + a: action 0 is a Z-channel
// (1 -> 0 w.p. delta), action 1 an S-channel (0 -> 1 w.p. delta).
inline vending::ProblemSpec zs_spec(double delta) {
  vending::ProblemSpec s;
  s.px = vending::ProbVector{0.5, 0.5};
  s.p_y_given_xa = vending::StochasticKernel(
      {{1.0, 0.0}, {1.0 - delta, delta}, {delta, 1.0 - delta}, {0.0, 1.0}});
  s.rho = vending::DistortionMatrix::hamming(2);
  s.lambda = vending::CostVector{0.0, 1.0};
  return s;
}

// Ternary X on (-1, 0, 1) = indices (0, 1, 2), p = (1/4, 1/2, 1/4). Action 1
// buys a binary reading in {-1, 1}; action 0 gives a constant.
inline vending::ProblemSpec ternary_spec() {
  vending::ProblemSpec s;
  s.px = vending::ProbVector{0.25, 0.5, 0.25};
  s.p_y_given_xa = vending::StochasticKernel(
      {{1, 0}, {1, 0}, {1, 0}, {0.5, 0.5}, {1, 0}, {0, 1}});
  s.rho = vending::DistortionMatrix::hamming(3);
  s.lambda = vending::CostVector{0.0, 1.0};
  return s;
}

// Observe or not: A = 1 reveals Y through `seen` (rows x), A = 0 yields the
// extra symbol |Y|. Unit observation cost.
inline vending::ProblemSpec observe_spec(const vending::ProbVector& px,
                                         const vending::StochasticKernel& seen) {
  const std::size_t nx = px.size(), ny = seen.output_size();
  std::vector<double> rows;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) rows.push_back(0.0);
    rows.push_back(1.0);
    for (std::size_t y = 0; y < ny; ++y) rows.push_back(seen(x, y));
    rows.push_back(0.0);
  }
  vending::ProblemSpec s;
  s.px = px;
  s.p_y_given_xa = vending::StochasticKernel(nx * 2, ny + 1, std::move(rows));
  s.rho = vending::DistortionMatrix::hamming(nx);
  s.lambda = vending::CostVector{0.0, 1.0};
  return s;
}

// Binary erasure channel on a binary input: outputs (0, 1, erased).
inline vending::StochasticKernel erasure(double e) {
  return vending::StochasticKernel({{1 - e, 0.0, e}, {0.0, 1 - e, e}});
}

}  // namespace testutil
