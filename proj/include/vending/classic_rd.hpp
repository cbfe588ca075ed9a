#pragma once

// Classical single-user quantities: rate-distortion function, capacity with
// an input cost, Slepian-Wolf and Wyner-Ziv rates.

#include "vending/info_core.hpp"
#include "vending/simplex_solver.hpp"

namespace vending {

// Channel P_{Y|A} (rows indexed by a) with input costs Lambda(a).
struct ChannelSpec {
  StochasticKernel kernel;
  CostVector cost;

  void validate() const;
};

struct BlahutArimotoOptions {
  int max_iters = 200000;
  // Stop once the certified gap between the upper and lower bounds of the
  // current Lagrangian value drops below this.
  double gap_tol = 1e-12;
};

// R(P_X, D) by Blahut-Arimoto with a bisection on the slope. Zero for
// d >= min_xhat E rho(X, xhat); throws std::domain_error when d is below
// sum_x P(x) min_xhat rho(x, xhat).
double rd_function(const ProbVector& px, const DistortionMatrix& rho, double d,
                   const BlahutArimotoOptions& opt = {});

// max I(A;Y) subject to E Lambda(A) <= c. Throws std::invalid_argument when
// c < min_a Lambda(a).
double capacity_with_cost(const ChannelSpec& ch, double c,
                          const BlahutArimotoOptions& opt = {});

// H(X|Y) for X ~ px observed through p_y_given_x.
double slepian_wolf_rate(const ProbVector& px, const StochasticKernel& p_y_given_x);

// min I(X;U|Y) over P_{U|X} (Markov U - X - Y, |U| = |X|+1 unless cfg.u_size
// is set) with E rho(X, xhat(U,Y)) <= d. pxy must carry axes "X" and "Y".
double wyner_ziv_rate(const JointDist& pxy, const DistortionMatrix& rho, double d,
                      const SolverConfig& cfg = {});

// e * R_b(p, d/e) for a Bernoulli(p) source whose side information is an
// erased copy with erasure probability e.
double erased_si_wz(double p, double e, double d);

}  // namespace vending
