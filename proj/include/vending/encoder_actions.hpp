#pragma once

// Rate-distortion-cost results when the encoder chooses the actions.

#include "vending/problem.hpp"
#include "vending/simplex_solver.hpp"

namespace vending {

// min H(X) - I(Y;A,X) over P_{A|X} with E Lambda <= c, clipped at 0.
ConstrainedResult encoder_lossless_rate(const ProblemSpec& spec, double c,
                                        const SolverConfig& cfg = {});

// Y = X + A + N, power cost: 1/2 log2 [var_n / ((1 + sqrt(c)/sigma_x)^2
// var_x + var_n) * var_x / d], and exactly 0 once the bracket is <= 1.
double gaussian_rdc(const GaussianSpec& g);
// Distortion where the Gaussian rate reaches zero.
double gaussian_zero_rate_distortion(double var_x, double var_n, double c);

// max(R(P_X, d) - Cap(P_{Y|A}, c), 0). Throws std::invalid_argument unless
// P_{Y|X,A} equals P_{Y|A} row for row within 1e-12.
double markov_rdc(const ProblemSpec& spec, double d, double c,
                  const SolverConfig& cfg = {});

struct BoundsReport {
  // min I(X;Xhat) - I(Y;X,A), clipped at 0
  double lower = 0.0;
  // min I(U;X|A,Y) + I(X;A) - I(Y;A), decoder xhat(a, u, y)
  double upper_open_switch = 0.0;
  // min I(Xhat;X|A,Y) + I(X;A) - I(Y;A) over P_{Xhat|X,A,Y}
  double upper_closed_switch = 0.0;
  // Set for lossless Hamming queries, Markov Y - A - X instances, and when the
  // computed bounds meet.
  bool certified_exact = false;
  bool feasible = false;
  std::size_t aux_size = 0;
};

BoundsReport encoder_bounds(const ProblemSpec& spec, double d, double c,
                            const SolverConfig& cfg = {});

// max I(Y;X,A) over P_{A|X} with E Lambda <= c.
double max_side_information(const ProblemSpec& spec, double c, const SolverConfig& cfg = {});

}  // namespace vending
