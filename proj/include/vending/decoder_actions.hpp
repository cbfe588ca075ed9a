#pragma once

// Rate-distortion-cost functions when the decoder chooses the actions, plus
// the greedy and time-sharing baselines. Every constrained value comes back
// as a ConstrainedResult; infeasible (d, c) pairs have feasible == false and
// rate == +inf. "No cost constraint" is c = spec.unconstrained_cost().

#include "vending/problem.hpp"
#include "vending/simplex_solver.hpp"

namespace vending {

// min I(X;A) + I(X;U|Y,A) over P_{A,U|X}, E rho <= d, E Lambda <= c.
ConstrainedResult rdc_decoder(const ProblemSpec& spec, double d, double c,
                              const SolverConfig& cfg = {});

// min I(X;A) + H(X|Y,A) over P_{A|X} with E Lambda <= c. The support holds
// the optimizing kernels (a single one unless time-sharing is needed).
PolicyMixture lossless_rate_decoder(const ProblemSpec& spec, double c,
                                    const SolverConfig& cfg = {});

// Best single action in the Wyner-Ziv sense; the Slepian-Wolf rate when d = 0
// and rho is a lossless measure. Cost is ignored.
double greedy_rate(const ProblemSpec& spec, double d, const SolverConfig& cfg = {});

// Per-action Wyner-Ziv coding on subsequences, optimized over P_A and the
// distortion split.
ConstrainedResult timeshare_bound(const ProblemSpec& spec, double d, double c,
                                  const SolverConfig& cfg = {});

// Actions independent of X (chosen before the index is seen):
// min I(X;U|Y,A) over P_A P_{U|X,A}.
ConstrainedResult rdc_independent(const ProblemSpec& spec, double d, double c,
                                  const SolverConfig& cfg = {});

// Causal side information: min I(X;U,A), reconstruction from (U, A, Y_i).
ConstrainedResult rdc_causal(const ProblemSpec& spec, double d, double c,
                             const SolverConfig& cfg = {});

// Encoder sees Z instead of X: min I(Z;A) + I(Z;U|Y,A) over P_{A,U|Z},
// distortion measured on X.
ConstrainedResult rdc_indirect(const ProblemSpec& spec, double d, double c,
                               const SolverConfig& cfg = {});

// The single-action decoder-side instance for action a (|A| = 1, cost 0).
ProblemSpec single_action_spec(const ProblemSpec& spec, std::size_t a);

}  // namespace vending
