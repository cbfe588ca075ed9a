#pragma once

// Internal: flattened problem data and alternating-minimization state shared
// by the solver, the grid oracle and the classic routines.

#include <cstdint>
#include <random>
#include <vector>

#include "vending/simplex_solver.hpp"

namespace vending::detail {

// S is the symbol seen by the encoder (X, or Z for the indirect problem).
struct EngineProblem {
  Functional functional = Functional::decoder_actions;
  std::size_t ns = 0, nx = 0, nxh = 0, na = 0, nu = 1, ny = 0;
  std::vector<double> ps;    // [s]
  std::vector<double> w;     // [(s*na + a)*ny + y] = P(y | s, a)
  std::vector<double> dc;    // [((s*na + a)*ny + y)*nxh + xh] = E[rho(X,xh) 1{Y=y} | s, a]
  std::vector<double> rho;   // [x*nxh + xh]
  std::vector<double> cost;  // [a]
  // Allowed (a, u) pairs, [a*nu + u]; empty means all allowed.
  std::vector<char> mask;
  // Closed switch only: keep q fixed and optimize the reconstruction kernel.
  bool freeze_q = false;

  std::size_t cols() const { return na * nu; }
  double W(std::size_t s, std::size_t a, std::size_t y) const {
    return w[(s * na + a) * ny + y];
  }
  const double* D(std::size_t s, std::size_t a, std::size_t y) const {
    return dc.data() + ((s * na + a) * ny + y) * nxh;
  }
  bool allowed(std::size_t a, std::size_t u) const {
    return mask.empty() || mask[a * nu + u] != 0;
  }
};

EngineProblem build_engine(Functional f, const ProblemSpec& spec, std::size_t nu);

struct EngineState {
  // Kernel Q[s*cols + a*nu + u]. For action_independent this holds the
  // per-action conditional q(u|s,a) (each (s, a) block sums to one) and pi
  // holds the action marginal.
  std::vector<double> q;
  std::vector<double> pi;
  // Closed switch reconstruction kernel [((x*na + a)*ny + y)*nxh + xh].
  std::vector<double> k;
};

struct EngineEval {
  double lagrangian = 0.0;
  double rate = 0.0;
  double distortion = 0.0;
  double cost = 0.0;
  std::vector<std::uint32_t> decoder;  // [(a*nu + u)*ny + y]
};

// Evaluates the state (with optimal decoder and auxiliary marginals) and,
// when `next` is non-null, writes the closed-form minimizer of the
// variational Lagrangian into it. `eta` is the action-marginal step.
EngineEval engine_step(const EngineProblem& p, const EngineState& st,
                       const LagrangeWeights& w, EngineState* next, double eta);

EngineState initial_state(const EngineProblem& p, int restart, std::uint64_t seed);
// Start 0 with every action but `a` scaled down to 1e-6, so the run begins
// next to the single-action policy A = a. Returns false when the mask rules
// out action a entirely.
bool pure_action_state(const EngineProblem& p, std::size_t a, EngineState& out);
// Full kernel P(a,u|s) in the public column layout.
std::vector<double> joint_kernel(const EngineProblem& p, const EngineState& st);
// Inverse of joint_kernel; builds a state whose kernel equals `kernel`.
EngineState state_from_kernel(const EngineProblem& p, const std::vector<double>& kernel);

struct RunResult {
  EngineState state;
  EngineEval eval;
  int iterations = 0;
  bool converged = false;
};

RunResult run_alternating(const EngineProblem& p, EngineState st,
                          const LagrangeWeights& w, const SolverConfig& cfg);

double uniform01(std::mt19937_64& rng);
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace vending::detail
