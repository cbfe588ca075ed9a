#pragma once

// Constrained minimization of information functionals over products of
// probability simplices.
//
// Every registered functional is written in a variational form
//   F(Q) = min_aux sum_s P(s) sum_k Q(k|s) [log Q(k|s) - e_aux(s, k)]
// so that, for fixed decoder and auxiliary marginals, the Lagrangian
//   F + lambda_d * E[rho] + lambda_c * E[Lambda]
// is minimized row-wise in closed form by a multiplicative update of the
// kernel. Alternating that update with the decoder argmin step never
// increases the Lagrangian. Constraints are handled by searching over the
// Lagrange weights and taking the lower convex envelope of all achieved
// (rate, distortion, cost) triples.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vending/info_core.hpp"
#include "vending/problem.hpp"

namespace vending {

enum class Functional {
  decoder_actions,     // I(X;A) + I(X;U|Y,A)
  action_independent,  // I(X;U|Y,A) with A independent of X
  causal,              // I(X;U,A)
  indirect,            // I(Z;A) + I(Z;U|Y,A), distortion on X
  encoder_lossless,    // H(X) - I(Y;A,X)
  decoder_lossless,    // I(X;A) + H(X|Y,A)
  encoder_open_switch,    // I(U;X|A,Y) + I(X;A) - I(Y;A)
  encoder_closed_switch,  // I(Xhat;X|A,Y) + I(X;A) - I(Y;A)
};

std::string_view to_string(Functional f);
// Whether the functional carries a distortion term (lossless ones do not).
bool has_distortion(Functional f);

struct StepSchedule {
  // Exponentiated-gradient step on the action marginal (A independent of X):
  // eta_t = min(initial * growth^t, max).
  double initial = 1.0;
  double growth = 1.25;
  double max = 64.0;
};

struct SolverConfig {
  int max_iters = 4000;
  double objective_tol = 1e-9;
  StepSchedule step;
  // Number of starts per solve: starts 0 and 1 are structured, the rest are seeded
  // random Dirichlet kernels. When |A| > 1 each solve also runs one start next
  // to every single-action policy (restart index restarts + a).
  int restarts = 8;
  std::uint64_t seed = 20100514;
  int grid_resolution = 8;
  std::size_t grid_budget = 4'000'000;
  int grid_refine_levels = 16;
  // Lagrange sweep: {0} plus geometric points in [lambda_min, lambda_max].
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  int lambda_points = 40;
  double feasibility_tol = 1e-9;
  double gap_tol = 1e-8;
  // Auxiliary alphabet size; 0 selects |X||A|+2 (|Z||A|+2 when indirect).
  std::size_t u_size = 0;
  // Optimize the restricted form P_{U|X} 1{a = f(u)} over all f.
  bool deterministic_actions = false;
  // After the sweep, refine each requested (D, C) by a targeted search.
  bool refine_sweep = true;

  void validate() const;
};

struct LagrangeWeights {
  double lambda_d = 0.0;
  double lambda_c = 0.0;
  void validate() const;
};

// A candidate solution and its evaluated operating point.
struct PolicyPoint {
  Functional functional = Functional::decoder_actions;
  // Rows: symbol observed by the encoder (X, or Z when indirect).
  // Columns: a*|U| + u. Lossless functionals use |U| = 1.
  StochasticKernel p_au_given_x;
  // Reconstruction table indexed (a*|U| + u)*|Y| + y. The decoder knows its
  // own action, so the table is keyed on (a, u, y). Empty when unused.
  std::vector<std::size_t> decoder;
  // Closed-switch reconstruction P_{Xhat|X,A,Y}, rows (x*|A| + a)*|Y| + y.
  std::optional<StochasticKernel> reconstruction;
  std::size_t actions = 0;
  std::size_t aux = 0;
  std::size_t side_info = 0;

  double rate = 0.0;
  double distortion = 0.0;
  double cost = 0.0;
  double lagrangian = 0.0;
  bool converged = false;
  int iterations = 0;
  int restart = -1;

  std::size_t decode(std::size_t a, std::size_t u, std::size_t y) const {
    return decoder.at((a * aux + u) * side_info + y);
  }
};

struct RatePoint {
  double rate = 0.0;
  double distortion = 0.0;
  double cost = 0.0;
};

struct EnvelopeValue {
  bool feasible = false;
  double rate = 0.0;
  // (index into the point set, weight) of the supporting convex combination.
  std::vector<std::pair<std::size_t, double>> support;
};

// min sum_i w_i R_i subject to sum w_i d_i <= d + tol, sum w_i c_i <= c + tol,
// w on the simplex. Solved exactly by a small two-phase simplex method.
EnvelopeValue lower_envelope(std::span<const RatePoint> points, double d,
                             double c, double tol = 1e-9);

struct CurveSample {
  double d = 0.0;
  double c = 0.0;
  double rate = 0.0;
  bool feasible = false;
};

struct TradeoffCurve {
  std::vector<RatePoint> points;
  std::vector<double> d_grid;
  std::vector<double> c_grid;
  // One sample per (d, c) pair, d-major.
  std::vector<CurveSample> samples;
  double feasibility_tol = 1e-9;

  const CurveSample& at(std::size_t di, std::size_t ci) const {
    return samples.at(di * c_grid.size() + ci);
  }
  // Envelope value at an arbitrary (d, c) over the collected points.
  EnvelopeValue evaluate(double d, double c) const;
};

// Multi-start alternating minimizer for one functional on one instance.
// Keeps every solved point so later solves can warm-start from the nearest
// weights.
class LagrangianSolver {
 public:
  LagrangianSolver(Functional f, const ProblemSpec& spec, SolverConfig cfg);
  ~LagrangianSolver();
  LagrangianSolver(LagrangianSolver&&) noexcept;
  LagrangianSolver& operator=(LagrangianSolver&&) noexcept;

  // Best over cfg.restarts seeded starts and the nearest cached solution.
  PolicyPoint solve(const LagrangeWeights& w);
  // Best over cfg.restarts seeded starts only.
  PolicyPoint solve_cold(const LagrangeWeights& w) const;
  // Lagrangian, rate, distortion, cost of an explicit kernel with the
  // optimal decoder (and optimal reconstruction kernel when applicable).
  PolicyPoint evaluate_kernel(const StochasticKernel& kernel,
                              const LagrangeWeights& w) const;

  Functional functional() const;
  std::size_t aux_size() const;
  std::size_t solve_count() const;
  const SolverConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::size_t default_aux_size(Functional f, const ProblemSpec& spec);

PolicyPoint minimize_lagrangian(Functional f, const ProblemSpec& spec,
                                const LagrangeWeights& w,
                                const SolverConfig& cfg);

// Exhaustive search on a uniform simplex grid (resolution steps per row),
// followed by a shrinking pattern search around the best grid points. The
// objective is evaluated through the generic joint-distribution routines in
// info_core, independently of the solver's update equations.
PolicyPoint grid_oracle(Functional f, const ProblemSpec& spec,
                        const LagrangeWeights& w, int resolution,
                        const SolverConfig& cfg = {});
// Same enumeration, minimizing the rate subject to distortion <= d and
// cost <= c (no refinement).
PolicyPoint grid_oracle_constrained(Functional f, const ProblemSpec& spec,
                                    double d, double c, int resolution,
                                    const SolverConfig& cfg = {});

using LagrangianOracle = std::function<RatePoint(const LagrangeWeights&)>;

struct SearchOptions {
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  double lambda_cap = 1e6;
  double feasibility_tol = 1e-9;
  double gap_tol = 1e-8;
  int max_bisections = 60;
  bool distortion_active = true;
  bool cost_active = true;
};

struct ConstrainedResult {
  bool feasible = false;
  double rate = 0.0;
  // max over evaluated weights of L*(w) - w.(d, c); a lower bound on the
  // constrained minimum when every inner solve is globally optimal.
  double dual_bound = 0.0;
  std::vector<RatePoint> points;
  EnvelopeValue envelope;
};

// Finds the least rate with distortion <= d and cost <= c by nested
// bisection on (lambda_c, lambda_d) and an envelope solve over every
// evaluated point.
ConstrainedResult constrained_search(const LagrangianOracle& oracle, double d,
                                     double c, const SearchOptions& opt);

SearchOptions search_options(const SolverConfig& cfg, Functional f,
                             const ProblemSpec& spec);

// Constrained minimum of a registered functional at one (d, c).
ConstrainedResult solve_constrained(Functional f, const ProblemSpec& spec,
                                    double d, double c, const SolverConfig& cfg);
// Same, reusing (and extending) an existing solver's cache.
ConstrainedResult solve_constrained(LagrangianSolver& solver,
                                    const ProblemSpec& spec, double d, double c);

struct PolicyMixture {
  ConstrainedResult result;
  // Policies behind result.envelope.support with their time-sharing weights.
  std::vector<std::pair<double, PolicyPoint>> support;
};

PolicyMixture solve_constrained_with_policies(LagrangianSolver& solver,
                                              const ProblemSpec& spec, double d,
                                              double c);

TradeoffCurve sweep_tradeoff(Functional f, const ProblemSpec& spec,
                             std::span<const double> d_grid,
                             std::span<const double> c_grid,
                             const SolverConfig& cfg);

}  // namespace vending
