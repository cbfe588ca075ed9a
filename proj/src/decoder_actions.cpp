#include "vending/decoder_actions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vending/classic_rd.hpp"

namespace vending {

namespace {

void require_channel(const ProblemSpec& spec, const char* who) {
  spec.validate();
  if (spec.mode == Mode::gaussian || spec.mode == Mode::indirect) {
    throw std::invalid_argument(std::string(who) + ": needs a finite P_{Y|X,A} instance, got mode " +
                                std::string(to_string(spec.mode)));
  }
}

JointDist joint_xy(const ProbVector& px, const StochasticKernel& w) {
  const std::size_t nx = px.size(), ny = w.output_size();
  std::vector<double> mass(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) mass[x * ny + y] = px[x] * w(x, y);
  return JointDist({"X", "Y"}, {nx, ny}, std::move(mass));
}

}  // namespace

ProblemSpec single_action_spec(const ProblemSpec& spec, std::size_t a) {
  ProblemSpec s;
  s.mode = Mode::decoder;
  s.px = spec.px;
  s.p_y_given_xa = spec.channel_for_action(a);
  s.rho = spec.rho;
  s.lambda = CostVector{0.0};
  return s;
}

ConstrainedResult rdc_decoder(const ProblemSpec& spec, double d, double c,
                              const SolverConfig& cfg) {
  require_channel(spec, "rdc_decoder");
  return solve_constrained(Functional::decoder_actions, spec, d, c, cfg);
}

PolicyMixture lossless_rate_decoder(const ProblemSpec& spec, double c, const SolverConfig& cfg) {
  require_channel(spec, "lossless_rate_decoder");
  LagrangianSolver solver(Functional::decoder_lossless, spec, cfg);
  return solve_constrained_with_policies(solver, spec, 0.0, c);
}

double greedy_rate(const ProblemSpec& spec, double d, const SolverConfig& cfg) {
  require_channel(spec, "greedy_rate");
  if (!(d >= 0.0)) throw std::invalid_argument("greedy_rate: need d >= 0");
  const bool lossless = d == 0.0 && spec.rho.is_lossless_measure();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < spec.a_size(); ++a) {
    const auto w = spec.channel_for_action(a);
    const double r = lossless ? slepian_wolf_rate(spec.px, w)
                              : wyner_ziv_rate(joint_xy(spec.px, w), spec.rho, d, cfg);
    best = std::min(best, r);
  }
  return best;
}

ConstrainedResult timeshare_bound(const ProblemSpec& spec, double d, double c,
                                  const SolverConfig& cfg) {
  require_channel(spec, "timeshare_bound");
  if (!std::isfinite(d) || !std::isfinite(c) || d < 0.0 || c < 0.0) {
    throw std::invalid_argument("distortion and cost limits must be finite and >= 0");
  }
  ConstrainedResult infeasible;
  infeasible.rate = std::numeric_limits<double>::infinity();
  if (c < spec.lambda.min() - cfg.feasibility_tol) return infeasible;
  if (d < spec.min_distortion() - cfg.feasibility_tol) return infeasible;

  SolverConfig wz = cfg;
  if (wz.u_size == 0) wz.u_size = spec.x_size() + 1;
  std::vector<LagrangianSolver> per_action;
  for (std::size_t a = 0; a < spec.a_size(); ++a)
    per_action.emplace_back(Functional::decoder_actions, single_action_spec(spec, a), wz);

  // The Lagrangian of the time-sharing problem is the best single action at
  // the same distortion slope.
  auto oracle = [&](const LagrangeWeights& w) {
    RatePoint best;
    double best_l = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < per_action.size(); ++a) {
      const auto p = per_action[a].solve({w.lambda_d, 0.0});
      const double l = p.rate + w.lambda_d * p.distortion + w.lambda_c * spec.lambda[a];
      if (l < best_l - 1e-13) {
        best_l = l;
        best = RatePoint{p.rate, p.distortion, spec.lambda[a]};
      }
    }
    return best;
  };
  SearchOptions opt = search_options(cfg, Functional::decoder_actions, spec);
  return constrained_search(oracle, d, c, opt);
}

ConstrainedResult rdc_independent(const ProblemSpec& spec, double d, double c,
                                  const SolverConfig& cfg) {
  require_channel(spec, "rdc_independent");
  return solve_constrained(Functional::action_independent, spec, d, c, cfg);
}

ConstrainedResult rdc_causal(const ProblemSpec& spec, double d, double c,
                             const SolverConfig& cfg) {
  require_channel(spec, "rdc_causal");
  return solve_constrained(Functional::causal, spec, d, c, cfg);
}

ConstrainedResult rdc_indirect(const ProblemSpec& spec, double d, double c,
                               const SolverConfig& cfg) {
  spec.validate();
  if (spec.mode != Mode::indirect || !spec.p_z_given_x || !spec.p_y_given_xza) {
    throw std::invalid_argument("rdc_indirect: needs an indirect instance with P_{Z|X} and P_{Y|X,Z,A}");
  }
  return solve_constrained(Functional::indirect, spec, d, c, cfg);
}

}  // namespace vending
