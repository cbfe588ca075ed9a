#include "vending/encoder_actions.hpp"

#include <algorithm>
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

ConstrainedResult clipped(ConstrainedResult r) {
  if (r.feasible) r.rate = std::max(0.0, r.rate);
  return r;
}

}  // namespace

ConstrainedResult encoder_lossless_rate(const ProblemSpec& spec, double c,
                                        const SolverConfig& cfg) {
  require_channel(spec, "encoder_lossless_rate");
  return clipped(solve_constrained(Functional::encoder_lossless, spec, 0.0, c, cfg));
}

double max_side_information(const ProblemSpec& spec, double c, const SolverConfig& cfg) {
  require_channel(spec, "max_side_information");
  const auto r = solve_constrained(Functional::encoder_lossless, spec, 0.0, c, cfg);
  if (!r.feasible) throw std::invalid_argument("max_side_information: cost below every action");
  return entropy(spec.px) - r.rate;
}

double gaussian_zero_rate_distortion(double var_x, double var_n, double c) {
  const double gain = 1.0 + std::sqrt(c / var_x);
  return var_x * var_n / (gain * gain * var_x + var_n);
}

double gaussian_rdc(const GaussianSpec& g) {
  g.validate();
  const double gain = 1.0 + std::sqrt(g.c / g.var_x);
  const double denom = gain * gain * g.var_x + g.var_n;
  // Zero region: the side information alone already meets d.
  if (denom * g.d >= g.var_x * g.var_n) return 0.0;
  return 0.5 * std::log2(g.var_n / denom * g.var_x / g.d);
}

double markov_rdc(const ProblemSpec& spec, double d, double c, const SolverConfig&) {
  require_channel(spec, "markov_rdc");
  if (!spec.is_markov_y_a_x(1e-12)) {
    throw std::invalid_argument("markov_rdc: P_{Y|X,A} depends on x; Y - A - X does not hold");
  }
  const std::size_t na = spec.a_size(), ny = spec.y_size();
  std::vector<double> rows(na * ny);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t y = 0; y < ny; ++y) rows[a * ny + y] = spec.p_y_given_xa(a, y);
  const ChannelSpec ch{StochasticKernel(na, ny, std::move(rows)), spec.lambda};
  return std::max(0.0, rd_function(spec.px, spec.rho, d) - capacity_with_cost(ch, c));
}

BoundsReport encoder_bounds(const ProblemSpec& spec, double d, double c,
                            const SolverConfig& cfg) {
  require_channel(spec, "encoder_bounds");
  if (!std::isfinite(d) || !std::isfinite(c) || d < 0.0 || c < 0.0) {
    throw std::invalid_argument("distortion and cost limits must be finite and >= 0");
  }
  BoundsReport rep;
  rep.aux_size = cfg.u_size ? cfg.u_size : default_aux_size(Functional::encoder_open_switch, spec);
  const double inf = std::numeric_limits<double>::infinity();
  rep.lower = rep.upper_open_switch = rep.upper_closed_switch = inf;
  if (c < spec.lambda.min() - cfg.feasibility_tol) return rep;
  if (d < spec.min_distortion() - cfg.feasibility_tol) return rep;
  rep.feasible = true;

  // X-hat may ignore (A, Y), so the two terms of the lower bound decouple.
  const double rd = rd_function(spec.px, spec.rho, std::max(d, spec.min_distortion()));
  rep.lower = std::max(0.0, rd - max_side_information(spec, c, cfg));

  const auto open = clipped(solve_constrained(Functional::encoder_open_switch, spec, d, c, cfg));
  const auto closed = clipped(solve_constrained(Functional::encoder_closed_switch, spec, d, c, cfg));
  rep.upper_open_switch = open.rate;
  rep.upper_closed_switch = closed.rate;

  const bool lossless = d <= cfg.feasibility_tol && spec.rho.is_lossless_measure();
  const double best_upper = std::min(rep.upper_open_switch, rep.upper_closed_switch);
  rep.certified_exact = lossless || spec.is_markov_y_a_x(1e-12) || best_upper - rep.lower <= 1e-6;
  return rep;
}

}  // namespace vending
