#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vending/info_core.hpp"

namespace vending {

enum class Mode {
  decoder,
  decoder_independent,
  causal,
  indirect,
  encoder_lossless,
  encoder_markov,
  encoder_bounds,
  gaussian,
};

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

// Continuous Gaussian instance Y = X + A + N with power cost E[A^2] <= c.
struct GaussianSpec {
  double var_x = 1.0;
  double var_n = 1.0;
  double d = 1.0;
  double c = 0.0;

  void validate() const;
  friend bool operator==(const GaussianSpec&, const GaussianSpec&) = default;
};

// One vending-machine instance. Rows of p_y_given_xa are indexed
// x*|A|+a; rows of p_y_given_xza are indexed (x*|Z|+z)*|A|+a.
struct ProblemSpec {
  Mode mode = Mode::decoder;
  ProbVector px;
  StochasticKernel p_y_given_xa;
  DistortionMatrix rho;
  CostVector lambda;
  std::optional<StochasticKernel> p_z_given_x;
  std::optional<StochasticKernel> p_y_given_xza;
  // Only meaningful for Mode::gaussian (d and c are the query point).
  std::optional<GaussianSpec> gaussian;

  std::size_t x_size() const { return px.size(); }
  std::size_t a_size() const { return lambda.size(); }
  std::size_t y_size() const;
  std::size_t z_size() const { return p_z_given_x ? p_z_given_x->output_size() : 0; }
  std::size_t xhat_size() const { return rho.reproduction_size(); }

  // Side-information channel for a fixed action, rows indexed by x.
  StochasticKernel channel_for_action(std::size_t a) const;
  // Loosest cost constraint: max_a Lambda(a).
  double unconstrained_cost() const { return lambda.max(); }
  // Least distortion reachable when the decoder knows X exactly.
  double min_distortion() const;
  // True when P_{Y|X,A} does not depend on x (Markov Y - A - X) within tol.
  bool is_markov_y_a_x(double tol = 1e-12) const;

  // Throws DimensionError / std::invalid_argument on inconsistent fields.
  void validate() const;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

}  // namespace vending
