#include "vending/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace vending {

namespace {
constexpr std::array<std::pair<Mode, std::string_view>, 8> kModeNames{{
    {Mode::decoder, "decoder"},
    {Mode::decoder_independent, "decoder-independent"},
    {Mode::causal, "causal"},
    {Mode::indirect, "indirect"},
    {Mode::encoder_lossless, "encoder-lossless"},
    {Mode::encoder_markov, "encoder-markov"},
    {Mode::encoder_bounds, "encoder-bounds"},
    {Mode::gaussian, "gaussian"},
}};
}  // namespace

std::string_view to_string(Mode m) {
  for (const auto& [mode, name] : kModeNames) {
    if (mode == m) return name;
  }
  return "unknown";
}

Mode mode_from_string(std::string_view s) {
  for (const auto& [mode, name] : kModeNames) {
    if (name == s) return mode;
  }
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

void GaussianSpec::validate() const {
  if (!(var_x > 0.0) || !(var_n > 0.0) || !(d > 0.0) || !(c >= 0.0) ||
      !std::isfinite(var_x) || !std::isfinite(var_n) || !std::isfinite(d) ||
      !std::isfinite(c)) {
    throw std::invalid_argument(
        "GaussianSpec: need var_x > 0, var_n > 0, d > 0, c >= 0");
  }
}

std::size_t ProblemSpec::y_size() const {
  if (mode == Mode::indirect && p_y_given_xza) return p_y_given_xza->output_size();
  return p_y_given_xa.output_size();
}

StochasticKernel ProblemSpec::channel_for_action(std::size_t a) const {
  const std::size_t na = a_size();
  if (a >= na) throw std::out_of_range("channel_for_action: action out of range");
  std::vector<double> rows;
  for (std::size_t x = 0; x < x_size(); ++x) {
    auto r = p_y_given_xa.row(x * na + a);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return StochasticKernel(x_size(), p_y_given_xa.output_size(), std::move(rows));
}

double ProblemSpec::min_distortion() const {
  double d = 0.0;
  for (std::size_t x = 0; x < x_size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t xh = 0; xh < xhat_size(); ++xh) best = std::min(best, rho(x, xh));
    d += px[x] * best;
  }
  return d;
}

bool ProblemSpec::is_markov_y_a_x(double tol) const {
  const std::size_t na = a_size();
  const std::size_t ny = p_y_given_xa.output_size();
  for (std::size_t x = 1; x < x_size(); ++x)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t y = 0; y < ny; ++y)
        if (std::abs(p_y_given_xa(x * na + a, y) - p_y_given_xa(a, y)) > tol)
          return false;
  return true;
}

void ProblemSpec::validate() const {
  if (mode == Mode::gaussian) {
    if (!gaussian) throw std::invalid_argument("gaussian mode requires a GaussianSpec");
    gaussian->validate();
    return;
  }
  if (px.size() == 0) throw DimensionError("X", "empty source distribution");
  if (lambda.size() == 0) throw DimensionError("A", "empty cost vector");
  if (rho.source_size() != px.size()) {
    throw DimensionError("X", "distortion matrix has " +
                                  std::to_string(rho.source_size()) +
                                  " rows, source has " + std::to_string(px.size()));
  }
  const bool indirect = mode == Mode::indirect;
  if (indirect != (p_z_given_x.has_value() && p_y_given_xza.has_value())) {
    throw std::invalid_argument(
        "p_z_given_x and p_y_given_xza must be present exactly when mode = indirect");
  }
  if (indirect) {
    if (p_z_given_x->input_size() != px.size()) {
      throw DimensionError("X", "p_z_given_x rows do not match |X|");
    }
    if (p_y_given_xza->input_size() != px.size() * z_size() * a_size()) {
      throw DimensionError("A", "p_y_given_xza needs |X||Z||A| rows");
    }
    return;
  }
  if (p_y_given_xa.input_size() != px.size() * a_size()) {
    throw DimensionError("A", "p_y_given_xa has " +
                                  std::to_string(p_y_given_xa.input_size()) +
                                  " rows, expected |X||A| = " +
                                  std::to_string(px.size() * a_size()));
  }
}

}  // namespace vending
