#include <cmath>
#include <limits>

#include "lp.hpp"
#include "vending/simplex_solver.hpp"

namespace vending {

EnvelopeValue lower_envelope(std::span<const RatePoint> points, double d,
                             double c, double tol) {
  EnvelopeValue out;
  out.rate = std::numeric_limits<double>::infinity();
  if (points.empty()) return out;

  // Cheap exits: a single point meeting both limits that also has the least
  // rate among all points needs no LP.
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].rate < points[argmin].rate) argmin = i;
  if (points[argmin].distortion <= d + tol && points[argmin].cost <= c + tol) {
    out.feasible = true;
    out.rate = points[argmin].rate;
    out.support = {{argmin, 1.0}};
    return out;
  }

  const std::size_t n = points.size();
  const bool use_d = std::isfinite(d);
  const bool use_c = std::isfinite(c);
  const std::size_t nv = n + (use_d ? 1 : 0) + (use_c ? 1 : 0);
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> obj(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) obj[i] = points[i].rate;

  a.emplace_back(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) a.back()[i] = 1.0;
  b.push_back(1.0);
  std::size_t slack = n;
  if (use_d) {
    a.emplace_back(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) a.back()[i] = points[i].distortion;
    a.back()[slack++] = 1.0;
    b.push_back(d + tol);
  }
  if (use_c) {
    a.emplace_back(nv, 0.0);
    for (std::size_t i = 0; i < n; ++i) a.back()[i] = points[i].cost;
    a.back()[slack++] = 1.0;
    b.push_back(c + tol);
  }
  const auto lp = detail::lp_minimize(std::move(a), std::move(b), obj);
  if (!lp.feasible) return out;
  out.feasible = true;
  out.rate = lp.value;
  for (std::size_t i = 0; i < n; ++i)
    if (lp.x[i] > 0.0) out.support.emplace_back(i, lp.x[i]);
  return out;
}

EnvelopeValue TradeoffCurve::evaluate(double d, double c) const {
  return lower_envelope(points, d, c, feasibility_tol);
}

}  // namespace vending
