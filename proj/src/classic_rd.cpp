#include "vending/classic_rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vending {

void ChannelSpec::validate() const {
  if (kernel.input_size() != cost.size()) {
    throw DimensionError("A", "channel has " + std::to_string(kernel.input_size()) +
                                  " inputs but " + std::to_string(cost.size()) + " costs");
  }
  if (cost.size() == 0) throw DimensionError("A", "empty channel");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct RdPoint {
  double rate = 0.0;
  double distortion = 0.0;
};

// Blahut-Arimoto at slope s: minimizes I(X;Xhat) + s E rho.
RdPoint ba_rate_distortion(const ProbVector& px, const DistortionMatrix& rho, double s,
                           const BlahutArimotoOptions& opt) {
  const std::size_t nx = px.size(), nh = rho.reproduction_size();
  std::vector<double> lq(nh, -std::log2(static_cast<double>(nh)));
  std::vector<double> logz(nx), c(nh);
  auto partition = [&]() {
    for (std::size_t x = 0; x < nx; ++x) {
      double m = kNegInf;
      for (std::size_t h = 0; h < nh; ++h) m = std::max(m, lq[h] - s * rho(x, h));
      double z = 0.0;
      for (std::size_t h = 0; h < nh; ++h) z += std::exp2(lq[h] - s * rho(x, h) - m);
      logz[x] = m + std::log2(z);
    }
  };
  for (int it = 0; it < opt.max_iters; ++it) {
    partition();
    double cmax = kNegInf;
    for (std::size_t h = 0; h < nh; ++h) {
      double acc = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (px[x] == 0.0) continue;
        acc += px[x] * std::exp2(-s * rho(x, h) - logz[x]);
      }
      c[h] = acc;
      if (lq[h] > kNegInf) cmax = std::max(cmax, std::log2(acc));
    }
    // log2 max c bounds the distance to the optimal Lagrangian value.
    if (cmax < opt.gap_tol) break;
    for (std::size_t h = 0; h < nh; ++h) lq[h] = c[h] > 0.0 ? lq[h] + std::log2(c[h]) : kNegInf;
  }
  partition();
  // Evaluate the induced kernel exactly.
  std::vector<double> kernel(nx * nh), out(nh, 0.0);
  RdPoint pt;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t h = 0; h < nh; ++h) {
      const double v = std::exp2(lq[h] - s * rho(x, h) - logz[x]);
      kernel[x * nh + h] = v;
      out[h] += px[x] * v;
      pt.distortion += px[x] * v * rho(x, h);
    }
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t h = 0; h < nh; ++h) {
      const double v = kernel[x * nh + h];
      if (px[x] > 0.0 && v > 0.0) pt.rate += px[x] * v * std::log2(v / out[h]);
    }
  pt.rate = std::max(pt.rate, 0.0);
  return pt;
}

struct CapPoint {
  double info = 0.0;
  double cost = 0.0;
  std::vector<double> input;
};

double mutual_info_of_input(const StochasticKernel& w, const std::vector<double>& r) {
  const std::size_t na = w.input_size(), ny = w.output_size();
  std::vector<double> qy(ny, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t y = 0; y < ny; ++y) qy[y] += r[a] * w(a, y);
  double info = 0.0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t y = 0; y < ny; ++y)
      if (r[a] > 0.0 && w(a, y) > 0.0) info += r[a] * w(a, y) * std::log2(w(a, y) / qy[y]);
  return std::max(info, 0.0);
}

// Blahut-Arimoto for max I(A;Y) - mu E Lambda over inputs in `allowed`.
CapPoint ba_capacity(const ChannelSpec& ch, double mu, const std::vector<char>& allowed,
                     const BlahutArimotoOptions& opt) {
  const auto& w = ch.kernel;
  const std::size_t na = w.input_size(), ny = w.output_size();
  std::size_t live = 0;
  for (char a : allowed) live += a != 0;
  std::vector<double> r(na, 0.0), qy(ny), g(na);
  for (std::size_t a = 0; a < na; ++a)
    if (allowed[a]) r[a] = 1.0 / static_cast<double>(live);
  for (int it = 0; it < opt.max_iters; ++it) {
    std::fill(qy.begin(), qy.end(), 0.0);
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t y = 0; y < ny; ++y) qy[y] += r[a] * w(a, y);
    double lower = 0.0, upper = kNegInf;
    for (std::size_t a = 0; a < na; ++a) {
      if (!allowed[a]) continue;
      double kl = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (w(a, y) > 0.0) kl += w(a, y) * std::log2(w(a, y) / qy[y]);
      g[a] = kl - mu * ch.cost[a];
      lower += r[a] * g[a];
      upper = std::max(upper, g[a]);
    }
    if (upper - lower < opt.gap_tol) break;
    double z = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      if (!allowed[a]) continue;
      r[a] *= std::exp2(g[a] - upper);
      z += r[a];
    }
    for (double& v : r) v /= z;
  }
  CapPoint pt;
  pt.input = r;
  pt.info = mutual_info_of_input(w, r);
  for (std::size_t a = 0; a < na; ++a) pt.cost += r[a] * ch.cost[a];
  return pt;
}

}  // namespace

double rd_function(const ProbVector& px, const DistortionMatrix& rho, double d,
                   const BlahutArimotoOptions& opt) {
  if (rho.source_size() != px.size()) throw DimensionError("X", "distortion rows do not match |X|");
  if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("rd_function: need d >= 0");
  const std::size_t nx = px.size(), nh = rho.reproduction_size();
  double dmin = 0.0, dmax = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < nx; ++x) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < nh; ++h) m = std::min(m, rho(x, h));
    dmin += px[x] * m;
  }
  for (std::size_t h = 0; h < nh; ++h) {
    double v = 0.0;
    for (std::size_t x = 0; x < nx; ++x) v += px[x] * rho(x, h);
    dmax = std::min(dmax, v);
  }
  if (d >= dmax) return 0.0;
  if (d < dmin - 1e-12) {
    throw std::domain_error("rd_function: distortion below the least achievable value");
  }
  constexpr double kHit = 1e-13;
  RdPoint lo{0.0, dmax};
  double s_lo = 0.0, s_hi = 1.0;
  RdPoint hi = ba_rate_distortion(px, rho, s_hi, opt);
  while (hi.distortion > d + kHit && s_hi < 1e12) {
    s_lo = s_hi;
    lo = hi;
    s_hi *= 2.0;
    hi = ba_rate_distortion(px, rho, s_hi, opt);
  }
  if (hi.distortion > d + kHit) return hi.rate;
  for (int it = 0; it < 200; ++it) {
    if ((s_hi - s_lo) * (lo.distortion - hi.distortion) <= 1e-13) break;
    const double mid = 0.5 * (s_lo + s_hi);
    RdPoint m = ba_rate_distortion(px, rho, mid, opt);
    if (m.distortion <= d + kHit) {
      s_hi = mid;
      hi = m;
    } else {
      s_lo = mid;
      lo = m;
    }
  }
  if (lo.distortion <= hi.distortion) return hi.rate;
  const double theta = std::clamp((lo.distortion - d) / (lo.distortion - hi.distortion), 0.0, 1.0);
  return std::max(0.0, theta * hi.rate + (1.0 - theta) * lo.rate);
}

double capacity_with_cost(const ChannelSpec& ch, double c, const BlahutArimotoOptions& opt) {
  ch.validate();
  const double cmin = ch.cost.min();
  if (!(c >= cmin - 1e-12)) {
    throw std::invalid_argument("capacity_with_cost: cost " + std::to_string(c) +
                                " below the cheapest input " + std::to_string(cmin));
  }
  const std::size_t na = ch.kernel.input_size();
  std::vector<char> all(na, 1);
  if (c <= cmin + 1e-12) {
    std::vector<char> cheap(na, 0);
    for (std::size_t a = 0; a < na; ++a) cheap[a] = ch.cost[a] <= cmin + 1e-12;
    return ba_capacity(ch, 0.0, cheap, opt).info;
  }
  CapPoint lo = ba_capacity(ch, 0.0, all, opt);
  if (lo.cost <= c + 1e-12) return lo.info;
  double mu_lo = 0.0, mu_hi = 1.0;
  CapPoint hi = ba_capacity(ch, mu_hi, all, opt);
  while (hi.cost > c + 1e-12 && mu_hi < 1e12) {
    mu_lo = mu_hi;
    lo = hi;
    mu_hi *= 2.0;
    hi = ba_capacity(ch, mu_hi, all, opt);
  }
  for (int it = 0; it < 200; ++it) {
    if ((mu_hi - mu_lo) * (lo.cost - hi.cost) <= 1e-13) break;
    const double mid = 0.5 * (mu_lo + mu_hi);
    CapPoint m = ba_capacity(ch, mid, all, opt);
    if (m.cost <= c + 1e-12) {
      mu_hi = mid;
      hi = std::move(m);
    } else {
      mu_lo = mid;
      lo = std::move(m);
    }
  }
  if (lo.cost <= hi.cost) return hi.info;
  // Mix the bracketing inputs so the cost constraint is met with equality.
  const double theta = std::clamp((lo.cost - c) / (lo.cost - hi.cost), 0.0, 1.0);
  std::vector<double> mix(na);
  for (std::size_t a = 0; a < na; ++a) mix[a] = theta * hi.input[a] + (1 - theta) * lo.input[a];
  return std::max({mutual_info_of_input(ch.kernel, mix), hi.info});
}

double slepian_wolf_rate(const ProbVector& px, const StochasticKernel& p_y_given_x) {
  if (p_y_given_x.input_size() != px.size()) {
    throw DimensionError("X", "channel rows do not match |X|");
  }
  const std::size_t nx = px.size(), ny = p_y_given_x.output_size();
  std::vector<double> mass(nx * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) mass[x * ny + y] = px[x] * p_y_given_x(x, y);
  JointDist j({"X", "Y"}, {nx, ny}, std::move(mass));
  return conditional_entropy(j, {"X"}, {"Y"});
}

double wyner_ziv_rate(const JointDist& pxy, const DistortionMatrix& rho, double d,
                      const SolverConfig& cfg) {
  const auto j = pxy.marginal({"X", "Y"});
  const std::size_t nx = j.shape()[0], ny = j.shape()[1];
  if (rho.source_size() != nx) throw DimensionError("X", "distortion rows do not match |X|");
  std::vector<double> px(nx, 0.0), rows(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) px[x] += j.data()[x * ny + y];
    for (std::size_t y = 0; y < ny; ++y)
      rows[x * ny + y] = px[x] > 0.0 ? j.data()[x * ny + y] / px[x] : 1.0 / static_cast<double>(ny);
  }
  ProblemSpec spec;
  spec.mode = Mode::decoder;
  spec.px = ProbVector(px);
  spec.p_y_given_xa = StochasticKernel(nx, ny, std::move(rows));
  spec.rho = rho;
  spec.lambda = CostVector{0.0};
  SolverConfig c = cfg;
  if (c.u_size == 0) c.u_size = nx + 1;
  const auto res = solve_constrained(Functional::decoder_actions, spec, d, 0.0, c);
  if (!res.feasible) {
    throw std::domain_error("wyner_ziv_rate: distortion below the least achievable value");
  }
  return std::max(0.0, res.rate);
}

double erased_si_wz(double p, double e, double d) {
  if (!(p >= 0.0 && p <= 1.0) || !(e >= 0.0 && e <= 1.0) || !(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("erased_si_wz: arguments must lie in [0, 1]");
  }
  if (e == 0.0) return 0.0;
  return e * bernoulli_rd(p, std::min(d / e, 1.0));
}

}  // namespace vending
