#include "vending/simplex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "engine.hpp"

namespace vending {

std::string_view to_string(Functional f) {
  switch (f) {
    case Functional::decoder_actions: return "decoder_actions";
    case Functional::action_independent: return "action_independent";
    case Functional::causal: return "causal";
    case Functional::indirect: return "indirect";
    case Functional::encoder_lossless: return "encoder_lossless";
    case Functional::decoder_lossless: return "decoder_lossless";
    case Functional::encoder_open_switch: return "encoder_open_switch";
    case Functional::encoder_closed_switch: return "encoder_closed_switch";
  }
  return "unknown";
}

bool has_distortion(Functional f) {
  return f != Functional::encoder_lossless && f != Functional::decoder_lossless;
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(objective_tol >= 0.0)) throw std::invalid_argument("objective_tol must be >= 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be >= 2");
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) {
    throw std::invalid_argument("need 0 < lambda_min <= lambda_max");
  }
  if (lambda_points < 1) throw std::invalid_argument("lambda_points must be >= 1");
  if (!(feasibility_tol >= 0.0) || !(gap_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be non-negative");
  }
  if (!(step.initial > 0.0) || !(step.growth >= 1.0) || !(step.max >= step.initial)) {
    throw std::invalid_argument("invalid step schedule");
  }
}

void LagrangeWeights::validate() const {
  if (!(lambda_d >= 0.0) || !(lambda_c >= 0.0) || !std::isfinite(lambda_d) ||
      !std::isfinite(lambda_c)) {
    throw std::invalid_argument("Lagrange weights must be finite and non-negative");
  }
}

std::size_t default_aux_size(Functional f, const ProblemSpec& spec) {
  switch (f) {
    case Functional::encoder_lossless:
    case Functional::decoder_lossless:
    case Functional::encoder_closed_switch:
      return 1;
    case Functional::action_independent:
      return spec.x_size() + 2;
    case Functional::indirect:
      return spec.z_size() * spec.a_size() + 2;
    default:
      return spec.x_size() * spec.a_size() + 2;
  }
}

namespace {

// Canonical action maps u -> a: only the number of aux symbols assigned to
// each action matters, since aux labels are exchangeable.
std::vector<std::vector<char>> action_map_masks(std::size_t na, std::size_t nu) {
  std::vector<std::vector<char>> masks;
  std::vector<std::size_t> counts(na, 0);
  auto emit = [&]() {
    std::vector<char> m(na * nu, 0);
    std::size_t u = 0;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t k = 0; k < counts[a]; ++k, ++u) m[a * nu + u] = 1;
    masks.push_back(std::move(m));
  };
  auto rec = [&](auto&& self, std::size_t a, std::size_t left) -> void {
    if (a + 1 == na) {
      counts[a] = left;
      emit();
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      counts[a] = k;
      self(self, a + 1, left - k);
    }
  };
  rec(rec, 0, nu);
  if (masks.size() > 4096) throw std::invalid_argument("too many action maps to enumerate");
  return masks;
}

double weight_distance(const LagrangeWeights& a, const LagrangeWeights& b) {
  return std::abs(std::log1p(a.lambda_d) - std::log1p(b.lambda_d)) +
         std::abs(std::log1p(a.lambda_c) - std::log1p(b.lambda_c));
}

}  // namespace

struct LagrangianSolver::Impl {
  Functional f;
  SolverConfig cfg;
  std::vector<detail::EngineProblem> variants;
  struct Cached {
    LagrangeWeights w;
    std::size_t variant;
    detail::EngineState state;
  };
  std::vector<Cached> cache;
  std::size_t solves = 0;

  PolicyPoint to_policy(std::size_t v, const detail::RunResult& rr, int restart) const {
    const auto& p = variants[v];
    PolicyPoint pt;
    pt.functional = f;
    pt.actions = p.na;
    pt.aux = p.nu;
    pt.side_info = p.ny;
    pt.p_au_given_x = StochasticKernel(p.ns, p.cols(), detail::joint_kernel(p, rr.state));
    if (f == Functional::encoder_closed_switch) {
      pt.reconstruction = StochasticKernel(p.ns * p.na * p.ny, p.nxh, rr.state.k);
    } else if (p.nxh > 0) {
      pt.decoder.assign(rr.eval.decoder.begin(), rr.eval.decoder.end());
    }
    pt.rate = rr.eval.rate;
    pt.distortion = rr.eval.distortion;
    pt.cost = rr.eval.cost;
    pt.lagrangian = rr.eval.lagrangian;
    pt.converged = rr.converged;
    pt.iterations = rr.iterations;
    pt.restart = restart;
    return pt;
  }

  // Returns (variant, run, restart index) of the best start.
  struct Best {
    std::size_t variant = 0;
    detail::RunResult run;
    int restart = -1;
    bool set = false;
  };

  void consider(Best& best, std::size_t v, detail::RunResult&& rr, int restart) const {
    if (!best.set || rr.eval.lagrangian < best.run.eval.lagrangian - 1e-13) {
      best.variant = v;
      best.run = std::move(rr);
      best.restart = restart;
      best.set = true;
    }
  }

  Best cold(const LagrangeWeights& w) const {
    Best best;
    for (std::size_t v = 0; v < variants.size(); ++v)
      for (int r = 0; r < cfg.restarts; ++r) {
        auto st = detail::initial_state(variants[v], r, cfg.seed);
        consider(best, v, detail::run_alternating(variants[v], std::move(st), w, cfg), r);
      }
    // One extra start next to each single-action policy. At lambda_c = 0 the
    // mixed-action starts can settle above the best pure action.
    for (std::size_t v = 0; v < variants.size(); ++v) {
      if (variants[v].na < 2) continue;
      for (std::size_t a = 0; a < variants[v].na; ++a) {
        detail::EngineState st;
        if (!detail::pure_action_state(variants[v], a, st)) continue;
        consider(best, v, detail::run_alternating(variants[v], std::move(st), w, cfg),
                 cfg.restarts + static_cast<int>(a));
      }
    }
    return best;
  }
};

LagrangianSolver::LagrangianSolver(Functional f, const ProblemSpec& spec, SolverConfig cfg)
    : impl_(std::make_unique<Impl>()) {
  spec.validate();
  cfg.validate();
  if (spec.mode == Mode::gaussian) {
    throw std::invalid_argument("Gaussian instances have no finite-alphabet functional");
  }
  impl_->f = f;
  impl_->cfg = cfg;
  const std::size_t nu = cfg.u_size ? cfg.u_size : default_aux_size(f, spec);
  auto base = detail::build_engine(f, spec, nu);
  const bool table = f == Functional::decoder_actions || f == Functional::indirect ||
                     f == Functional::causal;
  if (cfg.deterministic_actions && table && base.na > 1) {
    for (auto& m : action_map_masks(base.na, base.nu)) {
      bool empty = std::none_of(m.begin(), m.end(), [](char c) { return c != 0; });
      if (empty) continue;
      auto p = base;
      p.mask = std::move(m);
      impl_->variants.push_back(std::move(p));
    }
  } else {
    impl_->variants.push_back(std::move(base));
  }
}

LagrangianSolver::~LagrangianSolver() = default;
LagrangianSolver::LagrangianSolver(LagrangianSolver&&) noexcept = default;
LagrangianSolver& LagrangianSolver::operator=(LagrangianSolver&&) noexcept = default;

Functional LagrangianSolver::functional() const { return impl_->f; }
std::size_t LagrangianSolver::aux_size() const { return impl_->variants.front().nu; }
std::size_t LagrangianSolver::solve_count() const { return impl_->solves; }
const SolverConfig& LagrangianSolver::config() const { return impl_->cfg; }

PolicyPoint LagrangianSolver::solve_cold(const LagrangeWeights& w) const {
  w.validate();
  auto best = impl_->cold(w);
  return impl_->to_policy(best.variant, best.run, best.restart);
}

PolicyPoint LagrangianSolver::solve(const LagrangeWeights& w) {
  w.validate();
  auto& im = *impl_;
  auto best = im.cold(w);
  // Warm start from the closest cached weights, per variant.
  for (std::size_t v = 0; v < im.variants.size(); ++v) {
    const Impl::Cached* near = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& c : im.cache) {
      if (c.variant != v) continue;
      const double dd = weight_distance(c.w, w);
      if (dd < dist) {
        dist = dd;
        near = &c;
      }
    }
    if (near) {
      im.consider(best, v, detail::run_alternating(im.variants[v], near->state, w, im.cfg), -1);
    }
  }
  ++im.solves;
  im.cache.push_back({w, best.variant, best.run.state});
  return im.to_policy(best.variant, best.run, best.restart);
}

PolicyPoint LagrangianSolver::evaluate_kernel(const StochasticKernel& kernel,
                                              const LagrangeWeights& w) const {
  w.validate();
  auto p = impl_->variants.front();
  p.mask.clear();
  if (kernel.input_size() != p.ns || kernel.output_size() != p.cols()) {
    throw DimensionError("U", "kernel shape does not match |X| x |A||U|");
  }
  auto st = detail::state_from_kernel(p, kernel.data());
  detail::RunResult rr;
  if (impl_->f == Functional::encoder_closed_switch) {
    p.freeze_q = true;
    rr = detail::run_alternating(p, std::move(st), w, impl_->cfg);
  } else {
    rr.eval = detail::engine_step(p, st, w, nullptr, impl_->cfg.step.initial);
    rr.state = std::move(st);
    rr.converged = true;
  }
  Impl tmp{impl_->f, impl_->cfg, {p}, {}, 0};
  return tmp.to_policy(0, rr, -1);
}

PolicyPoint minimize_lagrangian(Functional f, const ProblemSpec& spec,
                                const LagrangeWeights& w, const SolverConfig& cfg) {
  return LagrangianSolver(f, spec, cfg).solve_cold(w);
}

ConstrainedResult constrained_search(const LagrangianOracle& oracle, double d,
                                     double c, const SearchOptions& opt) {
  ConstrainedResult res;
  res.dual_bound = -std::numeric_limits<double>::infinity();
  const double tol = opt.feasibility_tol;

  auto eval = [&](double ld, double lc) {
    RatePoint p = oracle({ld, lc});
    res.points.push_back(p);
    const double dual = p.rate + ld * (p.distortion - d) + lc * (p.cost - c);
    res.dual_bound = std::max(res.dual_bound, dual);
    return p;
  };

  struct Mix {
    bool ok = false;
    double rate = 0.0, cost = 0.0;
  };

  // Generic bracket + bisection on one multiplier. `value` maps a multiplier
  // to (constraint value, rate, other) and the constraint is value <= limit.
  struct Probe {
    bool ok = false;
    double g = 0.0, rate = 0.0, other = 0.0;
  };
  // `hint` carries the multiplier found by the previous call so nested
  // searches start from a tight bracket.
  auto search = [&](auto&& probe, double limit, double& hint) -> Probe {
    Probe lo_p = probe(0.0);
    if (!lo_p.ok) return lo_p;
    if (lo_p.g <= limit + tol) return lo_p;
    auto feasible = [&](const Probe& p) { return p.ok && p.g <= limit + tol; };
    double factor = hint > 0.0 ? 1.25 : 8.0;
    double lo = 0.0, hi = hint > 0.0 ? hint : std::clamp(1.0, opt.lambda_min, opt.lambda_max);
    Probe hi_p = probe(hi);
    if (!feasible(hi_p)) {
      lo = hi;
      lo_p = hi_p;
      bool found = false;
      while (hi < opt.lambda_cap) {
        hi *= factor;
        factor = std::min(factor * 2.0, 8.0);
        hi_p = probe(hi);
        if (feasible(hi_p)) {
          found = true;
          break;
        }
        lo = hi;
        lo_p = hi_p;
      }
      if (!found) return Probe{};
    } else {
      while (hi > opt.lambda_min) {
        const double cand = hi / factor;
        factor = std::min(factor * 2.0, 8.0);
        Probe p = probe(cand);
        if (!feasible(p)) {
          lo = cand;
          lo_p = p;
          break;
        }
        hi = cand;
        hi_p = p;
      }
    }
    // Illinois false position on g(lambda) - limit, with a bisection step
    // whenever the bracket fails to halve.
    double f_lo = lo_p.g - limit, f_hi = hi_p.g - limit;
    int last = 0;
    double width = hi - lo;
    for (int it = 0; it < opt.max_bisections; ++it) {
      if (!lo_p.ok) break;
      const double gap = (hi - lo) * std::max(0.0, lo_p.g - hi_p.g);
      if (gap <= opt.gap_tol) break;
      if (lo > 0.0 && hi / lo < 1.0 + 1e-12) break;
      double mid = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      const bool stalled = it % 3 == 2 && hi - lo > 0.5 * width;
      if (stalled || !(mid > lo + 1e-3 * (hi - lo)) || !(mid < hi - 1e-3 * (hi - lo))) {
        mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
        last = 0;
      }
      if (it % 3 == 2) width = hi - lo;
      Probe p = probe(mid);
      if (feasible(p)) {
        hi = mid;
        hi_p = p;
        f_hi = p.g - limit;
        if (last == 1) f_lo *= 0.5;
        last = 1;
      } else {
        lo = mid;
        lo_p = p;
        f_lo = p.ok ? p.g - limit : f_lo;
        if (last == -1) f_hi *= 0.5;
        last = -1;
      }
    }
    hint = hi;
    if (!lo_p.ok || lo_p.g <= hi_p.g) return hi_p;
    // Mix the two bracketing solutions so the constraint holds with equality.
    const double theta = std::clamp((lo_p.g - limit) / (lo_p.g - hi_p.g), 0.0, 1.0);
    Probe m;
    m.ok = true;
    m.g = theta * hi_p.g + (1 - theta) * lo_p.g;
    m.rate = theta * hi_p.rate + (1 - theta) * lo_p.rate;
    m.other = theta * hi_p.other + (1 - theta) * lo_p.other;
    return m;
  };

  double ld_hint = 0.0, lc_hint = 0.0;
  auto inner = [&](double lc) -> Probe {
    if (!opt.distortion_active) {
      RatePoint p = eval(0.0, lc);
      return {true, p.cost, p.rate, p.distortion};
    }
    auto probe_d = [&](double ld) -> Probe {
      RatePoint p = eval(ld, lc);
      return {true, p.distortion, p.rate, p.cost};
    };
    Probe r = search(probe_d, d, ld_hint);
    if (!r.ok) return r;
    // Re-express as a probe on the cost constraint.
    return {true, r.other, r.rate, r.g};
  };

  if (opt.cost_active) {
    search(inner, c, lc_hint);
  } else {
    inner(0.0);
  }

  res.envelope = lower_envelope(res.points, d, c, tol);
  res.feasible = res.envelope.feasible;
  res.rate = res.feasible ? res.envelope.rate : std::numeric_limits<double>::infinity();
  return res;
}

SearchOptions search_options(const SolverConfig& cfg, Functional f, const ProblemSpec& spec) {
  SearchOptions opt;
  opt.lambda_min = cfg.lambda_min;
  opt.lambda_max = cfg.lambda_max;
  opt.feasibility_tol = cfg.feasibility_tol;
  opt.gap_tol = cfg.gap_tol;
  opt.distortion_active = has_distortion(f);
  opt.cost_active = spec.lambda.max() > spec.lambda.min();
  return opt;
}

namespace {

ConstrainedResult constrained_with_solver(LagrangianSolver& solver, const ProblemSpec& spec,
                                          double d, double c, std::vector<PolicyPoint>* keep) {
  if (!std::isfinite(d) || !std::isfinite(c) || d < 0.0 || c < 0.0) {
    throw std::invalid_argument("distortion and cost limits must be finite and >= 0");
  }
  const auto f = solver.functional();
  const auto& cfg = solver.config();
  ConstrainedResult res;
  res.rate = std::numeric_limits<double>::infinity();
  if (c < spec.lambda.min() - cfg.feasibility_tol) return res;
  if (has_distortion(f) && f != Functional::indirect &&
      d < spec.min_distortion() - cfg.feasibility_tol) {
    return res;
  }
  auto oracle = [&](const LagrangeWeights& w) {
    auto p = solver.solve(w);
    RatePoint r{p.rate, p.distortion, p.cost};
    if (keep) keep->push_back(std::move(p));
    return r;
  };
  return constrained_search(oracle, d, c, search_options(cfg, f, spec));
}

}  // namespace

ConstrainedResult solve_constrained(LagrangianSolver& solver, const ProblemSpec& spec,
                                    double d, double c) {
  return constrained_with_solver(solver, spec, d, c, nullptr);
}

PolicyMixture solve_constrained_with_policies(LagrangianSolver& solver,
                                              const ProblemSpec& spec, double d, double c) {
  std::vector<PolicyPoint> seen;
  PolicyMixture out;
  out.result = constrained_with_solver(solver, spec, d, c, &seen);
  for (const auto& [idx, weight] : out.result.envelope.support) {
    if (idx < seen.size() && weight > 0.0) out.support.emplace_back(weight, seen[idx]);
  }
  return out;
}

ConstrainedResult solve_constrained(Functional f, const ProblemSpec& spec, double d,
                                    double c, const SolverConfig& cfg) {
  LagrangianSolver solver(f, spec, cfg);
  return solve_constrained(solver, spec, d, c);
}

TradeoffCurve sweep_tradeoff(Functional f, const ProblemSpec& spec,
                             std::span<const double> d_grid,
                             std::span<const double> c_grid, const SolverConfig& cfg) {
  if (d_grid.empty() || c_grid.empty()) throw std::invalid_argument("empty (d, c) grid");
  LagrangianSolver solver(f, spec, cfg);
  const auto opt = search_options(cfg, f, spec);
  TradeoffCurve curve;
  curve.d_grid.assign(d_grid.begin(), d_grid.end());
  curve.c_grid.assign(c_grid.begin(), c_grid.end());
  curve.feasibility_tol = cfg.feasibility_tol;

  std::vector<double> lams{0.0};
  if (cfg.lambda_points == 1) {
    lams.push_back(cfg.lambda_min);
  } else {
    const double ratio = std::log(cfg.lambda_max / cfg.lambda_min);
    for (int i = 0; i < cfg.lambda_points; ++i)
      lams.push_back(cfg.lambda_min * std::exp(ratio * i / (cfg.lambda_points - 1)));
  }
  const std::vector<double> zero{0.0};
  const auto& lds = opt.distortion_active ? lams : zero;
  const auto& lcs = opt.cost_active ? lams : zero;
  for (double lc : lcs)
    for (double ld : lds) {
      auto p = solver.solve({ld, lc});
      curve.points.push_back({p.rate, p.distortion, p.cost});
    }
  if (cfg.refine_sweep) {
    for (double d : d_grid)
      for (double c : c_grid) {
        auto r = solve_constrained(solver, spec, d, c);
        curve.points.insert(curve.points.end(), r.points.begin(), r.points.end());
      }
  }
  for (double d : d_grid)
    for (double c : c_grid) {
      auto env = curve.evaluate(d, c);
      curve.samples.push_back({d, c, env.rate, env.feasible});
    }
  return curve;
}

}  // namespace vending
