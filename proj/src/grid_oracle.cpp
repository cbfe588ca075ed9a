// Brute-force reference minimizer. Objectives are evaluated from the joint
// distribution through the generic information measures, not through the
// solver's variational forms, so agreement is a genuine cross-check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vending/simplex_solver.hpp"

namespace vending {

namespace {

struct GridEval {
  double rate = 0.0;
  double distortion = 0.0;
  double cost = 0.0;
  std::vector<std::size_t> decoder;
};

// Optimal reconstruction for each (a, u, y) from a joint with axes
// X, A, U, Y (in that order) and its distortion.
double decode_from_joint(const JointDist& j, const DistortionMatrix& rho,
                         std::vector<std::size_t>& table) {
  const std::size_t nx = j.shape()[0], na = j.shape()[1], nu = j.shape()[2],
                    ny = j.shape()[3];
  table.assign(na * nu * ny, 0);
  double total = 0.0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t y = 0; y < ny; ++y) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t xh = 0; xh < rho.reproduction_size(); ++xh) {
          double v = 0.0;
          for (std::size_t x = 0; x < nx; ++x) v += j.at({x, a, u, y}) * rho(x, xh);
          if (v < best) {
            best = v;
            table[(a * nu + u) * ny + y] = xh;
          }
        }
        total += best;
      }
  return total;
}

double action_cost(const JointDist& j, const CostVector& lambda) {
  const auto pa = j.marginal({"A"});
  double c = 0.0;
  for (std::size_t a = 0; a < lambda.size(); ++a) c += pa.data()[a] * lambda[a];
  return c;
}

// E rho(X, table(A,U,Y)) for a fixed reconstruction table.
double table_distortion(const JointDist& j, const DistortionMatrix& rho,
                        const std::vector<std::size_t>& table) {
  const std::size_t nx = j.shape()[0], na = j.shape()[1], nu = j.shape()[2],
                    ny = j.shape()[3];
  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t y = 0; y < ny; ++y)
          total += j.at({x, a, u, y}) * rho(x, table[(a * nu + u) * ny + y]);
  return total;
}

// With `fixed` set, the reconstruction table is held at *fixed instead of
// being re-optimized.
GridEval evaluate(Functional f, const ProblemSpec& spec, std::size_t nu,
                  const StochasticKernel& kernel,
                  const std::vector<std::size_t>* fixed = nullptr) {
  GridEval ev;
  switch (f) {
    case Functional::decoder_actions:
    case Functional::causal:
    case Functional::encoder_open_switch: {
      const auto j = factorize(spec.px, kernel, spec.p_y_given_xa);
      if (f == Functional::decoder_actions) {
        ev.rate = mutual_information(j, {"X"}, {"A"}) +
                  conditional_mutual_information(j, {"X"}, {"U"}, {"Y", "A"});
      } else if (f == Functional::causal) {
        ev.rate = mutual_information(j, {"X"}, {"U", "A"});
      } else {
        ev.rate = mutual_information(j, {"X"}, {"A"}) - mutual_information(j, {"Y"}, {"A"}) +
                  conditional_mutual_information(j, {"U"}, {"X"}, {"A", "Y"});
      }
      if (fixed) {
        ev.decoder = *fixed;
        ev.distortion = table_distortion(j, spec.rho, ev.decoder);
      } else {
        ev.distortion = decode_from_joint(j, spec.rho, ev.decoder);
      }
      ev.cost = action_cost(j, spec.lambda);
      return ev;
    }
    case Functional::indirect: {
      const auto j = factorize_indirect(spec.px, *spec.p_z_given_x, kernel, *spec.p_y_given_xza);
      ev.rate = mutual_information(j, {"Z"}, {"A"}) +
                conditional_mutual_information(j, {"Z"}, {"U"}, {"Y", "A"});
      const auto jx = j.marginal({"X", "A", "U", "Y"});
      if (fixed) {
        ev.decoder = *fixed;
        ev.distortion = table_distortion(jx, spec.rho, ev.decoder);
      } else {
        ev.distortion = decode_from_joint(jx, spec.rho, ev.decoder);
      }
      ev.cost = action_cost(j, spec.lambda);
      return ev;
    }
    case Functional::decoder_lossless:
    case Functional::encoder_lossless: {
      const auto j = factorize(spec.px, kernel, spec.p_y_given_xa);
      if (f == Functional::decoder_lossless) {
        ev.rate = mutual_information(j, {"X"}, {"A"}) + conditional_entropy(j, {"X"}, {"Y", "A"});
      } else {
        ev.rate = j.entropy({"X"}) - mutual_information(j, {"Y"}, {"A", "X"});
      }
      ev.cost = action_cost(j, spec.lambda);
      return ev;
    }
    default:
      break;
  }
  (void)nu;
  throw std::invalid_argument("grid_oracle: functional '" + std::string(to_string(f)) +
                              "' is not supported");
}

// All compositions of `res` into `parts` nonnegative integers, scaled by 1/res.
std::vector<std::vector<double>> simplex_grid(std::size_t parts, int res) {
  std::vector<std::vector<double>> out;
  std::vector<int> c(parts, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == parts) {
      c[i] = left;
      std::vector<double> row(parts);
      for (std::size_t k = 0; k < parts; ++k) row[k] = static_cast<double>(c[k]) / res;
      out.push_back(std::move(row));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      c[i] = k;
      self(self, i + 1, left - k);
    }
  };
  rec(rec, 0, res);
  return out;
}

double binom_count(std::size_t parts, int res) {
  // C(res + parts - 1, parts - 1)
  double v = 1.0;
  for (std::size_t k = 1; k < parts; ++k) v = v * static_cast<double>(res + k) / static_cast<double>(k);
  return v;
}

struct GridSetup {
  std::size_t rows = 0, cols = 0, nu = 1;
  std::vector<std::vector<double>> row_grid;
};

GridSetup setup(Functional f, const ProblemSpec& spec, int resolution, const SolverConfig& cfg) {
  spec.validate();
  if (resolution < 1) throw std::invalid_argument("grid_oracle: resolution must be >= 1");
  GridSetup g;
  const bool lossless = f == Functional::encoder_lossless || f == Functional::decoder_lossless;
  g.nu = lossless ? 1 : (cfg.u_size ? cfg.u_size : default_aux_size(f, spec));
  g.rows = f == Functional::indirect ? spec.z_size() : spec.x_size();
  g.cols = spec.a_size() * g.nu;
  const double total = std::pow(binom_count(g.cols, resolution), static_cast<double>(g.rows));
  if (total > static_cast<double>(cfg.grid_budget)) {
    throw std::invalid_argument(
        "grid_oracle: " + std::to_string(static_cast<long long>(total)) +
        " grid points exceed the budget of " + std::to_string(cfg.grid_budget) +
        "; reduce the resolution or the alphabet sizes");
  }
  g.row_grid = simplex_grid(g.cols, resolution);
  return g;
}

PolicyPoint make_point(Functional f, const GridSetup& g, const ProblemSpec& spec,
                       std::vector<double> flat, const GridEval& ev, double lagr) {
  PolicyPoint pt;
  pt.functional = f;
  pt.p_au_given_x = StochasticKernel(g.rows, g.cols, std::move(flat));
  pt.decoder = ev.decoder;
  pt.actions = spec.a_size();
  pt.aux = g.nu;
  pt.side_info = spec.y_size();
  pt.rate = ev.rate;
  pt.distortion = ev.distortion;
  pt.cost = ev.cost;
  pt.lagrangian = lagr;
  pt.converged = true;
  return pt;
}

template <typename Visit>
void enumerate(const GridSetup& g, Visit&& visit) {
  std::vector<std::size_t> idx(g.rows, 0);
  std::vector<double> flat(g.rows * g.cols);
  const std::size_t n = g.row_grid.size();
  for (;;) {
    for (std::size_t r = 0; r < g.rows; ++r)
      std::copy(g.row_grid[idx[r]].begin(), g.row_grid[idx[r]].end(), flat.begin() + r * g.cols);
    visit(flat);
    std::size_t r = 0;
    while (r < g.rows && ++idx[r] == n) idx[r++] = 0;
    if (r == g.rows) break;
  }
}

}  // namespace

PolicyPoint grid_oracle(Functional f, const ProblemSpec& spec, const LagrangeWeights& w,
                        int resolution, const SolverConfig& cfg) {
  w.validate();
  const auto g = setup(f, spec, resolution, cfg);
  using Table = std::vector<std::size_t>;
  auto objective = [&](const std::vector<double>& flat, const Table* fixed, GridEval* out) {
    GridEval ev = evaluate(f, spec, g.nu, StochasticKernel(g.rows, g.cols, flat), fixed);
    const double l = ev.rate + w.lambda_d * ev.distortion + w.lambda_c * ev.cost;
    if (out) *out = std::move(ev);
    return l;
  };

  // The objective is the minimum over reconstruction tables of functions
  // convex in the kernel. Seeds: the best grid points overall (refined with
  // the table re-optimized at every step) and the best grid point of each
  // table that occurs (refined with that table held fixed, so each convex
  // piece is descended separately and plateaus do not trap the search).
  constexpr std::size_t kSeeds = 4;
  constexpr std::size_t kTableSeeds = 16;
  struct Seed {
    double l;
    std::vector<double> flat;
    Table table;
  };
  std::vector<Seed> top, per_table;
  auto keep = [](std::vector<Seed>& v, std::size_t cap, Seed s) {
    v.push_back(std::move(s));
    std::sort(v.begin(), v.end(), [](const Seed& a, const Seed& b) { return a.l < b.l; });
    if (v.size() > cap) v.pop_back();
  };
  enumerate(g, [&](const std::vector<double>& flat) {
    GridEval ev;
    const double l = objective(flat, nullptr, &ev);
    if (top.size() < kSeeds || l < top.back().l) keep(top, kSeeds, {l, flat, {}});
    if (ev.decoder.empty()) return;
    auto it = std::find_if(per_table.begin(), per_table.end(),
                           [&](const Seed& s) { return s.table == ev.decoder; });
    if (it != per_table.end()) {
      if (l < it->l) {
        it->l = l;
        it->flat = flat;
        std::sort(per_table.begin(), per_table.end(),
                  [](const Seed& a, const Seed& b) { return a.l < b.l; });
      }
    } else if (per_table.size() < kTableSeeds || l < per_table.back().l) {
      keep(per_table, kTableSeeds, {l, flat, ev.decoder});
    }
  });

  // Pattern search: move mass h between two entries of one row, halving h
  // whenever no move improves.
  auto refine = [&](Seed& seed) {
    const Table* fixed = seed.table.empty() ? nullptr : &seed.table;
    auto& flat = seed.flat;
    double cur = objective(flat, fixed, nullptr);
    double h = 1.0 / resolution;
    for (int level = 0; level < cfg.grid_refine_levels && h > 1e-9;) {
      bool improved = false;
      for (std::size_t r = 0; r < g.rows; ++r)
        for (std::size_t i = 0; i < g.cols; ++i)
          for (std::size_t j = 0; j < g.cols; ++j) {
            if (i == j) continue;
            double* row = flat.data() + r * g.cols;
            const double step = std::min(h, row[j]);
            if (step <= 0.0) continue;
            row[i] += step;
            row[j] -= step;
            const double l = objective(flat, fixed, nullptr);
            if (l < cur - 1e-13) {
              cur = l;
              improved = true;
            } else {
              row[i] -= step;
              row[j] += step;
            }
          }
      if (!improved) {
        h *= 0.5;
        ++level;
      }
    }
    // re-optimizing the table can only help
    return objective(flat, nullptr, nullptr);
  };
  double best_l = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (auto* group : {&top, &per_table})
    for (auto& seed : *group) {
      const double l = refine(seed);
      if (l < best_l) {
        best_l = l;
        best = seed.flat;
      }
    }
  GridEval ev;
  const double l = objective(best, nullptr, &ev);
  return make_point(f, g, spec, std::move(best), ev, l);
}

PolicyPoint grid_oracle_constrained(Functional f, const ProblemSpec& spec, double d, double c,
                                    int resolution, const SolverConfig& cfg) {
  const auto g = setup(f, spec, resolution, cfg);
  const double tol = cfg.feasibility_tol;
  double best_rate = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  GridEval best_ev;
  enumerate(g, [&](const std::vector<double>& flat) {
    GridEval ev = evaluate(f, spec, g.nu, StochasticKernel(g.rows, g.cols, flat));
    if (ev.distortion > d + tol || ev.cost > c + tol) return;
    if (ev.rate < best_rate - 1e-13) {
      best_rate = ev.rate;
      best = flat;
      best_ev = std::move(ev);
    }
  });
  if (best.empty()) {
    throw std::invalid_argument("grid_oracle_constrained: no grid point meets the constraints");
  }
  return make_point(f, g, spec, std::move(best), best_ev, best_ev.rate);
}

}  // namespace vending
