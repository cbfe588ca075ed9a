#include "vending/repro.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vending/classic_rd.hpp"
#include "vending/decoder_actions.hpp"
#include "vending/encoder_actions.hpp"

namespace vending {

using nlohmann::json;

ParseError::ParseError(std::string field, const std::string& what)
    : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

void SolverOverrides::apply(SolverConfig& cfg) const {
  if (restarts) cfg.restarts = *restarts;
  if (seed) cfg.seed = *seed;
  if (grid_resolution) cfg.grid_resolution = *grid_resolution;
  if (u_size) cfg.u_size = *u_size;
  if (max_iters) cfg.max_iters = *max_iters;
}

namespace {

constexpr double kRowTol = 1e-9;
constexpr double kRenormTol = 1e-6;

std::string idx_path(const std::string& base, std::initializer_list<std::size_t> idx) {
  std::string p = base;
  for (auto i : idx) p += "[" + std::to_string(i) + "]";
  return p;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(idx_path(path, {i}), "expected a number");
    const double x = j[i].get<double>();
    if (!std::isfinite(x)) throw ParseError(idx_path(path, {i}), "not finite");
    v.push_back(x);
  }
  return v;
}

// Checks a probability row; renormalizes (and records a warning) when the
// sum is off by less than kRenormTol.
void check_row(std::vector<double>& row, const std::string& path,
               std::vector<std::string>& warnings) {
  if (row.empty()) throw ParseError(path, "empty row");
  double s = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] < 0.0) throw ParseError(idx_path(path, {i}), "negative probability");
    s += row[i];
  }
  const double err = std::abs(s - 1.0);
  if (err <= kRowTol) return;
  if (err <= kRenormTol) {
    for (double& v : row) v /= s;
    warnings.push_back(path + ": row renormalized (sum was " + std::to_string(s) + ")");
    return;
  }
  std::ostringstream os;
  os << "row sums to " << s << ", expected 1";
  throw ParseError(path, os.str());
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(key, "missing field");
  return *it;
}

std::size_t expect_size(const json& j, const std::string& path, std::size_t n, const char* axis) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  if (n != 0 && j.size() != n) {
    throw ParseError(path, "expected " + std::to_string(n) + " entries along " + axis + ", got " +
                               std::to_string(j.size()));
  }
  if (j.size() == 0) throw ParseError(path, std::string("empty along ") + axis);
  return j.size();
}

std::vector<double> grid(const json& doc, const char* key, std::vector<double> fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (it->is_number()) return {it->get<double>()};
  auto v = numbers(*it, key);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0.0) throw ParseError(idx_path(key, {i}), "must be >= 0");
  if (v.empty()) throw ParseError(key, "empty grid");
  return v;
}

void parse_solver(const json& j, SolverOverrides& o) {
  if (!j.is_object()) throw ParseError("solver", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string path = "solver." + it.key();
    if (!it->is_number_integer() && !it->is_number_unsigned()) {
      throw ParseError(path, "expected an integer");
    }
    if (it.key() == "restarts") {
      o.restarts = it->get<int>();
    } else if (it.key() == "seed") {
      o.seed = it->get<std::uint64_t>();
    } else if (it.key() == "grid_resolution") {
      o.grid_resolution = it->get<int>();
    } else if (it.key() == "u_size") {
      o.u_size = it->get<std::size_t>();
    } else if (it.key() == "max_iters") {
      o.max_iters = it->get<int>();
    } else {
      throw ParseError(path, "unknown solver setting");
    }
  }
}

}  // namespace

ProblemDocument parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  if (!doc.is_object()) throw ParseError("document", "expected a JSON object");

  ProblemDocument out;
  auto& s = out.spec;
  auto& warn = out.warnings;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("id", "expected a string");
    out.id = it->get<std::string>();
  }
  const json& mode = require(doc, "mode");
  if (!mode.is_string()) throw ParseError("mode", "expected a string");
  try {
    s.mode = mode_from_string(mode.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError("mode", e.what());
  }
  if (auto it = doc.find("solver"); it != doc.end()) parse_solver(*it, out.solver);

  if (s.mode == Mode::gaussian) {
    const json& g = require(doc, "gaussian");
    if (!g.is_object()) throw ParseError("gaussian", "expected an object");
    GaussianSpec gs;
    for (const char* key : {"var_x", "var_n"}) {
      auto it = g.find(key);
      if (it == g.end() || !it->is_number()) {
        throw ParseError(std::string("gaussian.") + key, "expected a number");
      }
      (std::string(key) == "var_x" ? gs.var_x : gs.var_n) = it->get<double>();
    }
    if (!(gs.var_x > 0.0) || !(gs.var_n > 0.0)) throw ParseError("gaussian", "variances must be > 0");
    out.d_grid = grid(doc, "d", {gs.var_x});
    out.c_grid = grid(doc, "c", {0.0});
    for (std::size_t i = 0; i < out.d_grid.size(); ++i)
      if (!(out.d_grid[i] > 0.0)) throw ParseError(idx_path("d", {i}), "must be > 0");
    gs.d = out.d_grid.front();
    gs.c = out.c_grid.front();
    s.gaussian = gs;
    return out;
  }

  auto px = numbers(require(doc, "p_x"), "p_x");
  check_row(px, "p_x", warn);
  s.px = ProbVector(px);
  const std::size_t nx = px.size();

  auto lambda = numbers(require(doc, "lambda"), "lambda");
  if (lambda.empty()) throw ParseError("lambda", "empty cost vector");
  for (std::size_t a = 0; a < lambda.size(); ++a)
    if (lambda[a] < 0.0) throw ParseError(idx_path("lambda", {a}), "costs must be >= 0");
  s.lambda = CostVector(lambda);
  const std::size_t na = lambda.size();

  const json& rho = require(doc, "rho");
  expect_size(rho, "rho", nx, "X");
  std::size_t nxh = 0;
  std::vector<double> rflat;
  for (std::size_t x = 0; x < nx; ++x) {
    const std::string path = idx_path("rho", {x});
    nxh = expect_size(rho[x], path, nxh, "Xhat");
    auto row = numbers(rho[x], path);
    for (std::size_t h = 0; h < row.size(); ++h)
      if (row[h] < 0.0) throw ParseError(idx_path(path, {h}), "distortion must be >= 0");
    rflat.insert(rflat.end(), row.begin(), row.end());
  }
  s.rho = DistortionMatrix(nx, nxh, std::move(rflat));

  if (s.mode == Mode::indirect) {
    const json& pz = require(doc, "p_z_given_x");
    expect_size(pz, "p_z_given_x", nx, "X");
    std::size_t nz = 0;
    std::vector<double> zflat;
    for (std::size_t x = 0; x < nx; ++x) {
      const std::string path = idx_path("p_z_given_x", {x});
      nz = expect_size(pz[x], path, nz, "Z");
      auto row = numbers(pz[x], path);
      check_row(row, path, warn);
      zflat.insert(zflat.end(), row.begin(), row.end());
    }
    s.p_z_given_x = StochasticKernel(nx, nz, std::move(zflat));
    const json& py = require(doc, "p_y_given_xza");
    expect_size(py, "p_y_given_xza", nx, "X");
    std::size_t ny = 0;
    std::vector<double> yflat;
    for (std::size_t x = 0; x < nx; ++x) {
      expect_size(py[x], idx_path("p_y_given_xza", {x}), nz, "Z");
      for (std::size_t z = 0; z < nz; ++z) {
        expect_size(py[x][z], idx_path("p_y_given_xza", {x, z}), na, "A");
        for (std::size_t a = 0; a < na; ++a) {
          const std::string path = idx_path("p_y_given_xza", {x, z, a});
          ny = expect_size(py[x][z][a], path, ny, "Y");
          auto row = numbers(py[x][z][a], path);
          check_row(row, path, warn);
          yflat.insert(yflat.end(), row.begin(), row.end());
        }
      }
    }
    s.p_y_given_xza = StochasticKernel(nx * nz * na, ny, std::move(yflat));
  } else {
    const json& py = require(doc, "p_y_given_xa");
    expect_size(py, "p_y_given_xa", nx, "X");
    std::size_t ny = 0;
    std::vector<double> yflat;
    for (std::size_t x = 0; x < nx; ++x) {
      expect_size(py[x], idx_path("p_y_given_xa", {x}), na, "A");
      for (std::size_t a = 0; a < na; ++a) {
        const std::string path = idx_path("p_y_given_xa", {x, a});
        ny = expect_size(py[x][a], path, ny, "Y");
        auto row = numbers(py[x][a], path);
        check_row(row, path, warn);
        yflat.insert(yflat.end(), row.begin(), row.end());
      }
    }
    s.p_y_given_xa = StochasticKernel(nx * na, ny, std::move(yflat));
  }

  if (auto it = doc.find("alphabets"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("alphabets", "expected an object");
    for (auto a = it->begin(); a != it->end(); ++a) {
      const std::string path = "alphabets." + a.key();
      if (!a->is_array()) throw ParseError(path, "expected an array of names");
      std::vector<std::string> names;
      for (const auto& n : *a) {
        if (!n.is_string()) throw ParseError(path, "symbol names must be strings");
        names.push_back(n.get<std::string>());
      }
      std::size_t want = 0;
      if (a.key() == "X") want = nx;
      else if (a.key() == "A") want = na;
      else if (a.key() == "Y") want = s.y_size();
      else if (a.key() == "Z") want = s.z_size();
      else if (a.key() == "Xhat") want = nxh;
      else throw ParseError(path, "unknown axis");
      if (names.size() != want) {
        throw ParseError(path, "has " + std::to_string(names.size()) + " symbols, kernel needs " +
                                   std::to_string(want));
      }
      out.alphabets.emplace_back(a.key(), std::move(names));
    }
  }

  out.d_grid = grid(doc, "d", {0.0});
  out.c_grid = grid(doc, "c", {s.unconstrained_cost()});
  try {
    s.validate();
  } catch (const DimensionError& e) {
    throw ParseError("axis " + e.axis(), e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError("document", e.what());
  }
  return out;
}

ProblemDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  auto doc = parse_document(ss.str());
  if (doc.id.empty()) doc.id = path.stem().string();
  return doc;
}

std::string serialize_document(const ProblemDocument& d) {
  const auto& s = d.spec;
  json j;
  j["id"] = d.id;
  j["mode"] = std::string(to_string(s.mode));
  j["d"] = d.d_grid;
  j["c"] = d.c_grid;
  json solver = json::object();
  if (d.solver.restarts) solver["restarts"] = *d.solver.restarts;
  if (d.solver.seed) solver["seed"] = *d.solver.seed;
  if (d.solver.grid_resolution) solver["grid_resolution"] = *d.solver.grid_resolution;
  if (d.solver.u_size) solver["u_size"] = *d.solver.u_size;
  if (d.solver.max_iters) solver["max_iters"] = *d.solver.max_iters;
  if (!solver.empty()) j["solver"] = solver;
  if (s.mode == Mode::gaussian) {
    j["gaussian"] = {{"var_x", s.gaussian->var_x}, {"var_n", s.gaussian->var_n}};
    return j.dump(2) + "\n";
  }
  if (!d.alphabets.empty()) {
    json al = json::object();
    for (const auto& [axis, names] : d.alphabets) al[axis] = names;
    j["alphabets"] = al;
  }
  j["p_x"] = s.px.vec();
  j["lambda"] = s.lambda.vec();
  j["rho"] = s.rho.to_rows();
  const std::size_t nx = s.x_size(), na = s.a_size();
  if (s.mode == Mode::indirect) {
    j["p_z_given_x"] = s.p_z_given_x->to_rows();
    const std::size_t nz = s.z_size(), ny = s.y_size();
    json py = json::array();
    for (std::size_t x = 0; x < nx; ++x) {
      json px = json::array();
      for (std::size_t z = 0; z < nz; ++z) {
        json pz = json::array();
        for (std::size_t a = 0; a < na; ++a) {
          auto r = s.p_y_given_xza->row((x * nz + z) * na + a);
          pz.push_back(std::vector<double>(r.begin(), r.begin() + static_cast<long>(ny)));
        }
        px.push_back(pz);
      }
      py.push_back(px);
    }
    j["p_y_given_xza"] = py;
  } else {
    json py = json::array();
    for (std::size_t x = 0; x < nx; ++x) {
      json px = json::array();
      for (std::size_t a = 0; a < na; ++a) {
        auto r = s.p_y_given_xa.row(x * na + a);
        px.push_back(std::vector<double>(r.begin(), r.end()));
      }
      py.push_back(px);
    }
    j["p_y_given_xa"] = py;
  }
  return j.dump(2) + "\n";
}

std::filesystem::path data_directory() { return std::filesystem::path(VENDING_DATA_DIR); }

std::vector<std::string> bundled_instance_names() {
  return {"zs_lossless",         "zs_cost",      "ternary",   "observe_or_not_identity",
          "observe_or_not_erasure", "gaussian_unit", "markov_bsc", "indirect_bsc"};
}

ProblemDocument bundled_instance(std::string_view name) {
  const auto names = bundled_instance_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown bundled instance '" + std::string(name) + "'");
  }
  return load_document(data_directory() / "instances" / (std::string(name) + ".json"));
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string CurveEmission::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i] ? fmt(*row[i]) : "infeasible";
    }
    out += "\n";
  }
  return out;
}

std::string CurveEmission::to_json() const {
  json j;
  json meta = json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = meta;
  j["columns"] = columns;
  json rs = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& cell : row) {
      if (cell) r.push_back(*cell);
      else r.push_back("infeasible");
    }
    rs.push_back(r);
  }
  j["rows"] = rs;
  return j.dump(2) + "\n";
}

std::string config_digest(const SolverConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << cfg.max_iters << '|' << cfg.objective_tol << '|' << cfg.step.initial << '|' << cfg.step.growth
     << '|' << cfg.step.max << '|' << cfg.restarts << '|' << cfg.seed << '|' << cfg.grid_resolution
     << '|' << cfg.grid_budget << '|' << cfg.grid_refine_levels << '|' << cfg.lambda_min << '|'
     << cfg.lambda_max << '|' << cfg.lambda_points << '|' << cfg.feasibility_tol << '|'
     << cfg.gap_tol << '|' << cfg.u_size << '|' << cfg.deterministic_actions << '|'
     << cfg.refine_sweep;
  // FNV-1a, 64 bit
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Cell = std::optional<double>;

Cell value_of(const ConstrainedResult& r) {
  return r.feasible ? Cell(r.rate) : std::nullopt;
}

}  // namespace

CurveEmission solve_document(const ProblemDocument& doc, const SolverOverrides& cli) {
  SolverConfig cfg;
  doc.solver.apply(cfg);
  cli.apply(cfg);
  cfg.validate();
  const auto& s = doc.spec;

  CurveEmission em;
  em.metadata = {{"instance", doc.id.empty() ? "unnamed" : doc.id},
                 {"mode", std::string(to_string(s.mode))},
                 {"config_digest", config_digest(cfg)},
                 {"tool_version", std::string(kToolVersion)}};
  em.columns = {"d", "c", "rate"};
  if (s.mode == Mode::decoder) em.columns = {"d", "c", "rate", "greedy", "timeshare"};
  if (s.mode == Mode::encoder_bounds) {
    em.columns = {"d", "c", "lower", "upper_open_switch", "upper_closed_switch", "certified_exact"};
  }

  for (double d : doc.d_grid) {
    Cell greedy;
    if (s.mode == Mode::decoder && d >= s.min_distortion() - cfg.feasibility_tol) {
      greedy = greedy_rate(s, std::max(d, s.min_distortion()), cfg);
    }
    for (double c : doc.c_grid) {
      std::vector<Cell> row{d, c};
      const bool feasible = s.mode == Mode::gaussian ||
                            (c >= s.lambda.min() - cfg.feasibility_tol &&
                             (s.mode == Mode::indirect || s.mode == Mode::encoder_lossless ||
                              d >= s.min_distortion() - cfg.feasibility_tol));
      switch (s.mode) {
        case Mode::decoder:
          row.push_back(value_of(rdc_decoder(s, d, c, cfg)));
          row.push_back(greedy);
          row.push_back(value_of(timeshare_bound(s, d, c, cfg)));
          break;
        case Mode::decoder_independent:
          row.push_back(value_of(rdc_independent(s, d, c, cfg)));
          break;
        case Mode::causal:
          row.push_back(value_of(rdc_causal(s, d, c, cfg)));
          break;
        case Mode::indirect:
          row.push_back(value_of(rdc_indirect(s, d, c, cfg)));
          break;
        case Mode::encoder_lossless:
          row.push_back(value_of(encoder_lossless_rate(s, c, cfg)));
          break;
        case Mode::encoder_markov:
          row.push_back(feasible ? Cell(markov_rdc(s, d, c, cfg)) : std::nullopt);
          break;
        case Mode::encoder_bounds: {
          const auto b = encoder_bounds(s, d, c, cfg);
          if (b.feasible) {
            row.insert(row.end(), {b.lower, b.upper_open_switch, b.upper_closed_switch,
                                   b.certified_exact ? 1.0 : 0.0});
          } else {
            row.insert(row.end(), 4, std::nullopt);
          }
          break;
        }
        case Mode::gaussian: {
          GaussianSpec g = *s.gaussian;
          g.d = d;
          g.c = c;
          row.push_back(gaussian_rdc(g));
          break;
        }
      }
      em.rows.push_back(std::move(row));
    }
  }
  return em;
}

std::pair<double, double> zs_lossless_rates(double delta, const SolverConfig& cfg) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in [0, 1]");
  ProblemSpec zs;
  zs.mode = Mode::decoder;
  zs.px = ProbVector{0.5, 0.5};
  zs.p_y_given_xa = StochasticKernel({{1.0, 0.0}, {1.0 - delta, delta}, {delta, 1.0 - delta}, {0.0, 1.0}});
  zs.rho = DistortionMatrix::hamming(2);
  zs.lambda = CostVector{0.0, 1.0};
  const double greedy = greedy_rate(zs, 0.0, cfg);
  const double rmin = lossless_rate_decoder(zs, zs.unconstrained_cost(), cfg).result.rate;
  return {greedy, rmin};
}

namespace {

double rb(double p, double d) { return bernoulli_rd(std::clamp(p, 0.0, 1.0), std::clamp(d, 0.0, 1.0)); }

// Golden-section minimum of a unimodal function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double* arg = nullptr) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  double best = std::min({f(lo), f(hi), f1, f2});
  if (arg) {
    *arg = best == f1 ? x1 : (best == f2 ? x2 : (best == f(lo) ? lo : hi));
  }
  return best;
}

}  // namespace

double erasure_observe_rate(double d, double c, double e) {
  if (!(d >= 0.0 && d <= 1.0) || !(c >= 0.0 && c <= 1.0) || !(e >= 0.0 && e <= 1.0)) {
    throw std::invalid_argument("erasure_observe_rate: arguments must lie in [0, 1]");
  }
  if (c == 0.0) return bernoulli_rd(0.5, d);
  if (c == 1.0) return erased_si_wz(0.5, e, d);
  const double blo = std::max(0.0, 1.0 - 2.0 * c), bhi = std::min(1.0, 2.0 - 2.0 * c);
  const double d1_hi = std::min(d / c, e);
  auto inner = [&](double beta) {
    const double p0 = beta / (2.0 * (1.0 - c)), p1 = (1.0 - beta) / (2.0 * c);
    const double base = 1.0 - (binary_entropy(std::clamp(p0, 0.0, 1.0)) * (1.0 - c) +
                               binary_entropy(std::clamp(p1, 0.0, 1.0)) * c);
    // Both terms are convex in D1.
    auto f = [&](double d1) {
      const double obs = e > 0.0 ? e * rb(p1, d1 / e) * c : 0.0;
      return rb(p0, (d - c * d1) / (1.0 - c)) * (1.0 - c) + obs;
    };
    return base + (d1_hi > 0.0 ? golden_min(f, 0.0, d1_hi) : f(0.0));
  };
  const int n = 2000;
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int i = 0; i <= n; ++i) {
    const double v = inner(blo + (bhi - blo) * i / n);
    if (v < best) best = v, arg = i;
  }
  const double lo = blo + (bhi - blo) * std::max(0, arg - 1) / n;
  const double hi = blo + (bhi - blo) * std::min(n, arg + 1) / n;
  return std::max(0.0, std::min(best, golden_min(inner, lo, hi)));
}

CurveEmission figure_data(std::string_view which, const SolverOverrides& cli) {
  SolverConfig cfg;
  cli.apply(cfg);
  cfg.validate();
  CurveEmission em;
  em.metadata = {{"figure", std::string(which)},
                 {"config_digest", config_digest(cfg)},
                 {"tool_version", std::string(kToolVersion)}};
  if (which == "fig3") {
    em.metadata.emplace_back("instance", "zs_lossless");
    em.columns = {"delta", "r_greedy", "r_min", "difference"};
    for (int i = 1; i <= 49; ++i) {
      const double delta = 0.02 * i;
      const auto [g, m] = zs_lossless_rates(delta, cfg);
      em.rows.push_back({delta, g, m, g - m});
    }
  } else if (which == "fig4") {
    em.metadata.emplace_back("instance", "zs_cost");
    em.columns = {"c", "r_min", "time_sharing"};
    const auto [greedy, rmin] = zs_lossless_rates(0.5, cfg);
    ProblemSpec zs = bundled_instance("zs_cost").spec;
    LagrangianSolver solver(Functional::decoder_lossless, zs, cfg);
    for (int i = 0; i <= 40; ++i) {
      const double c = 0.5 * i / 40.0;
      const auto r = solve_constrained(solver, zs, 0.0, c);
      em.rows.push_back({c, value_of(r), 2 * c * rmin + (1 - 2 * c) * greedy});
    }
  } else if (which == "fig5") {
    em.metadata.emplace_back("instance", "observe_or_not_erasure");
    em.metadata.emplace_back("d", "0.25");
    em.metadata.emplace_back("e", "0.5");
    em.columns = {"c", "rate", "endpoint_chord"};
    const double r0 = erasure_observe_rate(0.25, 0.0, 0.5), r1 = erasure_observe_rate(0.25, 1.0, 0.5);
    for (int i = 0; i <= 40; ++i) {
      const double c = i / 40.0;
      em.rows.push_back({c, erasure_observe_rate(0.25, c, 0.5), (1 - c) * r0 + c * r1});
    }
  } else if (which == "fig7") {
    em.metadata.emplace_back("instance", "gaussian_unit");
    em.columns = {"d", "c=0", "c=0.3", "c=0.6", "c=1"};
    for (int i = 1; i <= 100; ++i) {
      const double d = 0.01 * i;
      std::vector<Cell> row{d};
      for (double c : {0.0, 0.3, 0.6, 1.0}) row.push_back(gaussian_rdc({1.0, 1.0, d, c}));
      em.rows.push_back(std::move(row));
    }
  } else {
    throw std::invalid_argument("unknown figure '" + std::string(which) + "'");
  }
  return em;
}

}  // namespace vending
