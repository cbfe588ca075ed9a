#pragma once

// Problem documents (JSON), curve emission (CSV / JSON) and the figure data
// generators behind the command-line driver.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vending/problem.hpp"
#include "vending/simplex_solver.hpp"

namespace vending {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Malformed document. field() names the offending entry, e.g.
// "p_y_given_xa[1][0]".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct SolverOverrides {
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_resolution;
  std::optional<std::size_t> u_size;
  std::optional<int> max_iters;

  void apply(SolverConfig& cfg) const;
  friend bool operator==(const SolverOverrides&, const SolverOverrides&) = default;
};

struct ProblemDocument {
  std::string id;
  ProblemSpec spec;
  // Optional symbol names per axis ("X", "A", "Y", "Z", "Xhat").
  std::vector<std::pair<std::string, std::vector<std::string>>> alphabets;
  std::vector<double> d_grid;
  std::vector<double> c_grid;
  SolverOverrides solver;
  // Rows that were renormalized on the way in.
  std::vector<std::string> warnings;
};

ProblemDocument parse_document(std::string_view text);
ProblemDocument load_document(const std::filesystem::path& path);
std::string serialize_document(const ProblemDocument& doc);

std::filesystem::path data_directory();
std::vector<std::string> bundled_instance_names();
ProblemDocument bundled_instance(std::string_view name);

// Tabular result with a metadata header. Empty cells mark infeasible points.
struct CurveEmission {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

// Stable hex digest of every solver setting that can change a result.
std::string config_digest(const SolverConfig& cfg);

// One row per (d, c) of the document grids. `cli` overrides the document's
// own solver block.
CurveEmission solve_document(const ProblemDocument& doc, const SolverOverrides& cli = {});

// Figure data: "fig3", "fig4", "fig5" or "fig7".
CurveEmission figure_data(std::string_view which, const SolverOverrides& cli = {});

// Fig. 3 row: (R_greedy(delta), R_min(delta)) on the Z/S pair.
std::pair<double, double> zs_lossless_rates(double delta, const SolverConfig& cfg);

// Observe-or-not with erased side information, fair binary source:
// minimum over beta and D1 of the two-parameter closed form.
double erasure_observe_rate(double d, double c, double e);

}  // namespace vending
