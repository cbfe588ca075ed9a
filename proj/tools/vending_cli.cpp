// vending: solve problem documents, emit figure data, run the acceptance checks.
// Exit status: 0 success, 1 validation failure, 2 input error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vending/acceptance.hpp"
#include "vending/repro.hpp"

namespace {

constexpr int kInputError = 2;

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  // "0.1,0.2,0.3" or "start:step:stop"
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
      if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) throw std::invalid_argument("range");
      const auto n = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
      for (long i = 0; i <= n; ++i) out.push_back(parts[0] + parts[1] * static_cast<double>(i));
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    }
  } catch (const std::exception&) {
    throw vending::ParseError(flag, "expected a comma list or start:step:stop, got '" + text + "'");
  }
  if (out.empty()) throw vending::ParseError(flag, "empty grid");
  for (double v : out)
    if (!(v >= 0.0)) throw vending::ParseError(flag, "grid values must be >= 0");
  return out;
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw vending::ParseError("--out", "cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-distortion-cost computations with action-dependent side information"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vending::kToolVersion));

  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, grid_resolution;
  app.add_option("--seed", seed, "Seed for the randomized solver starts");
  app.add_option("--restarts", restarts, "Starts per solve")->check(CLI::PositiveNumber);
  app.add_option("--grid-resolution", grid_resolution, "Grid oracle steps per simplex row")
      ->check(CLI::PositiveNumber);

  std::string file, d_grid, c_grid, out, format = "csv";
  auto* solve = app.add_subcommand("solve", "Solve a problem document");
  solve->add_option("file", file, "Problem document (JSON)")->required();
  solve->add_option("--d", d_grid, "Distortion grid: a,b,c or start:step:stop");
  solve->add_option("--c", c_grid, "Cost grid: a,b,c or start:step:stop");
  solve->add_option("--out", out, "Output path (default stdout)");
  solve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string which;
  auto* figure = app.add_subcommand("figure", "Emit figure data");
  figure->add_option("which", which, "fig3, fig4, fig5 or fig7")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig7"}));
  figure->add_option("--out", out, "Output path (default stdout)");
  figure->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  bool quick = false;
  auto* validate = app.add_subcommand("validate", "Run the acceptance checks");
  validate->add_flag("--quick", quick, "Criteria 1-8 only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  vending::SolverOverrides cli;
  cli.seed = seed;
  cli.restarts = restarts;
  cli.grid_resolution = grid_resolution;

  try {
    if (*solve) {
      auto doc = vending::load_document(file);
      for (const auto& w : doc.warnings) std::cerr << "warning: " << w << "\n";
      if (!d_grid.empty()) doc.d_grid = parse_grid(d_grid, "--d");
      if (!c_grid.empty()) doc.c_grid = parse_grid(c_grid, "--c");
      const auto em = vending::solve_document(doc, cli);
      write_out(format == "json" ? em.to_json() : em.to_csv(), out);
      return 0;
    }
    if (*figure) {
      const auto em = vending::figure_data(which, cli);
      write_out(format == "json" ? em.to_json() : em.to_csv(), out);
      return 0;
    }
    vending::AcceptanceOptions opt;
    opt.quick = quick;
    cli.apply(opt.cfg);
    if (seed) opt.seed = *seed;
    if (restarts) opt.suite_restarts = *restarts;
    int failed = 0;
    vending::run_acceptance(opt, [&](const vending::CriterionResult& r) {
      std::cout << vending::format_result(r) << std::endl;
      if (!r.skipped && !r.passed) ++failed;
    });
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
  } catch (const vending::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
