#include <doctest.h>

#include <cmath>
#include <string>

#include "vending/repro.hpp"

using namespace vending;

namespace {

const char* kSmall = R"({
  "id": "small",
  "mode": "decoder",
  "p_x": [0.5, 0.5],
  "p_y_given_xa": [
    [[1.0, 0.0], [0.5, 0.5]],
    [[0.5, 0.5], [0.0, 1.0]]
  ],
  "rho": [[0, 1], [1, 0]],
  "lambda": [0.2, 1],
  "d": [0.1],
  "c": [0.1, 0.6]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("bundled documents round-trip") {
  for (const auto& name : bundled_instance_names()) {
    CAPTURE(name);
    const auto a = bundled_instance(name);
    CHECK(a.id == name);
    CHECK(a.warnings.empty());
    const auto b = parse_document(serialize_document(a));
    CHECK(b.spec == a.spec);
    CHECK(b.d_grid == a.d_grid);
    CHECK(b.c_grid == a.c_grid);
    CHECK(b.alphabets == a.alphabets);
    CHECK(b.solver == a.solver);
  }
}

TEST_CASE("parse errors name the offending entry") {
  const std::string text = kSmall;
  try {
    parse_document(replace(text, "[0.5, 0.5]],", "[0.5, 0.3]],"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "p_y_given_xa[0][1]");
    CHECK(std::string(e.what()).find("0.8") != std::string::npos);
  }
  try {
    parse_document(replace(text, "\"lambda\": [0.2, 1],", "\"lambda\": [0.2, 1"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "document");
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_document(replace(text, "\"decoder\"", "\"decoders\"")), ParseError);
  CHECK_THROWS_AS(parse_document(replace(text, "[[0, 1], [1, 0]]", "[[0, 1], [1]]")), ParseError);
  CHECK_THROWS_AS(parse_document(replace(text, "\"lambda\": [0.2, 1]", "\"lambda\": [0.2, 1, 3]")),
                  ParseError);
  CHECK_THROWS_AS(parse_document(replace(text, "\"p_x\": [0.5, 0.5]", "\"p_x\": [1.5, -0.5]")),
                  ParseError);
  CHECK_THROWS_AS(parse_document(replace(text, "\"id\": \"small\",", "\"alphabets\": {\"X\": [\"a\"]},")),
                  ParseError);
}

TEST_CASE("nearly normalized rows are renormalized with a warning") {
  const auto doc = parse_document(replace(kSmall, "\"p_x\": [0.5, 0.5]", "\"p_x\": [0.5, 0.5000001]"));
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].find("p_x") != std::string::npos);
  CHECK(doc.spec.px[0] + doc.spec.px[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("emission format and infeasible marker") {
  SolverOverrides quick;
  quick.restarts = 2;
  const auto em = solve_document(parse_document(kSmall), quick);
  REQUIRE(em.rows.size() == 2);
  CHECK_FALSE(em.rows[0][2].has_value());  // c = 0.1 is below every action cost
  CHECK(em.rows[1][2].has_value());
  const auto csv = em.to_csv();
  CHECK(csv.rfind("# instance: small\n", 0) == 0);
  CHECK(csv.find("\nd,c,rate,greedy,timeshare\n") != std::string::npos);
  CHECK(csv.find("0.1,0.1,infeasible,") != std::string::npos);
  CHECK(em.to_json().find("\"infeasible\"") != std::string::npos);
}

TEST_CASE("emissions are byte-identical for the same config") {
  const auto doc = bundled_instance("zs_cost");
  const auto a = solve_document(doc).to_csv();
  const auto b = solve_document(doc).to_csv();
  CHECK(a == b);
  SolverConfig c1, c2;
  c2.seed = 7;
  CHECK(config_digest(c1) == config_digest(SolverConfig{}));
  CHECK(config_digest(c1) != config_digest(c2));
  SolverOverrides o;
  o.seed = 7;
  CHECK(solve_document(doc, o).metadata != solve_document(doc).metadata);
}

TEST_CASE("bundled instances solve without infeasible points") {
  for (const auto& name : bundled_instance_names()) {
    CAPTURE(name);
    const auto em = solve_document(bundled_instance(name));
    REQUIRE_FALSE(em.rows.empty());
    for (const auto& row : em.rows)
      for (const auto& cell : row) REQUIRE(cell.has_value());
  }
}

TEST_CASE("bundled instance values") {
  const auto zs = solve_document(bundled_instance("zs_lossless"));
  REQUIRE(zs.rows.size() == 1);
  CHECK(std::abs(*zs.rows[0][2] - 0.678072) < 1e-4);
  const auto g = solve_document(bundled_instance("gaussian_unit"));
  bool seen = false;
  for (const auto& row : g.rows) {
    if (*row[0] == 0.2 && *row[1] == 1.0) {
      CHECK(*row[2] == 0.0);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("figure data") {
  const auto f3 = figure_data("fig3");
  REQUIRE(f3.rows.size() == 49);
  CHECK(*f3.rows.front()[0] == doctest::Approx(0.02));
  CHECK(*f3.rows.back()[0] == doctest::Approx(0.98));
  CHECK(std::abs(*f3.rows[24][3] - 0.01065) < 1e-5);
  for (const auto& row : f3.rows) REQUIRE(*row[3] >= -1e-9);
  for (double delta : {0.0, 1.0}) {
    const auto [greedy, rmin] = zs_lossless_rates(delta, SolverConfig{});
    CHECK(std::abs(greedy - rmin) < 1e-6);
  }

  const auto f4 = figure_data("fig4");
  REQUIRE(f4.rows.size() == 41);
  CHECK(*f4.rows.back()[0] == 0.5);
  for (std::size_t i = 1; i < f4.rows.size(); ++i) {
    REQUIRE(*f4.rows[i][1] <= *f4.rows[i - 1][1] + 1e-9);
    REQUIRE(*f4.rows[i][1] <= *f4.rows[i][2] + 1e-7);
  }

  const auto f5 = figure_data("fig5");
  REQUIRE(f5.rows.size() == 41);
  CHECK(std::abs(*f5.rows.front()[1] - 0.188722) < 1e-6);
  CHECK(std::abs(*f5.rows.back()[1]) < 1e-9);
  CHECK(*f5.rows[20][2] - *f5.rows[20][1] >= 1e-3);

  const auto f7 = figure_data("fig7");
  CHECK(f7.columns.size() == 5);
  for (const auto& row : f7.rows)
    for (std::size_t k = 2; k < row.size(); ++k) REQUIRE(*row[k] <= *row[k - 1]);

  CHECK_THROWS_AS(figure_data("fig6"), std::invalid_argument);
}

TEST_CASE("erasure observe rate against the endpoint formulas") {
  // c = 1: e R_b(1/2, d/e); c = 0: R_b(1/2, d)
  CHECK(erasure_observe_rate(0.125, 1.0, 0.5) == doctest::Approx(0.5 * (1 - 0.8112781244591328)).epsilon(1e-12));
  CHECK(erasure_observe_rate(0.25, 0.0, 0.5) == doctest::Approx(1 - 0.8112781244591328).epsilon(1e-12));
  // nearly-free observation approaches the c = 1 value from above
  CHECK(erasure_observe_rate(0.125, 0.999, 0.5) >= erasure_observe_rate(0.125, 1.0, 0.5));
  CHECK_THROWS_AS(erasure_observe_rate(0.1, 1.5, 0.5), std::invalid_argument);
}
