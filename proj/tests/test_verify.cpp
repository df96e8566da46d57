#include <catch_amalgamated.hpp>

#include "qmeter/qmeter.hpp"

using namespace qmeter;

namespace {

constexpr Real kLn2 = 0.6931471805599453;

RandomModel small_model(std::uint64_t seed = 1, int trials = 40) {
  RandomModel m;
  m.seed = seed;
  m.trials = trials;
  m.dim_min = 2;
  m.dim_max = 4;
  m.outcomes_min = 1;
  m.outcomes_max = 4;
  return m;
}

}  // namespace

TEST_CASE("every property suite passes at desk scale", "[verify]") {
  const RandomModel model = small_model();
  for (const std::string& name : suite_names()) {
    const std::vector<PropertyReport> reports = run_suite(name, model);
    REQUIRE(reports.size() == 1);
    INFO(reports[0].property << " violation " << reports[0].max_violation
                             << " tolerance " << reports[0].tolerance << " at "
                             << reports[0].witness);
    REQUIRE(reports[0].pass);
    REQUIRE(reports[0].trials > 0);
  }
}

TEST_CASE("the reducible fixture fails nonnegativity by exactly ln 2", "[verify]") {
  const PropertyReport r = check_nonnegativity_reducible(small_model(3, 25));
  REQUIRE(!r.pass);
  // pure qubit in, maximally mixed out: ER = -ln 2 on every trial
  REQUIRE(r.max_violation == Catch::Approx(kLn2).margin(1e-10));
  REQUIRE(!r.witness.empty());
}

TEST_CASE("suites are deterministic in the seed", "[verify]") {
  const RandomModel model = small_model(9, 15);
  const std::vector<PropertyReport> a = run_suite("concavity", model);
  const std::vector<PropertyReport> b = run_suite("concavity", model);
  REQUIRE(a[0].max_violation == b[0].max_violation);
  REQUIRE(a[0].witness == b[0].witness);

  RandomModel other = model;
  other.seed = 10;
  const std::vector<PropertyReport> c = run_suite("concavity", other);
  REQUIRE(a[0].max_violation != c[0].max_violation);
}

TEST_CASE("unknown suite names are rejected", "[verify]") {
  REQUIRE_THROWS_AS(run_suite("bogus", small_model()), shape_error);
}

TEST_CASE("tolerance scaling moves the pass line", "[verify]") {
  RandomModel model = small_model(4, 10);
  model.tolerance_scale = 1e-12;
  // truncation carries a strictly positive restore residual (the spectral
  // rebuild is not bitwise exact), so an absurd scale must flip the report
  const PropertyReport r = check_truncation(model);
  REQUIRE(r.tolerance == Catch::Approx(1e-9 * 1e-12).epsilon(1e-12));
  INFO("max_violation " << r.max_violation);
  REQUIRE(r.max_violation > 0.0);
  REQUIRE(!r.pass);
}

TEST_CASE("run_suite('all') covers every registered property", "[verify]") {
  RandomModel model = small_model(5, 6);
  const std::vector<PropertyReport> reports = run_suite("all", model);
  REQUIRE(reports.size() == suite_names().size());
  for (std::size_t i = 0; i < reports.size(); ++i)
    REQUIRE(reports[i].property == suite_names()[i]);
}

TEST_CASE("witness strings pin the worst trial", "[verify]") {
  const PropertyReport r = check_nonnegativity(small_model(6, 12));
  REQUIRE(r.witness.find("trial=") != std::string::npos);
  REQUIRE(r.witness.find("seed=") != std::string::npos);
  REQUIRE(r.witness.find("dim=") != std::string::npos);
}
