#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qmeter/qmeter.hpp"

using namespace qmeter;

namespace {

json minimal_doc() {
  json j;
  j["states"]["mm"] = {{{0.5, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.5, 0.0}}};
  j["measurements"]["basis"] = {
      {"kraus",
       {{{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.0, 0.0}}},
        {{{0.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}}}},
      {"labels", {"up", "down"}}};
  return j;
}

}  // namespace

TEST_CASE("documents parse states, measurements and labels", "[document]") {
  const Document doc = document_from_json(minimal_doc());
  REQUIRE(doc.states.count("mm") == 1);
  REQUIRE(doc.states.at("mm").dim() == 2);
  REQUIRE(doc.measurements.at("basis").outcomes() == 2);
  REQUIRE(doc.measurements.at("basis").label(0) == "up");
}

TEST_CASE("serialization round-trips entrywise", "[document]") {
  Rng rng(81);
  Document doc;
  doc.states.emplace("rho", rng.ginibre_state(3));
  doc.measurements.emplace("m", rng.measurement(3, 2));
  doc.instruments.emplace("inst", rng.instrument(3, 2, 2, true));
  doc.channels.emplace("phi", rng.channel(3, 2, 2));

  const json j = document_to_json(doc);
  const Document back = document_from_json(j);
  REQUIRE(max_abs(back.states.at("rho").matrix() - doc.states.at("rho").matrix()) == 0.0);
  REQUIRE(back.measurements.at("m").outcomes() == 2);
  REQUIRE(max_abs(back.instruments.at("inst").operation(1)[0] -
                  doc.instruments.at("inst").operation(1)[0]) == 0.0);
  REQUIRE(back.channels.at("phi").kraus_count() == 2);
  // a second serialization is bit-identical
  REQUIRE(document_to_json(back) == j);
}

TEST_CASE("schema violations carry section context", "[document]") {
  json unknown;
  unknown["stattes"] = json::object();
  REQUIRE_THROWS_AS(document_from_json(unknown), schema_error);

  json ragged = minimal_doc();
  ragged["states"]["mm"][1].erase(1);
  REQUIRE_THROWS_AS(document_from_json(ragged), schema_error);

  json bad_complex = minimal_doc();
  bad_complex["states"]["mm"][0][0] = {1.0};
  REQUIRE_THROWS_AS(document_from_json(bad_complex), schema_error);

  REQUIRE_THROWS_AS(document_from_json(json::array()), schema_error);

  // semantic failures surface as schema errors too, keeping the constructor text
  json not_a_state = minimal_doc();
  not_a_state["states"]["mm"][0][0] = {0.9, 0.0};
  try {
    document_from_json(not_a_state);
    FAIL("expected a schema error");
  } catch (const schema_error& e) {
    REQUIRE(std::string(e.what()).find("trace") != std::string::npos);
  }

  json bad_measurement = minimal_doc();
  bad_measurement["measurements"]["basis"].erase("kraus");
  REQUIRE_THROWS_AS(document_from_json(bad_measurement), schema_error);
}

TEST_CASE("file round trip and parse failures", "[document]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(QMETER_WORK_DIR) / "document";
  fs::create_directories(dir);

  Rng rng(82);
  Document doc;
  doc.states.emplace("rho", rng.ginibre_state(2));
  const std::string path = (dir / "roundtrip.json").string();
  save_document(doc, path);
  const Document back = load_document(path);
  REQUIRE(max_abs(back.states.at("rho").matrix() - doc.states.at("rho").matrix()) == 0.0);

  const std::string broken = (dir / "broken.json").string();
  std::ofstream(broken) << "{ not json";
  REQUIRE_THROWS_AS(load_document(broken), schema_error);
  REQUIRE_THROWS_AS(load_document((dir / "missing.json").string()), schema_error);
}

TEST_CASE("bundled fixture documents load and interoperate", "[document]") {
  const Document doc =
      load_document(std::string(QMETER_FIXTURE_DIR) + "/canonical.json");
  REQUIRE(doc.states.count("mixed_qubit") == 1);
  REQUIRE(doc.measurements.count("basis") == 1);
  REQUIRE(doc.measurements.count("unitary_mixture") == 1);
  REQUIRE(doc.measurements.count("spectral_mult1") == 1);
  REQUIRE(doc.instruments.count("spectral_mult2") == 1);
  REQUIRE(doc.instruments.count("reducible") == 1);
  REQUIRE(doc.instruments.count("depolarizing") == 1);
  REQUIRE(doc.channels.count("depolarizing") == 1);

  REQUIRE(entropy_reduction_direct(Instrument(doc.measurements.at("basis")),
                                   doc.states.at("mixed_qubit")) ==
          Catch::Approx(0.6931471805599453).margin(1e-12));

  const Document random_doc =
      load_document(std::string(QMETER_FIXTURE_DIR) + "/random_d4.json");
  REQUIRE(random_doc.states.count("rho_d4") == 1);
  REQUIRE(random_doc.measurements.at("m_d4").d_in() == 4);
  REQUIRE(random_doc.instruments.count("inst_d4") == 1);
}
