#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmeter/channel.hpp"

namespace qmeter {

using json = nlohmann::json;

// Named quantum objects loaded from / saved to a single JSON document.
// Complex numbers are [re, im] pairs, matrices row-major nested arrays, so
// the format round-trips entrywise exactly.
struct Document {
  std::map<std::string, DensityOperator> states;
  std::map<std::string, KrausMeasurement> measurements;
  std::map<std::string, Instrument> instruments;
  std::map<std::string, QuantumChannel> channels;
};

namespace detail {

inline Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw schema_error(where + ": complex entries must be [re, im] number pairs");
  return Complex(j[0].get<Real>(), j[1].get<Real>());
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw schema_error(where + ": matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw schema_error(where + ": matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw schema_error(where + ": ragged matrix (row " + std::to_string(r) + ")");
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], where);
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<Matrix> matrix_list_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw schema_error(where + ": expected a non-empty array of matrices");
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::string> labels_from_json(const json& j, const std::string& where) {
  std::vector<std::string> labels;
  if (!j.contains("labels")) return labels;
  if (!j["labels"].is_array())
    throw schema_error(where + ": labels must be an array of strings");
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) throw schema_error(where + ": labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  return labels;
}

}  // namespace detail

inline Document document_from_json(const json& j) {
  if (!j.is_object()) throw schema_error("document root must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "states" && key != "measurements" && key != "instruments" &&
        key != "channels")
      throw schema_error("unknown section '" + key +
                         "' (expected states/measurements/instruments/channels)");
  }
  Document doc;
  try {
    if (j.contains("states"))
      for (const auto& [name, value] : j["states"].items())
        doc.states.emplace(
            name, DensityOperator(detail::matrix_from_json(value, "states/" + name)));
    if (j.contains("measurements"))
      for (const auto& [name, value] : j["measurements"].items()) {
        const std::string where = "measurements/" + name;
        if (!value.is_object() || !value.contains("kraus"))
          throw schema_error(where + ": expected an object with a 'kraus' array");
        doc.measurements.emplace(
            name, KrausMeasurement(detail::matrix_list_from_json(value["kraus"], where),
                                   detail::labels_from_json(value, where)));
      }
    if (j.contains("instruments"))
      for (const auto& [name, value] : j["instruments"].items()) {
        const std::string where = "instruments/" + name;
        if (!value.is_object() || !value.contains("operations") ||
            !value["operations"].is_array())
          throw schema_error(where + ": expected an object with an 'operations' array");
        std::vector<std::vector<Matrix>> ops;
        for (std::size_t i = 0; i < value["operations"].size(); ++i)
          ops.push_back(detail::matrix_list_from_json(
              value["operations"][i], where + "/op" + std::to_string(i)));
        doc.instruments.emplace(
            name, Instrument(std::move(ops), detail::labels_from_json(value, where)));
      }
    if (j.contains("channels"))
      for (const auto& [name, value] : j["channels"].items()) {
        const std::string where = "channels/" + name;
        if (!value.is_object() || !value.contains("kraus"))
          throw schema_error(where + ": expected an object with a 'kraus' array");
        doc.channels.emplace(
            name, QuantumChannel(detail::matrix_list_from_json(value["kraus"], where)));
      }
  } catch (const schema_error&) {
    throw;
  } catch (const error& e) {
    // Constructor-level validation failures (trace, completeness, shape)
    // surface as schema errors with the residual kept in the message.
    throw schema_error(e.what());
  }
  return doc;
}

inline json document_to_json(const Document& doc) {
  json j = json::object();
  if (!doc.states.empty()) {
    j["states"] = json::object();
    for (const auto& [name, rho] : doc.states)
      j["states"][name] = detail::matrix_to_json(rho.matrix());
  }
  if (!doc.measurements.empty()) {
    j["measurements"] = json::object();
    for (const auto& [name, m] : doc.measurements) {
      json entry = json::object();
      entry["labels"] = m.labels();
      entry["kraus"] = json::array();
      for (const Matrix& v : m.kraus_list())
        entry["kraus"].push_back(detail::matrix_to_json(v));
      j["measurements"][name] = std::move(entry);
    }
  }
  if (!doc.instruments.empty()) {
    j["instruments"] = json::object();
    for (const auto& [name, inst] : doc.instruments) {
      json entry = json::object();
      entry["labels"] = inst.labels();
      entry["operations"] = json::array();
      for (const auto& op : inst.operations()) {
        json kraus = json::array();
        for (const Matrix& a : op) kraus.push_back(detail::matrix_to_json(a));
        entry["operations"].push_back(std::move(kraus));
      }
      j["instruments"][name] = std::move(entry);
    }
  }
  if (!doc.channels.empty()) {
    j["channels"] = json::object();
    for (const auto& [name, phi] : doc.channels) {
      json entry = json::object();
      entry["kraus"] = json::array();
      for (const Matrix& k : phi.kraus_list())
        entry["kraus"].push_back(detail::matrix_to_json(k));
      j["channels"][name] = std::move(entry);
    }
  }
  return j;
}

inline Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw schema_error("cannot open document: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw schema_error(std::string("JSON parse failure: ") + e.what());
  }
  return document_from_json(j);
}

inline void save_document(const Document& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw schema_error("cannot write document: " + path);
  out << document_to_json(doc).dump(2) << "\n";
}

}  // namespace qmeter
