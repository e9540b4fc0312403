#include "mwk_cli/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mwk/config.hpp"
#include "mwk_cli/app.hpp"
#include "mwk_cli/json_text.hpp"

namespace mwk::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw CliError(kExitUsage, "simplex document: " + msg);
}

}  // namespace

SimplexDocument parse_document(const std::string& text, bool auto_normalize) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON (") + e.what() + ")");
  }
  if (!j.is_object()) bad("top level must be an object");
  if (!j.contains("d") || !j["d"].is_number_integer()) bad("\"d\" must be an integer");
  if (!j.contains("vertices") || !j["vertices"].is_array()) {
    bad("\"vertices\" must be an array");
  }

  SimplexDocument doc;
  doc.d = j["d"].get<int>();
  if (doc.d < 2) bad("d must be >= 2");
  const auto& verts = j["vertices"];
  if (static_cast<int>(verts.size()) != doc.d + 1) {
    bad("expected " + std::to_string(doc.d + 1) + " vertices, found " +
        std::to_string(verts.size()));
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& row = verts[i];
    if (!row.is_array() || static_cast<int>(row.size()) != doc.d) {
      bad("vertex " + std::to_string(i) + " must have " + std::to_string(doc.d) +
          " coordinates");
    }
    Eigen::VectorXd v(doc.d);
    for (int k = 0; k < doc.d; ++k) {
      if (!row[k].is_number()) bad("vertex coordinates must be numbers");
      v[k] = row[k].get<double>();
    }
    const double norm = v.norm();
    if (!(norm > 0.0)) bad("vertex " + std::to_string(i) + " is zero");
    if (std::abs(norm - 1.0) > kDocumentNormTol && !auto_normalize) {
      bad("vertex " + std::to_string(i) + " has norm " + format17(norm) +
          "; pass --auto-normalize to rescale");
    }
    // Unit vectors pass through untouched so round trips are bitwise.
    if (std::abs(norm - 1.0) > kUnitNormTol) v /= norm;
    doc.vertices.push_back(std::move(v));
  }

  if (j.contains("metadata")) {
    const auto& meta = j["metadata"];
    if (!meta.is_object()) bad("\"metadata\" must be an object");
    for (auto it = meta.begin(); it != meta.end(); ++it) {
      doc.metadata[it.key()] =
          it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
  }
  return doc;
}

SimplexDocument read_document(const std::string& path, bool auto_normalize) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), auto_normalize);
}

std::string document_text(const SimplexDocument& doc) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : doc.vertices) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) row.push_back(v[k]);
    verts.push_back(std::move(row));
  }
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : doc.metadata) meta[k] = v;
  return dump17({{"d", doc.d}, {"vertices", verts}, {"metadata", meta}}) + "\n";
}

void write_document(const std::string& path, const SimplexDocument& doc) {
  std::ofstream out(path);
  if (!out) throw CliError(kExitIo, "cannot write " + path);
  out << document_text(doc);
  if (!out) throw CliError(kExitIo, "write failed: " + path);
}

}  // namespace mwk::cli
