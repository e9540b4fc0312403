#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mwk::cli {

/// {"d": int, "vertices": [[...], ...], "metadata": {string: string}}
struct SimplexDocument {
  int d = 0;
  std::vector<Eigen::VectorXd> vertices;
  std::map<std::string, std::string> metadata;
};

/// Norm slack accepted without --auto-normalize; such vertices are rescaled.
inline constexpr double kDocumentNormTol = 1e-9;

SimplexDocument parse_document(const std::string& text, bool auto_normalize);
SimplexDocument read_document(const std::string& path, bool auto_normalize);

std::string document_text(const SimplexDocument& doc);
void write_document(const std::string& path, const SimplexDocument& doc);

}  // namespace mwk::cli
