#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace mwk::cli {

/// Pretty JSON with every float printed to 17 significant digits. Arrays of
/// scalars stay on one line.
std::string dump17(const nlohmann::json& j, int indent = 2);

/// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format17(double x);

}  // namespace mwk::cli
