#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "drgspin/common.hpp"

namespace drgspin {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "drgspin";
inline constexpr const char* kToolVersion = "0.1.0";

json complex_to_json(cx v);
json residuals_to_json(const ResidualMap& m);

// Human-readable table of the same dotted residual names.
std::string residuals_to_text(const ResidualMap& m, double tol);

}  // namespace drgspin
