#pragma once

#include <nlohmann/json.hpp>
#include <string>

namespace bvlab {

// Round-trip decimal form with 17 significant digits; non-finite values as inf/-inf/nan.
std::string fmt17(double v);
double parse_double(const std::string& s);

// Finite doubles as JSON numbers, non-finite ones as the strings above.
nlohmann::json json_number(double v);
double json_to_double(const nlohmann::json& j);

}  // namespace bvlab
