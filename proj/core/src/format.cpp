#include "bvlab/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "bvlab/errors.hpp"

namespace bvlab {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw DomainError("not a number: '" + s + "'");
    return v;
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return fmt17(v);
}

double json_to_double(const nlohmann::json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

}  // namespace bvlab
