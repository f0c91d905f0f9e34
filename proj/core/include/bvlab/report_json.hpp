#pragma once

#include <nlohmann/json.hpp>

#include "bvlab/integrand.hpp"
#include "bvlab/oracle.hpp"
#include "bvlab/probe.hpp"
#include "bvlab/viscosity.hpp"

namespace bvlab {

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const M0Result& r);
nlohmann::json to_json(const OracleSolution& s);
nlohmann::json to_json(const ViscosityReport& r);
// Per-state summary without the solution arrays.
nlohmann::json to_json(const ViscosityState& s);
nlohmann::json to_json(const Thresholds& t);
nlohmann::json to_json(const NikolskiiReport& r);
nlohmann::json to_json(const JumpReport& r);
nlohmann::json to_json(const LpSweep& s);

// Writes x,u,slope with the slope of the cell to the right of each node (the
// last node repeats the final cell).
void write_state_csv(const std::string& path, const ViscosityState& s);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace bvlab
