#include "bvlab/report_json.hpp"

#include <fstream>

#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"

namespace bvlab {

using nlohmann::json;

json to_json(const EnergyBreakdown& e) {
    return {{"ac_part", json_number(e.ac_part)},
            {"jump_part", json_number(e.jump_part)},
            {"boundary_part", json_number(e.boundary_part)},
            {"total", json_number(e.total)}};
}

json to_json(const Witness& w) {
    return {{"x", json_number(w.x)}, {"y", json_number(w.y)}, {"z", json_number(w.z)}, {"slack", json_number(w.slack)}};
}

json to_json(const HypothesisReport& r) {
    return {{"c0", json_number(r.c0)},
            {"c1", json_number(r.c1)},
            {"c2", json_number(r.c2)},
            {"lambda", json_number(r.lambda)},
            {"hoelder_C", json_number(r.hoelder_C)},
            {"hoelder_C_empirical", json_number(r.hoelder_C_empirical)},
            {"h1_pass", r.h1_pass},
            {"h2_pass", r.h2_pass},
            {"h3_pass", r.h3_pass},
            {"h1_worst", to_json(r.h1_worst)},
            {"h2_worst", to_json(r.h2_worst)},
            {"h3_worst", to_json(r.h3_worst)},
            {"z_seed", r.z_seed},
            {"x_seed", r.x_seed},
            {"samples", r.samples}};
}

json to_json(const M0Result& r) {
    return {{"value", json_number(r.value)},
            {"finite", r.finite},
            {"generic", json_number(r.generic)},
            {"closed_form", json_number(r.closed_form)},
            {"route_rel_diff", json_number(r.route_rel_diff)},
            {"refined", json_number(r.refined)},
            {"refinement_rel_diff", json_number(r.refinement_rel_diff)},
            {"gamma", r.gamma}};
}

json to_json(const OracleSolution& s) {
    json atoms = json::array();
    for (const auto& a : s.minimizer.atoms()) atoms.push_back({{"location", json_number(a.location)}, {"jump", json_number(a.jump)}});
    return {{"mu", json_number(s.mu)},
            {"alpha", json_number(s.alpha)},
            {"M", json_number(s.M)},
            {"M0", json_number(s.M0)},
            {"kind", to_string(s.kind)},
            {"C", json_number(s.C)},
            {"jump_size", json_number(s.jump_size)},
            {"atoms", atoms},
            {"energy", to_json(s.energy)},
            {"trace_error", json_number(s.trace_error)}};
}

json to_json(const ViscosityReport& r) {
    json lp = json::object();
    for (const auto& [p, v] : r.lp_norms) lp[fmt17(p)] = json_number(v);
    return {{"flux_residual", json_number(r.flux_residual)},
            {"el_residual", json_number(r.el_residual)},
            {"energy", to_json(r.energy)},
            {"regularized_energy", json_number(r.regularized_energy)},
            {"gradient_linf", json_number(r.gradient_linf)},
            {"lp_norms", lp},
            {"newton_distance", json_number(r.newton_distance)},
            {"newton_iterations", r.newton_iterations},
            {"shooting_iterations", r.shooting_iterations},
            {"mass_residual", json_number(r.mass_residual)}};
}

json to_json(const ViscosityState& s) {
    return {{"k", s.k},
            {"A_k", json_number(s.A_k)},
            {"eps_k", json_number(s.eps_k)},
            {"flux_C", json_number(s.flux_C)},
            {"report", to_json(s.report)}};
}

json to_json(const Thresholds& t) {
    json kappa = t.kappa_empty ? json(nullptr) : json::array({json_number(t.kappa_lo), json_number(t.kappa_hi)});
    return {{"p_max", json_number(t.p_max)},
            {"mu_sobolev_max", json_number(t.mu_sobolev_max)},
            {"mu_dim_max", json_number(t.mu_dim_max)},
            {"dim_bound", json_number(t.dim_bound)},
            {"kappa_interval", kappa},
            {"autonomous_dim_bound", json_number(t.autonomous_dim_bound)},
            {"vacuous", t.vacuous}};
}

json to_json(const NikolskiiReport& r) {
    json per_h = json::array();
    for (const auto& [h, v] : r.per_h) per_h.push_back({{"h", json_number(h)}, {"value", json_number(v)}});
    return {{"theta", json_number(r.theta)},
            {"kappa", json_number(r.kappa)},
            {"K", {json_number(r.K.lo), json_number(r.K.hi)}},
            {"per_h", per_h},
            {"sup", json_number(r.sup)},
            {"weighted_quantity", json_number(r.weighted_quantity)}};
}

json to_json(const JumpReport& r) {
    json table = json::array();
    for (const auto& row : r.table) {
        json jr = json::array();
        for (double v : row) jr.push_back(json_number(v));
        table.push_back(jr);
    }
    json eps = json::array(), ext = json::array();
    for (double e : r.eps) eps.push_back(json_number(e));
    for (double e : r.extrapolated) ext.push_back(json_number(e));
    return {{"no_jump", r.no_jump},
            {"location", json_number(r.location)},
            {"size", json_number(r.size)},
            {"threshold", json_number(r.threshold)},
            {"ks", r.ks},
            {"eps", eps},
            {"table", table},
            {"extrapolated", ext},
            {"k_ratio", json_number(r.k_ratio)},
            {"k_converged", r.k_converged}};
}

json to_json(const LpSweep& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        json norms = json::object(), ratios = json::object();
        for (std::size_t j = 0; j < s.ps.size(); ++j) {
            norms[fmt17(s.ps[j])] = json_number(s.norms[i][j]);
            ratios[fmt17(s.ps[j])] = json_number(s.ratios[i][j]);
        }
        rows.push_back({{"k", s.ks[i]}, {"norms", norms}, {"ratios", ratios}});
    }
    return rows;
}

void write_state_csv(const std::string& path, const ViscosityState& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path);
    const auto& g = s.u_k.grid();
    const auto& v = s.u_k.values();
    out << "x,u,slope\n";
    for (int i = 0; i < g.nodes(); ++i) {
        const int c = std::min(i, g.cells() - 1);
        out << fmt17(g.node(i)) << ',' << fmt17(v[i]) << ',' << fmt17(s.cell_slopes[c]) << '\n';
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace bvlab
