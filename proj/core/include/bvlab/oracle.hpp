#pragma once

#include <string>
#include <vector>

#include "bvlab/bv_function.hpp"
#include "bvlab/integrand.hpp"

namespace bvlab {

struct M0Result {
    double value = 0.0;        // +inf when divergent
    bool finite = false;
    double generic = 0.0;      // integral of g(m/w) over [-1, 1]
    double closed_form = 0.0;  // 2 mu^(1/(1-mu)) int_0^1 (t^a/(1+t^a))^(1/(1-mu))
    double route_rel_diff = 0.0;
    double refined = 0.0;      // closed form with a finer series/quadrature split
    double refinement_rel_diff = 0.0;
    int gamma = 1;             // power substitution exponent of the generic route
};

M0Result compute_M0(double mu, double alpha);

// Closed-form integrand integrated over [cutoff, 1] only; grows without bound
// as cutoff -> 0 exactly when M0 is infinite.
double m0_truncated(double mu, double alpha, double cutoff);

enum class OracleKind { sobolev, jump, degenerate };
std::string to_string(OracleKind k);

OracleKind classify(double mu, double alpha, double M);

struct OracleSolution {
    OracleKind kind = OracleKind::sobolev;
    double mu = 0.0, alpha = 0.0, M = 0.0;
    double C = 0.0;  // Euler-Lagrange constant, slopes g((C+m)/w); jump kind has C = 0
    double M0 = 0.0;
    double jump_size = 0.0;
    BVFunction1D minimizer;
    EnergyBreakdown energy;  // exact continuum energy
    double trace_error = 0.0;
};

// Weight on [-1, 1]; the grid must cover [-1, 1].
OracleSolution solve_sobolev_branch(double mu, double alpha, const Grid1D& grid, double M);
OracleSolution solve_jump_branch(double mu, double alpha, const Grid1D& grid, double M);
OracleSolution solve_oracle(double mu, double alpha, const Grid1D& grid, double M);

// Discrete relaxed energy of the gridded minimizer.
EnergyBreakdown oracle_energy(const OracleSolution& sol, const NonAutonomousIntegrand& F,
                              CellWeightRule rule = CellWeightRule::midpoint);

// Exact energy of the slope profile g((C+m)/w) over [-1, 1].
double oracle_ac_energy(double mu, double alpha, double C);
// Exact mass of the slope profile g((C+m)/w) over [-1, 1].
double oracle_mass(double mu, double alpha, double C);

}  // namespace bvlab
