#pragma once

#include <map>
#include <memory>
#include <vector>

#include "bvlab/bv_function.hpp"
#include "bvlab/integrand.hpp"
#include "bvlab/slope_sampling.hpp"

namespace bvlab {

// Regularized integrand F_k = F + eps (1 + z^2) on piecewise-linear u, with
// cell weights by the given rule (exact cell means by default).
double regularized_energy(const NonAutonomousIntegrand& F, double eps, const BVFunction1D& u,
                          CellWeightRule rule = CellWeightRule::cell_average);
// Gradient with respect to the interior nodal values.
std::vector<double> regularized_energy_gradient(const NonAutonomousIntegrand& F, double eps,
                                                const BVFunction1D& u,
                                                CellWeightRule rule = CellWeightRule::cell_average);

// Optimal sampled profile inside one cell for a prescribed mean slope d.
struct CellSolution {
    double gamma = 0.0;   // cell flux minus m
    double D = 0.0;       // d(cell mass)/d(flux)
    double energy = 0.0;  // integral of F_k over the cell
};

// v holds the cell's sample slopes: read as warm start, overwritten with the result.
CellSolution solve_cell(const SlopeSampling& S, int cell, double eps, double d, double gamma_guess,
                        std::vector<double>& v);

// Reduced energy: sum over cells of the smallest F_k energy among sampled
// profiles with the cell means of u. Its minimizer over nodal values is the
// shooting solution.
double reduced_energy(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes);
std::vector<double> reduced_energy_gradient(const SlopeSampling& S, double eps,
                                            const std::vector<double>& cell_slopes);
// Cell fluxes (as flux - m) of the cell-optimal profiles.
std::vector<double> cell_flux_gammas(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes);

struct ShootingOptions {
    double tol = 1e-12;  // on |mass - (y2 - y1)| / (1 + |y2 - y1|)
    int max_iter = 400;
};

struct ShootingResult {
    BVFunction1D u;
    double flux_C = 0.0;
    double gamma = 0.0;  // flux_C - m
    std::vector<double> sample_slopes;
    std::vector<double> cell_slopes;
    int iterations = 0;
    double mass_residual = 0.0;
};

ShootingResult solve_shooting(const SlopeSampling& S, double eps, const BoundaryData& bc,
                              const ShootingOptions& opts = {}, const ShootingResult* warm = nullptr);
ShootingResult solve_shooting(const NonAutonomousIntegrand& F, double eps, const Grid1D& grid,
                              const BoundaryData& bc);

struct NewtonOptions {
    double tol = 1e-12;  // on the max nodal residual of the reduced energy
    int max_iter = 100;
    int polish_iter = 4;  // extra steps after tol while the residual keeps halving
};

struct NewtonResult {
    BVFunction1D u;
    std::vector<double> cell_slopes;
    std::vector<double> cell_gamma;
    int iterations = 0;
    double residual = 0.0;
};

NewtonResult solve_newton(const SlopeSampling& S, double eps, const BoundaryData& bc, const BVFunction1D& init,
                          const NewtonOptions& opts = {});
NewtonResult solve_newton(const NonAutonomousIntegrand& F, double eps, const Grid1D& grid,
                          const BoundaryData& bc, const BVFunction1D& init);

// Hat functions at every interior node and sin(n pi (x-a)/(b-a)), n = 1..8.
struct TestBank {
    bool hats = true;
    int sinusoids = 8;
};

double el_residual(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes,
                   const TestBank& bank = {});
double el_residual(const SlopeSampling& S, double eps, const BVFunction1D& u, const TestBank& bank = {});

struct ViscosityConfig {
    Grid1D grid{-1.0, 1.0, 1 << 14};
    BoundaryData bc{0.0, 20.0};
    int k_max = 512;
    std::vector<int> k_schedule;  // empty: 1, 2, 4, ..., k_max
    double newton_tol = 1e-12;
    int newton_max_iter = 100;
    double shooting_tol = 1e-12;
    bool verify_with_newton = true;
    SamplingOptions sampling;
    std::vector<double> lp_exponents{1.0, 1.05, 1.2, 2.0};

    std::vector<int> schedule() const;
    void validate() const;
};

struct ViscosityReport {
    double flux_residual = 0.0;
    double el_residual = 0.0;
    EnergyBreakdown energy;  // true F on the sampled profile
    double regularized_energy = 0.0;
    double gradient_linf = 0.0;
    std::map<double, double> lp_norms;
    double newton_distance = -1.0;  // L-infinity distance shooting vs Newton, -1 if not run
    int newton_iterations = 0;
    int shooting_iterations = 0;
    double mass_residual = 0.0;
};

struct ViscosityState {
    int k = 0;
    double A_k = 1.0;
    double eps_k = 0.0;
    BVFunction1D u_k;
    double flux_C = 0.0;
    std::vector<double> cell_slopes;
    std::vector<double> sample_slopes;
    std::shared_ptr<const SlopeSampling> sampling;
    ViscosityReport report;
};

double dirichlet_integral(const SlopeSampling& S, const std::vector<double>& sample_slopes);
EnergyBreakdown sampled_energy(const SlopeSampling& S, const std::vector<double>& sample_slopes,
                               const BVFunction1D& u, const BoundaryData& bc);

std::vector<ViscosityState> run_sequence(const NonAutonomousIntegrand& F, const ViscosityConfig& cfg);

}  // namespace bvlab
