#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvlab/bv_function.hpp"
#include "bvlab/viscosity.hpp"

namespace bvlab {

struct Thresholds {
    double p_max = 0.0;
    double mu_sobolev_max = 0.0;
    double mu_dim_max = 0.0;
    double dim_bound = 0.0;
    double kappa_lo = 0.0;
    double kappa_hi = 0.0;
    bool kappa_empty = true;
    double autonomous_dim_bound = 0.0;
    bool vacuous = false;  // p_max <= 1: no integrability gain over W^{1,1}

    double kappa_mid() const { return 0.5 * (kappa_lo + kappa_hi); }
};

Thresholds thresholds(double mu, double alpha, int n);

double v_kappa(double xi, double kappa);
std::vector<double> v_kappa(const std::vector<double>& field, double kappa);

// Cell-centred field on a uniform grid.
struct CellField {
    Grid1D grid;
    std::vector<double> values;
};

struct NikolskiiReport {
    double theta = 0.0;
    double kappa = 0.0;
    Interval K;
    std::map<double, double> per_h;
    double sup = 0.0;
    double weighted_quantity = 0.0;  // sup over h of weighted_fractional, when kappa is set
};

// Dyadic h from 4 dx up to dist(K, boundary)/2.
std::vector<double> default_h_range(const Grid1D& grid, const Interval& K);

NikolskiiReport nikolskii_seminorm(const CellField& field, double theta, const Interval& K,
                                   const std::vector<double>& h_range);

// Integral over K of |V(d(x+h)) - V(d(x))|^2 h^-alpha (1 + d(x)^2 + d(x+h)^2)^(-(2(1-kappa)+mu)/2).
double weighted_fractional(const std::vector<double>& d_x, const std::vector<double>& d_xh, double dx,
                           double kappa, double mu, double alpha, double h);
double weighted_fractional(const CellField& d, double kappa, double mu, double alpha, double h, const Interval& K);

// Nikolskii report with the weighted quantity filled in.
NikolskiiReport nikolskii_with_weight(const CellField& field, double theta, double kappa, double mu, double alpha,
                                      const Interval& K, const std::vector<double>& h_range);

struct JumpReport {
    bool no_jump = false;
    double location = 0.0;
    double size = 0.0;
    double threshold = 0.0;  // 10 dx max_slope_initial
    std::vector<int> ks;
    std::vector<double> eps;
    std::vector<std::vector<double>> table;  // table[k index][eps index]
    std::vector<double> extrapolated;         // eps -> 0 value per k
    double k_ratio = 0.0;                      // last two extrapolated values
    bool k_converged = false;
};

struct JumpOptions {
    double k_ratio_tol = 0.01;
};

// window_eps empty: dx, 2 dx, 4 dx, 8 dx.
JumpReport jump_detect(const std::vector<ViscosityState>& states, std::vector<double> window_eps = {},
                       const JumpOptions& opts = {});

struct LpSweep {
    std::vector<int> ks;
    std::vector<double> ps;
    std::vector<std::vector<double>> norms;   // norms[k index][p index]
    std::vector<std::vector<double>> ratios;  // consecutive-k ratios of norms; row 0 is 1
    double integral(std::size_t ki, std::size_t pi) const;
};

LpSweep lp_sweep(const std::vector<ViscosityState>& states, const std::vector<double>& ps, const Interval& K);

void write_lp_sweep_csv(const std::string& path, const LpSweep& s);
void write_nikolskii_csv(const std::string& path, const std::vector<int>& ks,
                         const std::vector<NikolskiiReport>& reports);

}  // namespace bvlab
