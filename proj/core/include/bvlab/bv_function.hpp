#pragma once

#include <string>
#include <vector>

#include "bvlab/integrand.hpp"

namespace bvlab {

class Grid1D {
public:
    Grid1D(double a, double b, int cells);

    double a() const { return a_; }
    double b() const { return b_; }
    int cells() const { return cells_; }
    int nodes() const { return cells_ + 1; }
    double dx() const { return (b_ - a_) / cells_; }
    double node(int i) const;
    double midpoint(int i) const { return 0.5 * (node(i) + node(i + 1)); }
    // Index of the node equal to x, or -1.
    int node_index(double x) const;
    // Cell containing x (the left cell at interior nodes is never returned: [x_i, x_{i+1})).
    int cell_of(double x) const;

    bool operator==(const Grid1D& o) const { return a_ == o.a_ && b_ == o.b_ && cells_ == o.cells_; }

private:
    double a_, b_;
    int cells_;
};

struct JumpAtom {
    double location = 0.0;
    double jump = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// u(x) = v(x) + sum of jumps at atoms with location <= x, where v is the
// continuous piecewise-linear interpolant of the nodal values.
class BVFunction1D {
public:
    BVFunction1D(Grid1D grid, std::vector<double> values, std::vector<JumpAtom> atoms = {});

    static BVFunction1D affine(const Grid1D& grid, double y1, double y2);
    static BVFunction1D zero(const Grid1D& grid) { return affine(grid, 0.0, 0.0); }

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<JumpAtom>& atoms() const { return atoms_; }
    bool atom_free() const { return atoms_.empty(); }

    double slope(int cell) const;
    std::vector<double> slopes() const;
    double jump_total() const;
    double trace_a() const { return values_.front(); }
    double trace_b() const { return values_.back() + jump_total(); }
    double operator()(double x) const;

private:
    Grid1D grid_;
    std::vector<double> values_;
    std::vector<JumpAtom> atoms_;
};

struct EnergyBreakdown {
    double ac_part = 0.0;
    double jump_part = 0.0;
    double boundary_part = 0.0;
    double total = 0.0;
};

struct BoundaryData {
    double y1 = 0.0;
    double y2 = 0.0;
};

enum class CellWeightRule {
    midpoint,      // w(x_{i+1/2})
    cell_average,  // exact mean of w over the cell
};

double cell_weight(const HoelderWeight& w, const Grid1D& grid, int cell, CellWeightRule rule);

EnergyBreakdown relaxed_energy(const BVFunction1D& u, const NonAutonomousIntegrand& F,
                               const BoundaryData& bc,
                               CellWeightRule rule = CellWeightRule::midpoint);

double total_variation(const BVFunction1D& u);

// (sum over K of |slope|^p dx)^(1/p) on the absolutely continuous part; +inf
// when p > 1 and an atom lies in K.
double lp_gradient_norm(const BVFunction1D& u, double p, const Interval& K);

// Exact L1 distance of two BV functions on the same grid; atoms must sit on nodes.
double l1_distance(const BVFunction1D& u, const BVFunction1D& v);

// CSV columns x,u (nodal values of the continuous part) plus a sidecar JSON
// file <path>.atoms.json holding the grid and the atom list.
void write_bv_csv(const std::string& path, const BVFunction1D& u);
BVFunction1D read_bv_csv(const std::string& path);

}  // namespace bvlab
