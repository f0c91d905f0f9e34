#include "bvlab/bv_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"

namespace bvlab {

Grid1D::Grid1D(double a, double b, int cells) : a_(a), b_(b), cells_(cells) {
    if (!(a < b)) throw DomainError("Grid1D requires a < b");
    if (cells < 1 || (cells & (cells - 1)) != 0) {
        throw DomainError("Grid1D cell count must be a power of two, got " + std::to_string(cells));
    }
}

double Grid1D::node(int i) const {
    if (i <= 0) return a_;
    if (i >= cells_) return b_;
    return a_ + (b_ - a_) * (static_cast<double>(i) / cells_);
}

int Grid1D::node_index(double x) const {
    const double t = (x - a_) / dx();
    const long i = std::lround(t);
    if (i < 0 || i > cells_) return -1;
    return node(static_cast<int>(i)) == x ? static_cast<int>(i) : -1;
}

int Grid1D::cell_of(double x) const {
    int i = static_cast<int>(std::floor((x - a_) / dx()));
    i = std::clamp(i, 0, cells_ - 1);
    while (i > 0 && x < node(i)) --i;
    while (i < cells_ - 1 && x >= node(i + 1)) ++i;
    return i;
}

BVFunction1D::BVFunction1D(Grid1D grid, std::vector<double> values, std::vector<JumpAtom> atoms)
    : grid_(grid), values_(std::move(values)), atoms_(std::move(atoms)) {
    if (static_cast<int>(values_.size()) != grid_.nodes()) {
        throw DomainError("BVFunction1D: expected " + std::to_string(grid_.nodes()) + " values");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("BVFunction1D: non-finite nodal value");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& at = atoms_[i];
        if (!(at.location > grid_.a() && at.location < grid_.b())) {
            throw DomainError("BVFunction1D: atom location must be interior");
        }
        if (!std::isfinite(at.jump)) throw DomainError("BVFunction1D: non-finite jump");
        if (i > 0 && !(atoms_[i - 1].location < at.location)) {
            throw DomainError("BVFunction1D: atoms must be sorted and distinct");
        }
    }
}

BVFunction1D BVFunction1D::affine(const Grid1D& grid, double y1, double y2) {
    std::vector<double> v(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) {
        const double t = static_cast<double>(i) / grid.cells();
        v[i] = y1 + t * (y2 - y1);
    }
    v.back() = y2;
    return BVFunction1D(grid, std::move(v));
}

double BVFunction1D::slope(int cell) const { return (values_[cell + 1] - values_[cell]) / grid_.dx(); }

std::vector<double> BVFunction1D::slopes() const {
    std::vector<double> d(grid_.cells());
    for (int i = 0; i < grid_.cells(); ++i) d[i] = slope(i);
    return d;
}

double BVFunction1D::jump_total() const {
    double s = 0.0;
    for (const auto& at : atoms_) s += at.jump;
    return s;
}

double BVFunction1D::operator()(double x) const {
    const int i = grid_.cell_of(x);
    const double x0 = grid_.node(i);
    double v = values_[i] + (x - x0) * slope(i);
    for (const auto& at : atoms_) {
        if (at.location <= x) v += at.jump;
    }
    return v;
}

double cell_weight(const HoelderWeight& w, const Grid1D& grid, int cell, CellWeightRule rule) {
    if (rule == CellWeightRule::midpoint) return w(grid.midpoint(cell));
    const double x0 = grid.node(cell), x1 = grid.node(cell + 1);
    return w.integral(x0, x1) / (x1 - x0);
}

EnergyBreakdown relaxed_energy(const BVFunction1D& u, const NonAutonomousIntegrand& F,
                               const BoundaryData& bc, CellWeightRule rule) {
    const auto& g = u.grid();
    const auto& w = F.weight();
    const auto& prof = F.profile();
    EnergyBreakdown e;
    for (int i = 0; i < g.cells(); ++i) {
        e.ac_part += cell_weight(w, g, i, rule) * prof.f(u.slope(i)) * g.dx();
    }
    for (const auto& at : u.atoms()) e.jump_part += w(at.location) * prof.recession(at.jump);
    e.boundary_part = w(g.a()) * std::abs(u.trace_a() - bc.y1) + w(g.b()) * std::abs(u.trace_b() - bc.y2);
    e.total = e.ac_part + e.jump_part + e.boundary_part;
    return e;
}

double total_variation(const BVFunction1D& u) {
    double tv = 0.0;
    const auto& v = u.values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
    for (const auto& at : u.atoms()) tv += std::abs(at.jump);
    return tv;
}

double lp_gradient_norm(const BVFunction1D& u, double p, const Interval& K) {
    if (!(p >= 1.0)) throw DomainError("lp_gradient_norm: p must be >= 1");
    const auto& g = u.grid();
    if (p > 1.0) {
        for (const auto& at : u.atoms()) {
            if (at.location >= K.lo && at.location <= K.hi && at.jump != 0.0) {
                return std::numeric_limits<double>::infinity();
            }
        }
    }
    double s = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        const double lo = std::max(K.lo, g.node(i));
        const double hi = std::min(K.hi, g.node(i + 1));
        if (hi <= lo) continue;
        s += std::pow(std::abs(u.slope(i)), p) * (hi - lo);
    }
    return std::pow(s, 1.0 / p);
}

namespace {

// Nodal right and left limits of u.
void nodal_limits(const BVFunction1D& u, std::vector<double>& right, std::vector<double>& left) {
    const auto& g = u.grid();
    right = u.values();
    left = u.values();
    for (const auto& at : u.atoms()) {
        const int i = g.node_index(at.location);
        if (i < 0) throw DomainError("l1_distance: atoms must lie on grid nodes");
        for (int j = i; j < g.nodes(); ++j) right[j] += at.jump;
        for (int j = i + 1; j < g.nodes(); ++j) left[j] += at.jump;
    }
}

// Integral of |linear| over a cell with end values p, q.
double abs_linear(double p, double q, double h) {
    if ((p >= 0.0) == (q >= 0.0)) return 0.5 * h * std::abs(p + q);
    return 0.5 * h * (p * p + q * q) / (std::abs(p) + std::abs(q));
}

}  // namespace

double l1_distance(const BVFunction1D& u, const BVFunction1D& v) {
    if (!(u.grid() == v.grid())) throw DomainError("l1_distance: grids differ");
    std::vector<double> ur, ul, vr, vl;
    nodal_limits(u, ur, ul);
    nodal_limits(v, vr, vl);
    const auto& g = u.grid();
    double acc = 0.0;
    for (int i = 0; i < g.cells(); ++i) acc += abs_linear(ur[i] - vr[i], ul[i + 1] - vl[i + 1], g.dx());
    return acc;
}

void write_bv_csv(const std::string& path, const BVFunction1D& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << "x,u\n";
    const auto& g = u.grid();
    for (int i = 0; i < g.nodes(); ++i) out << fmt17(g.node(i)) << ',' << fmt17(u.values()[i]) << '\n';

    nlohmann::json j;
    j["grid"] = {{"a", g.a()}, {"b", g.b()}, {"cells", g.cells()}};
    j["atoms"] = nlohmann::json::array();
    for (const auto& at : u.atoms()) j["atoms"].push_back({{"location", at.location}, {"jump", at.jump}});
    std::ofstream side(path + ".atoms.json", std::ios::binary);
    if (!side) throw DomainError("cannot open sidecar for " + path);
    side << j.dump(2) << '\n';
}

BVFunction1D read_bv_csv(const std::string& path) {
    std::ifstream side(path + ".atoms.json");
    if (!side) throw DomainError("missing sidecar " + path + ".atoms.json");
    const auto j = nlohmann::json::parse(side);
    Grid1D g(j["grid"]["a"].get<double>(), j["grid"]["b"].get<double>(), j["grid"]["cells"].get<int>());
    std::vector<JumpAtom> atoms;
    for (const auto& a : j["atoms"]) atoms.push_back({a["location"].get<double>(), a["jump"].get<double>()});

    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("malformed CSV line in " + path);
        vals.push_back(parse_double(line.substr(comma + 1)));
    }
    return BVFunction1D(g, std::move(vals), std::move(atoms));
}

}  // namespace bvlab
