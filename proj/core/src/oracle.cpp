#include "bvlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bvlab/errors.hpp"
#include "bvlab/quadrature.hpp"
#include "bvlab/slope_sampling.hpp"

namespace bvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_ranges(double mu, double alpha) {
    if (!(mu > 1.0 && mu < 2.0)) throw DomainError("mu must lie in (1,2)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

bool m0_finite(double mu, double alpha) { return mu > alpha + 1.0; }

// Closed-form integrand (t^a/(1+t^a))^p.
double closed_integrand(double t, double alpha, double p) {
    if (t <= 0.0) return 0.0;
    const double ta = std::pow(t, alpha);
    return std::exp(p * (alpha * std::log(t) - std::log1p(ta)));
}

double dyadic_integral(double lo, double hi, double alpha, double p) {
    NeumaierSum s;
    double x0 = lo;
    while (x0 < hi) {
        const double x1 = std::min(2.0 * x0, hi);
        s.add(integrate([&](double t) { return closed_integrand(t, alpha, p); }, x0, x1, 2e-15).value);
        x0 = x1;
    }
    return s.value();
}

// Integral of t^beta (1+t^a)^r over [0, delta] by the binomial series.
double series_tail(double delta, double alpha, double beta, double r) {
    NeumaierSum s;
    double coef = 1.0;
    const double da = std::pow(delta, alpha);
    double pw = std::pow(delta, beta + 1.0);
    for (int j = 0; j < 400; ++j) {
        const double term = coef * pw / (beta + alpha * j + 1.0);
        s.add(term);
        if (std::abs(term) < 1e-19 * std::abs(s.value())) break;
        coef *= (r - j) / (j + 1.0);
        pw *= da;
    }
    return s.value();
}

double closed_route(double mu, double alpha, double delta) {
    const double p = 1.0 / (1.0 - mu);
    const double beta = alpha * p;
    const double body = dyadic_integral(delta, 1.0, alpha, p);
    const double tail = series_tail(delta, alpha, beta, -p);
    return 2.0 * std::pow(mu, p) * (body + tail);
}

int substitution_exponent(double mu, double alpha, bool singular) {
    int gam = static_cast<int>(std::ceil(1.0 / alpha));
    if (singular) {
        const double beta = alpha / (1.0 - mu);
        gam = std::max(gam, static_cast<int>(std::ceil(2.0 / (1.0 + beta))));
    }
    return gam;
}

// Slope g((C+m)/w(t)) with C <= 0 written through the flux gap (e - C)/w.
double profile_slope(const MuEllipticProfile& prof, const HoelderWeight& w, double C, double t) {
    const double gap = (w.excess(t) - C) / w(t);
    if (gap <= 0.0) return kInf;
    return prof.g_from_gap(gap);
}

// Integral of phi over [x0, x1] with power grading toward 0 when 0 is an endpoint.
double cell_integral(const std::function<double(double)>& phi, double x0, double x1, int gam) {
    if (x0 == 0.0) return integrate_graded(phi, 0.0, x1, gam, 1e-14).value;
    if (x1 == 0.0) return -integrate_graded(phi, 0.0, x0, gam, 1e-14).value;
    if (x0 < 0.0 && x1 > 0.0) {
        return integrate_graded(phi, 0.0, x1, gam, 1e-14).value - integrate_graded(phi, 0.0, x0, gam, 1e-14).value;
    }
    return integrate(phi, x0, x1, 1e-14).value;
}

OracleSolution build_solution(OracleKind kind, double mu, double alpha, const Grid1D& grid, double M, double C,
                              double M0) {
    if (grid.a() != -1.0 || grid.b() != 1.0) throw DomainError("oracle grids must cover [-1,1]");
    const MuEllipticProfile prof(mu);
    const HoelderWeight w(alpha);
    const int gam = substitution_exponent(mu, alpha, kind == OracleKind::jump);
    auto slope = [&](double t) { return profile_slope(prof, w, C, t); };

    std::vector<double> vals(grid.nodes());
    NeumaierSum acc;
    vals[0] = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        if (C == -w.m()) {
            vals[i + 1] = 0.0;
            continue;
        }
        acc.add(cell_integral(slope, grid.node(i), grid.node(i + 1), gam));
        vals[i + 1] = acc.value();
    }

    OracleSolution sol{kind, mu, alpha, M, C, M0, 0.0, BVFunction1D(grid, vals)};
    if (kind == OracleKind::jump) {
        sol.jump_size = M - M0;
        if (grid.node_index(0.0) < 0) throw DomainError("jump oracle needs 0 as a grid node");
        sol.minimizer = BVFunction1D(grid, vals, {{0.0, sol.jump_size}});
    }
    sol.trace_error = std::abs(sol.minimizer.trace_b() - M);
    sol.energy.ac_part = oracle_ac_energy(mu, alpha, C);
    sol.energy.jump_part = kind == OracleKind::jump ? w.m() * sol.jump_size : 0.0;
    sol.energy.boundary_part = 0.0;
    sol.energy.total = sol.energy.ac_part + sol.energy.jump_part;
    return sol;
}

}  // namespace

M0Result compute_M0(double mu, double alpha) {
    check_ranges(mu, alpha);
    M0Result r;
    if (!m0_finite(mu, alpha)) {
        r.value = r.generic = r.closed_form = r.refined = kInf;
        return r;
    }
    r.finite = true;
    const MuEllipticProfile prof(mu);
    const HoelderWeight w(alpha);
    r.gamma = static_cast<int>(std::ceil(2.0 / (1.0 + alpha / (1.0 - mu))));
    auto slope = [&](double t) { return profile_slope(prof, w, 0.0, t); };
    const double right = integrate_graded(slope, w.c(), w.b(), r.gamma, 1e-15).value;
    const double left = -integrate_graded(slope, w.c(), w.a(), r.gamma, 1e-15).value;
    r.generic = left + right;

    const double delta = std::min(std::ldexp(1.0, -20), std::pow(0.1, 1.0 / alpha));
    r.closed_form = closed_route(mu, alpha, delta);
    r.refined = closed_route(mu, alpha, std::ldexp(delta, -10));
    r.route_rel_diff = std::abs(r.generic - r.closed_form) / std::abs(r.closed_form);
    r.refinement_rel_diff = std::abs(r.refined - r.closed_form) / std::abs(r.closed_form);
    r.value = r.closed_form;
    return r;
}

double m0_truncated(double mu, double alpha, double cutoff) {
    check_ranges(mu, alpha);
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw DomainError("cutoff must lie in (0,1)");
    const double p = 1.0 / (1.0 - mu);
    return 2.0 * std::pow(mu, p) * dyadic_integral(cutoff, 1.0, alpha, p);
}

std::string to_string(OracleKind k) {
    switch (k) {
        case OracleKind::sobolev: return "sobolev";
        case OracleKind::jump: return "jump";
        case OracleKind::degenerate: return "degenerate";
    }
    return "unknown";
}

OracleKind classify(double mu, double alpha, double M) {
    const auto r = compute_M0(mu, alpha);
    if (!r.finite) return OracleKind::sobolev;
    if (std::abs(M - r.value) <= 1e-12 * (1.0 + r.value)) return OracleKind::degenerate;
    return M > r.value ? OracleKind::jump : OracleKind::sobolev;
}

double oracle_mass(double mu, double alpha, double C) {
    const MuEllipticProfile prof(mu);
    const HoelderWeight w(alpha);
    if (C == -w.m()) return 0.0;
    const int gam = substitution_exponent(mu, alpha, C == 0.0);
    auto slope = [&](double t) { return profile_slope(prof, w, C, t); };
    return integrate_graded(slope, 0.0, 1.0, gam, 1e-15).value - integrate_graded(slope, 0.0, -1.0, gam, 1e-15).value;
}

double oracle_ac_energy(double mu, double alpha, double C) {
    const MuEllipticProfile prof(mu);
    const HoelderWeight w(alpha);
    if (C == -w.m()) return 0.0;
    const int gam = substitution_exponent(mu, alpha, C == 0.0);
    auto dens = [&](double t) { return w(t) * prof.f(profile_slope(prof, w, C, t)); };
    return integrate_graded(dens, 0.0, 1.0, gam, 1e-15).value - integrate_graded(dens, 0.0, -1.0, gam, 1e-15).value;
}

OracleSolution solve_sobolev_branch(double mu, double alpha, const Grid1D& grid, double M) {
    check_ranges(mu, alpha);
    if (!(M >= 0.0)) throw DomainError("solve_sobolev_branch requires M >= 0");
    const auto m0 = compute_M0(mu, alpha);
    if (m0.finite && M >= m0.value) throw BranchError("solve_sobolev_branch requires M < M0");
    const double m = HoelderWeight(alpha).m();
    if (M == 0.0) return build_solution(OracleKind::sobolev, mu, alpha, grid, M, -m, m0.value);

    // Mass is increasing in C on (-m, 0); Illinois-type regula falsi with bisection fallback.
    double lo = -m, hi = 0.0;
    double flo = -M;
    double fhi = m0.finite ? m0.value - M : kInf;
    double C = -0.5 * m;
    const double tol = 1e-13 * (1.0 + M);
    for (int it = 0; it < 300; ++it) {
        const double r = oracle_mass(mu, alpha, C) - M;
        if (std::abs(r) <= tol) break;
        if (r > 0.0) {
            hi = C;
            fhi = r;
        } else {
            lo = C;
            flo = r;
        }
        double next = 0.5 * (lo + hi);
        if (std::isfinite(fhi) && it % 2 == 0) {
            const double s = lo - flo * (hi - lo) / (fhi - flo);
            if (s > lo && s < hi) next = s;
        }
        if (next == lo || next == hi) break;
        C = next;
    }
    return build_solution(OracleKind::sobolev, mu, alpha, grid, M, C, m0.value);
}

OracleSolution solve_jump_branch(double mu, double alpha, const Grid1D& grid, double M) {
    check_ranges(mu, alpha);
    const auto m0 = compute_M0(mu, alpha);
    if (!m0.finite || !(M > m0.value)) throw BranchError("solve_jump_branch requires M > M0 finite");
    return build_solution(OracleKind::jump, mu, alpha, grid, M, 0.0, m0.value);
}

OracleSolution solve_oracle(double mu, double alpha, const Grid1D& grid, double M) {
    switch (classify(mu, alpha, M)) {
        case OracleKind::jump: return solve_jump_branch(mu, alpha, grid, M);
        case OracleKind::sobolev: return solve_sobolev_branch(mu, alpha, grid, M);
        case OracleKind::degenerate: break;
    }
    throw BranchError("degenerate case M = M0 is flagged, not resolved");
}

EnergyBreakdown oracle_energy(const OracleSolution& sol, const NonAutonomousIntegrand& F, CellWeightRule rule) {
    auto e = relaxed_energy(sol.minimizer, F, {0.0, sol.M}, rule);
    if (sol.kind == OracleKind::jump) {
        e.boundary_part = 0.0;
        e.total = e.ac_part + e.jump_part;
    }
    return e;
}

}  // namespace bvlab
