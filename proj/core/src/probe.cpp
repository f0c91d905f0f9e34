#include "bvlab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bvlab/errors.hpp"
#include "bvlab/format.hpp"

namespace bvlab {

Thresholds thresholds(double mu, double alpha, int n) {
    if (!(mu > 1.0)) throw DomainError("thresholds: mu must exceed 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("thresholds: alpha must lie in (0,1)");
    if (n < 1) throw DomainError("thresholds: n must be >= 1");
    const double N = n;
    Thresholds t;
    t.p_max = (3.0 - mu) * N / (2.0 * N - alpha);
    t.mu_sobolev_max = 1.0 + alpha / N;
    t.mu_dim_max = 3.0 * N / (3.0 * N - alpha);
    t.dim_bound = N - alpha / 2.0;
    t.kappa_lo = std::max((mu + 1.0) / 2.0, 1.0);
    t.kappa_hi = std::min(1.0 + alpha / (2.0 * N), 2.0);
    t.kappa_empty = !(t.kappa_lo < t.kappa_hi) || !(t.kappa_hi > 1.0);
    t.autonomous_dim_bound = N - 1.0;
    t.vacuous = t.p_max <= 1.0;
    return t;
}

double v_kappa(double xi, double kappa) {
    if (!(kappa > 1.0 && kappa < 2.0)) throw DomainError("v_kappa: kappa must lie in (1,2)");
    return std::pow(1.0 + xi * xi, 0.5 * (1.0 - kappa)) * xi;
}

std::vector<double> v_kappa(const std::vector<double>& field, double kappa) {
    std::vector<double> out(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) out[i] = v_kappa(field[i], kappa);
    return out;
}

namespace {

// Cells whose midpoints lie in K, and the integer shift for h.
std::pair<int, int> cell_range(const Grid1D& g, const Interval& K) {
    int lo = g.cells(), hi = -1;
    for (int i = 0; i < g.cells(); ++i) {
        const double xm = g.midpoint(i);
        if (xm >= K.lo && xm <= K.hi) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    return {lo, hi};
}

int shift_of(const Grid1D& g, double h) {
    const double s = h / g.dx();
    const long r = std::lround(s);
    if (r < 1 || std::abs(s - r) > 1e-9 * s) throw DomainError("h must be a positive multiple of dx");
    return static_cast<int>(r);
}

}  // namespace

std::vector<double> default_h_range(const Grid1D& grid, const Interval& K) {
    const double dist = std::min(K.lo - grid.a(), grid.b() - K.hi);
    std::vector<double> hs;
    for (double h = 4.0 * grid.dx(); h <= 0.5 * dist * (1.0 + 1e-12); h *= 2.0) hs.push_back(h);
    return hs;
}

NikolskiiReport nikolskii_seminorm(const CellField& field, double theta, const Interval& K,
                                   const std::vector<double>& h_range) {
    const auto& g = field.grid;
    if (static_cast<int>(field.values.size()) != g.cells()) throw DomainError("field size does not match grid");
    NikolskiiReport r;
    r.theta = theta;
    r.K = K;
    const auto [lo, hi] = cell_range(g, K);
    for (double h : h_range) {
        if (h > std::min(K.lo - g.a(), g.b() - K.hi) * (1.0 + 1e-12)) {
            throw DomainError("nikolskii_seminorm: h exceeds dist(K, boundary)");
        }
        const int s = shift_of(g, h);
        double acc = 0.0;
        for (int i = lo; i <= hi; ++i) acc += std::abs(field.values[i + s] - field.values[i]) * g.dx();
        const double val = acc / std::pow(h, theta);
        r.per_h[h] = val;
        r.sup = std::max(r.sup, val);
    }
    return r;
}

double weighted_fractional(const std::vector<double>& d_x, const std::vector<double>& d_xh, double dx,
                           double kappa, double mu, double alpha, double h) {
    if (d_x.size() != d_xh.size()) throw DomainError("weighted_fractional: grids differ");
    const double expo = -0.5 * (2.0 * (1.0 - kappa) + mu);
    double acc = 0.0;
    for (std::size_t i = 0; i < d_x.size(); ++i) {
        const double a = d_x[i], b = d_xh[i];
        const double tv = v_kappa(b, kappa) - v_kappa(a, kappa);
        acc += tv * tv * std::pow(1.0 + a * a + b * b, expo) * dx;
    }
    return acc / std::pow(h, alpha);
}

double weighted_fractional(const CellField& d, double kappa, double mu, double alpha, double h, const Interval& K) {
    const auto& g = d.grid;
    const auto [lo, hi] = cell_range(g, K);
    const int s = shift_of(g, h);
    if (hi + s >= g.cells()) throw DomainError("weighted_fractional: K + h leaves the grid");
    std::vector<double> a(d.values.begin() + lo, d.values.begin() + hi + 1);
    std::vector<double> b(d.values.begin() + lo + s, d.values.begin() + hi + s + 1);
    return weighted_fractional(a, b, g.dx(), kappa, mu, alpha, h);
}

NikolskiiReport nikolskii_with_weight(const CellField& field, double theta, double kappa, double mu, double alpha,
                                      const Interval& K, const std::vector<double>& h_range) {
    auto r = nikolskii_seminorm(field, theta, K, h_range);
    r.kappa = kappa;
    for (double h : h_range) {
        r.weighted_quantity = std::max(r.weighted_quantity, weighted_fractional(field, kappa, mu, alpha, h, K));
    }
    return r;
}

JumpReport jump_detect(const std::vector<ViscosityState>& states, std::vector<double> window_eps,
                       const JumpOptions& opts) {
    if (states.size() < 3) throw DomainError("jump_detect needs at least three states");
    const auto& g = states.front().u_k.grid();
    const double c = states.front().sampling ? states.front().sampling->integrand().weight().c() : 0.0;
    if (window_eps.empty()) {
        for (int j = 0; j < 4; ++j) window_eps.push_back(std::ldexp(g.dx(), j));
    }
    std::sort(window_eps.begin(), window_eps.end());
    for (double e : window_eps) {
        if (!(c - e >= g.a() && c + e <= g.b())) throw DomainError("jump_detect: window leaves the domain");
    }

    JumpReport r;
    r.eps = window_eps;
    for (const auto& st : states) {
        r.ks.push_back(st.k);
        std::vector<double> row;
        for (double e : window_eps) row.push_back(st.u_k(c + e) - st.u_k(c - e));
        double J0 = row[0];
        if (row.size() >= 3) {
            const double d1 = row[1] - row[0], d2 = row[2] - row[1];
            if (d1 != 0.0) {
                const double rho = d2 / d1;
                if (rho > 1.0) J0 = row[0] - d1 / (rho - 1.0);
            }
        }
        r.table.push_back(std::move(row));
        r.extrapolated.push_back(J0);
    }

    double slope0 = states.front().report.gradient_linf;
    if (slope0 == 0.0) {
        for (double d : states.front().u_k.slopes()) slope0 = std::max(slope0, std::abs(d));
    }
    r.threshold = 10.0 * g.dx() * slope0;
    r.no_jump = std::abs(r.table.back().front()) < r.threshold;

    const std::size_t n = r.extrapolated.size();
    r.size = r.extrapolated.back();
    r.k_ratio = r.extrapolated[n - 2] != 0.0 ? r.extrapolated[n - 1] / r.extrapolated[n - 2] : 0.0;
    r.k_converged = std::abs(r.k_ratio - 1.0) <= opts.k_ratio_tol;

    const auto d = states.back().u_k.slopes();
    int best = 0;
    for (int i = 1; i < g.cells(); ++i) {
        if (std::abs(d[i]) > std::abs(d[best])) best = i;
    }
    r.location = g.midpoint(best);
    const int nb = (best > 0 && (best + 1 >= g.cells() || std::abs(d[best - 1]) >= std::abs(d[best + 1]))) ? best - 1
                                                                                                         : best + 1;
    if (nb >= 0 && nb < g.cells() && std::abs(d[nb]) >= 0.5 * std::abs(d[best])) {
        r.location = g.node(std::max(best, nb));
    }
    if (r.no_jump) r.size = 0.0;
    return r;
}

double LpSweep::integral(std::size_t ki, std::size_t pi) const { return std::pow(norms[ki][pi], ps[pi]); }

LpSweep lp_sweep(const std::vector<ViscosityState>& states, const std::vector<double>& ps, const Interval& K) {
    LpSweep s;
    s.ps = ps;
    for (const auto& st : states) {
        s.ks.push_back(st.k);
        std::vector<double> row;
        for (double p : ps) {
            if (st.sampling && st.sample_slopes.size() == st.sampling->size()) {
                row.push_back(sampled_lp_norm(*st.sampling, st.sample_slopes, p, K));
            } else {
                row.push_back(lp_gradient_norm(st.u_k, p, K));
            }
        }
        std::vector<double> ratio(ps.size(), 1.0);
        if (!s.norms.empty()) {
            for (std::size_t i = 0; i < ps.size(); ++i) ratio[i] = row[i] / s.norms.back()[i];
        }
        s.norms.push_back(std::move(row));
        s.ratios.push_back(std::move(ratio));
    }
    return s;
}

void write_lp_sweep_csv(const std::string& path, const LpSweep& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path);
    out << "k";
    for (double p : s.ps) out << ",p=" << fmt17(p);
    out << '\n';
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        out << s.ks[i];
        for (double v : s.norms[i]) out << ',' << fmt17(v);
        out << '\n';
    }
}

void write_nikolskii_csv(const std::string& path, const std::vector<int>& ks,
                         const std::vector<NikolskiiReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path);
    out << "k,h,seminorm\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        for (const auto& [h, v] : reports[i].per_h) out << ks[i] << ',' << fmt17(h) << ',' << fmt17(v) << '\n';
    }
}

}  // namespace bvlab
