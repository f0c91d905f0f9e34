#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bvlab/integrand.hpp"
#include "bvlab/oracle.hpp"
#include "bvlab/probe.hpp"
#include "bvlab/viscosity.hpp"
#include "support/competitors.hpp"

using namespace bvlab;

namespace {

// Pinned tolerances and budgets.
constexpr double kJumpSizeRel = 0.02;
constexpr double kL1Rel = 0.01;
constexpr double kSteepFraction = 0.5;     // cells above this share of the peak slope sit within 2 dx of 0
constexpr double kUnimodalSlack = 1e-9;    // relative, slope profile non-increasing away from 0
constexpr double kRouteRel = 1e-8;
constexpr double kDivergeFloor = 1e3;
constexpr double kRefineRel = 1e-8;
constexpr double kSeam = 1e-12;
constexpr double kLambdaExact = 1e-15;
constexpr double kFlux = 1e-8;
constexpr double kNewton = 1e-8;
constexpr double kSymmetry = 1e-6;
constexpr double kFdRel = 1e-6;
constexpr double kEnergySlack = 1e-10;
constexpr double kLpRatio = 1.05;
constexpr double kSupStable = 1.05;
constexpr double kLpGrowth = 2.0;
constexpr double kNikolskiiFactor = 1.2;
constexpr double kThresholdExact = 1e-12;
constexpr double kCompetitorSlack = 1e-9;
constexpr double kDominateSlack = 1e-8;

constexpr double kBudget1 = 120.0, kBudget2 = 10.0, kBudget3 = 10.0, kBudget4 = 5.0, kBudget5 = 60.0,
                 kBudget6 = 180.0, kBudget7 = 120.0, kBudget8 = 1.0, kBudget9 = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Run {
    double mu = 0.0, alpha = 0.25, M = 20.0;
    Grid1D grid{-1.0, 1.0, 1 << 14};
    std::vector<ViscosityState> states;
    std::optional<OracleSolution> oracle;
    double seconds = 0.0;
};

Run make_run(double mu) {
    Run r;
    r.mu = mu;
    const auto t0 = Clock::now();
    ViscosityConfig cfg;
    cfg.grid = r.grid;
    cfg.bc = {0.0, r.M};
    cfg.k_max = 512;
    r.states = run_sequence(NonAutonomousIntegrand(MuEllipticProfile(mu), HoelderWeight(r.alpha)), cfg);
    r.oracle = solve_oracle(mu, r.alpha, r.grid, r.M);
    r.seconds = seconds_since(t0);
    return r;
}

const ViscosityState& state_at(const Run& r, int k) {
    for (const auto& s : r.states) {
        if (s.k == k) return s;
    }
    throw std::runtime_error("missing state k=" + std::to_string(k));
}

int failures = 0;

void report(int id, bool pass, double secs, double budget, const std::string& detail) {
    pass = pass && secs <= budget;
    if (!pass) ++failures;
    std::printf("CRITERION %d %s (%.2f s of %.0f s) %s\n", id, pass ? "PASS" : "FAIL", secs, budget, detail.c_str());
    std::fflush(stdout);
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void criterion1(const Run& r) {
    const auto t0 = Clock::now();
    const auto& g = r.grid;
    const auto& last = r.states.back();
    const auto d = last.u_k.slopes();
    const int peak = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
    bool steep_local = true;
    for (int i = 0; i < g.cells(); ++i) {
        if (d[i] >= kSteepFraction * d[peak] && std::abs(g.midpoint(i)) > 2.0 * g.dx()) steep_local = false;
    }
    bool unimodal = true;
    for (int i = 0; i + 1 < g.cells(); ++i) {
        const double tol = kUnimodalSlack * d[peak];
        if (g.node(i + 1) <= 0.0 && d[i + 1] < d[i] - tol) unimodal = false;
        if (g.node(i + 1) >= 0.0 && d[i + 1] > d[i] + tol) unimodal = false;
    }
    const auto jr = jump_detect(r.states);
    const double target = r.M - r.oracle->M0;
    const double size_rel = std::abs(jr.size - target) / target;
    const double l1 = l1_distance(last.u_k, r.oracle->minimizer);
    const double l1_lim = kL1Rel * r.M * (g.b() - g.a());
    const bool ok = steep_local && unimodal && !jr.no_jump && std::abs(jr.location) <= g.dx() &&
                    size_rel <= kJumpSizeRel && l1 <= l1_lim;
    report(1, ok, r.seconds + seconds_since(t0), kBudget1,
           "steep_local=" + std::to_string(steep_local) + " unimodal=" + std::to_string(unimodal) +
               " location=" + num(jr.location) + " size_rel=" + num(size_rel) + " l1=" + num(l1) + "/" +
               num(l1_lim));
}

void criterion2() {
    const auto t0 = Clock::now();
    std::vector<std::pair<double, double>> pairs;
    for (double a : {0.1, 0.3, 0.5, 0.7}) {
        for (double off : {0.05, 0.10, 0.15, 0.20, 0.25}) pairs.emplace_back(a + 1.0 + off, a);
    }
    double worst = 0.0;
    bool ok = pairs.size() == 20;
    for (const auto& [mu, a] : pairs) {
        const auto r = compute_M0(mu, a);
        ok = ok && mu < 2.0 && r.finite;
        worst = std::max(worst, r.route_rel_diff);
    }
    ok = ok && worst <= kRouteRel;
    report(2, ok, seconds_since(t0), kBudget2, "pairs=" + std::to_string(pairs.size()) + " worst_rel=" + num(worst));
}

void criterion3() {
    const auto t0 = Clock::now();
    std::vector<double> seq;
    for (double cut : {1e-4, 1e-8, 1e-12, 1e-16}) seq.push_back(m0_truncated(1.2, 0.25, cut));
    const bool increasing = std::is_sorted(seq.begin(), seq.end()) && seq.front() < seq.back();
    const auto div = compute_M0(1.2, 0.25);
    const bool classified = !div.finite && std::isinf(div.value) && classify(1.2, 0.25, 1e6) == OracleKind::sobolev;
    const auto fin = compute_M0(1.3, 0.25);
    const bool ok = increasing && seq.back() > kDivergeFloor && classified && fin.finite &&
                    fin.refinement_rel_diff <= kRefineRel && fin.route_rel_diff <= kRefineRel;
    report(3, ok, seconds_since(t0), kBudget3,
           "truncated_last=" + num(seq.back()) + " mu1.3_M0=" + num(fin.value) +
               " refine_rel=" + num(fin.refinement_rel_diff));
}

void criterion4() {
    const auto t0 = Clock::now();
    bool ok = true;
    int passed = 0;
    double seam = 0.0;
    for (double mu : {1.1, 1.4, 1.9}) {
        for (double a : {0.1, 0.25, 0.9}) {
            const NonAutonomousIntegrand F{MuEllipticProfile(mu), HoelderWeight(a)};
            const auto r = verify_hypotheses(F, SampleSpec{}, PointSpec{});
            const bool this_ok = r.all_pass() && std::abs(r.lambda - (mu - 1.0) / mu) <= kLambdaExact &&
                                 r.hoelder_C == 1.0;
            ok = ok && this_ok;
            passed += this_ok;
        }
        const MuEllipticProfile p(mu);
        for (double z : {-1.0, 1.0}) {
            const double lo = std::nextafter(z, -2.0), hi = std::nextafter(z, 2.0);
            seam = std::max({seam, std::abs(p.f(lo) - p.f(hi)), std::abs(p.fprime(lo) - p.fprime(hi)),
                             std::abs(p.fsecond(lo) - p.fsecond(hi))});
        }
    }
    ok = ok && seam <= kSeam;
    report(4, ok, seconds_since(t0), kBudget4, "configs_passed=" + std::to_string(passed) + "/9 seam=" + num(seam));
}

// Central-difference check of the regularized energy gradient along seeded directions.
double fd_gradient_defect(double mu) {
    const Grid1D g(-1.0, 1.0, 32);
    const NonAutonomousIntegrand F{MuEllipticProfile(mu), HoelderWeight(0.25)};
    const double eps = 1e-2, h = 1e-6;
    std::vector<double> vals(g.nodes());
    for (int i = 0; i < g.nodes(); ++i) {
        const double x = g.node(i);
        vals[i] = 10.0 * (x + 1.0) + 4.0 * std::sin(3.0 * std::acos(-1.0) * x);
    }
    const BVFunction1D u(g, vals);
    const auto grad = regularized_energy_gradient(F, eps, u);
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::vector<double> dir(grad.size());
        for (double& d : dir) d = N(rng);
        auto shifted = [&](double s) {
            auto v = vals;
            for (std::size_t i = 0; i < dir.size(); ++i) v[i + 1] += s * dir[i];
            return regularized_energy(F, eps, BVFunction1D(g, v));
        };
        const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        double an = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) an += grad[i] * dir[i];
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    return worst;
}

struct Invariants {
    bool ok = false;
    double seconds = 0.0;
    std::string detail;
};

Invariants invariants(const Run& r) {
    const auto t0 = Clock::now();
    double flux = 0.0, newton = 0.0, sym = 0.0, rise = -1e300;
    bool newton_ran = true;
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const auto& s = r.states[i];
        flux = std::max(flux, s.report.flux_residual / (1.0 + std::abs(s.flux_C)));
        if (s.report.newton_distance < 0.0) newton_ran = false;
        newton = std::max(newton, s.report.newton_distance / (1.0 + r.M));
        const auto& v = s.u_k.values();
        for (std::size_t j = 0; j < v.size(); ++j) sym = std::max(sym, std::abs(v[j] + v[v.size() - 1 - j] - r.M));
        if (i > 0) rise = std::max(rise, s.report.energy.total - r.states[i - 1].report.energy.total);
    }
    sym /= r.M;
    const double fd = fd_gradient_defect(r.mu);
    const bool ok = newton_ran && flux <= kFlux && newton <= kNewton && sym <= kSymmetry && fd <= kFdRel &&
                    rise <= kEnergySlack;
    return {ok, seconds_since(t0) + r.seconds,
            "mu=" + num(r.mu) + " flux=" + num(flux) + " newton=" + num(newton) + " symmetry=" + num(sym) +
                " fd=" + num(fd) + " max_energy_rise=" + num(rise)};
}

// The budget applies per configuration.
void criterion5(const Run& a, const Run& b) {
    const auto x = invariants(a), y = invariants(b);
    const bool ok = x.ok && y.ok && x.seconds <= kBudget5 && y.seconds <= kBudget5;
    report(5, ok, std::max(x.seconds, y.seconds), kBudget5, x.detail + " | " + y.detail);
}

void criterion6(const Run& sob, const Run& jmp) {
    const auto t0 = Clock::now();
    const Interval dom{-1.0, 1.0};
    const auto ls = lp_sweep(sob.states, {1.05}, dom);
    const std::size_t n = ls.ks.size();
    const double ratio = ls.integral(n - 1, 0) / ls.integral(n - 2, 0);
    const double sup_ratio = sob.states[n - 1].report.gradient_linf / sob.states[n - 2].report.gradient_linf;
    const auto lj = lp_sweep(jmp.states, {1.2}, dom);
    std::size_t i64 = 0;
    while (lj.ks[i64] != 64) ++i64;
    const double growth = lj.integral(lj.ks.size() - 1, 0) / lj.integral(i64, 0);
    const double p_max = thresholds(1.1, 0.25, 1).p_max;
    const bool ok = 1.05 < p_max && ratio <= kLpRatio && std::max(sup_ratio, 1.0 / sup_ratio) <= kSupStable &&
                    growth >= kLpGrowth;
    report(6, ok, seconds_since(t0) + sob.seconds + jmp.seconds, kBudget6,
           "mu1.1_ratio=" + num(ratio) + " sup_ratio=" + num(sup_ratio) + " mu1.4_growth=" + num(growth));
}

void criterion7(const Run& sob) {
    const auto t0 = Clock::now();
    const Interval K{-0.5, 0.5};
    const auto th = thresholds(sob.mu, sob.alpha, 1);
    const auto hs = default_h_range(sob.grid, K);
    std::vector<double> wq, sn;
    for (int k : {64, 128, 256, 512}) {
        const auto rep = nikolskii_with_weight({sob.grid, state_at(sob, k).cell_slopes}, 0.5 * sob.alpha,
                                               th.kappa_mid(), sob.mu, sob.alpha, K, hs);
        wq.push_back(rep.weighted_quantity);
        sn.push_back(rep.sup);
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *lo > 0.0 ? *hi / *lo : INFINITY;
    };
    const double fw = spread(wq), fs = spread(sn);
    const bool ok = !th.kappa_empty && fw <= kNikolskiiFactor && fs <= kNikolskiiFactor;
    report(7, ok, seconds_since(t0) + sob.seconds, kBudget7,
           "kappa=" + num(th.kappa_mid()) + " weighted_factor=" + num(fw) + " seminorm_factor=" + num(fs));
}

void criterion8() {
    const auto t0 = Clock::now();
    const auto a = thresholds(1.4, 0.25, 1);
    bool ok = std::abs(a.p_max - 1.6 / 1.75) <= kThresholdExact && std::abs(a.dim_bound - 0.875) <= kThresholdExact &&
              std::abs(a.mu_dim_max - 3.0 / 2.75) <= kThresholdExact && a.kappa_empty;
    ok = ok && !thresholds(1.1, 0.25, 1).kappa_empty;
    int grid_ok = 0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = (i + 0.5) / 20.0;
        for (int n = 1; n <= 20; ++n) {
            const auto t = thresholds(1.0 + 0.5 * alpha / n, alpha, n);
            grid_ok += t.mu_dim_max < t.mu_sobolev_max;
        }
    }
    ok = ok && grid_ok == 400;
    report(8, ok, seconds_since(t0), kBudget8,
           "p_max=" + num(a.p_max) + " mu_dim_max=" + num(a.mu_dim_max) + " grid=" + std::to_string(grid_ok) + "/400");
}

void criterion9(const Run& jmp, const Run& sob) {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const Run* r : {&jmp, &sob}) {
        const NonAutonomousIntegrand F{MuEllipticProfile(r->mu), HoelderWeight(r->alpha)};
        const Grid1D g(-1.0, 1.0, 1 << 12);
        const auto s = solve_oracle(r->mu, r->alpha, g, r->M);
        const double e0 = oracle_energy(s, F).total;
        int beaten = 0;
        for (const auto& v : testing::competitors(s, 100, 20240611)) {
            beaten += e0 <= relaxed_energy(v, F, {0.0, r->M}).total + kCompetitorSlack;
        }
        const double eo = r->oracle->energy.total;
        double min_gap = INFINITY, gap_rise = -INFINITY;
        for (std::size_t i = 0; i < r->states.size(); ++i) {
            const double gap = r->states[i].report.energy.total - eo;
            min_gap = std::min(min_gap, gap);
            if (i > 0) gap_rise = std::max(gap_rise, gap - (r->states[i - 1].report.energy.total - eo));
        }
        ok = ok && beaten == 100 && min_gap >= -kDominateSlack * (1.0 + eo) && gap_rise <= kEnergySlack;
        detail += "mu=" + num(r->mu) + " beaten=" + std::to_string(beaten) + " min_gap=" + num(min_gap) +
                  " max_gap_rise=" + num(gap_rise) + (r == &jmp ? " | " : "");
    }
    report(9, ok, seconds_since(t0), kBudget9, detail);
}

}  // namespace

int main() {
    const Run jmp = make_run(1.4);
    const Run sob = make_run(1.1);
    criterion1(jmp);
    criterion2();
    criterion3();
    criterion4();
    criterion5(jmp, sob);
    criterion6(sob, jmp);
    criterion7(sob);
    criterion8();
    criterion9(jmp, sob);
    std::printf("%s: %d failing line(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
