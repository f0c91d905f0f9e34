#include "bvlab/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bvlab/errors.hpp"

namespace bvlab {

namespace {

FluxSample sample_at(const SlopeSampling& S, std::size_t j) { return {S.w()[j], S.excess()[j]}; }

// Thomas algorithm for a symmetric tridiagonal system; off[i] couples i and i+1.
std::vector<double> solve_tridiagonal(std::vector<double> diag, const std::vector<double>& off,
                                      std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double f = off[i - 1] / diag[i - 1];
        diag[i] -= f * off[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
    return x;
}

std::vector<double> nodes_from_slopes(const Grid1D& g, const std::vector<double>& d, double y1) {
    std::vector<double> u(g.nodes());
    NeumaierSum acc;
    acc.add(y1);
    u[0] = y1;
    for (int i = 0; i < g.cells(); ++i) {
        acc.add(d[i] * g.dx());
        u[i + 1] = acc.value();
    }
    return u;
}

}  // namespace

double regularized_energy(const NonAutonomousIntegrand& F, double eps, const BVFunction1D& u, CellWeightRule rule) {
    if (!u.atom_free()) throw DomainError("regularized_energy: u must be atom-free");
    const auto& g = u.grid();
    NeumaierSum s;
    for (int i = 0; i < g.cells(); ++i) {
        const double d = u.slope(i);
        s.add((cell_weight(F.weight(), g, i, rule) * F.profile().f(d) + eps * (1.0 + d * d)) * g.dx());
    }
    return s.value();
}

std::vector<double> regularized_energy_gradient(const NonAutonomousIntegrand& F, double eps,
                                                const BVFunction1D& u, CellWeightRule rule) {
    const auto& g = u.grid();
    std::vector<double> q(g.cells());
    for (int i = 0; i < g.cells(); ++i) {
        const double d = u.slope(i);
        q[i] = cell_weight(F.weight(), g, i, rule) * F.profile().fprime(d) + 2.0 * eps * d;
    }
    std::vector<double> grad(g.cells() - 1);
    for (int j = 1; j < g.cells(); ++j) grad[j - 1] = q[j - 1] - q[j];
    return grad;
}

CellSolution solve_cell(const SlopeSampling& S, int cell, double eps, double d, double gamma_guess,
                        std::vector<double>& v) {
    const auto& prof = S.integrand().profile();
    const double m = S.m();
    const std::size_t b = S.begin(cell), e = S.end(cell);
    const double dx = S.grid().dx();
    const auto& om = S.omega();

    auto finish = [&](CellSolution cs) {
        NeumaierSum en;
        double D = 0.0;
        for (std::size_t j = b; j < e; ++j) {
            const auto s = sample_at(S, j);
            en.add(om[j] * (s.w * prof.f(v[j]) + eps * (1.0 + v[j] * v[j])));
            D += om[j] / flux_derivative(prof, s, eps, v[j]);
        }
        cs.energy = en.value();
        cs.D = D;
        return cs;
    };

    if (d < 0.0) {
        for (std::size_t j = b; j < e; ++j) v[j] = -v[j];
        CellSolution cs = solve_cell(S, cell, eps, -d, -gamma_guess - 2.0 * m, v);
        for (std::size_t j = b; j < e; ++j) v[j] = -v[j];
        cs.gamma = -cs.gamma - 2.0 * m;
        return cs;
    }
    if (d == 0.0) {
        for (std::size_t j = b; j < e; ++j) v[j] = 0.0;
        return finish({-m, 0.0, 0.0});
    }

    double glo = std::numeric_limits<double>::infinity();
    double ghi = -glo;
    double gmean = 0.0;
    for (std::size_t j = b; j < e; ++j) {
        const double gj = flux_gamma(prof, sample_at(S, j), m, eps, d);
        glo = std::min(glo, gj);
        ghi = std::max(ghi, gj);
        gmean += om[j] * gj;
    }
    gmean /= dx;
    double gam = (gamma_guess > glo && gamma_guess < ghi) ? gamma_guess : std::clamp(gmean, glo, ghi);
    if (glo == ghi) gam = glo;

    for (int it = 0; it < 300; ++it) {
        NeumaierSum mass;
        double D = 0.0;
        for (std::size_t j = b; j < e; ++j) {
            const auto s = sample_at(S, j);
            v[j] = flux_inverse(prof, s, m, eps, gam, v[j]);
            mass.add(om[j] * v[j]);
            D += om[j] / flux_derivative(prof, s, eps, v[j]);
        }
        const double r = mass.value() / dx - d;
        if (std::abs(r) <= 2e-15 * d || glo == ghi) break;
        if (r > 0.0) ghi = gam;
        else glo = gam;
        double gn = gam - r * dx / D;
        if (!(gn > glo && gn < ghi)) gn = 0.5 * (glo + ghi);
        if (gn == gam || gn == glo || gn == ghi) break;
        gam = gn;
        if (it == 299) throw NewtonDivergence("solve_cell: no convergence in cell " + std::to_string(cell));
    }
    return finish({gam, 0.0, 0.0});
}

std::vector<double> cell_flux_gammas(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes) {
    std::vector<double> v(S.size(), 0.0), gam(S.grid().cells());
    for (int i = 0; i < S.grid().cells(); ++i) gam[i] = solve_cell(S, i, eps, cell_slopes[i], 0.0, v).gamma;
    return gam;
}

double reduced_energy(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes) {
    std::vector<double> v(S.size(), 0.0);
    NeumaierSum s;
    for (int i = 0; i < S.grid().cells(); ++i) s.add(solve_cell(S, i, eps, cell_slopes[i], 0.0, v).energy);
    return s.value();
}

std::vector<double> reduced_energy_gradient(const SlopeSampling& S, double eps,
                                            const std::vector<double>& cell_slopes) {
    const auto gam = cell_flux_gammas(S, eps, cell_slopes);
    std::vector<double> grad(gam.size() - 1);
    for (std::size_t j = 1; j < gam.size(); ++j) grad[j - 1] = gam[j - 1] - gam[j];
    return grad;
}

ShootingResult solve_shooting(const SlopeSampling& S, double eps, const BoundaryData& bc,
                              const ShootingOptions& opts, const ShootingResult* warm) {
    if (!(eps > 0.0)) throw BracketError("solve_shooting: eps must be positive");
    const auto& prof = S.integrand().profile();
    const double m = S.m();
    const auto& om = S.omega();
    const double target = bc.y2 - bc.y1;
    const double tol = opts.tol * (1.0 + std::abs(target));

    ShootingResult res{BVFunction1D::affine(S.grid(), bc.y1, bc.y2)};
    std::vector<double> v(S.size(), 0.0);
    if (warm && warm->sample_slopes.size() == S.size()) v = warm->sample_slopes;

    double dmass = 0.0;
    auto Phi = [&](double gam, std::vector<double>& vv) {
        NeumaierSum mass;
        double D = 0.0;
        for (std::size_t j = 0; j < S.size(); ++j) {
            const auto s = sample_at(S, j);
            vv[j] = flux_inverse(prof, s, m, eps, gam, vv[j]);
            mass.add(om[j] * vv[j]);
            D += om[j] / flux_derivative(prof, s, eps, vv[j]);
        }
        dmass = D;
        return mass.value();
    };

    double gam = -m;
    if (target == 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
    } else {
        std::vector<double> scratch(S.size(), 0.0);
        double Clo = -(2.0 * m + 1.0), Chi = 2.0 * m + 1.0;
        int doublings = 0;
        while (true) {
            const double flo = Phi(Clo - m, scratch);
            const double fhi = Phi(Chi - m, scratch);
            if (flo <= target && fhi >= target) break;
            if (++doublings > 60) throw BracketError("solve_shooting: bracket doubling exceeded 2^60");
            if (flo > target) Clo *= 2.0;
            if (fhi < target) Chi *= 2.0;
        }
        double glo = Clo - m, ghi = Chi - m;
        gam = (warm && warm->gamma > glo && warm->gamma < ghi) ? warm->gamma : std::clamp(0.0, glo, ghi);
        double prev_r = std::numeric_limits<double>::infinity();
        int it = 0;
        for (;; ++it) {
            if (it >= opts.max_iter) throw NewtonDivergence("solve_shooting: flux iteration did not converge");
            const double r = Phi(gam, v) - target;
            res.mass_residual = std::abs(r);
            if (std::abs(r) <= tol) break;
            if (r > 0.0) ghi = gam;
            else glo = gam;
            double gn = gam - r / dmass;
            const bool stalled = std::abs(r) > 0.5 * prev_r;
            if (!(gn > glo && gn < ghi) || (stalled && it % 3 == 2)) gn = 0.5 * (glo + ghi);
            if (gn == gam || gn <= glo || gn >= ghi) {
                // Bracket exhausted at double resolution.
                gn = 0.5 * (glo + ghi);
                if (gn == glo || gn == ghi) break;
            }
            prev_r = std::abs(r);
            gam = gn;
        }
        res.iterations = it;
    }

    res.gamma = gam;
    res.flux_C = m + gam;
    res.sample_slopes = std::move(v);
    res.cell_slopes = S.cell_averages(res.sample_slopes);
    res.u = BVFunction1D(S.grid(), S.integrate_nodes(res.sample_slopes, bc.y1));
    return res;
}

ShootingResult solve_shooting(const NonAutonomousIntegrand& F, double eps, const Grid1D& grid,
                              const BoundaryData& bc) {
    SlopeSampling S(F, grid);
    return solve_shooting(S, eps, bc);
}

NewtonResult solve_newton(const SlopeSampling& S, double eps, const BoundaryData& bc, const BVFunction1D& init,
                          const NewtonOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("solve_newton: eps must be positive");
    if (!init.atom_free()) throw DomainError("solve_newton: init must be atom-free");
    const auto& g = S.grid();
    const int n = g.cells();
    const double scale = 1.0 + std::max(std::abs(bc.y1), std::abs(bc.y2));
    if (std::abs(init.trace_a() - bc.y1) > 1e-10 * scale || std::abs(init.trace_b() - bc.y2) > 1e-10 * scale) {
        throw DomainError("solve_newton: init traces do not match the boundary data");
    }

    std::vector<double> d = init.slopes();
    std::vector<double> v(S.size(), 0.0), gam(n, 0.0), D(n, 0.0);

    auto evaluate = [&](const std::vector<double>& dd, std::vector<double>& vv, std::vector<double>& gg,
                        std::vector<double>& DD) {
        NeumaierSum E;
        for (int i = 0; i < n; ++i) {
            const auto cs = solve_cell(S, i, eps, dd[i], gg[i], vv);
            gg[i] = cs.gamma;
            DD[i] = cs.D;
            E.add(cs.energy);
        }
        return E.value();
    };
    auto residual_of = [&](const std::vector<double>& gg) {
        double r = 0.0;
        for (int j = 1; j < n; ++j) r = std::max(r, std::abs(gg[j - 1] - gg[j]));
        return r;
    };

    for (int i = 0; i < n; ++i) gam[i] = -S.m();
    double E = evaluate(d, v, gam, D);
    double res = residual_of(gam);

    NewtonResult out{init};
    int it = 0;
    int polish = 0;
    while (true) {
        if (res <= opts.tol) {
            if (polish >= opts.polish_iter || res == 0.0) break;
        }
        if (it >= opts.max_iter) {
            throw NewtonDivergence("solve_newton: max_iter reached, residual " + std::to_string(res),
                                   nodes_from_slopes(g, d, bc.y1));
        }
        if (n == 1) break;
        std::vector<double> diag(n - 1), off(n - 2 > 0 ? n - 2 : 0), rhs(n - 1);
        for (int j = 1; j < n; ++j) {
            diag[j - 1] = 1.0 / D[j - 1] + 1.0 / D[j];
            rhs[j - 1] = -(gam[j - 1] - gam[j]);
            if (j < n - 1) off[j - 1] = -1.0 / D[j];
        }
        const auto s = solve_tridiagonal(diag, off, rhs);
        std::vector<double> step(n);
        double slope = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sl = i == 0 ? 0.0 : s[i - 1];
            const double sr = i == n - 1 ? 0.0 : s[i];
            step[i] = (sr - sl) / g.dx();
        }
        for (int j = 0; j < n - 1; ++j) slope += -rhs[j] * s[j];

        double t = 1.0;
        bool accepted = false;
        std::vector<double> dn(n), vn, gn, Dn(n);
        double En = 0.0, resn = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < n; ++i) dn[i] = d[i] + t * step[i];
            vn = v;
            gn = gam;
            En = evaluate(dn, vn, gn, Dn);
            resn = residual_of(gn);
            const double noise = 1e-14 * (1.0 + std::abs(E));
            if (En <= E + 1e-4 * t * slope || (std::abs(En - E) <= noise && resn < res)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        ++it;
        if (!accepted) {
            if (res <= opts.tol) break;
            throw NewtonDivergence("solve_newton: line search failed, residual " + std::to_string(res),
                                   nodes_from_slopes(g, d, bc.y1));
        }
        if (res <= opts.tol) {
            ++polish;
            if (!(resn < 0.5 * res)) {
                if (resn < res) {
                    d.swap(dn); v.swap(vn); gam.swap(gn); D.swap(Dn);
                    E = En;
                    res = resn;
                }
                break;
            }
        }
        d.swap(dn);
        v.swap(vn);
        gam.swap(gn);
        D.swap(Dn);
        E = En;
        res = resn;
    }

    out.u = BVFunction1D(g, nodes_from_slopes(g, d, bc.y1));
    out.cell_slopes = d;
    out.cell_gamma = gam;
    out.iterations = it;
    out.residual = res;
    return out;
}

NewtonResult solve_newton(const NonAutonomousIntegrand& F, double eps, const Grid1D& grid,
                          const BoundaryData& bc, const BVFunction1D& init) {
    SlopeSampling S(F, grid);
    return solve_newton(S, eps, bc, init);
}

double el_residual(const SlopeSampling& S, double eps, const std::vector<double>& cell_slopes,
                   const TestBank& bank) {
    const auto& g = S.grid();
    const int n = g.cells();
    const auto gam = cell_flux_gammas(S, eps, cell_slopes);
    double mean = 0.0;
    for (double x : gam) mean += x;
    mean /= n;
    double worst = 0.0;
    if (bank.hats) {
        const double norm = 2.0 + g.dx();
        for (int j = 1; j < n; ++j) worst = std::max(worst, std::abs(gam[j - 1] - gam[j]) / norm);
    }
    const double L = g.b() - g.a();
    for (int k = 1; k <= bank.sinusoids; ++k) {
        NeumaierSum s;
        for (int i = 0; i < n; ++i) {
            const double p0 = std::sin(k * std::numbers::pi * (g.node(i) - g.a()) / L);
            const double p1 = std::sin(k * std::numbers::pi * (g.node(i + 1) - g.a()) / L);
            s.add((gam[i] - mean) * (p1 - p0));
        }
        const double norm = 2.0 * L / std::numbers::pi + 2.0 * k;
        worst = std::max(worst, std::abs(s.value()) / norm);
    }
    return worst;
}

double el_residual(const SlopeSampling& S, double eps, const BVFunction1D& u, const TestBank& bank) {
    return el_residual(S, eps, u.slopes(), bank);
}

std::vector<int> ViscosityConfig::schedule() const {
    if (!k_schedule.empty()) return k_schedule;
    std::vector<int> s;
    for (int k = 1; k <= k_max; k *= 2) s.push_back(k);
    if (s.back() != k_max) s.push_back(k_max);
    return s;
}

void ViscosityConfig::validate() const {
    if (k_max < 1) throw ConfigError("k_max", "must be >= 1");
    const auto s = schedule();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 1) throw ConfigError("k_schedule", "entries must be >= 1");
        if (i > 0 && s[i] <= s[i - 1]) throw ConfigError("k_schedule", "must be strictly increasing");
    }
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol", "must be positive");
    if (!(shooting_tol > 0.0)) throw ConfigError("shooting_tol", "must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter", "must be >= 1");
    for (double p : lp_exponents) {
        if (!(p >= 1.0)) throw ConfigError("lp_exponents", "entries must be >= 1");
    }
}

double dirichlet_integral(const SlopeSampling& S, const std::vector<double>& v) {
    NeumaierSum s;
    for (std::size_t j = 0; j < S.size(); ++j) s.add(S.omega()[j] * v[j] * v[j]);
    return s.value();
}

EnergyBreakdown sampled_energy(const SlopeSampling& S, const std::vector<double>& v, const BVFunction1D& u,
                               const BoundaryData& bc) {
    const auto& prof = S.integrand().profile();
    const auto& wt = S.integrand().weight();
    NeumaierSum s;
    for (std::size_t j = 0; j < S.size(); ++j) s.add(S.omega()[j] * S.w()[j] * prof.f(v[j]));
    EnergyBreakdown e;
    e.ac_part = s.value();
    e.boundary_part = wt(wt.a()) * std::abs(u.trace_a() - bc.y1) + wt(wt.b()) * std::abs(u.trace_b() - bc.y2);
    e.total = e.ac_part + e.jump_part + e.boundary_part;
    return e;
}

std::vector<ViscosityState> run_sequence(const NonAutonomousIntegrand& F, const ViscosityConfig& cfg) {
    cfg.validate();
    const auto& g = cfg.grid;
    auto S = std::make_shared<const SlopeSampling>(F, g, cfg.sampling);
    const double L = g.b() - g.a();
    const double s_aff = (cfg.bc.y2 - cfg.bc.y1) / L;
    double A = 1.0 + L * (1.0 + s_aff * s_aff);

    std::vector<ViscosityState> states;
    const ShootingResult* warm = nullptr;
    ShootingResult last{BVFunction1D::affine(g, cfg.bc.y1, cfg.bc.y2)};
    for (int k : cfg.schedule()) {
        try {
            ViscosityState st{k, A, 1.0 / (2.0 * double(k) * double(k) * A), last.u};
            if (!states.empty() && !(st.eps_k < states.back().eps_k)) {
                throw SolverError(k, "eps_k is not strictly decreasing");
            }
            ShootingOptions sopt;
            sopt.tol = cfg.shooting_tol;
            last = solve_shooting(*S, st.eps_k, cfg.bc, sopt, warm);
            warm = &last;

            st.u_k = last.u;
            st.flux_C = last.flux_C;
            st.cell_slopes = last.cell_slopes;
            st.sample_slopes = last.sample_slopes;
            st.sampling = S;

            auto& rep = st.report;
            rep.shooting_iterations = last.iterations;
            rep.mass_residual = last.mass_residual;
            const auto gam = cell_flux_gammas(*S, st.eps_k, st.cell_slopes);
            double mean = 0.0;
            for (double x : gam) mean += x;
            mean /= static_cast<double>(gam.size());
            for (double x : gam) rep.flux_residual = std::max(rep.flux_residual, std::abs(x - mean));
            rep.el_residual = el_residual(*S, st.eps_k, st.cell_slopes);
            rep.energy = sampled_energy(*S, st.sample_slopes, st.u_k, cfg.bc);
            const double dir = dirichlet_integral(*S, st.sample_slopes);
            rep.regularized_energy = rep.energy.ac_part + st.eps_k * (L + dir);
            for (double x : st.sample_slopes) rep.gradient_linf = std::max(rep.gradient_linf, std::abs(x));
            for (double p : cfg.lp_exponents) {
                rep.lp_norms[p] = sampled_lp_norm(*S, st.sample_slopes, p, {g.a(), g.b()});
            }

            if (cfg.verify_with_newton) {
                const BVFunction1D& init = states.empty() ? BVFunction1D::affine(g, cfg.bc.y1, cfg.bc.y2)
                                                          : states.back().u_k;
                NewtonOptions nopt;
                nopt.tol = cfg.newton_tol;
                nopt.max_iter = cfg.newton_max_iter;
                const auto nw = solve_newton(*S, st.eps_k, cfg.bc, init, nopt);
                double dist = 0.0;
                for (int i = 0; i < g.nodes(); ++i) {
                    dist = std::max(dist, std::abs(nw.u.values()[i] - st.u_k.values()[i]));
                }
                rep.newton_distance = dist;
                rep.newton_iterations = nw.iterations;
            }

            A = 1.0 + L + dir;
            states.push_back(std::move(st));
        } catch (const SolverError&) {
            throw;
        } catch (const Error& e) {
            throw SolverError(k, e.what());
        }
    }
    return states;
}

}  // namespace bvlab
