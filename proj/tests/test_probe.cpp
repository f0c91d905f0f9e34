#include <gtest/gtest.h>

#include <cmath>

#include "bvlab/errors.hpp"
#include "bvlab/oracle.hpp"
#include "bvlab/probe.hpp"

using namespace bvlab;

namespace {

std::vector<ViscosityState> linear_states(const Grid1D& g, double M) {
    std::vector<ViscosityState> out;
    for (int k : {1, 2, 4, 8}) {
        ViscosityState s{k, 1.0, 1.0 / (2.0 * k * k), BVFunction1D::affine(g, 0.0, M)};
        s.cell_slopes = s.u_k.slopes();
        out.push_back(std::move(s));
    }
    return out;
}

CellField step_field(const Grid1D& g, double J) {
    std::vector<double> v(g.cells());
    for (int i = 0; i < g.cells(); ++i) v[i] = g.midpoint(i) > 0.0 ? J : 0.0;
    return {g, v};
}

}  // namespace

TEST(Thresholds, FigureParameters) {
    const auto t = thresholds(1.4, 0.25, 1);
    EXPECT_NEAR(t.p_max, 1.6 / 1.75, 1e-15);
    EXPECT_NEAR(t.dim_bound, 0.875, 1e-15);
    EXPECT_NEAR(t.mu_dim_max, 3.0 / 2.75, 1e-15);
    EXPECT_NEAR(t.mu_sobolev_max, 1.25, 1e-15);
    EXPECT_TRUE(t.kappa_empty);
    EXPECT_TRUE(t.vacuous);
    EXPECT_EQ(t.autonomous_dim_bound, 0.0);
}

TEST(Thresholds, SobolevRegime) {
    const auto t = thresholds(1.1, 0.25, 1);
    EXPECT_NEAR(t.p_max, 1.9 / 1.75, 1e-15);
    EXPECT_FALSE(t.kappa_empty);
    EXPECT_NEAR(t.kappa_lo, 1.05, 1e-15);
    EXPECT_NEAR(t.kappa_hi, 1.125, 1e-15);
    EXPECT_NEAR(t.mu_dim_max, 3.0 / 2.75, 1e-15);
    EXPECT_FALSE(t.vacuous);
}

TEST(Thresholds, LimitAtMuOne) {
    for (int n : {1, 2, 5}) {
        for (double a : {0.1, 0.5, 0.9}) {
            const auto t = thresholds(1.0 + 1e-12, a, n);
            EXPECT_NEAR(t.p_max, 2.0 * n / (2.0 * n - a), 1e-11);
            EXPECT_GT(t.p_max, 1.0);
        }
    }
    EXPECT_THROW(thresholds(1.0, 0.5, 1), DomainError);
    EXPECT_THROW(thresholds(1.5, 1.0, 1), DomainError);
    EXPECT_THROW(thresholds(1.5, 0.5, 0), DomainError);
}

TEST(ThresholdsProperty, DimensionBoundBelowSobolevBound) {
    for (int i = 0; i < 20; ++i) {
        const double a = 0.025 + 0.95 * i / 19.0;
        for (int n = 1; n <= 20; ++n) {
            const auto t = thresholds(1.01, a, n);
            EXPECT_LT(t.mu_dim_max, t.mu_sobolev_max) << a << ' ' << n;
        }
    }
}

TEST(ThresholdsProperty, KappaIntervalNonemptyIffMuBelowSobolevBound) {
    for (double a : {0.1, 0.25, 0.5, 0.9}) {
        for (int n : {1, 2, 3}) {
            for (double mu = 1.005; mu < 1.6; mu += 0.01) {
                const auto t = thresholds(mu, a, n);
                EXPECT_EQ(!t.kappa_empty, mu < 1.0 + a / n) << mu << ' ' << a << ' ' << n;
            }
        }
    }
}

TEST(VKappa, Examples) {
    EXPECT_EQ(v_kappa(0.0, 1.5), 0.0);
    EXPECT_NEAR(v_kappa(1.0, 1.5), std::pow(2.0, -0.25), 1e-15);
    EXPECT_NEAR(v_kappa(1e6, 1.5), 1e3, 10.0);
    EXPECT_NEAR(v_kappa(-1e6, 1.5), -1e3, 10.0);
    for (double x : {0.1, 1.0, 10.0, 1e4}) EXPECT_LE(std::abs(v_kappa(x, 1.3)), x);
    EXPECT_THROW(v_kappa(1.0, 1.0), DomainError);
    EXPECT_THROW(v_kappa(1.0, 2.0), DomainError);
    const auto v = v_kappa(std::vector<double>{0.0, 1.0}, 1.5);
    EXPECT_EQ(v.size(), 2u);
}

TEST(Nikolskii, ConstantFieldVanishes) {
    const Grid1D g(-1.0, 1.0, 1 << 10);
    const CellField f{g, std::vector<double>(g.cells(), 3.0)};
    const Interval K{-0.5, 0.5};
    const auto r = nikolskii_seminorm(f, 0.5, K, default_h_range(g, K));
    for (const auto& [h, v] : r.per_h) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(r.sup, 0.0);
}

TEST(Nikolskii, StepField) {
    const Grid1D g(-1.0, 1.0, 1 << 12);
    const double J = 2.5;
    const Interval K{-0.5, 0.5};
    const auto hs = default_h_range(g, K);
    ASSERT_FALSE(hs.empty());
    EXPECT_EQ(hs.front(), 4.0 * g.dx());
    EXPECT_LE(hs.back(), 0.25);
    const auto r = nikolskii_seminorm(step_field(g, J), 0.5, K, hs);
    for (const auto& [h, v] : r.per_h) EXPECT_NEAR(v, J * std::sqrt(h), 1e-12);
    EXPECT_NEAR(r.sup, J * std::sqrt(hs.back()), 1e-12);
}

TEST(Nikolskii, OracleSlopeProfileStableUnderRefinement) {
    std::vector<double> sups;
    for (int e : {10, 12, 14}) {
        const Grid1D g(-1.0, 1.0, 1 << e);
        const auto s = solve_jump_branch(1.4, 0.25, g, 20.0);
        const Interval K{-0.5, 0.5};
        const auto r = nikolskii_seminorm({g, s.minimizer.slopes()}, 0.125, K, default_h_range(g, K));
        EXPECT_TRUE(std::isfinite(r.sup));
        sups.push_back(r.sup);
    }
    for (std::size_t i = 1; i < sups.size(); ++i) EXPECT_LE(std::abs(sups[i] / sups[i - 1] - 1.0), 0.05);
}

TEST(NikolskiiProperty, LinearInFieldAndFiniteForLipschitz) {
    const Grid1D g(-1.0, 1.0, 1 << 10);
    std::vector<double> v(g.cells());
    for (int i = 0; i < g.cells(); ++i) v[i] = std::sin(3.0 * g.midpoint(i));
    std::vector<double> w(v);
    for (double& x : w) x *= 7.0;
    const Interval K{-0.5, 0.5};
    for (double theta : {0.1, 0.5, 0.9}) {
        const auto a = nikolskii_seminorm({g, v}, theta, K, default_h_range(g, K));
        const auto b = nikolskii_seminorm({g, w}, theta, K, default_h_range(g, K));
        EXPECT_TRUE(std::isfinite(a.sup));
        EXPECT_NEAR(b.sup, 7.0 * a.sup, 1e-12 * b.sup);
    }
}

TEST(Nikolskii, RejectsTranslationsBeyondTheWindow) {
    const Grid1D g(-1.0, 1.0, 64);
    EXPECT_THROW(nikolskii_seminorm(step_field(g, 1.0), 0.5, {-0.5, 0.5}, {0.75}), DomainError);
    EXPECT_THROW(nikolskii_seminorm(step_field(g, 1.0), 0.5, {-0.5, 0.5}, {0.3 * g.dx()}), DomainError);
}

TEST(WeightedFractional, ConstantFieldVanishes) {
    const std::vector<double> d(100, 4.0);
    EXPECT_EQ(weighted_fractional(d, d, 0.01, 1.05, 1.1, 0.25, 0.04), 0.0);
}

TEST(WeightedFractional, SharpeningCellStaysBounded) {
    const double J = 1.0, h = 1.0 / 16.0;
    const Interval K{-0.5, 0.5};
    std::vector<double> vals;
    for (int e = 8; e <= 14; ++e) {
        const Grid1D g(-1.0, 1.0, 1 << e);
        std::vector<double> d(g.cells(), 0.0);
        d[g.cells() / 2] = J / g.dx();
        vals.push_back(weighted_fractional({g, d}, 1.5, 1.4, 0.25, h, K));
    }
    for (double v : vals) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_LE(v, vals.front() * 1.01);
    }
}

TEST(JumpDetect, LinearFunctionIsNoJump) {
    const Grid1D g(-1.0, 1.0, 1 << 10);
    const double M = 20.0;
    const auto r = jump_detect(linear_states(g, M));
    EXPECT_TRUE(r.no_jump);
    EXPECT_EQ(r.size, 0.0);
    // J(k, eps) = u(eps) - u(-eps) = 2 eps M / (b - a)
    for (const auto& row : r.table) {
        for (std::size_t j = 0; j < row.size(); ++j) EXPECT_NEAR(row[j], 2.0 * r.eps[j] * M / 2.0, 1e-12);
    }
    EXPECT_NEAR(r.extrapolated.back(), 0.0, 1e-12);
}

TEST(JumpDetect, NeedsThreeStates) {
    const Grid1D g(-1.0, 1.0, 64);
    auto s = linear_states(g, 1.0);
    s.erase(s.begin() + 2, s.end());
    EXPECT_THROW(jump_detect(s), DomainError);
}

TEST(LpSweep, LinearFunction) {
    const Grid1D g(-1.0, 1.0, 1 << 8);
    const auto sw = lp_sweep(linear_states(g, 6.0), {1.0, 2.0}, {-1.0, 1.0});
    ASSERT_EQ(sw.ks.size(), 4u);
    for (std::size_t i = 0; i < sw.ks.size(); ++i) {
        EXPECT_NEAR(sw.norms[i][0], 6.0, 1e-12);
        EXPECT_NEAR(sw.norms[i][1], 3.0 * std::sqrt(2.0), 1e-12);
        EXPECT_NEAR(sw.integral(i, 1), 18.0, 1e-11);
        EXPECT_NEAR(sw.ratios[i][0], 1.0, 1e-14);
    }
}

TEST(JumpDetectProperty, ConvergesUnderGridRefinement) {
    const NonAutonomousIntegrand F(MuEllipticProfile(1.4), HoelderWeight(0.25));
    const double target = 20.0 - compute_M0(1.4, 0.25).value;
    std::vector<double> errs;
    for (int e : {10, 11, 12, 13}) {
        ViscosityConfig cfg;
        cfg.grid = Grid1D(-1.0, 1.0, 1 << e);
        cfg.verify_with_newton = false;
        const auto r = jump_detect(run_sequence(F, cfg));
        EXPECT_FALSE(r.no_jump);
        EXPECT_LE(std::abs(r.location), cfg.grid.dx());
        errs.push_back(std::abs(r.size - target));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_LT(errs[i], errs[i - 1]) << i;
}
