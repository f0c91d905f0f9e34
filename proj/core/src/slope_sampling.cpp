#include "bvlab/slope_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvlab/errors.hpp"
#include "bvlab/quadrature.hpp"

namespace bvlab {

SlopeSampling::SlopeSampling(const NonAutonomousIntegrand& F, const Grid1D& grid, SamplingOptions opts)
    : F_(F), grid_(grid), m_(F.weight().m()) {
    const auto& rule = gauss_legendre(opts.gauss_points);
    const auto& wt = F_.weight();
    const double c = wt.c();
    if (opts.grading_levels < 0) throw DomainError("grading_levels must be non-negative");

    auto add_segment = [&](double lo, double hi) {
        const double h = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            t_.push_back(mid + h * rule.x[q]);
            omega_.push_back(h * rule.w[q]);
        }
    };
    // Segments between c and c + L 2^-l, l = 0..levels, then [c, c + L 2^-levels].
    auto add_graded = [&](double end) {
        const double L = end - c;
        double outer = end;
        for (int l = 0; l < opts.grading_levels; ++l) {
            const double inner = c + std::ldexp(L, -(l + 1));
            add_segment(std::min(inner, outer), std::max(inner, outer));
            outer = inner;
        }
        add_segment(std::min(c, outer), std::max(c, outer));
    };

    offset_.push_back(0);
    for (int i = 0; i < grid_.cells(); ++i) {
        const double x0 = grid_.node(i), x1 = grid_.node(i + 1);
        if (c >= x0 && c <= x1) {
            if (c > x0) add_graded(x0);
            if (c < x1) add_graded(x1);
        } else {
            add_segment(x0, x1);
        }
        offset_.push_back(t_.size());
    }
    w_.resize(t_.size());
    e_.resize(t_.size());
    for (std::size_t j = 0; j < t_.size(); ++j) {
        w_[j] = wt(t_[j]);
        e_[j] = wt.excess(t_[j]);
    }
}

std::vector<double> SlopeSampling::cell_averages(const std::vector<double>& v) const {
    std::vector<double> d(grid_.cells());
    const double dx = grid_.dx();
    for (int i = 0; i < grid_.cells(); ++i) {
        NeumaierSum s;
        for (std::size_t j = begin(i); j < end(i); ++j) s.add(omega_[j] * v[j]);
        d[i] = s.value() / dx;
    }
    return d;
}

std::vector<double> SlopeSampling::integrate_nodes(const std::vector<double>& v, double y1) const {
    std::vector<double> u(grid_.nodes());
    NeumaierSum acc;
    acc.add(y1);
    u[0] = y1;
    for (int i = 0; i < grid_.cells(); ++i) {
        for (std::size_t j = begin(i); j < end(i); ++j) acc.add(omega_[j] * v[j]);
        u[i + 1] = acc.value();
    }
    return u;
}

double flux_gamma(const MuEllipticProfile& prof, const FluxSample& s, double m, double eps, double v) {
    if (v < 0.0) return -flux_gamma(prof, s, m, eps, -v) - 2.0 * m;
    return s.e - s.w * prof.fprime_gap(v) + 2.0 * eps * v;
}

double flux_inverse(const MuEllipticProfile& prof, const FluxSample& s, double m, double eps,
                    double gamma, double guess) {
    if (!(eps >= 0.0)) throw DomainError("flux_inverse: eps must be non-negative");
    if (gamma < -m) return -flux_inverse(prof, s, m, eps, -gamma - 2.0 * m, -guess);
    if (gamma == -m) return 0.0;
    const double q = m + gamma;

    // R(v) = h(v) - m - gamma with sign flipped; convex and decreasing on v >= 0.
    auto R = [&](double v) { return gamma - s.e + s.w * prof.fprime_gap(v) - 2.0 * eps * v; };

    const double inf = std::numeric_limits<double>::infinity();
    double hi = eps > 0.0 ? q / (2.0 * eps) : inf;
    double lo = 0.0;
    if (gamma < s.e) {
        const double g0 = prof.g_from_gap((s.e - gamma) / s.w);
        hi = std::min(hi, g0);
        if (eps > 0.0) {
            const double gap = (s.e - gamma + 2.0 * eps * g0) / s.w;
            if (gap > 0.0 && gap < 2.0 && gap < 1.0) lo = std::max(lo, prof.g_from_gap(gap));
        }
    } else {
        if (eps == 0.0) throw DomainError("flux_inverse: flux exceeds the range of w f'");
        lo = (gamma - s.e) / (2.0 * eps);
    }

    double v = lo;
    if (guess > lo && guess < hi) {
        const double r = R(guess);
        if (r >= 0.0) {
            v = guess;
        } else {
            // One Newton step from the right lands left of the root by convexity.
            const double v1 = guess + r / flux_derivative(prof, s, eps, guess);
            if (v1 > lo) v = v1;
        }
    }
    if (R(v) < 0.0) v = lo;

    for (int it = 0; it < 400; ++it) {
        const double r = R(v);
        if (r <= 0.0) return v;
        const double dv = r / flux_derivative(prof, s, eps, v);
        const double vn = std::min(v + dv, hi);
        if (vn - v <= 4e-16 * vn || vn == v) return vn;
        v = vn;
    }
    throw NewtonDivergence("flux_inverse: no convergence for gamma=" + std::to_string(gamma));
}

}  // namespace bvlab

namespace bvlab {

double sampled_lp_norm(const SlopeSampling& S, const std::vector<double>& v, double p, const Interval& K) {
    if (!(p >= 1.0)) throw DomainError("sampled_lp_norm: p must be >= 1");
    NeumaierSum s;
    const auto& t = S.t();
    const auto& om = S.omega();
    for (std::size_t j = 0; j < S.size(); ++j) {
        if (t[j] < K.lo || t[j] > K.hi) continue;
        s.add(om[j] * std::pow(std::abs(v[j]), p));
    }
    return std::pow(s.value(), 1.0 / p);
}

}  // namespace bvlab
