#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "bvlab/bv_function.hpp"
#include "bvlab/integrand.hpp"

namespace bvlab {

struct SamplingOptions {
    int gauss_points = 4;
    // Dyadic levels of the graded rule inside the cells touching the weight minimizer.
    int grading_levels = 400;
};

// Quadrature of a slope field cell by cell. Ordinary cells carry a
// Gauss-Legendre rule; the cells touching the minimizer c of w carry a
// dyadically graded composite rule so that layers far below grid scale are
// resolved.
class SlopeSampling {
public:
    SlopeSampling(const NonAutonomousIntegrand& F, const Grid1D& grid, SamplingOptions opts = {});

    const NonAutonomousIntegrand& integrand() const { return F_; }
    const Grid1D& grid() const { return grid_; }
    std::size_t size() const { return t_.size(); }
    std::size_t begin(int cell) const { return offset_[cell]; }
    std::size_t end(int cell) const { return offset_[cell + 1]; }

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& omega() const { return omega_; }
    const std::vector<double>& w() const { return w_; }
    const std::vector<double>& excess() const { return e_; }
    double m() const { return m_; }

    // Cell averages of a sampled field.
    std::vector<double> cell_averages(const std::vector<double>& v) const;
    // Nodal values y1 + cumulative cell integrals of a sampled slope field.
    std::vector<double> integrate_nodes(const std::vector<double>& v, double y1) const;

private:
    NonAutonomousIntegrand F_;
    Grid1D grid_;
    double m_;
    std::vector<double> t_, omega_, w_, e_;
    std::vector<std::size_t> offset_;
};

// Flux of the regularized integrand, h(v) = w f'(v) + 2 eps v, written
// relative to m: gamma = h - m. All inversions work with gamma so that
// fluxes just above m keep full relative precision.
struct FluxSample {
    double w;  // weight value
    double e;  // w - m
};

double flux_gamma(const MuEllipticProfile& prof, const FluxSample& s, double m, double eps, double v);

// Solves h(v) = m + gamma for v. guess is a warm start (ignored if unusable).
double flux_inverse(const MuEllipticProfile& prof, const FluxSample& s, double m, double eps,
                    double gamma, double guess = 0.0);

// dh/dv at v.
inline double flux_derivative(const MuEllipticProfile& prof, const FluxSample& s, double eps, double v) {
    return s.w * prof.fsecond(v) + 2.0 * eps;
}

// Compensated summation.
class NeumaierSum {
public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x)) c_ += (s_ - t) + x;
        else c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

}  // namespace bvlab

namespace bvlab {

// (integral over K of |v|^p)^(1/p) for a sampled slope field; samples are
// attributed to K by location.
double sampled_lp_norm(const SlopeSampling& S, const std::vector<double>& v, double p, const Interval& K);

}  // namespace bvlab
