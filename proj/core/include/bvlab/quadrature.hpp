#pragma once

#include <functional>
#include <vector>

namespace bvlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Globally adaptive Gauss-Kronrod 7/15 on [a, b]: the panel with the largest
// error estimate is bisected until the total error meets rel_tol or the
// rounding floor.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-13, unsigned max_panels = 4000);

// Integral over the segment from c to e with t = c + (e - c) s^gamma, which
// clusters nodes at c and removes integrable power singularities there.
QuadResult integrate_graded(const std::function<double(double)>& f, double c, double e,
                            double gamma, double rel_tol = 1e-13, unsigned max_panels = 4000);

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;  // weights summing to 2
};

// Gauss-Legendre rule with n in {2, 3, 4, 5, 6, 8, 10}.
const GaussRule& gauss_legendre(int n);

}  // namespace bvlab
