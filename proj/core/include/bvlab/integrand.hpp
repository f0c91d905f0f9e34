#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bvlab {

// Radial profile f with f'' = ((mu-1)/mu) min(1, |z|^-mu), f(0) = f'(0) = 0.
class MuEllipticProfile {
public:
    explicit MuEllipticProfile(double mu);

    double mu() const { return mu_; }

    double f(double z) const;
    double fprime(double z) const;
    double fsecond(double z) const;
    // Inverse of f'. Throws DomainError unless |y| < 1.
    double g(double y) const;
    double recession(double z) const;

    // 1 - f'(z) for z >= 0, computed without cancellation near f' = 1.
    double fprime_gap(double z) const;
    // g(1 - gap) for gap in (0, 2), accurate when gap is tiny.
    double g_from_gap(double gap) const;
    // Legendre conjugate f*(y) = y g(y) - f(g(y)) for |y| < 1.
    double conjugate(double y) const;

private:
    double mu_;
    double lin_;   // (mu-1)/mu
    double p_;     // 1/(1-mu)
};

// Recession limit of a generic even profile: secant slopes of t -> f(t z)
// between consecutive scales, followed by one Aitken step.
double recession_extrapolated(const std::function<double(double)>& f, double z,
                              const std::vector<double>& scales = {1e3, 1e4, 1e5, 1e6});

// w(x) = 1 + |x|^alpha on [a, b].
class HoelderWeight {
public:
    HoelderWeight(double alpha, double a = -1.0, double b = 1.0);

    double alpha() const { return alpha_; }
    double a() const { return a_; }
    double b() const { return b_; }
    // Minimizer of w on [a, b] and the minimum value.
    double c() const { return c_; }
    double m() const { return m_; }
    double max_value() const;

    double operator()(double x) const { return 1.0 + std::pow(std::abs(x), alpha_); }
    // w(x) - m, exact relative precision when c = 0.
    double excess(double x) const;
    // Exact integral of w over [x0, x1].
    double integral(double x0, double x1) const;

private:
    double alpha_, a_, b_, c_, m_;
};

class NonAutonomousIntegrand {
public:
    NonAutonomousIntegrand(MuEllipticProfile profile, HoelderWeight weight)
        : profile_(profile), weight_(weight) {}

    const MuEllipticProfile& profile() const { return profile_; }
    const HoelderWeight& weight() const { return weight_; }

    double F(double x, double z) const { return weight_(x) * profile_.f(z); }
    double DzF(double x, double z) const { return weight_(x) * profile_.fprime(z); }
    double DzzF(double x, double z) const { return weight_(x) * profile_.fsecond(z); }

private:
    MuEllipticProfile profile_;
    HoelderWeight weight_;
};

// Deterministic log-spaced magnitudes (mirrored when symmetric) plus a
// seeded random refinement drawn log-uniformly.
struct SampleSpec {
    double lo = 1e-3;
    double hi = 1e3;
    int log_count = 200;
    int random_count = 50;
    bool symmetric = true;
    bool include_zero = true;
    std::uint64_t seed = 20240611;

    std::vector<double> magnitudes() const;
};

// Uniform nodes on [a, b] plus seeded uniform random points.
struct PointSpec {
    int uniform_count = 41;
    int random_count = 20;
    std::uint64_t seed = 20240611;

    std::vector<double> points(double a, double b) const;
};

struct Witness {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double slack = 0.0;  // rhs - lhs of the tested inequality; negative means violated
};

struct HypothesisReport {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double lambda = 0.0;
    double hoelder_C = 1.0;
    double hoelder_C_empirical = 0.0;
    bool h1_pass = false, h2_pass = false, h3_pass = false;
    Witness h1_worst, h2_worst, h3_worst;
    std::uint64_t z_seed = 0, x_seed = 0;
    std::size_t samples = 0;

    bool all_pass() const { return h1_pass && h2_pass && h3_pass; }
};

struct HypothesisOptions {
    std::optional<double> claimed_lambda;
    std::optional<double> claimed_hoelder_C;
    double rel_slack = 1e-12;
};

HypothesisReport verify_hypotheses(const NonAutonomousIntegrand& F, const SampleSpec& z_samples,
                                   const PointSpec& x_samples, const HypothesisOptions& opts = {});

}  // namespace bvlab
