#include "bvlab/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bvlab/errors.hpp"

namespace bvlab {

MuEllipticProfile::MuEllipticProfile(double mu) : mu_(mu) {
    if (!(mu > 1.0 && mu < 2.0)) {
        throw DomainError("mu must lie in (1,2), got " + std::to_string(mu));
    }
    lin_ = (mu - 1.0) / mu;
    p_ = 1.0 / (1.0 - mu);
}

double MuEllipticProfile::f(double z) const {
    const double a = std::abs(z);
    if (a <= 1.0) return 0.5 * lin_ * a * a;
    return a - std::pow(a, 2.0 - mu_) / (mu_ * (2.0 - mu_)) + (mu_ - 1.0) / (2.0 * (2.0 - mu_));
}

double MuEllipticProfile::fprime(double z) const {
    const double a = std::abs(z);
    if (a <= 1.0) return lin_ * z;
    return std::copysign(1.0 - std::pow(a, 1.0 - mu_) / mu_, z);
}

double MuEllipticProfile::fsecond(double z) const {
    const double a = std::abs(z);
    if (a <= 1.0) return lin_;
    return lin_ * std::pow(a, -mu_);
}

double MuEllipticProfile::g(double y) const {
    if (!(std::abs(y) < 1.0)) {
        throw DomainError("g: argument must satisfy |y| < 1, got " + std::to_string(y));
    }
    if (std::abs(y) <= lin_) return y / lin_;
    return std::copysign(std::pow(mu_ * (1.0 - std::abs(y)), p_), y);
}

double MuEllipticProfile::recession(double z) const { return std::abs(z); }

double MuEllipticProfile::fprime_gap(double z) const {
    if (z <= 1.0) return 1.0 - lin_ * z;
    return std::pow(z, 1.0 - mu_) / mu_;
}

double MuEllipticProfile::g_from_gap(double gap) const {
    if (!(gap > 0.0 && gap < 2.0)) {
        throw DomainError("g_from_gap: gap must lie in (0,2), got " + std::to_string(gap));
    }
    if (gap >= 1.0 - lin_ && gap <= 1.0 + lin_) return (1.0 - gap) / lin_;
    if (gap < 1.0) return std::pow(mu_ * gap, p_);
    return -std::pow(mu_ * (2.0 - gap), p_);
}

double MuEllipticProfile::conjugate(double y) const {
    const double v = g(y);
    return y * v - f(v);
}

double recession_extrapolated(const std::function<double(double)>& f, double z,
                              const std::vector<double>& scales) {
    if (scales.size() < 4) throw DomainError("recession_extrapolated needs at least four scales");
    if (z == 0.0) return f(0.0);
    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        const double t0 = scales[i], t1 = scales[i + 1];
        s.push_back((f(t1 * z) - f(t0 * z)) / (t1 - t0));
    }
    const std::size_t n = s.size();
    const double d1 = s[n - 2] - s[n - 3];
    const double d2 = s[n - 1] - s[n - 2];
    const double den = d2 - d1;
    if (den == 0.0 || std::abs(den) < 1e-300) return s[n - 1];
    return s[n - 1] - d2 * d2 / den;
}

HoelderWeight::HoelderWeight(double alpha, double a, double b) : alpha_(alpha), a_(a), b_(b) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
    if (!(a < b)) throw DomainError("weight interval requires a < b");
    c_ = std::clamp(0.0, a, b);
    m_ = 1.0 + std::pow(std::abs(c_), alpha_);
}

double HoelderWeight::max_value() const { return std::max((*this)(a_), (*this)(b_)); }

double HoelderWeight::excess(double x) const {
    if (c_ == 0.0) return std::pow(std::abs(x), alpha_);
    return std::pow(std::abs(x), alpha_) - std::pow(std::abs(c_), alpha_);
}

double HoelderWeight::integral(double x0, double x1) const {
    const double e = alpha_ + 1.0;
    auto G = [e](double x) { return x + std::copysign(std::pow(std::abs(x), e) / e, x); };
    return G(x1) - G(x0);
}

std::vector<double> SampleSpec::magnitudes() const {
    std::vector<double> out;
    if (include_zero) out.push_back(0.0);
    const double l0 = std::log(lo), l1 = std::log(hi);
    auto push = [&](double v) {
        out.push_back(v);
        if (symmetric) out.push_back(-v);
    };
    for (int i = 0; i < log_count; ++i) {
        const double t = log_count == 1 ? 0.0 : static_cast<double>(i) / (log_count - 1);
        push(std::exp(l0 + t * (l1 - l0)));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(l0, l1);
    for (int i = 0; i < random_count; ++i) push(std::exp(u(rng)));
    return out;
}

std::vector<double> PointSpec::points(double a, double b) const {
    std::vector<double> out;
    for (int i = 0; i < uniform_count; ++i) {
        const double t = uniform_count == 1 ? 0.5 : static_cast<double>(i) / (uniform_count - 1);
        out.push_back(a + t * (b - a));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(a, b);
    for (int i = 0; i < random_count; ++i) out.push_back(u(rng));
    return out;
}

HypothesisReport verify_hypotheses(const NonAutonomousIntegrand& F, const SampleSpec& z_samples,
                                   const PointSpec& x_samples, const HypothesisOptions& opts) {
    const auto& prof = F.profile();
    const auto& w = F.weight();
    const double mu = prof.mu();
    const double m = w.m();

    HypothesisReport r;
    r.c0 = 0.5 * m;
    r.c2 = m * prof.conjugate(0.5);
    r.c1 = w.max_value();
    r.lambda = opts.claimed_lambda.value_or(m * (mu - 1.0) / mu);
    r.hoelder_C = opts.claimed_hoelder_C.value_or(1.0);
    r.z_seed = z_samples.seed;
    r.x_seed = x_samples.seed;

    const auto zs = z_samples.magnitudes();
    const auto xs = x_samples.points(w.a(), w.b());
    const double tol = opts.rel_slack;
    const double inf = std::numeric_limits<double>::infinity();
    r.h1_worst.slack = r.h2_worst.slack = r.h3_worst.slack = inf;
    r.h1_pass = r.h2_pass = r.h3_pass = true;

    for (double x : xs) {
        for (double z : zs) {
            ++r.samples;
            const double Fx = F.F(x, z);
            const double lower = r.c0 * std::abs(z) - r.c2;
            const double upper = r.c1 * (1.0 + std::abs(z));
            const double s1 = std::min(Fx - lower, upper - Fx);
            const double scale1 = tol * (1.0 + std::abs(Fx));
            if (s1 < r.h1_worst.slack) r.h1_worst = {x, 0.0, z, s1};
            if (s1 < -scale1) r.h1_pass = false;

            const double rhs = r.lambda * std::pow(1.0 + z * z, -0.5 * mu);
            const double lhs = F.DzzF(x, z);
            const double s2 = lhs - rhs;
            if (s2 < r.h2_worst.slack) r.h2_worst = {x, 0.0, z, s2};
            if (s2 < -tol * rhs) r.h2_pass = false;
        }
    }

    // The Hoelder quotient factorizes as |f'(z)| |w(x)-w(y)| / |x-y|^alpha.
    double fp_max = 0.0;
    double z_at = 0.0;
    for (double z : zs) {
        const double v = std::abs(prof.fprime(z));
        if (v > fp_max) {
            fp_max = v;
            z_at = z;
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (xs[i] == xs[j]) continue;
            const double q = std::abs(w(xs[i]) - w(xs[j])) / std::pow(std::abs(xs[i] - xs[j]), w.alpha());
            const double lhs = fp_max * q;
            r.hoelder_C_empirical = std::max(r.hoelder_C_empirical, lhs);
            const double s3 = r.hoelder_C - lhs;
            if (s3 < r.h3_worst.slack) r.h3_worst = {xs[i], xs[j], z_at, s3};
            if (s3 < -tol * (1.0 + r.hoelder_C)) r.h3_pass = false;
        }
    }
    return r;
}

}  // namespace bvlab
