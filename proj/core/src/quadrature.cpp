#include "bvlab/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <mutex>

#include "bvlab/errors.hpp"

namespace bvlab {

namespace {

struct Panel {
    double a, b, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk_panel(const std::function<double(double)>& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    Panel p{a, b, 0.0, 0.0, 0.0};
    double err = 0.0, l1 = 0.0;
    p.value = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
    // the single-panel error comes back unscaled from the reference interval
    p.error = err * 0.5 * std::abs(b - a);
    p.l1 = l1;
    return p;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     unsigned max_panels) {
    QuadResult r;
    if (a == b) return r;
    std::priority_queue<Panel> heap;
    heap.push(gk_panel(f, a, b));
    double value = heap.top().value, error = heap.top().error, l1 = heap.top().l1;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (heap.size() < max_panels) {
        if (error <= std::max(rel_tol * std::abs(value), 50.0 * eps * l1)) break;
        const Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b))) break;
        heap.pop();
        const Panel lo = gk_panel(f, p.a, mid), hi = gk_panel(f, mid, p.b);
        value += lo.value + hi.value - p.value;
        error += lo.error + hi.error - p.error;
        l1 += lo.l1 + hi.l1 - p.l1;
        heap.push(lo);
        heap.push(hi);
    }
    // re-sum to shed the drift of the running updates
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    r.value = v;
    r.error = e;
    return r;
}

QuadResult integrate_graded(const std::function<double(double)>& f, double c, double e,
                            double gamma, double rel_tol, unsigned max_panels) {
    if (!(gamma >= 1.0)) throw DomainError("integrate_graded: gamma must be >= 1");
    const double L = e - c;
    auto h = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double sg1 = std::pow(s, gamma - 1.0);
        const double t = c + L * sg1 * s;
        return f(t) * L * gamma * sg1;
    };
    return integrate(h, 0.0, 1.0, rel_tol, max_panels);
}

namespace {

template <int N>
GaussRule make_rule() {
    using boost::math::quadrature::gauss;
    const auto& xa = gauss<double, N>::abscissa();
    const auto& wa = gauss<double, N>::weights();
    GaussRule r;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        if (xa[i] == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(wa[i]);
        } else {
            r.x.push_back(-xa[i]);
            r.w.push_back(wa[i]);
            r.x.push_back(xa[i]);
            r.w.push_back(wa[i]);
        }
    }
    // Sort nodes ascending, carrying weights along.
    std::vector<std::size_t> idx(r.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto p, auto q) { return r.x[p] < r.x[q]; });
    GaussRule s;
    for (auto i : idx) {
        s.x.push_back(r.x[i]);
        s.w.push_back(r.w[i]);
    }
    return s;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    switch (n) {
        case 2: r = make_rule<2>(); break;
        case 3: r = make_rule<3>(); break;
        case 4: r = make_rule<4>(); break;
        case 5: r = make_rule<5>(); break;
        case 6: r = make_rule<6>(); break;
        case 8: r = make_rule<8>(); break;
        case 10: r = make_rule<10>(); break;
        default: throw DomainError("gauss_legendre: unsupported order " + std::to_string(n));
    }
    return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace bvlab
