#include "fsv/quadrature.hpp"
#include "fsv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fsv {

namespace {

// Gauss-Legendre 15-point rule on [-1, 1]
const std::array<double, 15> kGlNodes = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601700,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};

const std::array<double, 15> kGlWeights = {
    0.03075324199611727, 0.07036604748810812, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939,  0.1861610000155622,  0.1984314853271116, 0.2025782419255613,
    0.1984314853271116,  0.1861610000155622,  0.1662692058169939, 0.1395706779261543,
    0.1071592204671719,  0.07036604748810812, 0.03075324199611727};

// Minimal vector-space shim so the same panel engine serves double, complex
// and shared-node multi integrands.
struct VecVal {
    std::vector<double> v;
    VecVal() = default;
    explicit VecVal(std::size_t n) : v(n, 0.0) {}
    VecVal& operator+=(const VecVal& o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    VecVal operator+(const VecVal& o) const {
        VecVal r = *this;
        r += o;
        return r;
    }
    VecVal operator-(const VecVal& o) const {
        VecVal r = *this;
        for (std::size_t i = 0; i < v.size(); ++i) r.v[i] -= o.v[i];
        return r;
    }
};

double norm_of(double x) { return std::abs(x); }
double norm_of(const cplx& x) { return std::abs(x); }
double norm_of(const VecVal& x) {
    double m = 0.0;
    for (double c : x.v) m = std::max(m, std::abs(c));
    return m;
}

template <class T, class F>
T gl15(const F& f, double a, double b) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    T acc = f(m + h * kGlNodes[0]);
    acc = kGlWeights[0] * h * acc;
    for (int i = 1; i < 15; ++i) {
        T fi = f(m + h * kGlNodes[i]);
        fi = (kGlWeights[i] * h) * fi;
        acc += fi;
    }
    return acc;
}

VecVal operator*(double s, VecVal x) {
    for (double& c : x.v) c *= s;
    return x;
}

template <class T, class F>
struct PanelEngine {
    const F& f;
    const QuadConfig& cfg;
    int panels = 0;
    double err_acc = 0.0;
    double scale = 0.0; // running magnitude for relative-tolerance decisions

    T integrate(double a, double b) {
        T whole = eval(a, b);
        return refine(a, b, whole, 0);
    }

    T eval(double a, double b) {
        if (++panels > cfg.max_panels) throw PanelBudgetExceeded("quadrature: panel budget exhausted");
        return gl15<T>(f, a, b);
    }

    T refine(double a, double b, const T& whole, int depth) {
        double m = 0.5 * (a + b);
        T left = eval(a, m), right = eval(m, b);
        T fine = left + right;
        double err = norm_of(fine - whole);
        double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::max(norm_of(fine), scale));
        if (err <= 0.5 * tol || depth >= 48) {
            err_acc += err / 15.0; // Richardson-style estimate for the accepted panel
            return fine;
        }
        T l = refine(a, m, left, depth + 1);
        T r = refine(m, b, right, depth + 1);
        return l + r;
    }
};

template <class T, class F>
T run_semi_infinite(const F& f, const QuadConfig& cfg, QuadStats* stats, const T& zero) {
    PanelEngine<T, F> engine{f, cfg};
    T total = zero;
    double x = 0.0, w = 0.5;
    int small_streak = 0;
    bool decayed = false;
    while (x < cfg.u_max_cap) {
        double hi = std::min(x + w, cfg.u_max_cap);
        T whole = engine.eval(x, hi);
        T seg = engine.refine(x, hi, whole, 0);
        total += seg;
        engine.scale = std::max(engine.scale, norm_of(total));
        x = hi;
        w *= 1.5;
        if (norm_of(seg) < std::max(cfg.abs_tol, 1e-3 * cfg.rel_tol * norm_of(total))) {
            if (++small_streak >= 3) {
                decayed = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    if (!decayed) throw NoDecay("quadrature: integrand envelope did not decay before u_max_cap");
    if (stats) {
        stats->abs_err_est = engine.err_acc;
        stats->truncated_at = x;
        stats->panels = engine.panels;
    }
    return total;
}

template <class T, class F>
T run_finite(const F& f, double a, double b, const QuadConfig& cfg, QuadStats* stats, const T& zero) {
    if (!(a <= b)) throw Error("quadrature: inverted interval");
    if (a == b) return zero;
    PanelEngine<T, F> engine{f, cfg};
    T whole = engine.eval(a, b);
    engine.scale = norm_of(whole);
    T total = engine.refine(a, b, whole, 0);
    if (stats) {
        stats->abs_err_est = engine.err_acc;
        stats->truncated_at = b;
        stats->panels = engine.panels;
    }
    return total;
}

} // namespace

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadConfig& cfg,
                               QuadStats* stats) {
    return run_semi_infinite<double>(f, cfg, stats, 0.0);
}

std::vector<double> integrate_semi_infinite_multi(const std::function<void(double, double*)>& f, int m,
                                                  const QuadConfig& cfg, QuadStats* stats) {
    auto wrapped = [&](double x) {
        VecVal r(static_cast<std::size_t>(m));
        f(x, r.v.data());
        return r;
    };
    VecVal total = run_semi_infinite<VecVal>(wrapped, cfg, stats, VecVal(static_cast<std::size_t>(m)));
    return total.v;
}

cplx integrate_finite(const std::function<cplx(double)>& f, double a, double b, const QuadConfig& cfg,
                      QuadStats* stats) {
    return run_finite<cplx>(f, a, b, cfg, stats, cplx(0.0));
}

double integrate_finite_real(const std::function<double(double)>& f, double a, double b,
                             const QuadConfig& cfg, QuadStats* stats) {
    return run_finite<double>(f, a, b, cfg, stats, 0.0);
}

} // namespace fsv
