#include "fsv/charfn.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {

const cplx kI(0.0, 1.0);

double pochhammer_step(double start, int k) { return start + double(k); }

// sum_{k>=1} (-c)_k x^k / (k! k); primitive of ((1-x)^c - 1)/x
cplx tail_power_series(double c, cplx x) {
    cplx sum = 0.0, xp = 1.0;
    double poch = 1.0, fact = 1.0;
    for (int k = 1; k < 900; ++k) {
        poch *= pochhammer_step(-c, k - 1);
        fact *= double(k);
        xp *= x;
        cplx term = poch * xp / (fact * double(k));
        sum += term;
        if (std::abs(term) <= 1e-16 * std::max(1.0, std::abs(sum))) return sum;
    }
    throw NonConvergence("type3 tail: power series stalled");
}

void require_half_plane(cplx z, const char* what) {
    if (!(z.real() > 0.0)) throw OutsideStrip(std::string("type3 closed form: ") + what +
                                              " left the analyticity half-plane");
}

double seg_min_dist_to_origin(cplx a, cplx b) {
    cplx d = b - a;
    double dd = std::norm(d);
    if (dd == 0.0) return std::abs(a);
    double t = -(a.real() * d.real() + a.imag() * d.imag()) / dd;
    t = std::min(1.0, std::max(0.0, t));
    return std::abs(a + t * d);
}

struct Type3Ctx {
    double kappa, d, vstar;
    const FsvModel* model;
};

} // namespace

FsvModel::FsvModel(BaseProcess base_, KernelSpec kernel_, double a0_, double m_, double rho_)
    : base(std::move(base_)), kernel(kernel_), a0(a0_), m(m_), rho(rho_),
      mom{}, comp{} {
    validate(base);
    if (!(a0 > 0.0)) throw Error("FsvModel: A0 must be positive");
    if (!(m >= 0.0)) throw Error("FsvModel: m must be nonnegative");
    if (!std::isfinite(rho)) throw Error("FsvModel: rho must be finite");
    mom = moments(base);
    comp = log_compensators(base, rho); // throws OutsideStrip when strips reject -i / -i rho
    if (!(mom.varx1 > 1e-12)) throw Error("FsvModel: Var[X1] must exceed 1e-12");
}

CfContext CfContext::spot(double s0, double t) {
    if (!(s0 > 0.0) || !(t > 0.0)) throw Error("CfContext: need positive spot and horizon");
    return {0.0, t, std::log(s0), 0.0};
}

CfContext CfContext::at(double t0, double t, double s_t0, double vs) {
    if (!(t > t0) || t0 < 0.0) throw Error("CfContext: need 0 <= t0 < t");
    if (!(s_t0 > 0.0)) throw Error("CfContext: need positive spot");
    if (vs < 0.0) throw Error("CfContext: variance swap value must be nonnegative");
    return {t0, t, std::log(s_t0), vs};
}

PhiHelpers helpers(const FsvModel& model, cplx u) {
    PhiHelpers h;
    cplx lpx = log_phi_x1(model.base, u);
    h.phi = kI * lpx + u * model.comp.log_phi_x_mi;
    h.phi1 = y_rate(model.base) - kI * model.rho * u;
    const double d = model.kernel.d, kappa = model.kernel.kappa;
    h.phi2 = kI * h.phi / std::tgamma(d + 1.0);
    if (model.kernel.family == KernelFamily::Exponential) {
        // d -> 1 limits: H flattens at 1/kappa with e-folding kappa
        h.phi3 = h.phi1 + kI * h.phi / kappa;
        h.phi4 = kI * h.phi / kappa;
        return h;
    }
    double hinf = std::pow((1.0 - d) / kappa, d) / ((1.0 - d) * std::tgamma(d + 1.0));
    h.phi3 = h.phi1 + hinf * kI * h.phi;
    h.phi4 = hinf * kI * h.phi * d * std::exp(1.0 - d);
    return h;
}

cplx s_integral_numeric(const FsvModel& model, double tau, cplx u, const QuadConfig& cfg) {
    if (tau < 0.0) throw Error("s_integral: negative horizon");
    if (tau == 0.0) return 0.0;
    cplx lpx = log_phi_x1(model.base, u);
    cplx ph = kI * lpx + u * model.comp.log_phi_x_mi;
    if (std::abs(ph) < 1e-14 * (1.0 + std::abs(u)))
        return tau * log_phi_y1(model.base, model.rho * u);
    auto f = [&](double v) {
        return log_phi_y1(model.base, model.rho * u - eval_H(model.kernel, v) * ph);
    };
    if (model.kernel.family == KernelFamily::TypeIII && tau > model.kernel.breakpoint()) {
        double bp = model.kernel.breakpoint();
        return integrate_finite(f, 0.0, bp, cfg) + integrate_finite(f, bp, tau, cfg);
    }
    return integrate_finite(f, 0.0, tau, cfg);
}

namespace detail {

cplx type3_head(const FsvModel& model, const PhiHelpers& h, double sp) {
    if (sp == 0.0) return 0.0;
    const double d = model.kernel.d;
    cplx end = h.phi1 + std::pow(sp, d) * h.phi2;
    require_half_plane(h.phi1, "phi1");
    require_half_plane(end, "phi1 + s^d phi2");
    cplx z = -std::pow(sp, d) * h.phi2 / h.phi1;

    if (std::holds_alternative<AljdParams>(model.base)) {
        const auto& p = std::get<AljdParams>(model.base);
        cplx f = gauss_2f1(1.0, 1.0 / d, 1.0 / d + 1.0, z);
        return p.lambda_y * (sp * (p.b_y / h.phi1) * f - sp);
    }
    const auto& p = std::get<GmrtsParams>(model.base);
    if (p.c_y == 0.0) {
        cplx f = gauss_2f1(1.0, 1.0 / d, 1.0 / d + 1.0, z);
        return p.a_y * (sp * std::log(p.b_y) - sp * (std::log(end) + d * (f - 1.0)));
    }
    cplx f = gauss_2f1(-p.c_y, 1.0 / d, 1.0 / d + 1.0, z);
    return p.a_y * std::tgamma(-p.c_y) *
           (sp * std::pow(h.phi1, p.c_y) * f - sp * std::pow(p.b_y, p.c_y));
}

cplx type3_tail(const FsvModel& model, const PhiHelpers& h, double tau) {
    const double kappa = model.kernel.kappa;
    const double vstar = model.kernel.breakpoint();
    if (tau <= vstar) return 0.0;
    require_half_plane(h.phi3, "phi3");
    require_half_plane(h.phi3 - std::exp(-kappa * vstar) * h.phi4, "phi3 - e^{-k v*} phi4");
    require_half_plane(h.phi3 - std::exp(-kappa * tau) * h.phi4, "phi3 - e^{-k tau} phi4");
    const double dv = tau - vstar;

    if (std::holds_alternative<AljdParams>(model.base)) {
        const auto& p = std::get<AljdParams>(model.base);
        cplx a1 = std::exp(kappa * vstar) * h.phi3 - h.phi4;
        cplx a2 = std::exp(kappa * tau) * h.phi3 - h.phi4;
        double scale = std::max(std::abs(a1), std::abs(a2));
        if (seg_min_dist_to_origin(a1, a2) < 1e-12 * scale)
            throw BranchCut("type3 closed form: log argument path through the pole");
        // straight-line path, so the principal log of the ratio is the
        // continuous increment
        return p.lambda_y * ((p.b_y / (kappa * h.phi3)) * std::log(a2 / a1) - dv);
    }

    const auto& p = std::get<GmrtsParams>(model.base);
    cplx x1 = std::exp(-kappa * vstar) * h.phi4 / h.phi3;
    cplx x2 = std::exp(-kappa * tau) * h.phi4 / h.phi3;

    if (p.c_y == 0.0) {
        cplx li = dilog(x2) - dilog(x1); // fixed-phase ray; dilog throws on its cut
        cplx integral = dv * std::log(h.phi3) + li / kappa;
        return p.a_y * (dv * std::log(p.b_y) - integral);
    }

    // int_{v*}^{tau} (phi3 - e^{-kappa v} phi4)^{c_y} dv
    cplx series_part = 0.0;
    double v_lo = vstar; // start of the series-friendly region
    if (std::abs(x1) > 0.92) {
        // bridge the |x| ~ 1 annulus numerically along the ray
        double v_a = std::min(tau, vstar + std::log(std::abs(x1) / 0.92) / kappa);
        QuadConfig bridge_cfg;
        bridge_cfg.rel_tol = 1e-12;
        cplx bridged = integrate_finite(
            [&](double v) { return std::pow(h.phi3 - std::exp(-kappa * v) * h.phi4, p.c_y); }, vstar,
            v_a, bridge_cfg);
        series_part += bridged;
        v_lo = v_a;
    }
    if (v_lo < tau) {
        cplx xa = std::exp(-kappa * v_lo) * h.phi4 / h.phi3;
        series_part += std::pow(h.phi3, p.c_y) / kappa *
                       (kappa * (tau - v_lo) + tail_power_series(p.c_y, xa) - tail_power_series(p.c_y, x2));
    }
    return p.a_y * std::tgamma(-p.c_y) * (series_part - dv * std::pow(p.b_y, p.c_y));
}

} // namespace detail

cplx s_integral_closed_type3(const FsvModel& model, double tau, cplx u) {
    if (model.kernel.family != KernelFamily::TypeIII)
        throw Error("s_integral_closed_type3: kernel must be type III");
    if (tau < 0.0) throw Error("s_integral: negative horizon");
    if (tau == 0.0) return 0.0;
    PhiHelpers h = helpers(model, u);
    if (std::abs(h.phi) < 1e-14 * (1.0 + std::abs(u)))
        return tau * log_phi_y1(model.base, model.rho * u);
    const double vstar = model.kernel.breakpoint();
    if (tau < vstar) return detail::type3_head(model, h, tau);
    return detail::type3_head(model, h, vstar) + detail::type3_tail(model, h, tau);
}

namespace {

cplx cf_exponent(const FsvModel& model, const CfContext& ctx, cplx u, double business_leg,
                 const QuadConfig& cfg, SRoute route) {
    double tau = ctx.t - ctx.t0;
    if (!(tau > 0.0)) throw Error("conditional_cf: need t > t0");
    bool closed;
    switch (route) {
        case SRoute::ClosedForm:
            if (model.kernel.family != KernelFamily::TypeIII)
                throw Error("conditional_cf: closed-form route requires the type-III kernel");
            closed = true;
            break;
        case SRoute::Numeric: closed = false; break;
        default: closed = model.kernel.family == KernelFamily::TypeIII;
    }
    cplx sint = closed ? s_integral_closed_type3(model, tau, u) : s_integral_numeric(model, tau, u, cfg);
    cplx lpx = log_phi_x1(model.base, u);
    return kI * u * (ctx.log_s_t0 - tau * model.comp.log_phi_y_mirho) + sint +
           (lpx - kI * u * model.comp.log_phi_x_mi) * business_leg;
}

} // namespace

double deterministic_business_time(const FsvModel& model, double t0, double t) {
    const double kappa = model.kernel.kappa;
    return (model.a0 - model.m) * (std::exp(-kappa * t0) - std::exp(-kappa * t)) / kappa +
           model.m * (t - t0);
}

double model_variance_swap(const FsvModel& model, double t) {
    if (t < 0.0) throw Error("model_variance_swap: negative horizon");
    if (t == 0.0) return 0.0;
    double b = deterministic_business_time(model, 0.0, t);
    return (b + eval_J(model.kernel, t) * model.mom.ey1) * model.mom.varx1 +
           model.rho * model.rho * t * model.mom.vary1;
}

cplx conditional_cf(const FsvModel& model, const CfContext& ctx, cplx u, const QuadConfig& cfg,
                    SRoute route) {
    if (ctx.t0 > 0.0) return conditional_cf_vs_form(model, ctx, u, cfg, route);
    double leg = deterministic_business_time(model, 0.0, ctx.t);
    return std::exp(cf_exponent(model, ctx, u, leg, cfg, route));
}

cplx conditional_cf_vs_form(const FsvModel& model, const CfContext& ctx, cplx u,
                            const QuadConfig& cfg, SRoute route) {
    double tau = ctx.t - ctx.t0;
    double leg = (ctx.vs - model.rho * model.rho * tau * model.mom.vary1) / model.mom.varx1 -
                 eval_J(model.kernel, tau) * model.mom.ey1;
    return std::exp(cf_exponent(model, ctx, u, leg, cfg, route));
}

} // namespace fsv
