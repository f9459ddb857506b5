#include "fsv/hedger.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {
const cplx kI(0.0, 1.0);
}

HedgeReport greeks(const FsvModel& model, const MarketState& state, const OptionContract& c,
                   const PricerConfig& cfg, const JumpScenario* scenario) {
    c.validate();
    if (c.style == OptionStyle::DirectCall)
        throw Error("greeks: hedge decomposition targets the inverse-power styles");
    if (!(state.t0 < c.maturity)) throw Error("greeks: state time must precede maturity");

    const double s_now = state.spot;
    const double r_p1 = c.style == OptionStyle::InversePower ? 1.0 : std::pow(c.conversion_rate, c.p1);
    const double lk_scaled = c.p2 / c.p1 * std::log(c.strike);
    const double h_ts = eval_H(model.kernel, c.maturity - state.t0);
    const double var_x = model.mom.varx1, var_y = model.mom.vary1, ey1 = model.mom.ey1;
    const double rho = model.rho;
    const CfContext ctx = context_for(state, c.maturity);

    const JumpScenario jump = scenario ? *scenario : JumpScenario{};
    const bool want_jump = scenario != nullptr;

    auto integrand = [&](double u, double* out) {
        cplx cf = conditional_cf(model, ctx, u, cfg.quad);
        cplx ku = std::exp(cplx(0.0, -u * lk_scaled));
        cplx base = ku * cf;
        cplx denom_qip(-u * u, c.p1 * u); // i p1 u - u^2
        cplx denom_d(c.p1, u);            // i u + p1

        cplx lpx = log_phi_x1(model.base, u);
        cplx ph = kI * lpx + u * model.comp.log_phi_x_mi; // phi(u)
        cplx qv_mult = lpx - kI * u * model.comp.log_phi_x_mi; // = -i phi(u)
        cplx lpy = log_phi_y1(model.base, rho * u - h_ts * ph);

        // time-decay bracket from the conditional-CF drift
        cplx theta_fac = kI * u * model.comp.log_phi_y_mirho - lpy +
                         qv_mult * (rho * rho * var_y / var_x + h_ts * ey1);

        out[0] = (base * theta_fac / denom_qip).real();         // theta
        out[1] = (base / denom_d).real();                       // delta
        out[2] = ((kI * u - 1.0) * base / denom_d).real();      // gamma
        out[3] = (base * qv_mult / denom_qip).real();           // vs vega
        if (want_jump) {
            cplx shock = std::exp(kI * u * (jump.dx + rho * jump.dy) + qv_mult * h_ts * jump.dy) - 1.0;
            out[4] = (base * shock / denom_qip).real();
        } else {
            out[4] = 0.0;
        }
    };

    std::vector<double> vals = integrate_semi_infinite_multi(integrand, 5, cfg.quad);
    const double pref = c.p1 * r_p1 / M_PI;

    HedgeReport rep;
    rep.theta_term = pref * vals[0];
    rep.delta = pref / s_now * vals[1];
    rep.gamma = pref / (s_now * s_now) * vals[2];
    rep.vs_vega = pref / var_x * vals[3];
    if (want_jump) {
        rep.jump_option = pref * vals[4];
        rep.jump_spot = s_now * std::expm1(jump.dx + rho * jump.dy);
        rep.jump_vs = h_ts * jump.dy * var_x;
    }
    return rep;
}

double single_swap_hedge(const FsvModel& model, const MarketState& state, const OptionContract& c,
                         const PricerConfig& cfg) {
    return greeks(model, state, c, cfg).vs_vega;
}

} // namespace fsv
