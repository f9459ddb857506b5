#include "fsv/pricer.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {

const cplx kI(0.0, 1.0);

double finalize_value(double raw, const QuadStats& stats, double discount, PriceResult& out) {
    double clip_tol = std::max(1e-10, 10.0 * stats.abs_err_est);
    if (raw < 0.0) {
        if (raw < -clip_tol)
            throw PricingFailed("price is negative beyond the integration tolerance");
        out.clipped = true;
        raw = 0.0;
    }
    out.value = raw * discount;
    out.integral_abs_err_est = stats.abs_err_est;
    out.u_truncation = stats.truncated_at;
    return out.value;
}

double discount_factor(const PricerConfig& cfg, double horizon) {
    return std::exp(-cfg.discount_rate * horizon);
}

cplx cf_probe(const CharFn& phi, cplx u, const char* what) {
    try {
        return phi(u);
    } catch (const OutsideStrip&) {
        throw MomentUnavailable(std::string(what) + ": strip rejects the required moment");
    }
}

} // namespace

const char* to_string(OptionStyle s) {
    switch (s) {
        case OptionStyle::DirectCall: return "direct";
        case OptionStyle::InversePower: return "inverse-power";
        case OptionStyle::QuantoInversePower: return "quanto-inverse-power";
    }
    return "?";
}

void OptionContract::validate() const {
    if (!(strike > 0.0)) throw Error("contract: strike must be positive");
    if (!(maturity > 0.0)) throw Error("contract: maturity must be positive");
    if (!(conversion_rate > 0.0)) throw Error("contract: conversion rate must be positive");
    if (style == OptionStyle::DirectCall) {
        if (p1 != 1.0 || p2 != 1.0) throw Error("contract: direct options fix p1 = p2 = 1");
    } else {
        if (!(p1 > 0.0)) throw Error("contract: power styles require p1 > 0");
        if (!(p2 >= 0.0)) throw Error("contract: p2 must be nonnegative");
    }
}

double payoff(const OptionContract& c, double s_T) {
    if (!(s_T > 0.0)) throw Error("payoff: terminal price must be positive");
    switch (c.style) {
        case OptionStyle::DirectCall: {
            double v = s_T - c.strike;
            return std::max(c.is_call ? v : -v, 0.0);
        }
        case OptionStyle::InversePower:
        case OptionStyle::QuantoInversePower: {
            double ratio = std::pow(c.strike, c.p2) / std::pow(s_T, c.p1);
            double v = c.is_call ? (1.0 - ratio) : (ratio - 1.0);
            double unit = c.style == OptionStyle::InversePower ? 1.0 : std::pow(c.conversion_rate, c.p1);
            return unit * std::max(v, 0.0);
        }
    }
    throw Error("payoff: bad style");
}

CfContext context_for(const MarketState& state, double maturity) {
    if (state.t0 == 0.0) return CfContext::spot(state.spot, maturity);
    return CfContext::at(state.t0, maturity, state.spot, state.vs);
}

PriceResult price_call_parity_cf(const CharFn& phi, double s_t0, double strike,
                                 const PricerConfig& cfg, double horizon) {
    return price_call_parity_ladder_cf(phi, s_t0, {strike}, cfg, horizon).front();
}

std::vector<PriceResult> price_call_parity_ladder_cf(const CharFn& phi, double s_t0,
                                                     const std::vector<double>& strikes,
                                                     const PricerConfig& cfg, double horizon) {
    const int m = int(strikes.size());
    if (m == 0) return {};
    std::vector<double> lks(strikes.size());
    for (std::size_t j = 0; j < strikes.size(); ++j) lks[j] = std::log(strikes[j]);
    QuadStats stats;
    std::vector<double> integrals = integrate_semi_infinite_multi(
        [&](double u, double* out) {
            cplx common = phi(u) / cplx(u * u, u);
            for (int j = 0; j < m; ++j)
                out[j] = (std::exp(cplx(0.0, -u * lks[std::size_t(j)])) * common).real();
        },
        m, cfg.quad, &stats);
    const double df = discount_factor(cfg, horizon);
    std::vector<PriceResult> results(strikes.size());
    for (std::size_t j = 0; j < strikes.size(); ++j) {
        double raw = s_t0 - strikes[j] * (0.5 + integrals[j] / M_PI);
        QuadStats s = stats;
        s.abs_err_est *= strikes[j] / M_PI;
        try {
            finalize_value(raw, s, df, results[j]);
        } catch (const PricingFailed& e) {
            throw PricingFailed(std::string(e.what()) + " (strike " + std::to_string(strikes[j]) +
                                ")");
        }
    }
    return results;
}

PriceResult price_call_bakshi_madan_cf(const CharFn& phi, double s_t0, double strike,
                                       const PricerConfig& cfg, double horizon) {
    const double lk = std::log(strike);
    cplx phi_mi = cf_probe(phi, cplx(0.0, -1.0), "bakshi-madan");
    QuadStats stats;
    // Pi1 and Pi2 integrands share every node
    std::vector<double> both = integrate_semi_infinite_multi(
        [&](double u, double* out) {
            cplx ku = std::exp(cplx(0.0, -u * lk));
            cplx iu(0.0, u);
            out[0] = (ku * phi(cplx(u, -1.0)) / (iu * phi_mi)).real();
            out[1] = (ku * phi(u) / iu).real();
        },
        2, cfg.quad, &stats);
    // in-the-money probabilities, both with the standard 1/2 constant
    double pi1 = 0.5 + both[0] / M_PI;
    double pi2 = 0.5 + both[1] / M_PI;
    double raw = s_t0 * pi1 - strike * pi2;
    stats.abs_err_est *= std::max(s_t0, strike) / M_PI;
    PriceResult out;
    finalize_value(raw, stats, discount_factor(cfg, horizon), out);
    return out;
}

PriceResult price_call_carr_madan_cf(const CharFn& phi, double strike, double alpha,
                                     const PricerConfig& cfg, double horizon) {
    if (!(alpha > 0.0)) throw Error("carr-madan: damping factor must be positive");
    cf_probe(phi, cplx(0.0, -(alpha + 1.0)), "carr-madan"); // E[S^{alpha+1}] finite?
    const double lk = std::log(strike);
    QuadStats stats;
    double integral = integrate_semi_infinite(
        [&](double u) {
            cplx denom(alpha * alpha + alpha - u * u, (2.0 * alpha + 1.0) * u);
            cplx val = std::exp(cplx(0.0, -u * lk)) * phi(cplx(u, -(alpha + 1.0))) / denom;
            return val.real();
        },
        cfg.quad, &stats);
    double raw = integral / (M_PI * std::pow(strike, alpha));
    stats.abs_err_est /= M_PI * std::pow(strike, alpha);
    PriceResult out;
    finalize_value(raw, stats, discount_factor(cfg, horizon), out);
    return out;
}

PriceResult price_qip_call_cf(const CharFn& phi, const OptionContract& c, const PricerConfig& cfg,
                              double horizon) {
    const double r_p1 = std::pow(c.conversion_rate, c.p1);
    const double lk_scaled = c.p2 / c.p1 * std::log(c.strike);
    QuadStats stats;
    double integral = integrate_semi_infinite(
        [&](double u) {
            cplx denom(-u * u, c.p1 * u);
            cplx val = std::exp(cplx(0.0, -u * lk_scaled)) * phi(u) / denom;
            return val.real();
        },
        cfg.quad, &stats);
    double raw = r_p1 * (0.5 + c.p1 / M_PI * integral);
    stats.abs_err_est *= r_p1 * c.p1 / M_PI;
    PriceResult out;
    finalize_value(raw, stats, discount_factor(cfg, horizon), out);
    return out;
}

namespace {

CharFn make_cf(const FsvModel& model, const MarketState& state, double maturity,
               const PricerConfig& cfg) {
    CfContext ctx = context_for(state, maturity);
    const QuadConfig quad = cfg.quad;
    return [&model, ctx, quad](cplx u) { return conditional_cf(model, ctx, u, quad); };
}

} // namespace

PriceResult price_call_parity(const FsvModel& model, const MarketState& state,
                              const OptionContract& c, const PricerConfig& cfg) {
    c.validate();
    if (c.style != OptionStyle::DirectCall) throw Error("parity pricer handles direct calls");
    return price_call_parity_cf(make_cf(model, state, c.maturity, cfg), state.spot, c.strike, cfg,
                                c.maturity - state.t0);
}

PriceResult price_call_bakshi_madan(const FsvModel& model, const MarketState& state,
                                    const OptionContract& c, const PricerConfig& cfg) {
    c.validate();
    if (c.style != OptionStyle::DirectCall) throw Error("bakshi-madan pricer handles direct calls");
    return price_call_bakshi_madan_cf(make_cf(model, state, c.maturity, cfg), state.spot, c.strike,
                                      cfg, c.maturity - state.t0);
}

PriceResult price_call_carr_madan(const FsvModel& model, const MarketState& state,
                                  const OptionContract& c, double alpha, const PricerConfig& cfg) {
    c.validate();
    if (c.style != OptionStyle::DirectCall) throw Error("carr-madan pricer handles direct calls");
    return price_call_carr_madan_cf(make_cf(model, state, c.maturity, cfg), c.strike, alpha, cfg,
                                    c.maturity - state.t0);
}

PriceResult price_qip_call(const FsvModel& model, const MarketState& state, const OptionContract& c,
                           const PricerConfig& cfg) {
    c.validate();
    if (c.style == OptionStyle::DirectCall) throw Error("qip pricer handles inverse-power styles");
    OptionContract eff = c;
    if (c.style == OptionStyle::InversePower) eff.conversion_rate = 1.0; // crypto units
    return price_qip_call_cf(make_cf(model, state, c.maturity, cfg), eff, cfg,
                             c.maturity - state.t0);
}

PriceResult price_qip_put(const FsvModel& model, const MarketState& state, const OptionContract& c,
                          const PricerConfig& cfg) {
    c.validate();
    if (c.style == OptionStyle::DirectCall) throw Error("qip pricer handles inverse-power styles");
    double r_p1 = c.style == OptionStyle::InversePower ? 1.0 : std::pow(c.conversion_rate, c.p1);
    PriceResult call = price_qip_call(model, state, c, cfg);
    double fwd = inverse_power_forward(model, state, c.p1, c.maturity, cfg);
    double df = std::exp(-cfg.discount_rate * (c.maturity - state.t0));
    double raw = call.value / df + r_p1 * (std::pow(c.strike, c.p2) * fwd - 1.0);
    PriceResult out;
    QuadStats stats;
    stats.abs_err_est = call.integral_abs_err_est;
    stats.truncated_at = call.u_truncation;
    finalize_value(raw, stats, df, out);
    return out;
}

double inverse_power_forward(const FsvModel& model, const MarketState& state, double p1,
                             double maturity, const PricerConfig& cfg) {
    if (p1 == 0.0) return 1.0;
    if (!(p1 > 0.0)) throw Error("inverse_power_forward: p1 must be nonnegative");
    CharFn phi = make_cf(model, state, maturity, cfg);
    cplx val = cf_probe(phi, cplx(0.0, p1), "inverse_power_forward");
    if (std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val)))
        throw Error("inverse_power_forward: expected a real moment");
    return val.real();
}

std::vector<std::pair<double, double>> equal_power_range(double lo, double hi, int n) {
    if (n < 1 || !(hi >= lo)) throw Error("equal_power_range: bad range");
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n; ++i) {
        double p = n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1);
        out.emplace_back(p, p);
    }
    return out;
}

std::vector<std::pair<double, double>> power_mesh(double lo1, double hi1, int n1, double lo2,
                                                  double hi2, int n2) {
    std::vector<std::pair<double, double>> out;
    auto p1s = equal_power_range(lo1, hi1, n1);
    auto p2s = equal_power_range(lo2, hi2, n2);
    for (const auto& a : p1s)
        for (const auto& b : p2s) out.emplace_back(a.first, b.first);
    return out;
}

std::vector<PowerGridEntry> power_grid(const FsvModel& model, const MarketState& state,
                                       double strike, double maturity, double conversion_rate,
                                       const std::vector<std::pair<double, double>>& powers,
                                       const PricerConfig& cfg) {
    std::vector<PowerGridEntry> grid;
    grid.reserve(powers.size());
    for (const auto& [p1, p2] : powers) {
        OptionContract c;
        c.strike = strike;
        c.maturity = maturity;
        c.p1 = p1;
        c.p2 = p2;
        c.conversion_rate = conversion_rate;
        c.style = OptionStyle::QuantoInversePower;
        PowerGridEntry e{p1, p2, 0.0, 0.0};
        e.call_value = price_qip_call(model, state, c, cfg).value;
        c.is_call = false;
        e.put_value = price_qip_put(model, state, c, cfg).value;
        grid.push_back(e);
    }
    return grid;
}

} // namespace fsv
