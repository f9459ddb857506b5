#include "fsv/benchmarks.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {
const cplx kI(0.0, 1.0);
}

void HestonParams::validate() const {
    if (!(kappa > 0.0 && sigma > 0.0 && v0 > 0.0 && m > 0.0))
        throw Error("heston: kappa, sigma, v0, m must be positive");
    if (!(rho >= -1.0 && rho <= 1.0)) throw Error("heston: rho must lie in [-1,1]");
}

cplx heston_log_cf(const HestonParams& p, double s0, double t, cplx u) {
    cplx beta = p.kappa - kI * p.rho * p.sigma * u;
    cplx dsq = beta * beta + p.sigma * p.sigma * (kI * u + u * u);
    cplx dd = std::sqrt(dsq);
    if (dd.real() < 0.0) dd = -dd;
    cplx g = (beta - dd) / (beta + dd);
    cplx edt = std::exp(-dd * t);
    cplx log_ratio = std::log((1.0 - g * edt) / (1.0 - g));
    cplx big_d = (beta - dd) / (p.sigma * p.sigma) * (1.0 - edt) / (1.0 - g * edt);
    cplx big_c = p.kappa * p.m / (p.sigma * p.sigma) * ((beta - dd) * t - 2.0 * log_ratio);
    return kI * u * std::log(s0) + big_c + big_d * p.v0;
}

cplx black_scholes_log_cf(double s0, double sigma, double t, cplx u) {
    double var = sigma * sigma * t;
    return kI * u * std::log(s0) - 0.5 * var * (u * u + kI * u);
}

double black_scholes_call(double s0, double strike, double sigma, double t) {
    double sd = sigma * std::sqrt(t);
    double d1 = std::log(s0 / strike) / sd + 0.5 * sd;
    double d2 = d1 - sd;
    auto ncdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    return s0 * ncdf(d1) - strike * ncdf(d2);
}

PriceResult heston_call(const HestonParams& p, double s0, const OptionContract& c,
                        const PricerConfig& cfg) {
    p.validate();
    c.validate();
    auto phi = [&](cplx u) { return std::exp(heston_log_cf(p, s0, c.maturity, u)); };
    return price_call_parity_cf(phi, s0, c.strike, cfg, c.maturity);
}

PriceResult black_scholes_call_cf(double sigma, double s0, const OptionContract& c,
                                  const PricerConfig& cfg) {
    if (!(sigma > 0.0)) throw Error("black-scholes: sigma must be positive");
    c.validate();
    auto phi = [&](cplx u) { return std::exp(black_scholes_log_cf(s0, sigma, c.maturity, u)); };
    return price_call_parity_cf(phi, s0, c.strike, cfg, c.maturity);
}

} // namespace fsv
