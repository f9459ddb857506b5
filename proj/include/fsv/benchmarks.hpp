#pragma once

#include "fsv/pricer.hpp"

namespace fsv {

/// Heston benchmark parameters (forward-measure, zero rate):
/// kappa (mean-reversion speed), rho in [-1,1], sigma (vol-of-vol),
/// v0 (initial variance), m (long-run variance, always calibrated).
struct HestonParams {
    double kappa, rho, sigma, v0, m;
    void validate() const;
};

/// Log-CF of log S_t under Heston in the branch-stable formulation;
/// phi(-i) = S0 by construction.
cplx heston_log_cf(const HestonParams& p, double s0, double t, cplx u);

/// Lognormal benchmark: log-CF with total variance sigma^2 t.
cplx black_scholes_log_cf(double s0, double sigma, double t, cplx u);

/// Closed-form undiscounted Black-Scholes call (forward = spot).
double black_scholes_call(double s0, double strike, double sigma, double t);

PriceResult heston_call(const HestonParams& p, double s0, const OptionContract& c,
                        const PricerConfig& cfg = {});
PriceResult black_scholes_call_cf(double sigma, double s0, const OptionContract& c,
                                  const PricerConfig& cfg = {});

} // namespace fsv
