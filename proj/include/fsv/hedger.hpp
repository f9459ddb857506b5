#pragma once

#include "fsv/pricer.hpp"

namespace fsv {

/// Caller-supplied jump sizes for the jump-response terms (pre-jump state is
/// the one carried by MarketState).
struct JumpScenario {
    double dx = 0.0; // jump of X at the business time
    double dy = 0.0; // jump of Y
};

struct HedgeReport {
    double theta_term = 0.0; // time-decay drift of the option value
    double delta = 0.0;      // d/dS
    double gamma = 0.0;      // d^2/dS^2
    double vs_vega = 0.0;    // d/dV_S
    double jump_option = 0.0;
    double jump_spot = 0.0;
    double jump_vs = 0.0;
};

/// Hedge ratios of a Quanto inverse-power (or inverse-power) call at time
/// s = state.t0 < maturity. All four integrals share one u-quadrature; the
/// jump responses are filled when a scenario is supplied.
HedgeReport greeks(const FsvModel& model, const MarketState& state, const OptionContract& contract,
                   const PricerConfig& cfg = {}, const JumpScenario* scenario = nullptr);

/// The single-variance-swap hedge ratio equals the variance-swap vega.
double single_swap_hedge(const FsvModel& model, const MarketState& state,
                         const OptionContract& contract, const PricerConfig& cfg = {});

} // namespace fsv
