#pragma once

#include "fsv/charfn.hpp"

#include <functional>
#include <vector>

namespace fsv {

enum class OptionStyle { DirectCall, InversePower, QuantoInversePower };

const char* to_string(OptionStyle s);

/// Contract terms. DirectCall fixes p1 = p2 = 1; the power styles require
/// p1 > 0. InversePower settles in crypto (conversion rate pinned at 1),
/// QuantoInversePower in USD at the predetermined rate R.
struct OptionContract {
    double strike = 0.0;   // USD
    double maturity = 0.0; // years
    double p1 = 1.0;
    double p2 = 1.0;
    double conversion_rate = 1.0; // R, USD
    OptionStyle style = OptionStyle::DirectCall;
    bool is_call = true;

    void validate() const;
};

/// Pricing state: t0 = 0 for spot pricing; t0 > 0 revaluation additionally
/// requires the live variance-swap value vs = V_S(t0, T).
struct MarketState {
    double t0 = 0.0;
    double spot = 0.0;
    double vs = 0.0;
};

struct PriceResult {
    double value = 0.0;
    double integral_abs_err_est = 0.0;
    double u_truncation = 0.0;
    bool clipped = false; // negative-within-tolerance snapped to zero
};

struct PricerConfig {
    QuadConfig quad;
    double discount_rate = 0.0; // flat continuously-compounded rate
};

/// Terminal payoff in the contract's settlement unit.
double payoff(const OptionContract& contract, double s_T);

using CharFn = std::function<cplx(cplx)>; // u -> phi_{log S_T | t0}(u)

// Characteristic-function pricing engines. The CF-generic entry points also
// serve the benchmark models (Black-Scholes, Heston) through the same
// integrals.
PriceResult price_call_parity_cf(const CharFn& phi, double s_t0, double strike,
                                 const PricerConfig& cfg, double horizon);
/// Strike ladder sharing every characteristic-function evaluation across the
/// common u-grid (the per-strike factors are cheap transcendentals).
std::vector<PriceResult> price_call_parity_ladder_cf(const CharFn& phi, double s_t0,
                                                     const std::vector<double>& strikes,
                                                     const PricerConfig& cfg, double horizon);
PriceResult price_call_bakshi_madan_cf(const CharFn& phi, double s_t0, double strike,
                                       const PricerConfig& cfg, double horizon);
PriceResult price_call_carr_madan_cf(const CharFn& phi, double strike, double alpha,
                                     const PricerConfig& cfg, double horizon);
PriceResult price_qip_call_cf(const CharFn& phi, const OptionContract& contract,
                              const PricerConfig& cfg, double horizon);

PriceResult price_call_parity(const FsvModel&, const MarketState&, const OptionContract&,
                              const PricerConfig& = {});
PriceResult price_call_bakshi_madan(const FsvModel&, const MarketState&, const OptionContract&,
                                    const PricerConfig& = {});
PriceResult price_call_carr_madan(const FsvModel&, const MarketState&, const OptionContract&,
                                  double alpha, const PricerConfig& = {});
PriceResult price_qip_call(const FsvModel&, const MarketState&, const OptionContract&,
                           const PricerConfig& = {});
PriceResult price_qip_put(const FsvModel&, const MarketState&, const OptionContract&,
                          const PricerConfig& = {});

/// E[S_T^{-p1} | t0] = phi_{log S_T|t0}(i p1). Throws MomentUnavailable when
/// the strip rejects i p1.
double inverse_power_forward(const FsvModel&, const MarketState&, double p1, double maturity,
                             const PricerConfig& = {});

struct PowerGridEntry {
    double p1, p2;
    double call_value, put_value;
};

/// Quanto inverse-power prices over a grid of power pairs (curves and
/// surfaces; emitted as CSV by the CLI).
std::vector<PowerGridEntry> power_grid(const FsvModel&, const MarketState&, double strike,
                                       double maturity, double conversion_rate,
                                       const std::vector<std::pair<double, double>>& powers,
                                       const PricerConfig& = {});

/// Equal-power range [lo, hi] with n points (p1 = p2).
std::vector<std::pair<double, double>> equal_power_range(double lo, double hi, int n);
/// Independent p1 x p2 mesh.
std::vector<std::pair<double, double>> power_mesh(double lo1, double hi1, int n1, double lo2,
                                                  double hi2, int n2);

CfContext context_for(const MarketState& state, double maturity);

} // namespace fsv
