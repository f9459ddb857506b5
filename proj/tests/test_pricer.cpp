#include <doctest.h>

#include "fsv/errors.hpp"
#include "fsv/pricer.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fsv;
using doctest::Approx;

namespace {

FsvModel table1a_type3_model() {
    AljdParams p{0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291};
    return FsvModel(p, KernelSpec(KernelFamily::TypeIII, 9.70963, 0.54194), 0.24452, 0.1, 0.00641);
}

// wider analyticity strips (b_x eta = 13.0, b_x/eta = 4.5), so inverse-power
// forwards and damped transforms exist
FsvModel table2a_type3_model() {
    AljdParams p{1.0805, 3.29407, 7.65726, 1.70052, 4.1792, 6.91423};
    return FsvModel(p, KernelSpec(KernelFamily::TypeIII, 8.11425, 0.80968), 0.23813, 0.20937, 0.42038);
}

// lambda_x = lambda_y = 0, rho = 0, m = a0: lognormal with sigma = sigma_x sqrt(a0)
FsvModel bs_degenerate(double sigma_x, double a0) {
    AljdParams p{sigma_x, 0.0, 10.0, 1.0, 0.0, 3.0};
    return FsvModel(p, KernelSpec(KernelFamily::TypeIII, 5.0, 0.6), a0, a0, 0.0);
}

OptionContract direct_call(double k, double t) {
    OptionContract c;
    c.strike = k;
    c.maturity = t;
    return c;
}

OptionContract qip(double k, double t, double p1, double p2, double r, bool call = true) {
    OptionContract c;
    c.strike = k;
    c.maturity = t;
    c.p1 = p1;
    c.p2 = p2;
    c.conversion_rate = r;
    c.style = OptionStyle::QuantoInversePower;
    c.is_call = call;
    return c;
}

} // namespace

TEST_CASE("payoffs") {
    OptionContract c = direct_call(10000.0, 0.5);
    CHECK(payoff(c, 12000.0) == 2000.0);
    CHECK(payoff(c, 8000.0) == 0.0);

    OptionContract ip = qip(9000.0, 0.5, 1.2, 1.1, 2.0);
    ip.style = OptionStyle::InversePower;
    // at-the-money boundary s^p1 = K^p2
    double s_atm = std::pow(std::pow(9000.0, 1.1), 1.0 / 1.2);
    CHECK(payoff(ip, s_atm) == Approx(0.0).epsilon(1e-12));

    // K -> 0: quanto payoff is identically R^{p1}
    OptionContract q = qip(1e-12, 0.5, 1.2, 1.1, 2.0);
    CHECK(payoff(q, 7500.0) == Approx(std::pow(2.0, 1.2)).epsilon(1e-9));

    OptionContract bad = direct_call(-1.0, 0.5);
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("black-scholes degeneracy across all three direct formulas") {
    double sx = 0.75, a0 = 1.0, s0 = 9232.98;
    FsvModel m = bs_degenerate(sx, a0);
    double sigma = sx * std::sqrt(a0);
    MarketState state{0.0, s0, 0.0};
    PricerConfig cfg;
    cfg.quad.rel_tol = 1e-11;
    cfg.quad.abs_tol = 1e-13;
    for (double t : {19.0 / 365.0, 47.0 / 365.0, 166.0 / 365.0, 257.0 / 365.0}) {
        for (double mny : {0.7, 0.9, 1.0, 1.15, 1.3}) {
            OptionContract c = direct_call(mny * s0, t);
            double want = oracle::bs_call(s0, c.strike, sigma, t);
            CHECK(price_call_parity(m, state, c, cfg).value == Approx(want).epsilon(1e-6));
            CHECK(price_call_bakshi_madan(m, state, c, cfg).value == Approx(want).epsilon(1e-6));
            CHECK(price_call_carr_madan(m, state, c, 1.5, cfg).value == Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("deep in-the-money limit equals the spot") {
    FsvModel m = table1a_type3_model();
    MarketState state{0.0, 9232.98, 0.0};
    OptionContract c = direct_call(0.01, 47.0 / 365.0);
    // a vanishing strike pins the call at S0 - K
    CHECK(price_call_parity(m, state, c).value == Approx(9232.98 - 0.01).epsilon(1e-6));
}

TEST_CASE("cross-formula agreement on the table model") {
    FsvModel m = table1a_type3_model();
    MarketState state{0.0, 9232.98, 0.0};
    PricerConfig cfg;
    for (double k : {7000.0, 9000.0, 12000.0}) {
        OptionContract c = direct_call(k, 47.0 / 365.0);
        double a = price_call_parity(m, state, c, cfg).value;
        double b = price_call_bakshi_madan(m, state, c, cfg).value;
        // table-1a strips admit damping only below b_x eta - 1 = 1.075
        double cm = price_call_carr_madan(m, state, c, 0.75, cfg).value;
        CHECK(b == Approx(a).epsilon(1e-6));
        CHECK(cm == Approx(a).epsilon(1e-6));
    }
    // damping-factor invariance on the wide-strip model
    FsvModel m2 = table2a_type3_model();
    MarketState s2{0.0, 52108.0, 0.0};
    OptionContract c = direct_call(52000.0, 39.0 / 365.0);
    double v1 = price_call_carr_madan(m2, s2, c, 0.75, cfg).value;
    double v2 = price_call_carr_madan(m2, s2, c, 1.5, cfg).value;
    double v3 = price_call_carr_madan(m2, s2, c, 3.0, cfg).value;
    CHECK(v2 == Approx(v1).epsilon(1e-6));
    CHECK(v3 == Approx(v1).epsilon(1e-6));
}

TEST_CASE("cross-formula agreement on a random battery") {
    FsvModel m = table1a_type3_model();
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    MarketState state{0.0, 9232.98, 0.0};
    PricerConfig cfg;
    for (int i = 0; i < 20; ++i) {
        double k = 5000.0 + 22000.0 * U(gen);
        double t = (10.0 + 350.0 * U(gen)) / 365.0;
        OptionContract c = direct_call(k, t);
        double a = price_call_parity(m, state, c, cfg).value;
        double b = price_call_bakshi_madan(m, state, c, cfg).value;
        CHECK(b == Approx(a).epsilon(1e-6));
    }
}

TEST_CASE("direct calls are monotone decreasing and convex in strike") {
    FsvModel m = table1a_type3_model();
    MarketState state{0.0, 9232.98, 0.0};
    std::vector<double> prices;
    for (double k = 5000.0; k <= 16000.0; k += 500.0)
        prices.push_back(price_call_parity(m, state, direct_call(k, 47.0 / 365.0)).value);
    for (std::size_t i = 1; i < prices.size(); ++i) CHECK(prices[i] <= prices[i - 1] + 1e-8);
    for (std::size_t i = 1; i + 1 < prices.size(); ++i)
        CHECK(prices[i + 1] - 2.0 * prices[i] + prices[i - 1] >= -1e-8);
    CHECK(prices.front() <= 9232.98);
}

TEST_CASE("qip call: sure-payoff limit and bounds") {
    FsvModel m = table2a_type3_model();
    double s0 = 52108.0;
    MarketState state{0.0, s0, 0.0};
    OptionContract c = qip(1e-10, 47.0 / 365.0, 1.0, 1.0, s0);
    CHECK(price_qip_call(m, state, c).value == Approx(s0).epsilon(1e-8));
    for (double k : {45000.0, 52000.0, 60000.0}) {
        OptionContract q = qip(k, 47.0 / 365.0, 1.2, 1.1, s0);
        double v = price_qip_call(m, state, q).value;
        CHECK(v >= 0.0);
        CHECK(v <= std::pow(s0, 1.2));
    }
}

TEST_CASE("qip call matches the lognormal quadrature oracle in the degenerate model") {
    double sx = 0.8, a0 = 0.5, s0 = 9000.0, t = 0.25;
    FsvModel m = bs_degenerate(sx, a0);
    MarketState state{0.0, s0, 0.0};
    PricerConfig cfg;
    cfg.quad.rel_tol = 1e-11;
    double var = sx * sx * a0 * t;
    double mu = std::log(s0) - 0.5 * var; // martingale drift
    for (double k : {7500.0, 9000.0, 10500.0}) {
        OptionContract c = qip(k, t, 1.0, 1.0, 1.0);
        double want = oracle::lognormal_qi_call(mu, var, k);
        CHECK(price_qip_call(m, state, c, cfg).value == Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("qip put parity is definitional and the K->0 put collapses") {
    FsvModel m = table2a_type3_model();
    double s0 = 52108.0, t = 39.0 / 365.0;
    MarketState state{0.0, s0, 0.0};
    OptionContract c = qip(52000.0, t, 1.2, 1.1, s0);
    OptionContract put = c;
    put.is_call = false;
    double call = price_qip_call(m, state, c).value;
    double pv = price_qip_put(m, state, put).value;
    double fwd = inverse_power_forward(m, state, c.p1, t);
    double residual = std::pow(s0, 1.2) * (std::pow(52000.0, 1.1) * fwd - 1.0);
    CHECK(pv - call == Approx(residual).epsilon(1e-10));

    OptionContract tiny = qip(1e-8, t, 1.0, 1.0, s0, false);
    // vanishing-strike put collapses to zero up to integration noise at scale R
    CHECK(std::abs(price_qip_put(m, state, tiny).value) < 1e-9 * s0);
}

TEST_CASE("inverse-power forward: unit value at p1 = 0 and lognormal moments") {
    FsvModel m = table2a_type3_model();
    double s0 = 9232.98;
    MarketState state{0.0, s0, 0.0};
    CHECK(inverse_power_forward(m, state, 0.0, 0.5) == 1.0);

    double sx = 0.8, a0 = 0.5, t = 0.25;
    FsvModel bs = bs_degenerate(sx, a0);
    // E[S^{-p}] for a lognormal martingale: S0^{-p} exp(p(p+1) sigma^2 t / 2)
    double var = sx * sx * a0 * t;
    for (double p : {0.5, 1.0, 1.7}) {
        double want = std::pow(s0, -p) * std::exp(0.5 * p * (p + 1.0) * var);
        CHECK(inverse_power_forward(bs, state, p, t) == Approx(want).epsilon(1e-9));
    }
    // table model, p1 = 1: finite and positive
    double f = inverse_power_forward(m, state, 1.0, 47.0 / 365.0);
    CHECK(f > 0.0);
    CHECK(f < 1.0); // spot near 9k, so E[1/S] is far below 1

    // the narrow-strip table-1a model has no inverse moment: E[1/S] diverges
    FsvModel narrow = table1a_type3_model();
    CHECK_THROWS_AS((void)inverse_power_forward(narrow, state, 1.0, 47.0 / 365.0),
                    MomentUnavailable);
}

TEST_CASE("moment unavailable surfaces as the documented error") {
    // eta b_x barely above 1: u - i(alpha+1) leaves the X strip for alpha = 3
    AljdParams p{0.5, 0.4, 1.1, 1.0, 0.5, 3.0};
    FsvModel m(p, KernelSpec(KernelFamily::TypeIII, 5.0, 0.6), 0.3, 0.1, 0.0);
    MarketState state{0.0, 9000.0, 0.0};
    OptionContract c = direct_call(9000.0, 0.25);
    CHECK_THROWS_AS((void)price_call_carr_madan(m, state, c, 3.0), MomentUnavailable);
}

TEST_CASE("power grid consistency and monotonicity in strike") {
    FsvModel m = table2a_type3_model();
    double s0 = 52108.0, t = 130.0 / 365.0;
    MarketState state{0.0, s0, 0.0};
    auto powers = equal_power_range(0.8, 1.2, 9);
    CHECK(powers.size() == 9);
    auto grid = power_grid(m, state, s0, t, s0, powers);
    CHECK(grid.size() == 9);
    // the unit-power entry equals the direct qip prices
    const PowerGridEntry& mid = grid[4];
    CHECK(mid.p1 == Approx(1.0));
    OptionContract c = qip(s0, t, 1.0, 1.0, s0);
    CHECK(mid.call_value == Approx(price_qip_call(m, state, c).value).epsilon(1e-12));

    // calls decrease in strike at fixed powers
    double prev = 1e300;
    for (double k : {45000.0, 50000.0, 55000.0, 60000.0}) {
        auto g = power_grid(m, state, k, t, s0, {{1.1, 1.1}});
        CHECK(g[0].call_value <= prev + 1e-10);
        prev = g[0].call_value;
    }

    auto mesh = power_mesh(0.8, 1.4, 13, 0.8, 1.4, 13);
    CHECK(mesh.size() == 169);
}
