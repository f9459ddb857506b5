#include <doctest.h>

#include "fsv/calibrate.hpp"
#include "fsv/errors.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>

using namespace fsv;
using doctest::Approx;

namespace {

// synthetic chain priced from a known model
QuoteSet synthetic_chain(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
                         double spot) {
    QuoteSet qs;
    qs.spot = spot;
    PricerConfig cfg;
    for (int days : {19, 47, 166, 257}) {
        for (int i = 0; i < 10; ++i) {
            double k = spot * (0.7 + 0.08 * i);
            double t = days / 365.0;
            double price = model_call_price(family, kernel, params, spot, k, t, cfg);
            qs.quotes.push_back({k, days, price, true, DropReason::None});
        }
    }
    return qs;
}

const std::vector<double> kTrueAljd = {
    0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291, // sigma_x .. b_y
    9.70963, 0.54194, 0.00641, 0.24452, 0.1};             // kappa, d, rho, a0, m

} // namespace

TEST_CASE("arpe: zero at the generating parameters, simple arithmetic otherwise") {
    QuoteSet qs = synthetic_chain(ModelFamily::FsvAljd, KernelFamily::TypeIII, kTrueAljd, 9232.98);
    PricingSetup setup{9232.98, 365, PricerConfig{}};
    std::vector<double> residuals;
    double v = arpe(ModelFamily::FsvAljd, KernelFamily::TypeIII, kTrueAljd, qs, setup, &residuals);
    CHECK(v < 1e-6);
    CHECK(residuals.size() == 40);

    // one quote, market 100, model price anything: |market - model| / market
    QuoteSet one;
    one.spot = 9232.98;
    one.quotes.push_back({9232.98, 47, 100.0, true, DropReason::None});
    std::vector<double> params = kTrueAljd;
    double t = 47.0 / 365.0;
    double model =
        model_call_price(ModelFamily::FsvAljd, KernelFamily::TypeIII, params, one.spot, 9232.98, t,
                         PricerConfig{});
    double got = arpe(ModelFamily::FsvAljd, KernelFamily::TypeIII, params, one, setup);
    CHECK(got == Approx(std::abs(100.0 - model) / 100.0).epsilon(1e-12));
}

TEST_CASE("arpe is invariant under quote reordering") {
    QuoteSet qs = synthetic_chain(ModelFamily::FsvAljd, KernelFamily::TypeIII, kTrueAljd, 9232.98);
    PricingSetup setup{9232.98, 365, PricerConfig{}};
    std::vector<double> tweaked = kTrueAljd;
    tweaked[0] *= 1.1;
    double a = arpe(ModelFamily::FsvAljd, KernelFamily::TypeIII, tweaked, qs, setup);
    QuoteSet shuffled = qs;
    std::reverse(shuffled.quotes.begin(), shuffled.quotes.end());
    double b = arpe(ModelFamily::FsvAljd, KernelFamily::TypeIII, tweaked, shuffled, setup);
    CHECK(a == Approx(b).epsilon(1e-13));
}

TEST_CASE("genetic search solves a one-dimensional bowl") {
    ParamBox box;
    box.bounds.push_back({"u", 0.0, 10.0, false, 0.0});
    Objective f = [](const std::vector<double>& x) { return (x[0] - 3.0) * (x[0] - 3.0); };
    GaConfig cfg;
    cfg.population = 40;
    cfg.generations = 50;
    cfg.seed = 7;
    auto top = genetic_search(f, box, cfg);
    CHECK(std::abs(top.front().params[0] - 3.0) < 0.1);

    // determinism under a fixed seed
    auto again = genetic_search(f, box, cfg);
    CHECK(top.front().params == again.front().params);

    // an all-fixed box collapses to the single feasible point
    ParamBox fixed = box;
    fixed.fix("u", 4.0);
    auto single = genetic_search(f, fixed, cfg);
    CHECK(single.front().params[0] == 4.0);
}

TEST_CASE("pattern search refines a quadratic bowl from a corner") {
    ParamBox box;
    box.bounds.push_back({"x", -4.0, 6.0, false, 0.0});
    box.bounds.push_back({"y", -4.0, 6.0, false, 0.0});
    Objective f = [](const std::vector<double>& v) {
        double dx = v[0] - 1.2, dy = v[1] + 0.7;
        return dx * dx + 3.0 * dy * dy;
    };
    PsConfig cfg;
    auto [x, val] = pattern_search(f, {-4.0, 6.0}, box, cfg);
    CHECK(std::abs(x[0] - 1.2) < 1e-4);
    CHECK(std::abs(x[1] + 0.7) < 1e-4);
    CHECK(val < 1e-7);

    // starting at the optimum stays there
    auto [x2, val2] = pattern_search(f, {1.2, -0.7}, box, cfg);
    CHECK(val2 <= 1e-12);
    CHECK(std::abs(x2[0] - 1.2) < 1e-6);

    // a plateau terminates through the step-size criterion
    Objective flat = [](const std::vector<double>&) { return 1.0; };
    auto [x3, val3] = pattern_search(flat, {0.0, 0.0}, box, cfg);
    CHECK(val3 == 1.0);
    CHECK(x3[0] == 0.0);
}

TEST_CASE("black-scholes benchmark reproduces its own closed form") {
    double sigma = 0.75637, s0 = 9232.98;
    for (double k : {7000.0, 9232.98, 12000.0}) {
        for (double t : {19.0 / 365.0, 257.0 / 365.0}) {
            double got = model_call_price(ModelFamily::BlackScholes, KernelFamily::Exponential,
                                          {sigma}, s0, k, t, PricerConfig{});
            CHECK(got == Approx(oracle::bs_call(s0, k, sigma, t)).epsilon(1e-8));
        }
    }
}

TEST_CASE("heston benchmark degenerates to black-scholes as vol-of-vol vanishes") {
    double s0 = 9232.98, v0 = 0.5, t = 0.25;
    // large kappa pins variance at m = v0; tiny vol-of-vol kills the smile
    std::vector<double> heston = {15.0, -0.3, 1e-3, v0, v0};
    for (double k : {8500.0, 9232.98, 10000.0}) {
        double got = model_call_price(ModelFamily::Heston, KernelFamily::Exponential, heston, s0, k,
                                      t, PricerConfig{});
        double want = oracle::bs_call(s0, k, std::sqrt(v0), t);
        CHECK(got == Approx(want).epsilon(1e-3));
    }
}

TEST_CASE("sv families price through the exponential kernel") {
    // SV-ALJD parameter vector: no d entry
    std::vector<double> sv = {0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291,
                              9.70963, 0.00641, 0.24452, 0.1};
    double got = model_call_price(ModelFamily::SvAljd, KernelFamily::Exponential, sv, 9232.98,
                                  9000.0, 47.0 / 365.0, PricerConfig{});
    // identical to an FSV model with the exponential kernel
    AljdParams p{0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291};
    FsvModel m(p, KernelSpec::exponential(9.70963), 0.24452, 0.1, 0.00641);
    OptionContract c;
    c.strike = 9000.0;
    c.maturity = 47.0 / 365.0;
    double want = price_call_parity(m, MarketState{0.0, 9232.98, 0.0}, c).value;
    CHECK(got == Approx(want).epsilon(1e-14));
}

TEST_CASE("black-scholes self-recovery through the two-stage calibrator") {
    double sigma_true = 0.62, s0 = 9232.98;
    QuoteSet qs = synthetic_chain(ModelFamily::BlackScholes, KernelFamily::Exponential,
                                  {sigma_true}, s0);
    PricingSetup setup{s0, 365, PricerConfig{}};
    CalibConfig cfg;
    cfg.ga.population = 20;
    cfg.ga.generations = 12;
    cfg.ps_starts = 1;
    cfg.seed = 11;
    CalibrationResult r = calibrate(ModelFamily::BlackScholes, KernelFamily::Exponential, qs, setup, cfg);
    CHECK(std::abs(r.params[0].second - sigma_true) < 1e-3);
    CHECK(r.arpe_percent < 0.1);
    CHECK(r.n_quotes == 40);
    CHECK(r.n_objective_evals > 0);
}

TEST_CASE("gmrts box honors the fixed profile") {
    ParamBox box = default_param_box(ModelFamily::FsvGmrts, KernelFamily::TypeIII);
    bool saw_m_fixed = false;
    for (const auto& b : box.bounds)
        if (b.name == "m") saw_m_fixed = b.fixed;
    CHECK(saw_m_fixed);
    // the factory pins c_x = c_y = 1/2, n = 2, b_y = a_y
    std::vector<double> v = {16.628, 54.5301, -0.48461, 0.84964, 5.57445, 0.56133, 0.0995, 0.54194, 0.1};
    FsvModel m = make_fsv_model(ModelFamily::FsvGmrts, KernelFamily::TypeIII, v);
    const auto& g = std::get<GmrtsParams>(m.base);
    CHECK(g.c_x == 0.5);
    CHECK(g.c_y == 0.5);
    CHECK(g.n == 2.0);
    CHECK(g.b_y == g.a_y);
}

TEST_CASE("calibration result serializes to the documented json shape") {
    CalibrationResult r;
    r.family = ModelFamily::FsvAljd;
    r.kernel = KernelFamily::TypeIII;
    r.params = {{"sigma_x", 0.7}, {"m", 0.1}};
    r.arpe_sum = 2.26;
    r.arpe_percent = 5.65;
    r.n_quotes = 40;
    r.seed = 42;
    std::string js = calibration_result_json(r);
    CHECK(js.find("\"family\": \"fsv-aljd\"") != std::string::npos);
    CHECK(js.find("\"kernel\": \"type3\"") != std::string::npos);
    CHECK(js.find("\"sigma_x\"") != std::string::npos);
    CHECK(js.find("\"wall_time_ga_s\"") != std::string::npos);
}

TEST_CASE("type-III cf evaluation is at least 3x faster than type I on a fixed grid") {
    AljdParams p{0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291};
    FsvModel m3(p, KernelSpec(KernelFamily::TypeIII, 9.70963, 0.54194), 0.24452, 0.1, 0.00641);
    FsvModel m1(p, KernelSpec(KernelFamily::TypeI, 9.70963, 0.54194), 0.24452, 0.1, 0.00641);
    CfContext ctx = CfContext::spot(9232.98, 47.0 / 365.0);
    QuadConfig quad;

    auto grid_time = [&](const FsvModel& m) {
        volatile double sink = 0.0;
        auto t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 5; ++rep)
            for (int i = 0; i < 64; ++i) {
                double u = 0.25 + double(i);
                sink += std::abs(conditional_cf(m, ctx, u, quad));
            }
        (void)sink;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    grid_time(m3); // warm-up
    double t3 = grid_time(m3);
    double t1 = grid_time(m1);
    CHECK(t1 >= 3.0 * t3);
}
