#include <doctest.h>

#include "fsv/errors.hpp"
#include "fsv/mc.hpp"

#include <cmath>

using namespace fsv;
using doctest::Approx;

namespace {

FsvModel table1a_type3_model() {
    AljdParams p{0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291};
    return FsvModel(p, KernelSpec(KernelFamily::TypeIII, 9.70963, 0.54194), 0.24452, 0.1, 0.00641);
}

} // namespace

TEST_CASE("gmrts base is rejected") {
    GmrtsParams g = GmrtsParams::calibration_profile(16.6, 54.5, -0.48, 0.85);
    FsvModel m(g, KernelSpec(KernelFamily::TypeIII, 5.57, 0.56), 0.54, 0.1, 0.0995);
    CHECK_THROWS_AS((void)simulate_aljd(m, 9000.0, 0.1, 10, 1), InvalidBase);
}

TEST_CASE("reproducibility: identical seed gives bit-identical batches") {
    FsvModel m = table1a_type3_model();
    PathBatch a = simulate_aljd(m, 9232.98, 0.2, 5000, 777);
    PathBatch b = simulate_aljd(m, 9232.98, 0.2, 5000, 777);
    CHECK(a.terminal_log_s == b.terminal_log_s);
    CHECK(a.business_time == b.business_time);
    CHECK(a.realized_qv == b.realized_qv);
    PathBatch c = simulate_aljd(m, 9232.98, 0.2, 5000, 778);
    CHECK(c.terminal_log_s != a.terminal_log_s);
}

TEST_CASE("degenerate lognormal: terminal distribution is exactly Gaussian") {
    // lambda_x = lambda_y = 0, m = a0 -> log S_t Gaussian
    AljdParams p{0.7, 0.0, 10.0, 1.0, 0.0, 3.0};
    double a0 = 0.5, t = 0.3, s0 = 9000.0;
    FsvModel m(p, KernelSpec(KernelFamily::TypeIII, 5.0, 0.6), a0, a0, 0.0);
    int n = 100000;
    PathBatch batch = simulate_aljd(m, s0, t, n, 20200711);
    double var = p.sigma_x * p.sigma_x * a0 * t;
    double mu = std::log(s0) - 0.5 * var;

    // one-sample Kolmogorov-Smirnov against N(mu, var)
    std::vector<double> xs = batch.terminal_log_s;
    std::sort(xs.begin(), xs.end());
    double dmax = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double z = (xs[i] - mu) / std::sqrt(var);
        double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        double lo = double(i) / double(n), hi = double(i + 1) / double(n);
        dmax = std::max({dmax, std::abs(cdf - lo), std::abs(cdf - hi)});
    }
    // KS critical value at p = 0.01 is 1.63 / sqrt(n)
    CHECK(dmax < 1.63 / std::sqrt(double(n)));
}

TEST_CASE("martingale property of the simulated terminal price") {
    FsvModel m = table1a_type3_model();
    double s0 = 9232.98;
    PathBatch batch = simulate_aljd(m, s0, 47.0 / 365.0, 200000, 99);
    McEstimate mean_s = mean_terminal_price(batch);
    CHECK(std::abs(mean_s.value - s0) < 3.0 * mean_s.std_err);
}

TEST_CASE("business time and realized qv match the model identities") {
    FsvModel m = table1a_type3_model();
    double t = 47.0 / 365.0;
    PathBatch batch = simulate_aljd(m, 9232.98, t, 200000, 4242);
    double want_tt = deterministic_business_time(m, 0.0, t) + eval_J(m.kernel, t) * m.mom.ey1;
    McEstimate mt = mean_business_time(batch);
    CHECK(std::abs(mt.value - want_tt) < 3.0 * mt.std_err);
    McEstimate mq = mean_realized_qv(batch);
    CHECK(std::abs(mq.value - model_variance_swap(m, t)) < 3.0 * mq.std_err);
}

TEST_CASE("empirical cf matches the conditional cf") {
    FsvModel m = table1a_type3_model();
    double t = 47.0 / 365.0, s0 = 9232.98;
    PathBatch batch = simulate_aljd(m, s0, t, 200000, 31337);
    CfContext ctx = CfContext::spot(s0, t);

    CfEstimate at0 = empirical_cf(batch, 0.0);
    CHECK(at0.value == cplx(1.0, 0.0));
    CfEstimate plus = empirical_cf(batch, 2.0);
    CfEstimate minus = empirical_cf(batch, -2.0);
    CHECK(plus.value == std::conj(minus.value));

    for (double u : {1.0, 3.0, 5.0, 7.0}) {
        CfEstimate emp = empirical_cf(batch, u);
        cplx want = conditional_cf(m, ctx, u);
        CHECK(std::abs(emp.value.real() - want.real()) < 3.0 * emp.se_re);
        CHECK(std::abs(emp.value.imag() - want.imag()) < 3.0 * emp.se_im);
    }
}

TEST_CASE("mc price basics and cross-engine agreement") {
    FsvModel m = table1a_type3_model();
    double t = 47.0 / 365.0, s0 = 9232.98;
    PathBatch batch = simulate_aljd(m, s0, t, 200000, 1234);

    // K -> 0 direct call reduces to the martingale mean
    OptionContract k0;
    k0.strike = 1e-10;
    k0.maturity = t;
    McEstimate near_spot = mc_price(batch, k0);
    CHECK(std::abs(near_spot.value - s0) < 3.0 * near_spot.std_err);

    OptionContract c;
    c.strike = 9000.0;
    c.maturity = t;
    McEstimate mc = mc_price(batch, c);
    double fourier = price_call_parity(m, MarketState{0.0, s0, 0.0}, c).value;
    CHECK(std::abs(mc.value - fourier) < 3.0 * mc.std_err);

    OptionContract q;
    q.strike = 9000.0;
    q.maturity = t;
    q.style = OptionStyle::QuantoInversePower;
    q.conversion_rate = s0;
    q.p1 = 1.2;
    q.p2 = 1.2;
    McEstimate mcq = mc_price(batch, q);
    double fq = price_qip_call(m, MarketState{0.0, s0, 0.0}, q).value;
    CHECK(std::abs(mcq.value - fq) < 3.0 * mcq.std_err);
}
