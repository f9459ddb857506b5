#include <doctest.h>

#include "fsv/errors.hpp"
#include "fsv/quadrature.hpp"

#include <cmath>

using fsv::cplx;
using fsv::QuadConfig;

TEST_CASE("semi-infinite integrals of standard envelopes") {
    QuadConfig cfg;
    CHECK(std::abs(fsv::integrate_semi_infinite([](double u) { return std::exp(-u); }, cfg) - 1.0) <
          1e-10);
    double g = fsv::integrate_semi_infinite([](double u) { return std::exp(-0.5 * u * u); }, cfg);
    CHECK(std::abs(g - std::sqrt(M_PI / 2.0)) < 1e-10);
}

TEST_CASE("oscillatory semi-infinite integral against the closed form") {
    // int_0^inf Re[e^{iu}/(1+u^2)] du = (pi/2) e^{-1}
    QuadConfig cfg;
    cfg.abs_tol = 1e-8; // the 1/u^2 envelope decays slowly; truncation error ~ abs_tol
    cfg.u_max_cap = 1e5;
    cfg.max_panels = 20000;
    double got = fsv::integrate_semi_infinite(
        [](double u) { return (std::exp(cplx(0.0, u)) / cplx(1.0 + u * u, 0.0)).real(); }, cfg);
    CHECK(std::abs(got - M_PI / 2.0 * std::exp(-1.0)) < 1e-6);
}

TEST_CASE("finite integrals") {
    QuadConfig cfg;
    CHECK(fsv::integrate_finite([](double) { return cplx(1.0, 0.0); }, 0.0, 0.0, cfg) == cplx(0.0));
    CHECK(std::abs(fsv::integrate_finite([](double) { return cplx(1.0, 2.0); }, 0.0, 2.0, cfg) -
                   cplx(2.0, 4.0)) < 1e-12);
    // int_0^1 log(1+s^2) ds = 2 atan(1) + log 2 - 2
    double got = fsv::integrate_finite_real([](double s) { return std::log(1.0 + s * s); }, 0.0, 1.0, cfg);
    CHECK(std::abs(got - (2.0 * std::atan(1.0) + std::log(2.0) - 2.0)) < 1e-11);
}

TEST_CASE("shared-node multi integrand matches separate runs") {
    QuadConfig cfg;
    auto f0 = [](double u) { return std::exp(-u); };
    auto f1 = [](double u) { return u * std::exp(-0.7 * u); };
    std::vector<double> both = fsv::integrate_semi_infinite_multi(
        [&](double u, double* out) {
            out[0] = f0(u);
            out[1] = f1(u);
        },
        2, cfg);
    CHECK(std::abs(both[0] - 1.0) < 1e-9);
    CHECK(std::abs(both[1] - 1.0 / 0.49) < 1e-7);
}

TEST_CASE("error paths") {
    QuadConfig cfg;
    cfg.u_max_cap = 50.0;
    CHECK_THROWS_AS((void)fsv::integrate_semi_infinite([](double) { return 1.0; }, cfg), fsv::NoDecay);
    QuadConfig tight;
    tight.max_panels = 3;
    CHECK_THROWS_AS(
        (void)fsv::integrate_finite_real([](double x) { return std::sin(50.0 * x); }, 0.0, 30.0, tight),
        fsv::PanelBudgetExceeded);
}

TEST_CASE("doubling the panel budget does not move converged results") {
    QuadConfig a, b;
    b.max_panels = 2 * a.max_panels;
    auto f = [](double u) { return std::cos(3.0 * u) * std::exp(-0.3 * u * u); };
    double va = fsv::integrate_semi_infinite(f, a);
    double vb = fsv::integrate_semi_infinite(f, b);
    CHECK(std::abs(va - vb) <= a.rel_tol * std::max(1.0, std::abs(va)));
}

TEST_CASE("determinism") {
    QuadConfig cfg;
    auto f = [](double u) { return std::sin(u + 0.2) * std::exp(-u); };
    double v1 = fsv::integrate_semi_infinite(f, cfg);
    double v2 = fsv::integrate_semi_infinite(f, cfg);
    CHECK(v1 == v2);
}
