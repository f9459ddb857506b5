#include <doctest.h>

#include "fsv/errors.hpp"
#include "fsv/levy.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using fsv::AljdParams;
using fsv::BaseProcess;
using fsv::cplx;
using fsv::GmrtsParams;
using doctest::Approx;

namespace {

AljdParams table1a_type3() {
    // calibrated jump-diffusion parameter set used across the test suite
    return AljdParams{0.73208, 0.21292, 0.98634, 2.10382, 8.52514, 4.14291};
}

GmrtsParams gmrts_sample() { return GmrtsParams::calibration_profile(16.628, 54.5301, -0.48461, 0.84964); }

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

} // namespace

TEST_CASE("parameter validation") {
    AljdParams bad_sigma{-0.1, 0.0, 2.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(bad_sigma.validate(), fsv::Error);
    AljdParams bad_strip{0.5, 0.0, 0.5, 1.0, 0.0, 1.0}; // b_x eta <= 1
    CHECK_THROWS_AS(bad_strip.validate(), fsv::Error);
    CHECK_NOTHROW(table1a_type3().validate());
    GmrtsParams g = gmrts_sample();
    CHECK(g.c_x == 0.5);
    CHECK(g.n == 2.0);
    CHECK(g.b_y == g.a_y);
    g.c_y = 1.2;
    CHECK_THROWS_AS(g.validate(), fsv::Error);
}

TEST_CASE("phi_x1 normalization and pure-Gaussian reduction") {
    BaseProcess aljd = table1a_type3();
    CHECK(fsv::phi_x1(aljd, 0.0) == cplx(1.0, 0.0));
    AljdParams nojump = table1a_type3();
    nojump.lambda_x = 0.0;
    for (double u : {0.3, 1.0, 4.0})
        CHECK(rel_err(fsv::phi_x1(BaseProcess(nojump), u),
                      std::exp(-0.5 * nojump.sigma_x * nojump.sigma_x * u * u)) < 1e-14);
}

TEST_CASE("gmrts phi_x1 covers the variance gamma limit") {
    GmrtsParams vg{1.7, 3.1, 0.0, -0.4, 0.0, 1.0, 1.0, 0.0}; // c_x = n = 0
    cplx u(1.0, 0.0);
    cplx w = vg.theta * u + cplx(0.0, 0.5) * u * u;
    cplx want = std::pow(1.0 - cplx(0.0, 1.0) * w / vg.b_x, -vg.a_x);
    CHECK(rel_err(fsv::phi_x1(BaseProcess(vg), u), want) < 1e-12);
}

TEST_CASE("gmrts phi_y1 matches the printed closed form") {
    // c_y = 1/2, a_y = b_y = 2, u = 1 -> exp(2 Gamma(-1/2)(sqrt(2-i) - sqrt 2))
    GmrtsParams p = GmrtsParams::calibration_profile(1.0, 1.0, 0.0, 2.0);
    cplx want = std::exp(2.0 * std::tgamma(-0.5) * (std::sqrt(cplx(2.0, -1.0)) - std::sqrt(2.0)));
    CHECK(rel_err(fsv::phi_y1(BaseProcess(p), 1.0), want) < 1e-13);
    CHECK(fsv::phi_y1(BaseProcess(p), 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("aljd phi_y1: no jumps means the unit function") {
    AljdParams p = table1a_type3();
    p.lambda_y = 0.0;
    for (double u : {0.0, 1.0, 9.0}) CHECK(fsv::phi_y1(BaseProcess(p), u) == cplx(1.0, 0.0));
}

TEST_CASE("aljd phi_y1 matches the Levy-Khintchine quadrature oracle") {
    AljdParams p = table1a_type3();
    BaseProcess base = p;
    for (double u : {0.4, 2.0, 6.0}) {
        // exponent = int_0^inf (e^{iuz} - 1) lambda_y b_y e^{-b_y z} dz
        cplx expo = oracle::simpson(
            [&](double z) {
                return (std::exp(cplx(0.0, u * z)) - 1.0) * p.lambda_y * p.b_y * std::exp(-p.b_y * z);
            },
            0.0, 40.0 / p.b_y, 1e-14);
        CHECK(rel_err(fsv::phi_y1(base, u), std::exp(expo)) < 1e-10);
    }
}

TEST_CASE("hermitian symmetry of both characteristic functions") {
    for (BaseProcess base : {BaseProcess(table1a_type3()), BaseProcess(gmrts_sample())}) {
        for (double u : {0.2, 1.7, 13.0}) {
            CHECK(rel_err(fsv::phi_x1(base, -u), std::conj(fsv::phi_x1(base, u))) < 1e-13);
            CHECK(rel_err(fsv::phi_y1(base, -u), std::conj(fsv::phi_y1(base, u))) < 1e-13);
            CHECK(std::abs(fsv::phi_x1(base, u)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("moments: closed forms") {
    AljdParams p = table1a_type3();
    fsv::Moments m = fsv::moments(BaseProcess(p));
    CHECK(m.ey1 == Approx(p.lambda_y / p.b_y).epsilon(1e-14));
    CHECK(m.vary1 == Approx(2.0 * p.lambda_y / (p.b_y * p.b_y)).epsilon(1e-14));
    double e2 = p.eta * p.eta;
    double want_vx = p.sigma_x * p.sigma_x +
                     2.0 * p.lambda_x * (e2 * e2 - e2 + 1.0) / (p.b_x * p.b_x * e2);
    CHECK(m.varx1 == Approx(want_vx).epsilon(1e-14));

    AljdParams diff_only = p;
    diff_only.lambda_x = 0.0;
    CHECK(fsv::moments(BaseProcess(diff_only)).varx1 ==
          Approx(p.sigma_x * p.sigma_x).epsilon(1e-14));

    GmrtsParams g = gmrts_sample();
    g.theta = 0.0;
    double want = g.a_x * std::tgamma(1.0 - g.c_x) /
                  (std::pow(g.b_x, 1.0 - g.c_x) * std::tgamma(g.n + 2.0));
    CHECK(fsv::moments(BaseProcess(g)).varx1 == Approx(want).epsilon(1e-13));
}

TEST_CASE("moments agree with central-difference derivatives of the exponents") {
    const double h = 1e-4;
    for (BaseProcess base : {BaseProcess(table1a_type3()), BaseProcess(gmrts_sample())}) {
        fsv::Moments m = fsv::moments(base);
        auto ly = [&](double u) { return fsv::log_phi_y1(base, u); };
        cplx d1 = (ly(h) - ly(-h)) / (2.0 * h);
        cplx d2 = (ly(h) - 2.0 * ly(0.0) + ly(-h)) / (h * h);
        CHECK(std::abs(d1.imag() - m.ey1) <= 1e-5 * std::max(1.0, m.ey1));
        CHECK(std::abs(-d2.real() - m.vary1) <= 1e-5 * std::max(1.0, m.vary1));
        auto lx = [&](double u) { return fsv::log_phi_x1(base, u); };
        cplx dx2 = (lx(h) - 2.0 * lx(0.0) + lx(-h)) / (h * h);
        CHECK(std::abs(-dx2.real() - m.varx1) <= 1e-5 * std::max(1.0, m.varx1));
    }
}

TEST_CASE("log compensators") {
    AljdParams p = table1a_type3();
    fsv::Compensators c = fsv::log_compensators(BaseProcess(p), 0.0);
    CHECK(c.log_phi_y_mirho == 0.0);
    // frozen reference value for log phi_X1(-i)
    CHECK(c.log_phi_x_mi == Approx(0.1862270044869349).epsilon(1e-12));

    AljdParams nojump = p;
    nojump.lambda_x = 0.0;
    CHECK(fsv::log_compensators(BaseProcess(nojump), 0.1).log_phi_x_mi ==
          Approx(0.5 * p.sigma_x * p.sigma_x).epsilon(1e-14));

    // rho beyond b_y leaves the Y strip
    CHECK_THROWS_AS((void)fsv::log_compensators(BaseProcess(p), p.b_y + 0.5), fsv::OutsideStrip);
}

TEST_CASE("strip violations throw OutsideStrip") {
    BaseProcess aljd = table1a_type3();
    AljdParams p = table1a_type3();
    CHECK_THROWS_AS((void)fsv::log_phi_x1(aljd, cplx(1.0, p.b_x / p.eta + 0.1)), fsv::OutsideStrip);
    CHECK_THROWS_AS((void)fsv::log_phi_y1(aljd, cplx(0.0, -p.b_y - 0.1)), fsv::OutsideStrip);
    // GMRTS: iw/(b_x Gamma(n+1)) lands on [1, inf) at u = -i when theta + 1/2 >= 2 b_x
    GmrtsParams g = GmrtsParams::calibration_profile(1.0, 0.5, 4.0, 1.0);
    CHECK_THROWS_AS((void)fsv::log_phi_x1(BaseProcess(g), cplx(0.0, -1.0)), fsv::OutsideStrip);
}
