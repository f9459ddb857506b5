#pragma once

#include "fsv/complexfn.hpp"

#include <variant>

namespace fsv {

/// Asymmetric Laplace jump-diffusion: Brownian component plus compound
/// Poisson jumps with asymmetric Laplace marks for X, exponential compound
/// Poisson subordinator for Y.
struct AljdParams {
    double sigma_x;  // diffusion volatility, 1/sqrt(years)
    double lambda_x; // price-jump intensity, 1/years
    double b_x;      // jump rate (reciprocal scale)
    double eta;      // jump asymmetry
    double lambda_y; // volatility-jump intensity, 1/years
    double b_y;      // volatility-jump rate

    void validate() const; // positivity and b_x * eta > 1
};

/// Gaussian-mixed regulated tempered stable pair: X is a drifted Brownian
/// motion subordinated by a type-III-regulated tempered stable subordinator,
/// Y a plain tempered stable subordinator.
struct GmrtsParams {
    double a_x;   // shape
    double b_x;   // rate
    double c_x;   // family, in [0,1); fixed 1/2 in calibration
    double theta; // skewness
    double n;     // regulation degree, >= 0; fixed 2 in calibration
    double a_y;
    double b_y;
    double c_y; // in [0,1); fixed 1/2 in calibration

    void validate() const;

    /// The calibration profile: c_x = c_y = 1/2, n = 2, b_y = a_y.
    static GmrtsParams calibration_profile(double a_x, double b_x, double theta, double a_y);
};

using BaseProcess = std::variant<AljdParams, GmrtsParams>;

void validate(const BaseProcess& base);

/// Characteristic exponents of the time-1 marginals. Both throw OutsideStrip
/// when the argument leaves the strip of analyticity (ALJD uses the printed
/// strips, GMRTS validates the hypergeometric argument against its cut
/// numerically).
cplx log_phi_x1(const BaseProcess& base, cplx u);
cplx log_phi_y1(const BaseProcess& base, cplx u);

cplx phi_x1(const BaseProcess& base, cplx u);
cplx phi_y1(const BaseProcess& base, cplx u);

struct Moments {
    double ey1;   // E[Y1]
    double vary1; // Var[Y1]
    double varx1; // Var[X1] = -d^2/du^2 log phi_X1 at 0
};

Moments moments(const BaseProcess& base);

struct Compensators {
    double log_phi_x_mi;    // log phi_X1(-i)
    double log_phi_y_mirho; // log phi_Y1(-i rho)
};

/// Martingale compensators; throws OutsideStrip naming the side that failed.
Compensators log_compensators(const BaseProcess& base, double rho);

/// Rate parameter of the Y subordinator (enters phi_1 = b_Y - i rho u).
double y_rate(const BaseProcess& base);

} // namespace fsv
