#include "fsv/levy.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw Error(msg);
}

bool on_cut(cplx z) {
    return std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z.real())) && z.real() >= 1.0 - 1e-12;
}

// tempered-stable exponent at argument u for parameters (a, b, c)
cplx ts_log_phi(double a, double b, double c, cplx u) {
    cplx arg = b - cplx(0.0, 1.0) * u;
    if (arg.real() <= 0.0) throw OutsideStrip("tempered stable exponent: Im u <= -b");
    if (c == 0.0) return -a * std::log(arg / b);
    return a * std::tgamma(-c) * (std::pow(arg, c) - std::pow(b, c));
}

cplx gmrts_log_phi_x(const GmrtsParams& p, cplx u) {
    const cplx i(0.0, 1.0);
    cplx w = p.theta * u + i * u * u / 2.0;
    if (p.n < 1e-12) return ts_log_phi(p.a_x, p.b_x, p.c_x, w); // unregulated limit
    double gn1 = std::tgamma(p.n + 1.0);
    cplx z = i * w / (p.b_x * gn1);
    if (on_cut(z)) throw OutsideStrip("gmrts phi_X1: hypergeometric argument on the cut [1,inf)");
    try {
        if (p.c_x == 0.0) {
            cplx f = gauss_2f1(1.0, 1.0 / p.n + 1.0, 1.0 / p.n + 2.0, z);
            return -p.a_x * std::log(1.0 - z) - i * p.a_x * p.n * w / (p.b_x * std::tgamma(p.n + 2.0)) * f;
        }
        cplx f = gauss_2f1(-p.c_x, 1.0 / p.n, 1.0 / p.n + 1.0, z);
        return p.a_x * std::pow(p.b_x, p.c_x) * std::tgamma(-p.c_x) * (f - 1.0);
    } catch (const BranchCut&) {
        throw OutsideStrip("gmrts phi_X1: hypergeometric argument on the cut [1,inf)");
    }
}

} // namespace

void AljdParams::validate() const {
    require(sigma_x > 0.0, "aljd: sigma_x must be positive");
    require(lambda_x >= 0.0 && lambda_y >= 0.0, "aljd: jump intensities must be nonnegative");
    require(b_x > 0.0 && b_y > 0.0 && eta > 0.0, "aljd: rates and asymmetry must be positive");
    require(b_x * eta > 1.0, "aljd: need b_x * eta > 1 so that phi_X1(-i) exists");
}

void GmrtsParams::validate() const {
    require(a_x > 0.0 && b_x > 0.0 && a_y > 0.0 && b_y > 0.0, "gmrts: shapes and rates must be positive");
    require(c_x >= 0.0 && c_x < 1.0 && c_y >= 0.0 && c_y < 1.0, "gmrts: family parameters in [0,1)");
    require(n >= 0.0, "gmrts: regulation degree must be nonnegative");
    require(std::isfinite(theta), "gmrts: theta must be finite");
}

GmrtsParams GmrtsParams::calibration_profile(double a_x, double b_x, double theta, double a_y) {
    GmrtsParams p{a_x, b_x, 0.5, theta, 2.0, a_y, a_y, 0.5};
    p.validate();
    return p;
}

void validate(const BaseProcess& base) {
    std::visit([](const auto& p) { p.validate(); }, base);
}

cplx log_phi_x1(const BaseProcess& base, cplx u) {
    if (std::holds_alternative<AljdParams>(base)) {
        const auto& p = std::get<AljdParams>(base);
        double im = u.imag();
        if (!(im > -p.b_x * p.eta && im < p.b_x / p.eta))
            throw OutsideStrip("aljd phi_X1: Im u outside (-b_x eta, b_x/eta)");
        const cplx i(0.0, 1.0);
        cplx g = 1.0 / ((1.0 + i * p.eta * u / p.b_x) * (1.0 - i * u / (p.b_x * p.eta)));
        return -0.5 * p.sigma_x * p.sigma_x * u * u + p.lambda_x * (g - 1.0);
    }
    return gmrts_log_phi_x(std::get<GmrtsParams>(base), u);
}

cplx log_phi_y1(const BaseProcess& base, cplx u) {
    if (std::holds_alternative<AljdParams>(base)) {
        const auto& p = std::get<AljdParams>(base);
        cplx arg = 1.0 - cplx(0.0, 1.0) * u / p.b_y;
        if (arg.real() <= 0.0) throw OutsideStrip("aljd phi_Y1: Im u <= -b_y");
        return p.lambda_y * (1.0 / arg - 1.0);
    }
    const auto& p = std::get<GmrtsParams>(base);
    return ts_log_phi(p.a_y, p.b_y, p.c_y, u);
}

cplx phi_x1(const BaseProcess& base, cplx u) { return std::exp(log_phi_x1(base, u)); }
cplx phi_y1(const BaseProcess& base, cplx u) { return std::exp(log_phi_y1(base, u)); }

Moments moments(const BaseProcess& base) {
    if (std::holds_alternative<AljdParams>(base)) {
        const auto& p = std::get<AljdParams>(base);
        double e2 = p.eta * p.eta;
        double jump_var = 2.0 * p.lambda_x * (e2 * e2 - e2 + 1.0) / (p.b_x * p.b_x * e2);
        return {p.lambda_y / p.b_y, 2.0 * p.lambda_y / (p.b_y * p.b_y),
                p.sigma_x * p.sigma_x + jump_var};
    }
    const auto& p = std::get<GmrtsParams>(base);
    double ey = p.a_y * std::tgamma(1.0 - p.c_y) / std::pow(p.b_y, 1.0 - p.c_y);
    double vy = p.a_y * std::tgamma(2.0 - p.c_y) / std::pow(p.b_y, 2.0 - p.c_y);
    double gn1 = std::tgamma(p.n + 1.0);
    double vx = p.a_x / std::pow(p.b_x, 2.0 - p.c_x) *
                (p.b_x * std::tgamma(1.0 - p.c_x) / std::tgamma(p.n + 2.0) +
                 p.theta * p.theta * std::tgamma(2.0 - p.c_x) / ((2.0 * p.n + 1.0) * gn1 * gn1));
    return {ey, vy, vx};
}

Compensators log_compensators(const BaseProcess& base, double rho) {
    const cplx mi(0.0, -1.0);
    cplx lx, ly;
    try {
        lx = log_phi_x1(base, mi);
    } catch (const OutsideStrip&) {
        throw OutsideStrip("log_compensators: phi_X1(-i) outside the strip");
    }
    try {
        ly = log_phi_y1(base, cplx(0.0, -rho));
    } catch (const OutsideStrip&) {
        throw OutsideStrip("log_compensators: phi_Y1(-i rho) outside the strip");
    }
    if (std::abs(lx.imag()) > 1e-9 * std::max(1.0, std::abs(lx)) ||
        std::abs(ly.imag()) > 1e-9 * std::max(1.0, std::abs(ly)))
        throw Error("log_compensators: compensators must be real");
    return {lx.real(), ly.real()};
}

double y_rate(const BaseProcess& base) {
    if (std::holds_alternative<AljdParams>(base)) return std::get<AljdParams>(base).b_y;
    return std::get<GmrtsParams>(base).b_y;
}

} // namespace fsv
