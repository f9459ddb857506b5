#include "fsv/kernels.hpp"
#include "fsv/complexfn.hpp"
#include "fsv/errors.hpp"

#include <cmath>

namespace fsv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinLag = 1e-12;

// principal-branch power of a negative real base: (-x)^p = x^p e^{i pi p}, x > 0
cplx neg_pow(double x, double p) { return std::exp(p * cplx(std::log(x), kPi)); }

double assemble_real(cplx value, const char* what) {
    double tol = 1e-10 * std::max(1.0, std::abs(value));
    if (!(std::abs(value.imag()) <= tol))
        throw Error(std::string("kernels: imaginary residue did not cancel in ") + what);
    return value.real();
}

double h_type1(double kappa, double d, double v) {
    return std::exp(-kappa * v) * std::pow(v, d - 1.0) / std::tgamma(d);
}

double H_type1(double kappa, double d, double v) {
    if (v == 0.0) return 0.0;
    cplx g = upper_inc_gamma(d, kappa * v);
    return (std::tgamma(d) - g.real()) / (std::pow(kappa, d) * std::tgamma(d));
}

double J_type1(double kappa, double d, double tau) {
    if (tau == 0.0) return 0.0;
    double gd = std::tgamma(d);
    double gdu = upper_inc_gamma(d, kappa * tau).real();
    double gd1u = upper_inc_gamma(d + 1.0, kappa * tau).real();
    double num = kappa * gd * tau - (std::tgamma(d + 1.0) + kappa * tau * gdu - gd1u);
    return num / (std::pow(kappa, d + 1.0) * gd);
}

double h_type2(double kappa, double d, double v) {
    cplx A = neg_pow(kappa, 1.0 - d);
    cplx g = upper_inc_gamma(d, cplx(-kappa * v, 0.0));
    cplx val = (std::pow(v, d - 1.0) + A * std::exp(-kappa * v) * (std::tgamma(d) - g)) / std::tgamma(d);
    return assemble_real(val, "h2");
}

double H_type2(double kappa, double d, double v) {
    if (v == 0.0) return 0.0;
    cplx g = upper_inc_gamma(d + 1.0, cplx(-kappa * v, 0.0));
    cplx num = neg_pow(kappa * v, d) + std::exp(-kappa * v) * (std::tgamma(d + 1.0) - g);
    cplx val = num / (neg_pow(kappa, d) * std::tgamma(d + 1.0));
    return assemble_real(val, "H2");
}

double J_type2(double kappa, double d, double tau) {
    if (tau == 0.0) return 0.0;
    cplx g = upper_inc_gamma(d + 1.0, cplx(-kappa * tau, 0.0));
    cplx num = std::exp(-kappa * tau) * (std::tgamma(d + 2.0) - (d + 1.0) * g);
    cplx val = num / (neg_pow(kappa, d + 1.0) * std::tgamma(d + 2.0));
    return assemble_real(val, "J2");
}

double h_type3(double kappa, double d, double v) {
    double vstar = (1.0 - d) / kappa;
    if (v < vstar) {
        double first = (std::pow(v, d - 1.0) - std::pow(vstar, d - 1.0)) / std::tgamma(d);
        double second = std::pow(kappa, 1.0 - d) / (std::pow(1.0 - d, 2.0 - d) * std::tgamma(d - 1.0));
        return first - second;
    }
    return -std::exp(1.0 - d - kappa * v) / ((1.0 - d) * std::tgamma(d - 1.0)) * std::pow(vstar, d - 1.0);
}

double H_type3(double kappa, double d, double v) {
    if (v == 0.0) return 0.0;
    double vstar = (1.0 - d) / kappa;
    if (v < vstar) return std::pow(v, d) / std::tgamma(d + 1.0);
    return (1.0 - d * std::exp(1.0 - d - kappa * v)) / ((1.0 - d) * std::tgamma(d + 1.0)) * std::pow(vstar, d);
}

double J_type3(double kappa, double d, double tau) {
    if (tau == 0.0) return 0.0;
    double vstar = (1.0 - d) / kappa;
    if (tau < vstar) return std::pow(tau, d + 1.0) / std::tgamma(d + 2.0);
    double num = d * (d + 1.0) * std::exp(1.0 - d - kappa * tau) + kappa * (d + 1.0) * tau - d * (3.0 - d);
    return num / ((1.0 - d) * (1.0 - d) * std::tgamma(d + 2.0)) * std::pow(vstar, d + 1.0);
}

double H_exponential(double kappa, double v) { return -std::expm1(-kappa * v) / kappa; }

double J_exponential(double kappa, double tau) {
    double x = kappa * tau;
    if (x < 1e-4) return tau * tau * (0.5 - x / 6.0 + x * x / 24.0); // expm1 cancellation guard
    return (x - 1.0 + std::exp(-x)) / (kappa * kappa);
}

} // namespace

const char* to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::TypeI: return "type1";
        case KernelFamily::TypeII: return "type2";
        case KernelFamily::TypeIII: return "type3";
        case KernelFamily::Exponential: return "exponential";
    }
    return "?";
}

KernelSpec::KernelSpec(KernelFamily family_, double kappa_, double d_)
    : family(family_), kappa(kappa_), d(d_) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw Error("KernelSpec: kappa must be positive");
    if (family == KernelFamily::Exponential) {
        if (d != 1.0) throw Error("KernelSpec: exponential family requires d = 1");
    } else {
        if (!(d > 0.5 && d < 1.0)) throw Error("KernelSpec: fractional families require d in (1/2, 1)");
    }
}

double KernelSpec::breakpoint() const { return (1.0 - d) / kappa; }

double eval_h(const KernelSpec& spec, double v) {
    if (spec.family != KernelFamily::Exponential && v < kMinLag)
        throw SingularLag("eval_h: kernel is singular at zero lag");
    if (v < 0.0) throw Error("eval_h: negative lag");
    switch (spec.family) {
        case KernelFamily::TypeI: return h_type1(spec.kappa, spec.d, v);
        case KernelFamily::TypeII: return h_type2(spec.kappa, spec.d, v);
        case KernelFamily::TypeIII: return h_type3(spec.kappa, spec.d, v);
        case KernelFamily::Exponential: return std::exp(-spec.kappa * v);
    }
    throw Error("eval_h: bad family");
}

double eval_H(const KernelSpec& spec, double v) {
    if (v < 0.0) throw Error("eval_H: negative lag");
    switch (spec.family) {
        case KernelFamily::TypeI: return H_type1(spec.kappa, spec.d, v);
        case KernelFamily::TypeII: return H_type2(spec.kappa, spec.d, v);
        case KernelFamily::TypeIII: return H_type3(spec.kappa, spec.d, v);
        case KernelFamily::Exponential: return H_exponential(spec.kappa, v);
    }
    throw Error("eval_H: bad family");
}

double eval_J(const KernelSpec& spec, double tau) {
    if (tau < 0.0) throw Error("eval_J: negative horizon");
    switch (spec.family) {
        case KernelFamily::TypeI: return J_type1(spec.kappa, spec.d, tau);
        case KernelFamily::TypeII: return J_type2(spec.kappa, spec.d, tau);
        case KernelFamily::TypeIII: return J_type3(spec.kappa, spec.d, tau);
        case KernelFamily::Exponential: return J_exponential(spec.kappa, tau);
    }
    throw Error("eval_J: bad family");
}

double long_run_mean(const KernelSpec& spec, double ey1, double m) {
    if (ey1 < 0.0 || m < 0.0) throw Error("long_run_mean: negative inputs");
    switch (spec.family) {
        case KernelFamily::TypeI: return m + ey1 / std::pow(spec.kappa, spec.d);
        case KernelFamily::TypeII: return m; // d < 1 enforced for this family
        case KernelFamily::TypeIII: {
            double vstar = spec.breakpoint();
            return m + ey1 * std::pow(vstar, spec.d) / ((1.0 - spec.d) * std::tgamma(spec.d + 1.0));
        }
        case KernelFamily::Exponential: return m + ey1 / spec.kappa;
    }
    throw Error("long_run_mean: bad family");
}

} // namespace fsv
