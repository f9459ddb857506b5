#pragma once

#include "fsv/kernels.hpp"
#include "fsv/levy.hpp"
#include "fsv/quadrature.hpp"

namespace fsv {

/// The full pricing model: base Levy pair, fractional kernel, initial
/// activity A0, auxiliary mean level m, and the jump-leverage rho.
/// Construction validates the strips (phi_X1(-i), phi_Y1(-i rho)) and caches
/// the moments and compensators.
struct FsvModel {
    BaseProcess base;
    KernelSpec kernel;
    double a0;
    double m;
    double rho;

    Moments mom;
    Compensators comp;

    FsvModel(BaseProcess base, KernelSpec kernel, double a0, double m, double rho);
};

/// Evaluation context for the conditional characteristic function of
/// log S_t given time t0 < t. For t0 = 0 the deterministic business-time
/// leg B(0,t) is used and vs is ignored; for t0 > 0 the variance-swap value
/// vs = V_S(t0, t) is required state.
struct CfContext {
    double t0 = 0.0;
    double t = 0.0;
    double log_s_t0 = 0.0;
    double vs = 0.0;

    static CfContext spot(double s0, double t);
    static CfContext at(double t0, double t, double s_t0, double vs);
};

/// The phi notations shared by the type-III closed forms.
struct PhiHelpers {
    cplx phi;  // i log phi_X1(u) + u log phi_X1(-i)
    cplx phi1; // b_Y - i rho u
    cplx phi2; // i phi / Gamma(d+1)
    cplx phi3;
    cplx phi4;
};

PhiHelpers helpers(const FsvModel& model, cplx u);

enum class SRoute { Auto, ClosedForm, Numeric };

/// s-integral of Eq-type log phi_Y1(rho u - H(v) phi(u)) over v in [0, tau],
/// by adaptive quadrature. The phi_Y1 argument is strip-checked at every node.
cplx s_integral_numeric(const FsvModel& model, double tau, cplx u, const QuadConfig& cfg = {});

/// Closed form of the same integral for the type-III kernel (ALJD and both
/// GMRTS subfamilies, both tau branches). Throws BranchCut when a
/// hypergeometric/dilogarithm argument lands on its cut, which signals an
/// inadmissible parameter combination rather than a numerical defect.
cplx s_integral_closed_type3(const FsvModel& model, double tau, cplx u);

/// Conditional characteristic function phi_{log S_t | t0}(u).
cplx conditional_cf(const FsvModel& model, const CfContext& ctx, cplx u, const QuadConfig& cfg = {},
                    SRoute route = SRoute::Auto);

/// The general variance-swap-driven form regardless of t0 (the t0 = 0 route
/// normally substitutes B(0,t); this entry point exists for consistency
/// checks and revaluation).
cplx conditional_cf_vs_form(const FsvModel& model, const CfContext& ctx, cplx u,
                            const QuadConfig& cfg = {}, SRoute route = SRoute::Auto);

/// B(t0, t) = (A0 - m)(e^{-kappa t0} - e^{-kappa t})/kappa + m (t - t0).
double deterministic_business_time(const FsvModel& model, double t0, double t);

/// Model-implied variance swap V_S(0,t) = (B(0,t) + J(t) E[Y1]) Var[X1]
/// + rho^2 t Var[Y1].
double model_variance_swap(const FsvModel& model, double t);

namespace detail {
// branch pieces of the type-III closed form, exposed for continuity tests
cplx type3_head(const FsvModel& model, const PhiHelpers& h, double sp);
cplx type3_tail(const FsvModel& model, const PhiHelpers& h, double tau);
} // namespace detail

} // namespace fsv
