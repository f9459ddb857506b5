#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fsv {

using cplx = std::complex<double>;

struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_panels = 2000;   // budget of 15-point panel evaluations
    double u_max_cap = 2000; // hard truncation cap for semi-infinite integrals
};

/// Diagnostics filled by the integrators.
struct QuadStats {
    double abs_err_est = 0.0;
    double truncated_at = 0.0; // semi-infinite only
    int panels = 0;
};

/// Adaptive integral of f over [0, inf) for integrands with a decaying
/// envelope. Gauss-Legendre 15 panels with dyadic subdivision; panel widths
/// grow geometrically (x1.5) from zero, and the integral is truncated once
/// three consecutive segments contribute less than abs_tol.
///
/// Throws NoDecay if the cap u_max_cap is reached before the envelope decays,
/// PanelBudgetExceeded if max_panels is exhausted.
double integrate_semi_infinite(const std::function<double(double)>& f, const QuadConfig& cfg,
                               QuadStats* stats = nullptr);

/// Same contract, for m integrands sharing every quadrature node. f must
/// write m values into its second argument.
std::vector<double> integrate_semi_infinite_multi(const std::function<void(double, double*)>& f, int m,
                                                  const QuadConfig& cfg, QuadStats* stats = nullptr);

/// Adaptive complex-valued integral over the finite interval [a, b].
cplx integrate_finite(const std::function<cplx(double)>& f, double a, double b, const QuadConfig& cfg,
                      QuadStats* stats = nullptr);

/// Real-valued convenience overload.
double integrate_finite_real(const std::function<double(double)>& f, double a, double b,
                             const QuadConfig& cfg, QuadStats* stats = nullptr);

} // namespace fsv
