#pragma once

#include <complex>

namespace fsv {

using cplx = std::complex<double>;

/// Log-gamma on the principal branch (Lanczos approximation, reflection for
/// Re z < 0.5). Accurate to ~1e-14 relative away from the poles.
cplx log_gamma(cplx z);

/// Gamma function for complex argument.
cplx gamma_fn(cplx z);

/// Gauss hypergeometric function 2F1(a,b;c;z) on the principal branch with
/// cut along [1,inf).
///
/// Evaluation: power series for small |z|, Pfaff/Euler mappings for moderate
/// arguments, the 1/z connection formula for large |z|, and an adaptive
/// Euler-integral fallback when a-b (or c-a-b) is an integer and the
/// connection coefficients degenerate.
///
/// Throws PoleAtC when c is a non-positive integer, BranchCut when z lies on
/// [1,inf), NonConvergence when no evaluation route reaches the tolerance.
cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z, double rel_tol = 1e-12);

/// Upper incomplete gamma Gamma(d, z) for real order d > 0 and complex z on
/// the principal branch. Series for small/left-half-plane arguments, Lentz
/// continued fraction for large arguments in the right half plane, asymptotic
/// expansion otherwise.
cplx upper_inc_gamma(double d, cplx z, double rel_tol = 1e-12);

/// Dilogarithm Li2(z), principal branch with cut along [1,inf).
/// z = 1 is allowed (branch point, value pi^2/6); real z > 1 throws BranchCut.
cplx dilog(cplx z);

} // namespace fsv
