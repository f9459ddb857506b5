#pragma once

namespace fsv {

enum class KernelFamily { TypeI, TypeII, TypeIII, Exponential };

const char* to_string(KernelFamily f);

/// Fractional kernel specification: family plus the mean-reversion rate kappa
/// (1/years) and the fraction parameter d. Fractional families require
/// d in (1/2, 1); the exponential limit uses d = 1 exactly. Callers select the
/// Exponential family explicitly rather than relying on d -> 1 behaviour.
struct KernelSpec {
    KernelFamily family;
    double kappa;
    double d;

    KernelSpec(KernelFamily family, double kappa, double d);

    /// Convenience for the exponential (d = 1) limit.
    static KernelSpec exponential(double kappa) { return {KernelFamily::Exponential, kappa, 1.0}; }

    /// Type-III piecewise breakpoint (1-d)/kappa.
    double breakpoint() const;
};

/// Kernel value h(v) at lag v > 0. Type II assembles complex intermediates on
/// the principal branch; the imaginary residue must cancel below 1e-10 and is
/// then discarded. Lags below 1e-12 years raise SingularLag for d < 1.
double eval_h(const KernelSpec& spec, double v);

/// Tail-integrated kernel H(v) = int_0^v h(w) dw.
double eval_H(const KernelSpec& spec, double v);

/// Second integral J(tau) = int_0^tau H(w) dw, nondecreasing in tau.
double eval_J(const KernelSpec& spec, double tau);

/// Long-run mean of the activity rate, m + E[Y1] * lim_t int_0^t h.
double long_run_mean(const KernelSpec& spec, double ey1, double m);

} // namespace fsv
