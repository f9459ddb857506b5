#pragma once

#include "fsv/benchmarks.hpp"
#include "fsv/chain.hpp"
#include "fsv/charfn.hpp"
#include "fsv/pricer.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fsv {

enum class ModelFamily { FsvAljd, FsvGmrts, SvAljd, SvGmrts, Heston, BlackScholes };

const char* to_string(ModelFamily f);
ModelFamily family_from_string(const std::string& s);
KernelFamily kernel_from_string(const std::string& s);

struct Bound {
    std::string name;
    double lo = 0.0, hi = 0.0;
    bool fixed = false;
    double fixed_value = 0.0;
};

/// Ordered parameter bounds for one model family. Fixed parameters are
/// honored by every search stage (the GMRTS profile c_x = c_y = 1/2, n = 2,
/// b_y = a_y is structural and lives in the model factory, not the box).
struct ParamBox {
    ModelFamily family = ModelFamily::FsvAljd;
    KernelFamily kernel = KernelFamily::TypeIII;
    std::vector<Bound> bounds;

    int dim() const { return int(bounds.size()); }
    void fix(const std::string& name, double value);
    std::vector<double> clamp(std::vector<double> x) const;
};

/// Default boxes enveloping the plausible calibrated ranges.
ParamBox default_param_box(ModelFamily family, KernelFamily kernel);

struct PricingSetup {
    double spot = 0.0;
    int day_count = 365;
    PricerConfig pricer;
};

/// Model factory from a flat parameter vector ordered as in
/// default_param_box. SV families use the exponential kernel.
FsvModel make_fsv_model(ModelFamily family, KernelFamily kernel, const std::vector<double>& params);

/// Direct-call model price for any family (FSV/SV via the conditional CF,
/// Heston and Black-Scholes through the same parity integral machinery).
double model_call_price(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
                        double s0, double strike, double maturity_years, const PricerConfig& cfg);

/// Average relative pricing error: sum over kept quotes of
/// |market - model| / market. Throws PricingFailed naming the offending
/// quote. Pass residuals to collect per-quote relative errors.
double arpe(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
            const QuoteSet& quotes, const PricingSetup& setup,
            std::vector<double>* residuals = nullptr, bool parallel_quotes = true);

using Objective = std::function<double(const std::vector<double>&)>;

struct GaConfig {
    int population = 40;
    int generations = 60;
    int tournament = 3;
    int top_k = 3;
    int elites = 2;
    double blend_alpha = 0.5;
    double mutation_prob = 0.10;
    double mutation_scale = 0.10; // gaussian sigma as a fraction of box width
    std::uint64_t seed = 1;
    bool parallel = true;
};

struct GaCandidate {
    std::vector<double> params;
    double value = 0.0;
};

/// Tournament-selection genetic search with blend crossover and gaussian
/// mutation; deterministic under a fixed seed. Returns the top_k candidates,
/// best first.
std::vector<GaCandidate> genetic_search(const Objective& objective, const ParamBox& box,
                                        const GaConfig& cfg);

struct PsConfig {
    double tol = 1e-6;     // terminal step fraction
    double expand = 2.0;
    double shrink = 0.5;
    double initial_step = 0.10; // fraction of box width
    long max_evals = 1000000;
    bool parallel = true;
};

/// Compass pattern search polling +/- step * width along every coordinate;
/// the best value is monotone nonincreasing and the stage stops once the
/// step fraction drops below tol.
std::pair<std::vector<double>, double> pattern_search(const Objective& objective,
                                                      std::vector<double> start,
                                                      const ParamBox& box, const PsConfig& cfg);

struct CalibConfig {
    GaConfig ga;
    PsConfig ps;
    int ps_starts = 3; // pattern-search refinements launched from the GA top-k
    bool fix_m = false;
    double m_fixed = 0.1;
    std::uint64_t seed = 20200711;
};

struct CalibrationResult {
    ModelFamily family = ModelFamily::FsvAljd;
    KernelFamily kernel = KernelFamily::TypeIII;
    std::vector<std::pair<std::string, double>> params;
    double arpe_sum = 0.0;     // objective value, sum of relative errors
    double arpe_percent = 0.0; // mean relative error in percent
    long n_objective_evals = 0;
    double wall_time_ga_s = 0.0;
    double wall_time_ps_s = 0.0;
    std::uint64_t seed = 0;
    int n_quotes = 0;
    std::vector<double> residuals;
};

/// Two-stage calibration: genetic search, then pattern-search refinement of
/// the leading candidates. Infeasible evaluations (strip violations, pricing
/// failures) receive a 1e6 penalty instead of aborting the search.
CalibrationResult calibrate(ModelFamily family, KernelFamily kernel, const QuoteSet& quotes,
                            const PricingSetup& setup, const CalibConfig& cfg = {});

std::string calibration_result_json(const CalibrationResult& r);

} // namespace fsv
