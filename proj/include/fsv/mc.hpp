#pragma once

#include "fsv/charfn.hpp"
#include "fsv/pricer.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fsv {

/// Batch of exactly simulated terminal states.
struct PathBatch {
    int n_paths = 0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    double spot = 0.0;
    std::vector<double> terminal_log_s;
    std::vector<double> business_time; // T_t per path
    std::vector<double> realized_qv;   // quadratic variation of log S per path
};

/// Exact simulation of the ALJD-driven model: compound-Poisson Y with
/// exponential marks drives the activity rate through H, the time-changed X
/// is drawn conditionally on the business time. No discretization error.
/// Throws InvalidBase for a GMRTS base.
PathBatch simulate_aljd(const FsvModel& model, double s0, double t, int n_paths,
                        std::uint64_t seed);

struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

/// Sample mean and standard error of the contract payoff over the batch.
McEstimate mc_price(const PathBatch& batch, const OptionContract& contract);

struct CfEstimate {
    cplx value;
    double se_re = 0.0;
    double se_im = 0.0;
};

/// Empirical characteristic function (1/n) sum exp(i u log S_T).
CfEstimate empirical_cf(const PathBatch& batch, double u);

McEstimate mean_business_time(const PathBatch& batch);
McEstimate mean_realized_qv(const PathBatch& batch);
McEstimate mean_terminal_price(const PathBatch& batch);

/// CSV dump (path_id, T_t, log_s_T).
void dump_paths_csv(const PathBatch& batch, std::ostream& os);

} // namespace fsv
