#include "fsv/mc.hpp"
#include "fsv/errors.hpp"
#include "fsv/parallel.hpp"
#include "fsv/rng.hpp"

#include <cmath>
#include <ostream>

namespace fsv {

namespace {

McEstimate mean_se(const std::vector<double>& xs) {
    double n = double(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

} // namespace

PathBatch simulate_aljd(const FsvModel& model, double s0, double t, int n_paths,
                        std::uint64_t seed) {
    if (!std::holds_alternative<AljdParams>(model.base))
        throw InvalidBase("simulate_aljd: exact simulation requires the ALJD base");
    if (!(s0 > 0.0) || !(t > 0.0) || n_paths < 1) throw Error("simulate_aljd: bad arguments");
    const auto& p = std::get<AljdParams>(model.base);

    PathBatch batch;
    batch.n_paths = n_paths;
    batch.seed = seed;
    batch.horizon = t;
    batch.spot = s0;
    batch.terminal_log_s.resize(std::size_t(n_paths));
    batch.business_time.resize(std::size_t(n_paths));
    batch.realized_qv.resize(std::size_t(n_paths));

    const double b0t = deterministic_business_time(model, 0.0, t);
    const double log_s0 = std::log(s0);
    const double sigma2 = p.sigma_x * p.sigma_x;
    const double prob_up = 1.0 / (p.eta * p.eta + 1.0);

    parallel_for(std::size_t(n_paths), [&](std::size_t path) {
        PathRng rng(seed, std::uint64_t(path));

        // Y: compound Poisson with Exp(b_y) marks on [0, t]
        int ny = rng.poisson(p.lambda_y * t);
        double y_t = 0.0, tt = b0t, qv_y = 0.0;
        for (int j = 0; j < ny; ++j) {
            double sj = rng.uniform() * t;
            double zj = rng.exponential(p.b_y);
            y_t += zj;
            qv_y += zj * zj;
            tt += zj * eval_H(model.kernel, t - sj);
        }

        // X at the business time: Brownian part plus asymmetric Laplace jumps
        double x = p.sigma_x * std::sqrt(tt) * rng.normal();
        double qv_x = sigma2 * tt;
        int nx = rng.poisson(p.lambda_x * tt);
        for (int k = 0; k < nx; ++k) {
            double jump = rng.uniform() < prob_up ? rng.exponential(p.b_x * p.eta)
                                                  : -rng.exponential(p.b_x / p.eta);
            x += jump;
            qv_x += jump * jump;
        }

        batch.business_time[path] = tt;
        batch.realized_qv[path] = qv_x + model.rho * model.rho * qv_y;
        batch.terminal_log_s[path] = log_s0 + x + model.rho * y_t - tt * model.comp.log_phi_x_mi -
                                     t * model.comp.log_phi_y_mirho;
    });
    return batch;
}

McEstimate mc_price(const PathBatch& batch, const OptionContract& contract) {
    contract.validate();
    std::vector<double> pay(batch.terminal_log_s.size());
    for (std::size_t i = 0; i < pay.size(); ++i)
        pay[i] = payoff(contract, std::exp(batch.terminal_log_s[i]));
    return mean_se(pay);
}

CfEstimate empirical_cf(const PathBatch& batch, double u) {
    std::vector<double> re(batch.terminal_log_s.size()), im(batch.terminal_log_s.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        double a = u * batch.terminal_log_s[i];
        re[i] = std::cos(a);
        im[i] = std::sin(a);
    }
    McEstimate mr = mean_se(re), mi = mean_se(im);
    return {cplx(mr.value, mi.value), mr.std_err, mi.std_err};
}

McEstimate mean_business_time(const PathBatch& batch) { return mean_se(batch.business_time); }
McEstimate mean_realized_qv(const PathBatch& batch) { return mean_se(batch.realized_qv); }

McEstimate mean_terminal_price(const PathBatch& batch) {
    std::vector<double> s(batch.terminal_log_s.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(batch.terminal_log_s[i]);
    return mean_se(s);
}

void dump_paths_csv(const PathBatch& batch, std::ostream& os) {
    os << "path_id,T_t,log_s_T\n";
    for (std::size_t i = 0; i < batch.terminal_log_s.size(); ++i)
        os << i << ',' << batch.business_time[i] << ',' << batch.terminal_log_s[i] << '\n';
}

} // namespace fsv
