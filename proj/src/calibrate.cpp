#include "fsv/calibrate.hpp"
#include "fsv/errors.hpp"
#include "fsv/parallel.hpp"
#include "fsv/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>

namespace fsv {

namespace {

int index_of(const ParamBox& box, const std::string& name) {
    for (int i = 0; i < box.dim(); ++i)
        if (box.bounds[std::size_t(i)].name == name) return i;
    throw Error("param box: unknown parameter " + name);
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

const char* to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::FsvAljd: return "fsv-aljd";
        case ModelFamily::FsvGmrts: return "fsv-gmrts";
        case ModelFamily::SvAljd: return "sv-aljd";
        case ModelFamily::SvGmrts: return "sv-gmrts";
        case ModelFamily::Heston: return "heston";
        case ModelFamily::BlackScholes: return "black-scholes";
    }
    return "?";
}

ModelFamily family_from_string(const std::string& s) {
    if (s == "fsv-aljd") return ModelFamily::FsvAljd;
    if (s == "fsv-gmrts") return ModelFamily::FsvGmrts;
    if (s == "sv-aljd") return ModelFamily::SvAljd;
    if (s == "sv-gmrts") return ModelFamily::SvGmrts;
    if (s == "heston") return ModelFamily::Heston;
    if (s == "black-scholes" || s == "bs") return ModelFamily::BlackScholes;
    throw Error("unknown model family: " + s);
}

KernelFamily kernel_from_string(const std::string& s) {
    if (s == "type1" || s == "i") return KernelFamily::TypeI;
    if (s == "type2" || s == "ii") return KernelFamily::TypeII;
    if (s == "type3" || s == "iii") return KernelFamily::TypeIII;
    if (s == "exponential" || s == "exp") return KernelFamily::Exponential;
    throw Error("unknown kernel family: " + s);
}

void ParamBox::fix(const std::string& name, double value) {
    Bound& b = bounds[std::size_t(index_of(*this, name))];
    b.fixed = true;
    b.fixed_value = value;
}

std::vector<double> ParamBox::clamp(std::vector<double> x) const {
    for (int i = 0; i < dim(); ++i) {
        const Bound& b = bounds[std::size_t(i)];
        if (b.fixed)
            x[std::size_t(i)] = b.fixed_value;
        else
            x[std::size_t(i)] = std::min(b.hi, std::max(b.lo, x[std::size_t(i)]));
    }
    return x;
}

ParamBox default_param_box(ModelFamily family, KernelFamily kernel) {
    ParamBox box;
    box.family = family;
    box.kernel = kernel;
    auto add = [&](const char* n, double lo, double hi) { box.bounds.push_back({n, lo, hi, false, 0.0}); };
    const bool fractional = kernel != KernelFamily::Exponential;
    switch (family) {
        case ModelFamily::FsvAljd:
        case ModelFamily::SvAljd:
            add("sigma_x", 1e-3, 5.0);
            add("lambda_x", 1e-4, 20.0);
            add("b_x", 0.05, 100.0);
            add("eta", 0.05, 20.0);
            add("lambda_y", 1e-4, 20.0);
            add("b_y", 0.05, 100.0);
            add("kappa", 0.1, 20.0);
            if (fractional) add("d", 0.505, 0.995);
            add("rho", -5.0, 5.0); // admissibility against b_y is the strip validator's job
            add("a0", 1e-3, 2.0);
            add("m", 0.0, 2.0);
            break;
        case ModelFamily::FsvGmrts:
        case ModelFamily::SvGmrts:
            add("a_x", 0.01, 100.0);
            add("b_x", 0.05, 100.0);
            add("theta", -5.0, 5.0);
            add("a_y", 0.01, 100.0);
            add("kappa", 0.1, 20.0);
            if (fractional) add("d", 0.505, 0.995);
            add("rho", -5.0, 5.0);
            add("a0", 1e-3, 2.0);
            add("m", 0.0, 2.0);
            box.fix("m", 0.1); // eight free parameters in the tempered-stable profile
            break;
        case ModelFamily::Heston:
            add("kappa", 0.1, 20.0);
            add("rho", -1.0, 1.0);
            add("sigma", 0.01, 20.0);
            add("v0", 1e-3, 2.0);
            add("m", 1e-3, 2.0);
            break;
        case ModelFamily::BlackScholes:
            add("sigma", 0.01, 3.0);
            break;
    }
    return box;
}

FsvModel make_fsv_model(ModelFamily family, KernelFamily kernel, const std::vector<double>& v) {
    const bool fractional = kernel != KernelFamily::Exponential;
    switch (family) {
        case ModelFamily::FsvAljd:
        case ModelFamily::SvAljd: {
            std::size_t i = 0;
            AljdParams p{};
            p.sigma_x = v.at(i++);
            p.lambda_x = v.at(i++);
            p.b_x = v.at(i++);
            p.eta = v.at(i++);
            p.lambda_y = v.at(i++);
            p.b_y = v.at(i++);
            double kappa = v.at(i++);
            double d = fractional ? v.at(i++) : 1.0;
            double rho = v.at(i++);
            double a0 = v.at(i++);
            double m = v.at(i++);
            return FsvModel(p, KernelSpec(kernel, kappa, d), a0, m, rho);
        }
        case ModelFamily::FsvGmrts:
        case ModelFamily::SvGmrts: {
            std::size_t i = 0;
            double a_x = v.at(i++), b_x = v.at(i++), theta = v.at(i++), a_y = v.at(i++);
            double kappa = v.at(i++);
            double d = fractional ? v.at(i++) : 1.0;
            double rho = v.at(i++);
            double a0 = v.at(i++);
            double m = v.at(i++);
            GmrtsParams p = GmrtsParams::calibration_profile(a_x, b_x, theta, a_y);
            return FsvModel(p, KernelSpec(kernel, kappa, d), a0, m, rho);
        }
        default: throw Error("make_fsv_model: not an FSV/SV family");
    }
}

namespace {

// conditional CF of log S_T for any family; the FSV model object is shared
// with the closure so a whole strike ladder reuses one construction
CharFn model_char_fn(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
                     double s0, double maturity_years, const QuadConfig& quad) {
    switch (family) {
        case ModelFamily::Heston: {
            HestonParams p{params.at(0), params.at(1), params.at(2), params.at(3), params.at(4)};
            p.validate();
            return [p, s0, maturity_years](cplx u) {
                return std::exp(heston_log_cf(p, s0, maturity_years, u));
            };
        }
        case ModelFamily::BlackScholes: {
            double sigma = params.at(0);
            if (!(sigma > 0.0)) throw Error("black-scholes: sigma must be positive");
            return [sigma, s0, maturity_years](cplx u) {
                return std::exp(black_scholes_log_cf(s0, sigma, maturity_years, u));
            };
        }
        default: {
            auto model = std::make_shared<FsvModel>(make_fsv_model(family, kernel, params));
            CfContext ctx = CfContext::spot(s0, maturity_years);
            return [model, ctx, quad](cplx u) { return conditional_cf(*model, ctx, u, quad); };
        }
    }
}

} // namespace

double model_call_price(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
                        double s0, double strike, double maturity_years, const PricerConfig& cfg) {
    CharFn phi = model_char_fn(family, kernel, params, s0, maturity_years, cfg.quad);
    return price_call_parity_cf(phi, s0, strike, cfg, maturity_years).value;
}

double arpe(ModelFamily family, KernelFamily kernel, const std::vector<double>& params,
            const QuoteSet& quotes, const PricingSetup& setup, std::vector<double>* residuals,
            bool parallel_quotes) {
    // one ladder per maturity: every strike shares the characteristic-function
    // evaluations of the common u-grid
    struct Group {
        int days;
        std::vector<std::size_t> idx;
    };
    std::vector<Group> groups;
    std::vector<const Quote*> kept;
    for (const auto& q : quotes.quotes) {
        if (!q.kept) continue;
        kept.push_back(&q);
        if (groups.empty() || groups.back().days != q.maturity_days)
            groups.push_back({q.maturity_days, {}});
        groups.back().idx.push_back(kept.size() - 1);
    }
    if (kept.empty()) throw Error("arpe: no kept quotes");

    std::vector<double> res(kept.size());
    std::vector<std::string> fail(groups.size());
    auto price_group = [&](std::size_t g) {
        const Group& grp = groups[g];
        double t = double(grp.days) / double(setup.day_count);
        std::vector<double> strikes;
        strikes.reserve(grp.idx.size());
        for (std::size_t i : grp.idx) strikes.push_back(kept[i]->strike);
        CharFn phi = model_char_fn(family, kernel, params, quotes.spot, t, setup.pricer.quad);
        std::vector<PriceResult> prices =
            price_call_parity_ladder_cf(phi, quotes.spot, strikes, setup.pricer, t);
        for (std::size_t j = 0; j < grp.idx.size(); ++j) {
            std::size_t i = grp.idx[j];
            res[i] = std::abs(kept[i]->price - prices[j].value) / kept[i]->price;
        }
    };
    auto describe = [&](std::size_t g, const std::exception& e) {
        std::ostringstream os;
        os << "maturity_days=" << groups[g].days << ": " << e.what();
        return os.str();
    };
    if (!parallel_quotes) {
        // sequential callers (search loops) want the first failure immediately
        for (std::size_t g = 0; g < groups.size(); ++g) {
            try {
                price_group(g);
            } catch (const std::exception& e) {
                throw PricingFailed("arpe: " + describe(g, e));
            }
        }
    } else {
        parallel_for(groups.size(), [&](std::size_t g) {
            try {
                price_group(g);
            } catch (const std::exception& e) {
                fail[g] = describe(g, e);
            }
        });
        for (const auto& f : fail)
            if (!f.empty()) throw PricingFailed("arpe: " + f);
    }
    if (residuals) *residuals = res;
    double sum = 0.0;
    for (double r : res) sum += r;
    return sum;
}

std::vector<GaCandidate> genetic_search(const Objective& objective, const ParamBox& box,
                                        const GaConfig& cfg) {
    if (cfg.population < 2 || cfg.generations < 0) throw Error("genetic_search: bad configuration");
    const int n = box.dim();
    PathRng rng(cfg.seed, 0);

    auto random_point = [&] {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const Bound& b = box.bounds[std::size_t(i)];
            x[std::size_t(i)] = b.fixed ? b.fixed_value : b.lo + (b.hi - b.lo) * rng.uniform();
        }
        return x;
    };

    std::vector<GaCandidate> pop(std::size_t(cfg.population));
    for (auto& c : pop) c.params = random_point();

    auto evaluate = [&](std::vector<GaCandidate>& group) {
        parallel_for(
            group.size(), [&](std::size_t i) { group[i].value = objective(group[i].params); },
            cfg.parallel ? 0 : 1);
    };
    evaluate(pop);
    auto by_value = [](const GaCandidate& a, const GaCandidate& b) { return a.value < b.value; };
    std::sort(pop.begin(), pop.end(), by_value);

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<GaCandidate> next;
        next.reserve(pop.size());
        for (int e = 0; e < std::min(cfg.elites, int(pop.size())); ++e) next.push_back(pop[std::size_t(e)]);

        auto tournament_pick = [&]() -> const std::vector<double>& {
            std::size_t best = std::size_t(rng.next_u64() % std::uint64_t(pop.size()));
            for (int k = 1; k < cfg.tournament; ++k) {
                std::size_t cand = std::size_t(rng.next_u64() % std::uint64_t(pop.size()));
                if (pop[cand].value < pop[best].value) best = cand;
            }
            return pop[best].params;
        };

        while (int(next.size()) < cfg.population) {
            const auto& pa = tournament_pick();
            const auto& pb = tournament_pick();
            GaCandidate child;
            child.params.resize(std::size_t(n));
            for (int i = 0; i < n; ++i) {
                const Bound& b = box.bounds[std::size_t(i)];
                double lam = -cfg.blend_alpha + (1.0 + 2.0 * cfg.blend_alpha) * rng.uniform();
                double g = pa[std::size_t(i)] + lam * (pb[std::size_t(i)] - pa[std::size_t(i)]);
                if (rng.uniform() < cfg.mutation_prob)
                    g += cfg.mutation_scale * (b.hi - b.lo) * rng.normal();
                child.params[std::size_t(i)] = g;
            }
            child.params = box.clamp(std::move(child.params));
            next.push_back(std::move(child));
        }
        // elites keep their cached values; only offspring need evaluation
        std::vector<GaCandidate> fresh(next.begin() + std::min(cfg.elites, int(next.size())), next.end());
        evaluate(fresh);
        std::copy(fresh.begin(), fresh.end(), next.begin() + std::min(cfg.elites, int(next.size())));
        pop = std::move(next);
        std::sort(pop.begin(), pop.end(), by_value);
    }

    int k = std::max(1, std::min(cfg.top_k, int(pop.size())));
    return {pop.begin(), pop.begin() + k};
}

std::pair<std::vector<double>, double> pattern_search(const Objective& objective,
                                                      std::vector<double> start, const ParamBox& box,
                                                      const PsConfig& cfg) {
    const int n = box.dim();
    start = box.clamp(std::move(start));
    double best = objective(start);
    long evals = 1;
    double step = cfg.initial_step;

    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
        if (!box.bounds[std::size_t(i)].fixed) free_idx.push_back(i);
    if (free_idx.empty()) return {start, best};

    while (step >= cfg.tol && evals < cfg.max_evals) {
        const std::size_t m = 2 * free_idx.size();
        std::vector<std::vector<double>> polls(m);
        std::vector<double> vals(m);
        for (std::size_t j = 0; j < m; ++j) {
            int i = free_idx[j / 2];
            double dir = (j % 2 == 0) ? 1.0 : -1.0;
            const Bound& b = box.bounds[std::size_t(i)];
            auto x = start;
            x[std::size_t(i)] += dir * step * (b.hi - b.lo);
            polls[j] = box.clamp(std::move(x));
        }
        parallel_for(
            m, [&](std::size_t j) { vals[j] = objective(polls[j]); }, cfg.parallel ? 0 : 1);
        evals += long(m);

        std::size_t winner = m;
        for (std::size_t j = 0; j < m; ++j)
            if (vals[j] < best && (winner == m || vals[j] < vals[winner])) winner = j;
        if (winner != m) {
            start = polls[winner];
            best = vals[winner];
            step = std::min(0.5, step * cfg.expand);
        } else {
            step *= cfg.shrink;
        }
    }
    return {start, best};
}

CalibrationResult calibrate(ModelFamily family, KernelFamily kernel, const QuoteSet& quotes,
                            const PricingSetup& setup, const CalibConfig& cfg) {
    ParamBox box = default_param_box(family, kernel);
    if (cfg.fix_m) box.fix("m", cfg.m_fixed);

    std::atomic<long> evals{0};
    Objective objective = [&](const std::vector<double>& x) {
        evals.fetch_add(1, std::memory_order_relaxed);
        try {
            return arpe(family, kernel, x, quotes, setup, nullptr, false);
        } catch (const std::exception&) {
            return 1e6; // infeasible point: penalize, keep the population alive
        }
    };

    GaConfig ga = cfg.ga;
    ga.seed = cfg.seed;

    auto t_ga = std::chrono::steady_clock::now();
    std::vector<GaCandidate> candidates = genetic_search(objective, box, ga);
    double wall_ga = elapsed_s(t_ga);

    auto t_ps = std::chrono::steady_clock::now();
    std::vector<double> best = candidates.front().params;
    double best_val = candidates.front().value;
    int starts = std::max(1, std::min(cfg.ps_starts, int(candidates.size())));
    for (int s = 0; s < starts; ++s) {
        auto [x, v] = pattern_search(objective, candidates[std::size_t(s)].params, box, cfg.ps);
        if (v < best_val) {
            best_val = v;
            best = x;
        }
    }
    // step-reset polish: fresh compass sweeps from the winner escape the
    // coordinate-aligned stalls a fully shrunk step leaves behind
    PsConfig polish = cfg.ps;
    polish.initial_step = 0.02;
    for (int round = 0; round < 3; ++round) {
        auto [x, v] = pattern_search(objective, best, box, polish);
        if (!(v < best_val * (1.0 - 1e-9))) break;
        best_val = v;
        best = std::move(x);
    }
    double wall_ps = elapsed_s(t_ps);

    CalibrationResult r;
    r.family = family;
    r.kernel = kernel;
    for (int i = 0; i < box.dim(); ++i)
        r.params.emplace_back(box.bounds[std::size_t(i)].name, best[std::size_t(i)]);
    r.arpe_sum = arpe(family, kernel, best, quotes, setup, &r.residuals, true);
    r.n_quotes = int(r.residuals.size());
    r.arpe_percent = 100.0 * r.arpe_sum / double(r.n_quotes);
    r.n_objective_evals = evals.load();
    r.wall_time_ga_s = wall_ga;
    r.wall_time_ps_s = wall_ps;
    r.seed = cfg.seed;
    return r;
}

std::string calibration_result_json(const CalibrationResult& r) {
    nlohmann::json j;
    j["family"] = to_string(r.family);
    j["kernel"] = to_string(r.kernel);
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["arpe"] = r.arpe_sum;
    j["arpe_percent"] = r.arpe_percent;
    j["n_objective_evals"] = r.n_objective_evals;
    j["wall_time_ga_s"] = r.wall_time_ga_s;
    j["wall_time_ps_s"] = r.wall_time_ps_s;
    j["seed"] = r.seed;
    j["n_quotes"] = r.n_quotes;
    j["residuals"] = r.residuals;
    return j.dump(2);
}

} // namespace fsv
