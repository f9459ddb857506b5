// fsvq: pricing, hedging, calibration and validation front end.
//
// Subcommands: price, calibrate, surface, simulate, filter, validate.
// Model and numerical settings come from a JSON config file; command-line
// flags override file values. FSV_QUANT_THREADS caps worker threads.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fsv/calibrate.hpp"
#include "fsv/errors.hpp"
#include "fsv/chain.hpp"
#include "fsv/hedger.hpp"
#include "fsv/mc.hpp"
#include "fsv/pricer.hpp"

#include <fstream>
#include <iostream>

using nlohmann::json;

namespace {

struct RunConfig {
    fsv::ModelFamily family = fsv::ModelFamily::FsvAljd;
    fsv::KernelFamily kernel = fsv::KernelFamily::TypeIII;
    std::map<std::string, double> params;
    double spot = 0.0;
    int day_count = 365;
    double discount_rate = 0.0;
    fsv::QuadConfig quad;
    int mc_paths = 200000;
    std::uint64_t mc_seed = 20200711;
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fsv::Error("cannot open config " + path);
    json j;
    in >> j;
    RunConfig cfg;
    if (j.contains("family")) cfg.family = fsv::family_from_string(j["family"].get<std::string>());
    if (j.contains("kernel")) cfg.kernel = fsv::kernel_from_string(j["kernel"].get<std::string>());
    if (j.contains("params"))
        for (auto& [k, v] : j["params"].items()) cfg.params[k] = v.get<double>();
    cfg.spot = j.value("spot", 0.0);
    cfg.day_count = j.value("day_count", 365);
    cfg.discount_rate = j.value("discount_rate", 0.0);
    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        cfg.quad.rel_tol = q.value("rel_tol", cfg.quad.rel_tol);
        cfg.quad.abs_tol = q.value("abs_tol", cfg.quad.abs_tol);
        cfg.quad.max_panels = q.value("max_panels", cfg.quad.max_panels);
        cfg.quad.u_max_cap = q.value("u_max_cap", cfg.quad.u_max_cap);
    }
    if (j.contains("mc")) {
        cfg.mc_paths = j["mc"].value("n_paths", cfg.mc_paths);
        cfg.mc_seed = j["mc"].value("seed", cfg.mc_seed);
    }
    return cfg;
}

std::vector<double> param_vector(const RunConfig& cfg) {
    fsv::ParamBox box = fsv::default_param_box(cfg.family, cfg.kernel);
    std::vector<double> v;
    for (const auto& b : box.bounds) {
        auto it = cfg.params.find(b.name);
        if (it == cfg.params.end()) {
            if (b.fixed) {
                v.push_back(b.fixed_value);
                continue;
            }
            throw fsv::Error("config: missing parameter " + b.name);
        }
        v.push_back(it->second);
    }
    return v;
}

fsv::FsvModel model_from(const RunConfig& cfg) {
    if (cfg.family == fsv::ModelFamily::Heston || cfg.family == fsv::ModelFamily::BlackScholes)
        throw fsv::Error("this command needs an FSV/SV model family");
    return fsv::make_fsv_model(cfg.family, cfg.kernel, param_vector(cfg));
}

fsv::PricerConfig pricer_config(const RunConfig& cfg) {
    fsv::PricerConfig pc;
    pc.quad = cfg.quad;
    pc.discount_rate = cfg.discount_rate;
    return pc;
}

json price_result_json(const fsv::PriceResult& r) {
    return json{{"value", r.value},
                {"integral_abs_err_est", r.integral_abs_err_est},
                {"u_truncation", r.u_truncation},
                {"clipped", r.clipped}};
}

struct PriceArgs {
    std::string style = "direct";
    double strike = 0.0;
    int t_days = 0;
    double p1 = 1.0, p2 = 1.0;
    std::string conversion = "spot";
    bool put = false;
    bool greeks = false;
    std::string chain_csv, spot_json;
};

int run_price(const RunConfig& cfg, const PriceArgs& a) {
    fsv::FsvModel model = model_from(cfg);
    fsv::PricerConfig pc = pricer_config(cfg);
    json out;

    if (!a.chain_csv.empty()) {
        fsv::QuoteSet qs = fsv::load_chain(a.chain_csv, a.spot_json);
        fsv::MarketState state{0.0, qs.spot, 0.0};
        json rows = json::array();
        for (const auto& q : qs.quotes) {
            fsv::OptionContract c;
            c.strike = q.strike;
            c.maturity = double(q.maturity_days) / double(cfg.day_count);
            fsv::PriceResult r = fsv::price_call_parity(model, state, c, pc);
            rows.push_back({{"strike", q.strike},
                            {"maturity_days", q.maturity_days},
                            {"market", q.price},
                            {"model", r.value}});
        }
        out["spot"] = qs.spot;
        out["rows"] = rows;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (!(cfg.spot > 0.0)) throw fsv::Error("config: positive spot required");
    fsv::MarketState state{0.0, cfg.spot, 0.0};
    fsv::OptionContract c;
    c.strike = a.strike;
    c.maturity = double(a.t_days) / double(cfg.day_count);
    c.p1 = a.p1;
    c.p2 = a.p2;
    c.conversion_rate = a.conversion == "spot" ? cfg.spot : std::stod(a.conversion);
    if (a.style == "direct") {
        c.style = fsv::OptionStyle::DirectCall;
        out = price_result_json(fsv::price_call_parity(model, state, c, pc));
    } else {
        c.style = a.style == "ip" ? fsv::OptionStyle::InversePower
                                  : fsv::OptionStyle::QuantoInversePower;
        c.is_call = !a.put;
        fsv::PriceResult r = a.put ? fsv::price_qip_put(model, state, c, pc)
                                   : fsv::price_qip_call(model, state, c, pc);
        out = price_result_json(r);
        if (a.greeks) {
            fsv::MarketState at{1e-9, cfg.spot, 0.0}; // spot-state hedge report
            at.vs = fsv::model_variance_swap(model, c.maturity);
            fsv::HedgeReport rep = fsv::greeks(model, at, c, pc);
            out["greeks"] = json{{"theta_term", rep.theta_term},
                                 {"delta", rep.delta},
                                 {"gamma", rep.gamma},
                                 {"vs_vega", rep.vs_vega}};
        }
    }
    out["style"] = a.style;
    out["strike"] = c.strike;
    out["t_days"] = a.t_days;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_validate(const RunConfig& cfg, bool quick) {
    fsv::FsvModel model = model_from(cfg);
    if (!(cfg.spot > 0.0)) throw fsv::Error("config: positive spot required");
    bool all_ok = true;
    auto report = [&](const char* name, bool ok, double measure) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (measure " << measure << ")\n";
    };
    const double t = 47.0 / double(cfg.day_count);

    // kernel coherence: closed H against quadrature of h
    {
        double max_rel = 0.0;
        fsv::QuadConfig tight;
        tight.rel_tol = 1e-12;
        for (int i = 1; i <= 20; ++i) {
            double v = 1.5 * double(i) / 20.0;
            double closed = fsv::eval_H(model.kernel, v);
            double quad = fsv::integrate_finite_real(
                [&](double w) { return fsv::eval_h(model.kernel, std::max(w, 1e-11)); }, 1e-11, v,
                tight);
            max_rel = std::max(max_rel, std::abs(closed - quad) / std::max(closed, 1e-12));
        }
        report("kernel_H_vs_quadrature", max_rel < 1e-5, max_rel);
    }

    // CF invariants on the configured model
    {
        fsv::CfContext ctx = fsv::CfContext::spot(cfg.spot, t);
        double e0 = std::abs(fsv::conditional_cf(model, ctx, 0.0, cfg.quad) - 1.0);
        double em =
            std::abs(fsv::conditional_cf(model, ctx, fsv::cplx(0.0, -1.0), cfg.quad) - cfg.spot) /
            cfg.spot;
        double hmax = 0.0, bmax = 0.0;
        for (double u : {0.7, 3.0, 11.0}) {
            fsv::cplx plus = fsv::conditional_cf(model, ctx, u, cfg.quad);
            fsv::cplx minus = fsv::conditional_cf(model, ctx, -u, cfg.quad);
            hmax = std::max(hmax, std::abs(minus - std::conj(plus)));
            bmax = std::max(bmax, std::abs(plus) - 1.0);
        }
        report("cf_unit_at_zero", e0 < 1e-10, e0);
        report("cf_martingale_at_minus_i", em < 1e-9, em);
        report("cf_hermitian", hmax < 1e-10, hmax);
        report("cf_modulus_bound", bmax < 1e-10, bmax);
    }

    // type-III closed form against numeric quadrature
    if (model.kernel.family == fsv::KernelFamily::TypeIII) {
        fsv::QuadConfig tight;
        tight.rel_tol = 1e-12;
        double max_rel = 0.0;
        for (double tau : {0.5 * model.kernel.breakpoint(), t, 0.6}) {
            for (double u : {0.5, 5.0, 25.0}) {
                fsv::cplx a = fsv::s_integral_closed_type3(model, tau, u);
                fsv::cplx b = fsv::s_integral_numeric(model, tau, u, tight);
                max_rel = std::max(max_rel, std::abs(a - b) / std::max(std::abs(b), 1e-300));
            }
        }
        report("type3_closed_vs_quadrature", max_rel < 1e-8, max_rel);
    }

    // Monte Carlo cross-checks (exact simulation exists for the ALJD base)
    if (std::holds_alternative<fsv::AljdParams>(model.base)) {
        int n = quick ? 20000 : cfg.mc_paths;
        fsv::PathBatch batch = fsv::simulate_aljd(model, cfg.spot, t, n, cfg.mc_seed);
        fsv::CfContext ctx = fsv::CfContext::spot(cfg.spot, t);
        double zmax = 0.0;
        for (double u : {1.0, 3.0, 7.0}) {
            fsv::CfEstimate emp = fsv::empirical_cf(batch, u);
            fsv::cplx want = fsv::conditional_cf(model, ctx, u, cfg.quad);
            zmax = std::max(zmax, std::abs(emp.value.real() - want.real()) / emp.se_re);
            zmax = std::max(zmax, std::abs(emp.value.imag() - want.imag()) / emp.se_im);
        }
        fsv::McEstimate tt = fsv::mean_business_time(batch);
        double want_tt = fsv::deterministic_business_time(model, 0.0, t) +
                         fsv::eval_J(model.kernel, t) * model.mom.ey1;
        double z_tt = std::abs(tt.value - want_tt) / tt.std_err;
        fsv::McEstimate qv = fsv::mean_realized_qv(batch);
        double z_qv = std::abs(qv.value - fsv::model_variance_swap(model, t)) / qv.std_err;
        report("mc_empirical_cf_z", zmax < 3.0, zmax);
        report("mc_business_time_z", z_tt < 3.0, z_tt);
        report("mc_realized_qv_z", z_qv < 3.0, z_qv);
    }

    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsvq: fractional stochastic-volatility option engine"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->required();

    auto* price = app.add_subcommand("price", "price one contract or a whole chain");
    PriceArgs pa;
    price->add_option("--style", pa.style, "direct | ip | qip")->default_val("direct");
    price->add_option("--k", pa.strike, "strike (USD)");
    price->add_option("--t-days", pa.t_days, "maturity in days");
    price->add_option("--p1", pa.p1, "power on the underlying");
    price->add_option("--p2", pa.p2, "power on the strike");
    price->add_option("--r", pa.conversion, "conversion rate R or 'spot'");
    price->add_flag("--put", pa.put, "price the put instead of the call");
    price->add_flag("--greeks", pa.greeks, "attach the hedge report (power styles)");
    price->add_option("--chain", pa.chain_csv, "chain CSV (batch mode)");
    price->add_option("--spot-json", pa.spot_json, "spot sidecar JSON for --chain");

    auto* cal = app.add_subcommand("calibrate", "two-stage calibration on a chain");
    std::string cal_family = "fsv-aljd", cal_kernel = "type3", cal_chain, cal_spot, cal_out, fix_spec;
    int generations = 60, population = 40;
    std::uint64_t cal_seed = 20200711;
    bool no_filter = false;
    cal->add_option("--chain", cal_chain, "chain CSV")->required();
    cal->add_option("--spot-json", cal_spot, "spot sidecar JSON")->required();
    cal->add_option("--family", cal_family, "model family");
    cal->add_option("--kernel", cal_kernel, "kernel family");
    cal->add_option("--generations", generations, "GA generations");
    cal->add_option("--population", population, "GA population");
    cal->add_option("--seed", cal_seed, "search seed");
    cal->add_option("--fix", fix_spec, "fix a parameter, e.g. m=0.1");
    cal->add_option("--out", cal_out, "write the result JSON here as well");
    cal->add_flag("--no-filter", no_filter, "skip the arbitrage filter");

    auto* surf = app.add_subcommand("surface", "power curve/surface CSV");
    double s_k = 0.0;
    int s_days = 0;
    std::string s_r = "spot";
    std::vector<double> eq_range, p1_range, p2_range;
    surf->add_option("--k", s_k, "strike")->required();
    surf->add_option("--t-days", s_days, "maturity in days")->required();
    surf->add_option("--r", s_r, "conversion rate R or 'spot'");
    surf->add_option("--equal-powers", eq_range, "lo hi n (p1 = p2)")->expected(3);
    surf->add_option("--p1-range", p1_range, "lo hi n")->expected(3);
    surf->add_option("--p2-range", p2_range, "lo hi n")->expected(3);

    auto* sim = app.add_subcommand("simulate", "exact Monte Carlo for the ALJD base");
    int sim_days = 0, sim_paths = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    sim->add_option("--t-days", sim_days, "horizon in days")->required();
    sim->add_option("--n-paths", sim_paths, "path count (default from config)");
    sim->add_option("--seed", sim_seed, "seed (default from config)");
    sim->add_option("--out", sim_out, "per-path CSV dump");

    auto* filt = app.add_subcommand("filter", "strike-arbitrage filter");
    std::string f_chain, f_spot, f_out;
    filt->add_option("--chain", f_chain, "chain CSV")->required();
    filt->add_option("--spot-json", f_spot, "spot sidecar JSON")->required();
    filt->add_option("--out", f_out, "write the kept quotes CSV here");

    auto* val = app.add_subcommand("validate", "run the oracle suites on the configured model");
    bool quick = false;
    val->add_flag("--quick", quick, "smaller Monte Carlo batch");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (*price) return run_price(cfg, pa);
        if (*val) return run_validate(cfg, quick);

        if (*cal) {
            fsv::ModelFamily fam;
            fsv::KernelFamily ker;
            try {
                fam = fsv::family_from_string(cal_family);
                ker = fsv::kernel_from_string(cal_kernel);
            } catch (const fsv::Error& e) {
                std::cout << json{{"error", e.what()}}.dump(2) << "\n";
                return 2; // usage error
            }
            fsv::QuoteSet qs = fsv::load_chain(cal_chain, cal_spot);
            if (!no_filter) qs = fsv::arbitrage_filter(qs);
            fsv::PricingSetup setup{qs.spot, cfg.day_count, pricer_config(cfg)};
            fsv::CalibConfig cc;
            cc.ga.population = population;
            cc.ga.generations = generations;
            cc.seed = cal_seed;
            if (!fix_spec.empty()) {
                auto eq = fix_spec.find('=');
                if (eq == std::string::npos) throw fsv::Error("--fix expects name=value");
                if (fix_spec.substr(0, eq) != "m") throw fsv::Error("--fix supports m only");
                cc.fix_m = true;
                cc.m_fixed = std::stod(fix_spec.substr(eq + 1));
            }
            fsv::CalibrationResult r = fsv::calibrate(fam, ker, qs, setup, cc);
            std::string js = fsv::calibration_result_json(r);
            std::cout << js << "\n";
            if (!cal_out.empty()) std::ofstream(cal_out) << js << "\n";
            return 0;
        }

        if (*surf) {
            fsv::FsvModel model = model_from(cfg);
            if (!(cfg.spot > 0.0)) throw fsv::Error("config: positive spot required");
            double r_val = s_r == "spot" ? cfg.spot : std::stod(s_r);
            std::vector<std::pair<double, double>> powers;
            if (!eq_range.empty())
                powers = fsv::equal_power_range(eq_range[0], eq_range[1], int(eq_range[2]));
            else if (!p1_range.empty() && !p2_range.empty())
                powers = fsv::power_mesh(p1_range[0], p1_range[1], int(p1_range[2]), p2_range[0],
                                         p2_range[1], int(p2_range[2]));
            else
                throw fsv::Error("surface: give --equal-powers or both --p1-range/--p2-range");
            fsv::MarketState state{0.0, cfg.spot, 0.0};
            auto grid = fsv::power_grid(model, state, s_k, double(s_days) / double(cfg.day_count),
                                        r_val, powers, pricer_config(cfg));
            std::cout << "p1,p2,call,put\n";
            for (const auto& e : grid)
                std::cout << e.p1 << ',' << e.p2 << ',' << e.call_value << ',' << e.put_value
                          << "\n";
            return 0;
        }

        if (*sim) {
            fsv::FsvModel model = model_from(cfg);
            if (!(cfg.spot > 0.0)) throw fsv::Error("config: positive spot required");
            int n = sim_paths > 0 ? sim_paths : cfg.mc_paths;
            std::uint64_t seed = sim_seed != 0 ? sim_seed : cfg.mc_seed;
            double t = double(sim_days) / double(cfg.day_count);
            fsv::PathBatch batch = fsv::simulate_aljd(model, cfg.spot, t, n, seed);
            fsv::McEstimate mean_s = fsv::mean_terminal_price(batch);
            fsv::McEstimate tt = fsv::mean_business_time(batch);
            fsv::McEstimate qv = fsv::mean_realized_qv(batch);
            json out{{"n_paths", n},
                     {"seed", seed},
                     {"horizon_years", t},
                     {"spot", cfg.spot},
                     {"mean_terminal_price", mean_s.value},
                     {"mean_terminal_price_se", mean_s.std_err},
                     {"mean_business_time", tt.value},
                     {"mean_business_time_se", tt.std_err},
                     {"expected_business_time",
                      fsv::deterministic_business_time(model, 0.0, t) +
                          fsv::eval_J(model.kernel, t) * model.mom.ey1},
                     {"mean_realized_qv", qv.value},
                     {"mean_realized_qv_se", qv.std_err},
                     {"model_variance_swap", fsv::model_variance_swap(model, t)}};
            std::cout << out.dump(2) << "\n";
            if (!sim_out.empty()) {
                std::ofstream os(sim_out);
                fsv::dump_paths_csv(batch, os);
            }
            return 0;
        }

        if (*filt) {
            fsv::QuoteSet qs = fsv::arbitrage_filter(fsv::load_chain(f_chain, f_spot));
            json dropped = json::array();
            for (const auto& q : qs.quotes)
                if (!q.kept)
                    dropped.push_back({{"strike", q.strike},
                                       {"maturity_days", q.maturity_days},
                                       {"reason", fsv::to_string(q.drop_reason)}});
            json out{{"n_quotes", qs.quotes.size()},
                     {"n_kept", qs.kept_count()},
                     {"dropped", dropped}};
            std::cout << out.dump(2) << "\n";
            if (!f_out.empty()) {
                std::ofstream os(f_out);
                fsv::write_chain_csv(qs, os);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump(2) << "\n";
        return 1;
    }
    return 2;
}
