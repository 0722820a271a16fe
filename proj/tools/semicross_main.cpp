#include "CLI11.hpp"

#include "semicross/efficiency_lab.hpp"
#include "semicross/experiment.hpp"
#include "semicross/replication.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <tuple>

using namespace semicross;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Flags shared by the model-driven subcommands; only flags given on the
// command line override the config file.
struct ModelFlags {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;

    void attach(CLI::App* app) {
        for (const char* key : {"family", "model", "alpha", "rho", "d", "gamma", "n", "burn-in", "m", "seed",
                                "workers", "out", "format", "methods", "baseline"}) {
            options[key] = app->add_option(std::string("--") + key, values[key]);
        }
        options["method"] = app->add_option("--method", values["methods"], "Alias of --methods");
        app->add_option("--config", config_path, "key=value experiment file");
    }

    ExperimentConfig resolve(ExperimentConfig base) const {
        base.workers = default_workers();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError(0, "cannot open config file " + config_path);
            try {
                base = parse_config(in, base);
            } catch (const ConfigError& e) {
                throw ConfigError(0, config_path + ": " + e.what());
            }
        }
        for (const auto& [key, opt] : options) {
            if (opt->count() == 0) continue;
            const std::string k = key == "method" ? "methods" : key;
            apply_setting(base, k == "burn-in" ? "burn_in" : k, values.at(k));
        }
        return base;
    }
};

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw ConfigError(0, "cannot write " + path);
        stream = &file;
    }
};

bool any_nan(const std::vector<ResultRow>& rows) {
    for (const auto& r : rows) {
        if (std::isnan(r.report.estimate)) return true;
    }
    return false;
}

int emit(const ExperimentConfig& config, const std::vector<ResultRow>& rows) {
    Output out(config.out);
    write_rows(*out.stream, rows, config.format);
    if (any_nan(rows)) {
        std::cerr << "error: NaN estimate\n";
        return kExitNumerical;
    }
    return 0;
}

int run_estimate(const ModelFlags& flags) {
    ExperimentConfig config = flags.resolve({});
    if (config.methods.empty()) config.methods = {config.compound ? Method::Compound : Method::SemiparamDominant};
    return emit(config, run_experiment(config));
}

int run_compare(const ModelFlags& flags) {
    ExperimentConfig config = flags.resolve({});
    if (config.methods.empty()) {
        config.methods = config.compound ? std::vector{Method::AK, Method::Compound}
                                         : std::vector{Method::AK, Method::SemiparamDominant};
    }
    if (!config.baseline) config.baseline = config.methods.front();
    if (config.methods.size() < 2) throw ConfigError(0, "compare needs at least two methods");
    return emit(config, run_experiment(config));
}

int run_reproduce(int table, double scale, std::uint64_t seed, unsigned workers, const std::string& path) {
    if (table < 1 || table > 3) throw ConfigError(0, "--table must be 1, 2 or 3");
    if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError(0, "--scale must lie in (0,1]");
    const auto rows = reproduce_table(table, scale, seed, workers);
    Output out(path);
    write_reproduction_csv(*out.stream, rows);
    for (const auto& r : rows) {
        if (std::isnan(r.ours.estimate)) return kExitNumerical;
    }
    return 0;
}

int run_theory(const std::string& path) {
    Output out(path);
    std::ostream& os = *out.stream;
    os << "quantity,parameters,value,check\n";
    bool ok = true;
    auto line = [&](const std::string& q, const std::string& p, double v, bool pass) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        os << q << ',' << p << ',' << buf << ',' << (pass ? "pass" : "fail") << '\n';
        ok = ok && pass;
    };
    for (int k = 1; k <= 9; ++k) {
        const double a = 0.1 * k;
        line("phi_star", "d=2 alpha=" + std::to_string(a).substr(0, 3), lab::phi_star(2, a), lab::phi_star(2, a) == 0.0);
    }
    for (int d = 3; d <= 20; ++d) {
        const double v = lab::phi_star(d, 0.5);
        line("phi_star", "d=" + std::to_string(d) + " alpha=0.5", v, v > 0.0);
    }
    for (auto [g, n, a, tol] : {std::tuple{10.0, 2, 1.0, 1e-4}, {50.0, 2, 0.5, 1e-4}, {20.0, 3, 1.0, 1e-3}}) {
        const double r = lab::check_derivative_identity(g, 1.0, n, a);
        line("derivative_residual",
             "n=" + std::to_string(n) + " alpha=" + std::to_string(a).substr(0, 3) + " gamma=" + std::to_string(int(g)),
             r, r <= tol);
    }
    for (int n : {2, 3}) {
        for (double a : {0.5, 1.0}) {
            const auto c = lab::pareto_log_efficiency_trend(a, n, {10.0, 100.0, 1000.0});
            const std::string p = "n=" + std::to_string(n) + " alpha=" + std::to_string(a).substr(0, 3);
            for (std::size_t k = 0; k < c.value.size(); ++k) {
                line("I_n/(gamma^(alpha(n-2)) ln gamma)", p + " gamma=" + std::to_string(int(c.gamma[k])), c.value[k],
                     c.trend_holds);
            }
        }
    }
    const auto ce = lab::ce_optimality_check(lab::toy_discrete_pi());
    line("kl_product_of_marginals", "toy 3x3", ce.kl_product_of_marginals, ce.marginals_optimal);
    return ok ? 0 : 1;
}

int run_gibbs_diag(const ModelFlags& flags, const std::string& target_name, const std::string& mixture_path) {
    const ExperimentConfig config = flags.resolve({});
    if (config.gammas.size() != 1) throw ConfigError(0, "gibbs-diag needs exactly one gamma");
    ChainTarget target = ChainTarget::ZeroVariance;
    if (target_name == "residual") {
        target = ChainTarget::Residual;
    } else if (target_name != "zero-variance") {
        throw ConfigError(0, "--target must be zero-variance or residual");
    }
    const RareEventModel model = make_model(config, config.gammas.front());
    if (model.is_compound() && target == ChainTarget::Residual) {
        throw ConfigError(0, "the residual target is for fixed-sum models");
    }
    const std::uint64_t burn_in = config.burn_in.value_or(default_burn_in(config.n));
    const ChainSample chain = run_chain(model, config.n, burn_in, config.seeds.front(), target);

    std::size_t valid = 0;
    std::vector<double> sums;
    double jumps = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto x = chain.state(k);
        valid += state_is_valid(model, target, x);
        sums.push_back(sum_of(x));
        jumps += static_cast<double>(x.size());
    }
    RunningStats s;
    for (double v : sums) s.add(v);
    double lag1 = 0.0;
    for (std::size_t k = 1; k < sums.size(); ++k) lag1 += (sums[k] - s.mean) * (sums[k - 1] - s.mean);
    const double var = s.variance();
    lag1 = var > 0.0 ? lag1 / (static_cast<double>(sums.size() - 1) * var) : 0.0;

    Output out(config.out);
    std::ostream& os = *out.stream;
    os.precision(10);
    os << "metric,value\n"
       << "states," << chain.size() << '\n'
       << "burn_in," << chain.burn_in << '\n'
       << "valid_fraction," << static_cast<double>(valid) / static_cast<double>(chain.size()) << '\n'
       << "mean_sum," << s.mean << '\n'
       << "sd_sum," << std::sqrt(var) << '\n'
       << "lag1_autocorrelation_sum," << lag1 << '\n'
       << "mean_jumps," << jumps / static_cast<double>(chain.size()) << '\n';

    if (!mixture_path.empty()) {
        if (model.is_compound()) throw ConfigError(0, "--mixture-csv is for fixed-sum models");
        std::ofstream mix(mixture_path);
        if (!mix) throw ConfigError(0, "cannot write " + mixture_path);
        build_marginal(chain, 0, model).write_csv(mix);
    }
    return valid == chain.size() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rare-event estimation for sums of heavy-tailed jumps"};
    app.require_subcommand(1);

    ModelFlags est_flags;
    auto* estimate = app.add_subcommand("estimate", "Estimate P(S > gamma) with one or more methods");
    est_flags.attach(estimate);

    ModelFlags cmp_flags;
    auto* cmp = app.add_subcommand("compare", "Ratio and RTVP of methods against a baseline");
    cmp_flags.attach(cmp);

    int table = 1;
    double scale = 0.01;
    std::uint64_t table_seed = 1;
    unsigned table_workers = default_workers();
    std::string table_out;
    auto* repro = app.add_subcommand("reproduce-table", "Rerun a published table at reduced replications");
    repro->add_option("--table", table, "1 (Weibull), 2 (Pareto) or 3 (compound)")->required();
    repro->add_option("--scale", scale, "Fraction of the published m = 1e6");
    repro->add_option("--seed", table_seed);
    repro->add_option("--workers", table_workers);
    repro->add_option("--out", table_out);

    std::string theory_out;
    auto* theory = app.add_subcommand("theory", "Laplace exponent, I_n identities and trends");
    theory->add_option("--out", theory_out);

    ModelFlags diag_flags;
    std::string target = "zero-variance";
    std::string mixture_path;
    auto* diag = app.add_subcommand("gibbs-diag", "Chain diagnostics for one model");
    diag_flags.attach(diag);
    diag->add_option("--target", target, "zero-variance or residual");
    diag->add_option("--mixture-csv", mixture_path, "Write the first coordinate's mixture components");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*estimate) return run_estimate(est_flags);
        if (*cmp) return run_compare(cmp_flags);
        if (*repro) return run_reproduce(table, scale, table_seed, table_workers, table_out);
        if (*theory) return run_theory(theory_out);
        if (*diag) return run_gibbs_diag(diag_flags, target, mixture_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
