#include "semicross/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace semicross {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(0, "invalid value for " + key + ": '" + text + "'");
    }
    return value;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "family") {
        if (value != "weibull" && value != "pareto") {
            throw ConfigError(0, "family must be weibull or pareto, got '" + value + "'");
        }
        c.family = value;
    } else if (key == "model") {
        if (value != "fixed" && value != "compound") {
            throw ConfigError(0, "model must be fixed or compound, got '" + value + "'");
        }
        c.compound = value == "compound";
    } else if (key == "alpha") {
        c.alpha = parse_number<double>(key, value);
    } else if (key == "rho") {
        c.rho = parse_number<double>(key, value);
    } else if (key == "d") {
        c.d = parse_number<int>(key, value);
    } else if (key == "gamma") {
        c.gammas.clear();
        for (const auto& g : split_list(value)) c.gammas.push_back(parse_number<double>(key, g));
    } else if (key == "methods" || key == "method") {
        c.methods.clear();
        for (const auto& name : split_list(value)) {
            try {
                c.methods.push_back(method_from_string(name));
            } catch (const std::invalid_argument&) {
                throw ConfigError(0, "unknown method '" + name + "'");
            }
        }
    } else if (key == "baseline") {
        try {
            c.baseline = method_from_string(value);
        } catch (const std::invalid_argument&) {
            throw ConfigError(0, "unknown method '" + value + "'");
        }
    } else if (key == "n") {
        c.n = parse_number<std::uint64_t>(key, value);
    } else if (key == "burn_in" || key == "burn-in") {
        c.burn_in = parse_number<std::uint64_t>(key, value);
    } else if (key == "m") {
        c.m = parse_number<std::uint64_t>(key, value);
    } else if (key == "seed" || key == "seeds") {
        c.seeds.clear();
        for (const auto& s : split_list(value)) c.seeds.push_back(parse_number<std::uint64_t>(key, s));
    } else if (key == "workers") {
        c.workers = parse_number<unsigned>(key, value);
    } else if (key == "out") {
        c.out = value;
    } else if (key == "format") {
        if (value == "csv") {
            c.format = OutputFormat::Csv;
        } else if (value == "json") {
            c.format = OutputFormat::Json;
        } else {
            throw ConfigError(0, "format must be csv or json, got '" + value + "'");
        }
    } else {
        throw ConfigError(0, "unknown key '" + key + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(number, "expected key=value, got '" + line + "'");
        }
        try {
            apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(number, e.what());
        }
    }
    return base;
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> problems;
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) problems.push_back("alpha must be positive");
    if (c.compound) {
        if (c.family != "weibull") problems.push_back("compound sums use Weibull jumps");
        if (!(c.rho > 0.0 && c.rho <= 1.0)) problems.push_back("rho must lie in (0,1]");
    } else if (c.d < 1) {
        problems.push_back("d must be at least 1");
    }
    if (c.gammas.empty()) problems.push_back("gamma list is empty");
    for (double g : c.gammas) {
        if (!std::isfinite(g) || g < 0.0 || (c.compound && g == 0.0)) {
            problems.push_back("gamma out of range: " + std::to_string(g));
        }
    }
    if (c.methods.empty()) problems.push_back("no methods given");
    if (c.m < 2) problems.push_back("m must be at least 2");
    if (c.n < 1) problems.push_back("n must be at least 1");
    if (c.workers < 1) problems.push_back("workers must be at least 1");
    if (c.seeds.empty()) problems.push_back("seed list is empty");
    for (Method method : c.methods) {
        const std::string name = to_string(method);
        switch (method) {
            case Method::Crude:
            case Method::AK: break;
            case Method::Compound:
                if (!c.compound) problems.push_back("method compound needs model=compound");
                break;
            case Method::CE:
                if (c.compound || c.family != "weibull" || c.alpha != 1.0) {
                    problems.push_back("method ce needs fixed Weibull jumps with alpha = 1");
                }
                break;
            case Method::Semiparam:
            case Method::SemiparamDominant:
                if (c.compound) problems.push_back("method " + name + " needs model=fixed");
                break;
        }
    }
    if (c.baseline && std::find(c.methods.begin(), c.methods.end(), *c.baseline) == c.methods.end()) {
        problems.push_back("baseline " + to_string(*c.baseline) + " is not among the methods");
    }
    return problems;
}

RareEventModel make_model(const ExperimentConfig& c, double gamma) {
    if (c.compound) return RareEventModel::compound(c.alpha, c.rho, gamma);
    const JumpLaw law = c.family == "pareto" ? JumpLaw::pareto(c.alpha) : JumpLaw::weibull(c.alpha);
    return RareEventModel::fixed_sum(law, c.d, gamma);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& c) {
    const auto problems = validate(c);
    if (!problems.empty()) {
        std::string msg = "invalid experiment:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(0, msg);
    }
    std::vector<ResultRow> rows;
    for (double gamma : c.gammas) {
        const RareEventModel model = make_model(c, gamma);
        for (std::uint64_t seed : c.seeds) {
            PipelineOptions opt;
            opt.n = c.n;
            opt.burn_in = c.burn_in;
            opt.m = c.m;
            opt.seed = seed;
            opt.workers = c.workers;
            std::vector<ResultRow> cell;
            for (Method method : c.methods) {
                ResultRow row;
                row.family = c.family;
                row.alpha = c.alpha;
                row.rho = c.compound ? c.rho : 1.0;
                row.d = c.compound ? 0 : c.d;
                row.gamma = gamma;
                row.report = run_method(method, model, opt);
                cell.push_back(row);
            }
            if (c.baseline) {
                const auto base = std::find_if(cell.begin(), cell.end(),
                                               [&](const ResultRow& r) { return r.report.method == *c.baseline; });
                for (auto& row : cell) {
                    if (row.report.method == *c.baseline) continue;
                    const ComparisonReport cmp = compare(base->report, row.report);
                    row.ratio = cmp.ratio;
                    row.rtvp = cmp.rtvp;
                }
            }
            rows.insert(rows.end(), cell.begin(), cell.end());
        }
    }
    return rows;
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format) {
    if (format == OutputFormat::Json) {
        write_json(out, rows);
    } else {
        write_csv(out, rows);
    }
}

std::vector<ReproductionRow> reproduce_table(int table, double scale, std::uint64_t seed, unsigned workers) {
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw std::invalid_argument("scale must lie in (0,1]");
    }
    const auto& cells = reference_cells(table);
    PipelineOptions opt;
    opt.n = table == 3 ? 10000 : 1000;
    opt.m = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(scale * 1e6)));
    opt.seed = seed;
    opt.workers = workers;
    std::vector<ReproductionRow> rows;
    for (const auto& cell : cells) {
        const RareEventModel model =
            table == 3 ? RareEventModel::compound(cell.alpha, cell.rho, cell.gamma)
                       : RareEventModel::fixed_sum(table == 2 ? JumpLaw::pareto(cell.alpha) : JumpLaw::weibull(cell.alpha),
                                                   cell.d, cell.gamma);
        ReproductionRow row;
        row.reference = cell;
        row.ours = run_method(table == 3 ? Method::Compound : Method::SemiparamDominant, model, opt);
        row.baseline = run_method(Method::AK, model, opt);
        row.ratio = compare(row.baseline, row.ours).ratio;
        row.delta_sigma = row.ours.std_error > 0.0 ? (row.ours.estimate - cell.estimate) / row.ours.std_error
                                                   : (row.ours.estimate == cell.estimate ? 0.0 : HUGE_VAL);
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

void write_reproduction_csv(std::ostream& out, const std::vector<ReproductionRow>& rows) {
    out << kReproductionHeader << '\n';
    for (const auto& r : rows) {
        const auto& c = r.reference;
        const auto& o = r.ours;
        out << kReferenceVersion << ',' << c.tag << ',' << c.table << ',' << c.family << ',' << fmt(c.alpha) << ','
            << fmt(c.rho) << ',' << c.d << ',' << fmt(c.gamma) << ',' << to_string(o.method) << ','
            << fmt(o.estimate) << ',' << fmt(o.rel_error) << ',' << o.m << ',' << o.n << ',' << o.seed << ','
            << fmt(o.wall_seconds) << ',' << to_string(r.baseline.method) << ',' << fmt(r.baseline.rel_error) << ','
            << fmt(r.ratio) << ',' << fmt(c.estimate) << ',' << fmt(c.rel_error) << ',' << c.ratio << ','
            << c.rtvp << ',' << fmt(r.delta_sigma) << '\n';
    }
}

}  // namespace semicross
