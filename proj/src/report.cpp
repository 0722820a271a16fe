#include "semicross/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace semicross {

namespace {

// Shortest round-trip representation.
std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return number(v);
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::Crude: return "crude";
        case Method::AK: return "ak";
        case Method::CE: return "ce";
        case Method::Semiparam: return "semiparam";
        case Method::SemiparamDominant: return "semiparam-dominant";
        case Method::Compound: return "compound";
    }
    return "unknown";
}

Method method_from_string(const std::string& name) {
    for (Method m : {Method::Crude, Method::AK, Method::CE, Method::Semiparam, Method::SemiparamDominant,
                     Method::Compound}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown method: " + name);
}

EstimateReport make_report(Method method, double estimate, double std_error, std::uint64_t m, std::uint64_t n,
                           double wall_seconds, std::uint64_t seed) {
    EstimateReport r;
    r.method = method;
    r.estimate = estimate;
    r.std_error = std_error;
    r.rel_error = estimate != 0.0 ? std_error / estimate : std::numeric_limits<double>::infinity();
    r.m = m;
    r.n = n;
    r.wall_seconds = wall_seconds;
    r.seed = seed;
    return r;
}

ComparisonReport compare(const EstimateReport& baseline, const EstimateReport& candidate) {
    ComparisonReport c{baseline, candidate, 0.0, 0.0};
    c.ratio = baseline.rel_error / candidate.rel_error;
    c.rtvp = c.ratio * c.ratio * (baseline.wall_seconds / candidate.wall_seconds);
    return c;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << row.family << ',' << number(row.alpha) << ',' << number(row.rho) << ',' << row.d << ','
            << number(row.gamma) << ',' << to_string(r.method) << ',' << number(r.estimate) << ','
            << number(r.rel_error) << ',' << r.m << ',' << r.n << ',' << r.seed << ',' << number(r.wall_seconds)
            << ',' << (row.ratio ? number(*row.ratio) : "") << ',' << (row.rtvp ? number(*row.rtvp) : "") << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        const auto& r = row.report;
        nlohmann::ordered_json rec = {
            {"family", row.family},
            {"alpha", json_number(row.alpha)},
            {"rho", json_number(row.rho)},
            {"d", row.d},
            {"gamma", json_number(row.gamma)},
            {"method", to_string(r.method)},
            {"estimate", json_number(r.estimate)},
            {"rel_error", json_number(r.rel_error)},
            {"m", r.m},
            {"n", r.n},
            {"seed", r.seed},
            {"wall_seconds", json_number(r.wall_seconds)},
            {"ratio", row.ratio ? json_number(*row.ratio) : nlohmann::ordered_json(nullptr)},
            {"rtvp", row.rtvp ? json_number(*row.rtvp) : nlohmann::ordered_json(nullptr)},
        };
        arr.push_back(std::move(rec));
    }
    out << arr.dump(2) << '\n';
}

}  // namespace semicross
