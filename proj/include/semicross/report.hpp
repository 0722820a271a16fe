#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace semicross {

enum class Method { Crude, AK, CE, Semiparam, SemiparamDominant, Compound };

std::string to_string(Method method);
/// Accepts the names printed by to_string: crude, ak, ce, semiparam,
/// semiparam-dominant, compound.
Method method_from_string(const std::string& name);

struct EstimateReport {
    Method method = Method::Crude;
    double estimate = 0.0;
    double std_error = 0.0;
    /// std_error / estimate; +inf when the estimate is 0.
    double rel_error = 0.0;
    std::uint64_t m = 0;
    /// Chain length behind the estimate (0 for chain-free methods).
    std::uint64_t n = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

EstimateReport make_report(Method method, double estimate, double std_error, std::uint64_t m, std::uint64_t n,
                           double wall_seconds, std::uint64_t seed);

struct ComparisonReport {
    EstimateReport baseline;
    EstimateReport candidate;
    /// baseline.rel_error / candidate.rel_error.
    double ratio = 0.0;
    /// ratio^2 * baseline.wall_seconds / candidate.wall_seconds.
    double rtvp = 0.0;
};

ComparisonReport compare(const EstimateReport& baseline, const EstimateReport& candidate);

/// One output record: the model cell plus a report, with ratio/rtvp present
/// on comparison rows.
struct ResultRow {
    std::string family;
    double alpha = 0.0;
    double rho = 1.0;
    int d = 0;
    double gamma = 0.0;
    EstimateReport report;
    std::optional<double> ratio;
    std::optional<double> rtvp;
};

inline constexpr const char* kCsvHeader =
    "family,alpha,rho,d,gamma,method,estimate,rel_error,m,n,seed,wall_seconds,ratio,rtvp";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_json(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace semicross
