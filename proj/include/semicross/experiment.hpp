#pragma once

#include "semicross/estimators.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace semicross {

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
    std::string family = "weibull";
    /// Compound-geometric sums of Weibull jumps instead of a fixed d.
    bool compound = false;
    double alpha = 0.5;
    double rho = 0.5;
    int d = 10;
    std::vector<double> gammas;
    std::vector<Method> methods;
    /// Methods other than the baseline get ratio/rtvp against it.
    std::optional<Method> baseline;
    std::uint64_t n = 1000;
    std::optional<std::uint64_t> burn_in;
    std::uint64_t m = 10000;
    std::vector<std::uint64_t> seeds{1};
    unsigned workers = 1;
    std::string out;
    OutputFormat format = OutputFormat::Csv;
};

/// Bad key, bad value, or an unusable combination; line is 0 outside a file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Sets one key. Keys: family, model (fixed|compound), alpha, rho, d, gamma
/// (comma list), methods (comma list), baseline, n, burn_in, m, seed (comma
/// list), workers, out, format (csv|json). Throws ConfigError with line 0.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat key=value file; '#' starts a comment, blank lines are skipped.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});

/// Every method/model mismatch, empty when the config can run.
std::vector<std::string> validate(const ExperimentConfig& config);

RareEventModel make_model(const ExperimentConfig& config, double gamma);

/// One row per (gamma, seed, method), in that nesting order. Throws
/// ConfigError listing all mismatches before any work starts.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format);

// ---- reference tables -------------------------------------------------------

struct ReferenceCell {
    /// Stable cell tag, e.g. "T1.a0.1.r1".
    std::string tag;
    int table = 1;
    std::string family;
    double alpha = 0.0;
    double rho = 1.0;
    int d = 10;
    double gamma = 0.0;
    double estimate = 0.0;
    double rel_error = 0.0;
    /// As printed: the square roots of the Ratio column, with ">" bounds kept.
    std::string ratio;
    std::string rtvp;
};

inline constexpr const char* kReferenceVersion = "tables-v1";

/// Published cells of table 1 (Weibull), 2 (Pareto) or 3 (compound).
const std::vector<ReferenceCell>& reference_cells(int table);
/// The compound cell alpha = 0.75, rho = 0.15, gamma = 63.361 quoted in the text.
const ReferenceCell& compound_text_cell();

struct ReproductionRow {
    ReferenceCell reference;
    EstimateReport ours;
    EstimateReport baseline;
    double ratio = 0.0;
    /// (ours - reference) / our std error.
    double delta_sigma = 0.0;
};

inline constexpr const char* kReproductionHeader =
    "version,tag,table,family,alpha,rho,d,gamma,method,estimate,rel_error,m,n,seed,wall_seconds,"
    "baseline,baseline_rel_error,ratio,ref_estimate,ref_rel_error,ref_ratio,ref_rtvp,delta_sigma";

/// Runs every cell of the table at m = scale * 1e6 (n stays at the table's
/// chain length): the dominant-term estimator against AK for tables 1-2,
/// the compound estimator against compound AK for table 3.
std::vector<ReproductionRow> reproduce_table(int table, double scale, std::uint64_t seed = 1, unsigned workers = 1);

void write_reproduction_csv(std::ostream& out, const std::vector<ReproductionRow>& rows);

}  // namespace semicross
