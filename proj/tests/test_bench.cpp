#include "doctest.h"

#include "json.hpp"
#include "semicross/experiment.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using namespace semicross;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out = dir / "semicross_bench_stdout.txt";
    const std::string cmd = std::string(SEMICROSS_CLI) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("config parsing") {
    std::istringstream in("# cell\nfamily = pareto\nalpha=1\n\nd=10\ngamma=1e2, 1e4\nmethods=ak,semiparam-dominant\n"
                          "baseline=ak\nm=500\nseeds=1,2\nformat=json\n");
    const auto c = parse_config(in);
    CHECK(c.family == "pareto");
    CHECK(c.alpha == 1.0);
    CHECK(c.gammas == std::vector<double>{1e2, 1e4});
    CHECK(c.methods.size() == 2);
    CHECK(c.baseline == Method::AK);
    CHECK(c.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(c.format == OutputFormat::Json);
    CHECK(validate(c).empty());

    std::istringstream bad("alpha=0.5\ngamma=10\nm=ten\n");
    try {
        parse_config(bad);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") == 0);
    }
    std::istringstream unknown("alpha=0.5\nspeed=fast\n");
    CHECK_THROWS_WITH_AS(parse_config(unknown), doctest::Contains("line 2"), ConfigError);
    std::istringstream nokey("alpha 0.5\n");
    CHECK_THROWS_AS(parse_config(nokey), ConfigError);
}

TEST_CASE("mismatches are listed together before any work") {
    ExperimentConfig c;
    c.compound = true;
    c.family = "pareto";
    c.gammas = {10.0};
    c.methods = {Method::CE, Method::Semiparam};
    const auto problems = validate(c);
    CHECK(problems.size() == 3);
    try {
        run_experiment(c);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("ce") != std::string::npos);
        CHECK(msg.find("semiparam") != std::string::npos);
        CHECK(msg.find("Weibull") != std::string::npos);
    }
}

TEST_CASE("experiment rows and comparison") {
    ExperimentConfig c;
    c.family = "weibull";
    c.alpha = 1.0;
    c.d = 3;
    c.gammas = {0.0};
    c.methods = {Method::Crude};
    c.m = 1000;
    auto rows = run_experiment(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].report.estimate == 1.0);
    CHECK(rows[0].report.rel_error == 0.0);
    CHECK(!rows[0].ratio);

    c.gammas = {8.0, 12.0};
    c.methods = {Method::AK, Method::Semiparam};
    c.baseline = Method::AK;
    c.seeds = {1, 2};
    c.n = 300;
    c.m = 2000;
    rows = run_experiment(c);
    REQUIRE(rows.size() == 8);
    for (std::size_t k = 0; k < rows.size(); k += 2) {
        CHECK(rows[k].report.method == Method::AK);
        CHECK(!rows[k].ratio);
        REQUIRE(rows[k + 1].ratio);
        CHECK(*rows[k + 1].ratio == doctest::Approx(rows[k].report.rel_error / rows[k + 1].report.rel_error));
        CHECK(*rows[k + 1].rtvp == doctest::Approx(*rows[k + 1].ratio * *rows[k + 1].ratio *
                                                   rows[k].report.wall_seconds / rows[k + 1].report.wall_seconds));
    }
    CHECK(rows[0].gamma == 8.0);
    CHECK(rows[2].report.seed == 2);
    CHECK(rows[4].gamma == 12.0);

    std::ostringstream csv;
    write_rows(csv, rows, OutputFormat::Csv);
    CHECK(first_line(csv.str()) == "family,alpha,rho,d,gamma,method,estimate,rel_error,m,n,seed,wall_seconds,ratio,rtvp");
    std::string line;
    std::istringstream lines(csv.str());
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line.substr(line.size() - 2) == ",,");

    std::ostringstream js;
    write_rows(js, rows, OutputFormat::Json);
    const auto arr = nlohmann::json::parse(js.str());
    REQUIRE(arr.size() == 8);
    CHECK(arr[1]["method"] == "semiparam");
    CHECK(arr[1]["ratio"].get<double>() == doctest::Approx(*rows[1].ratio));
}

TEST_CASE("table 1 cell through the experiment runner") {
    ExperimentConfig c;
    c.alpha = 0.2;
    c.d = 10;
    c.gammas = {1e4};
    c.methods = {Method::SemiparamDominant};
    c.n = 1000;
    c.m = 10000;
    const auto rows = run_experiment(c);
    CHECK(rows[0].report.estimate == doctest::Approx(1.97e-2).epsilon(0.01));
}

TEST_CASE("reference tables") {
    CHECK(reference_cells(1).size() == 20);
    CHECK(reference_cells(2).size() == 20);
    CHECK(reference_cells(3).size() == 20);
    CHECK_THROWS(reference_cells(4));
    std::set<std::string> tags;
    for (int t = 1; t <= 3; ++t) {
        for (const auto& cell : reference_cells(t)) {
            CHECK(cell.table == t);
            CHECK(cell.estimate > 0.0);
            tags.insert(cell.tag);
        }
    }
    tags.insert(compound_text_cell().tag);
    CHECK(tags.size() == 61);

    const auto& first = reference_cells(1).front();
    CHECK(first.tag == "T1.a0.1.g1e10");
    CHECK(first.estimate == 4.54e-4);
    const auto& text = compound_text_cell();
    CHECK(text.alpha == 0.75);
    CHECK(text.rho == 0.15);
    CHECK(text.estimate == 5.38e-4);
}

TEST_CASE("command line") {
    const auto ok = cli("estimate --family weibull --alpha 1 --d 3 --gamma 0 --methods crude --m 100");
    CHECK(ok.code == 0);
    CHECK(first_line(ok.out) == "family,alpha,rho,d,gamma,method,estimate,rel_error,m,n,seed,wall_seconds,ratio,rtvp");
    CHECK(ok.out.find("weibull,1,1,3,0,crude,1,0,100,") != std::string::npos);

    // Flags override the file; the file's other keys stay.
    const auto cfg = write_temp("semicross_cfg.txt", "alpha=1\nd=3\ngamma=0\nmethods=crude\nm=50\n");
    const auto over = cli("estimate --config " + cfg + " --m 70 --format json");
    CHECK(over.code == 0);
    const auto arr = nlohmann::json::parse(over.out);
    CHECK(arr[0]["m"] == 70);
    CHECK(arr[0]["d"] == 3);

    const auto badcfg = write_temp("semicross_bad.txt", "alpha=1\n\nd=three\n");
    const auto bad = cli("estimate --config " + badcfg);
    CHECK(bad.code == 2);
    CHECK(bad.out.find("line 3") != std::string::npos);

    CHECK(cli("estimate --alpha 0.5 --gamma 10 --methods ce").code == 2);
    CHECK(cli("estimate --model compound --gamma 10 --methods semiparam").code == 2);
    CHECK(cli("estimate --no-such-flag 1").code == 2);
    CHECK(cli("reproduce-table --table 4").code == 2);

    const auto cmp = cli("compare --alpha 1 --d 2 --gamma 10 --n 200 --m 2000");
    CHECK(cmp.code == 0);
    CHECK(cmp.out.find(",ak,") != std::string::npos);
    CHECK(cmp.out.find(",semiparam-dominant,") != std::string::npos);

    const auto diag = cli("gibbs-diag --alpha 0.5 --d 3 --gamma 20 --n 200");
    CHECK(diag.code == 0);
    CHECK(diag.out.find("valid_fraction,1") != std::string::npos);
}
