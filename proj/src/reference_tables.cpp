#include "semicross/experiment.hpp"

#include <stdexcept>

namespace semicross {

namespace {

// Published point estimates, relative errors, Ratio and RTVP columns
// (n = 1e3, m = 1e6, d = 10 for the fixed sums; n = 1e4 for compound sums,
// where d is unused and gamma is either fixed or 30 / rho).
const std::vector<ReferenceCell> kCells = {
    {"T1.a0.1.g1e10", 1, "weibull", 0.1, 1.0, 10, 1e10, 0.000454, 1.7e-06, "13^2", "71"},
    {"T1.a0.1.g1e11", 1, "weibull", 0.1, 1.0, 10, 1e11, 3.4e-05, 4.1e-07, "22^2", "197"},
    {"T1.a0.1.g1e12", 1, "weibull", 0.1, 1.0, 10, 1e12, 1.3e-06, 6.4e-08, "72^2", "2071"},
    {"T1.a0.1.g1e13", 1, "weibull", 0.1, 1.0, 10, 1e13, 2.16e-08, 8e-09, "59^2", "1429"},
    {"T1.a0.1.g1e15", 1, "weibull", 0.1, 1.0, 10, 1e15, 1.84e-13, 1.3e-10, "125^2", "5944"},
    {"T1.a0.2.g1e4", 1, "weibull", 0.2, 1.0, 10, 1e4, 0.0197, 6.5e-05, "3^2", "3.7"},
    {"T1.a0.2.g1e5", 1, "weibull", 0.2, 1.0, 10, 1e5, 0.000464, 1.8e-05, "5.6^2", "12"},
    {"T1.a0.2.g1e6", 1, "weibull", 0.2, 1.0, 10, 1e6, 1.31e-06, 3e-06, "9.2^2", "33"},
    {"T1.a0.2.g1e7", 1, "weibull", 0.2, 1.0, 10, 1e7, 1.23e-10, 4.3e-07, "10^2", "42"},
    {"T1.a0.2.g1e8", 1, "weibull", 0.2, 1.0, 10, 1e8, 5.13e-17, 6.5e-08, "7^2", "20"},
    {"T1.a0.6.g100", 1, "weibull", 0.6, 1.0, 10, 100, 9.47e-06, 0.00026, "19^2", "130"},
    {"T1.a0.6.g150", 1, "weibull", 0.6, 1.0, 10, 150, 7.83e-08, 0.00015, "41^2", "550"},
    {"T1.a0.6.g200", 1, "weibull", 0.6, 1.0, 10, 200, 1.34e-09, 0.00015, "63^2", "1376"},
    {"T1.a0.6.g500", 1, "weibull", 0.6, 1.0, 10, 500, 1.83e-17, 0.00017, "5.5^2", "11"},
    {"T1.a0.6.g1000", 1, "weibull", 0.6, 1.0, 10, 1000, 7e-27, 9.5e-05, "6^2", "13"},
    {"T1.a0.9.g30", 1, "weibull", 0.9, 1.0, 10, 30, 0.000133, 0.0009, "13^2", "50"},
    {"T1.a0.9.g40", 1, "weibull", 0.9, 1.0, 10, 40, 6.27e-07, 0.0009, "78^2", "1758.7"},
    {"T1.a0.9.g50", 1, "weibull", 0.9, 1.0, 10, 50, 2.25e-09, 0.001, "254^2", "17746"},
    {"T1.a0.9.g60", 1, "weibull", 0.9, 1.0, 10, 60, 7.01e-12, 0.001, "556^2", "87103"},
    {"T1.a0.9.g100", 1, "weibull", 0.9, 1.0, 10, 100, 4.34e-22, 0.001, "300^2", "23768"},
    {"T2.a0.5.gd1e8", 2, "pareto", 0.5, 1.0, 10, 10.0 + 1e8, 0.001, 5.6e-07, "33^2", "209"},
    {"T2.a0.5.gd1e10", 2, "pareto", 0.5, 1.0, 10, 10.0 + 1e10, 0.0001, 5.8e-08, "107^2", "3007"},
    {"T2.a0.5.gd1e11", 2, "pareto", 0.5, 1.0, 10, 10.0 + 1e11, 3.16e-05, 1.8e-08, "176^2", "6270"},
    {"T2.a0.5.gd1e12", 2, "pareto", 0.5, 1.0, 10, 10.0 + 1e12, 9.99e-06, 5.92e-09, "364^2", "34271"},
    {"T2.a0.5.gd1e15", 2, "pareto", 0.5, 1.0, 10, 10.0 + 1e15, 3.16e-07, 1.9e-10, "584^2", "82494"},
    {"T2.a1.gd1e4", 2, "pareto", 1.0, 1.0, 10, 10.0 + 1e4, 0.001, 5.1e-06, "7^2", "11"},
    {"T2.a1.gd1e6", 2, "pareto", 1.0, 1.0, 10, 10.0 + 1e6, 1e-05, 1e-07, "38^2", "330"},
    {"T2.a1.gd1e8", 2, "pareto", 1.0, 1.0, 10, 10.0 + 1e8, 1e-07, 1.4e-09, "91^2", "1711"},
    {"T2.a1.gd1e10", 2, "pareto", 1.0, 1.0, 10, 10.0 + 1e10, 1e-09, 2.61e-11, "42^2", "322"},
    {"T2.a1.gd1e13", 2, "pareto", 1.0, 1.0, 10, 10.0 + 1e13, 1e-12, 3e-14, "24^2", "123"},
    {"T2.a5.gd10", 2, "pareto", 5.0, 1.0, 10, 10.0 + 10, 0.000258, 0.00015, "10^2", "66"},
    {"T2.a5.gd100", 2, "pareto", 5.0, 1.0, 10, 10.0 + 100, 1.06e-09, 1.2e-05, "4^2", "11"},
    {"T2.a5.gd1000", 2, "pareto", 5.0, 1.0, 10, 10.0 + 1000, 1e-14, 1.13e-06, "4^2", "11"},
    {"T2.a5.gd1e4", 2, "pareto", 5.0, 1.0, 10, 10.0 + 1e4, 1e-19, 1e-07, "4.4^2", "11"},
    {"T2.a5.gd1e5", 2, "pareto", 5.0, 1.0, 10, 10.0 + 1e5, 1e-24, 1.2e-08, "4^2", "11"},
    {"T2.a10.gd5", 2, "pareto", 10.0, 1.0, 10, 10.0 + 5, 1.75e-06, 0.00024, "30^2", "609"},
    {"T2.a10.gd10", 2, "pareto", 10.0, 1.0, 10, 10.0 + 10, 1.09e-09, 9.93e-05, "6^2", "22"},
    {"T2.a10.gd100", 2, "pareto", 10.0, 1.0, 10, 10.0 + 100, 1e-19, 8.8e-06, "4^2", "13"},
    {"T2.a10.gd500", 2, "pareto", 10.0, 1.0, 10, 10.0 + 500, 1.02e-26, 1.6e-06, "5^2", "11"},
    {"T2.a10.gd1500", 2, "pareto", 10.0, 1.0, 10, 10.0 + 1500, 1.73e-31, 5.5e-07, "4.4^2", "13"},
    {"T3.a0.2.inv5", 3, "weibull", 0.2, 1.0 / 5.0, 0, 1e6, 6.56e-07, 1.4e-05, "3.6^2", "9.6"},
    {"T3.a0.2.inv10", 3, "weibull", 0.2, 1.0 / 10.0, 0, 1e6, 1.31e-06, 3.1e-05, "2.8^2", "3.5"},
    {"T3.a0.2.inv20", 3, "weibull", 0.2, 1.0 / 20.0, 0, 1e6, 2.65e-06, 5.1e-05, "2.2^2", "1.2"},
    {"T3.a0.2.inv50", 3, "weibull", 0.2, 1.0 / 50.0, 0, 1e6, 6.81e-06, 0.00017, "1.4^2", "0.03"},
    {"T3.a0.2.inv100", 3, "weibull", 0.2, 1.0 / 100.0, 0, 1e6, 1.42e-05, 0.00017, "2^2", "0.04"},
    {"T3.a0.5.inv3", 3, "weibull", 0.5, 1.0 / 3.0, 0, 500, 7.34e-10, 0.00073, "4^2", "16"},
    {"T3.a0.5.inv5", 3, "weibull", 0.5, 1.0 / 5.0, 0, 500, 1.6e-09, 0.001, "4.1^2", "12"},
    {"T3.a0.5.inv10", 3, "weibull", 0.5, 1.0 / 10.0, 0, 500, 1.17e-08, 0.0017, "47^2", "445"},
    {"T3.a0.5.inv20", 3, "weibull", 0.5, 1.0 / 20.0, 0, 500, 1.24e-05, 0.00072, "246^2", "7300"},
    {"T3.a0.5.inv50", 3, "weibull", 0.5, 1.0 / 50.0, 0, 500, 0.0079, 0.00021, "58^2", "110"},
    {"T3.a0.8.inv3", 3, "weibull", 0.8, 1.0 / 3.0, 0, 90.0, 6.29e-11, 0.0012, "330^2", "46000"},
    {"T3.a0.8.inv5", 3, "weibull", 0.8, 1.0 / 5.0, 0, 150.0, 1.65e-11, 0.00064, "930^2", "200000"},
    {"T3.a0.8.inv10", 3, "weibull", 0.8, 1.0 / 10.0, 0, 300.0, 6.94e-12, 0.00038, "2561^2", "780000"},
    {"T3.a0.8.inv20", 3, "weibull", 0.8, 1.0 / 20.0, 0, 600.0, 4.64e-12, 0.00027, "3636^2", "34000"},
    {"T3.a0.8.inv50", 3, "weibull", 0.8, 1.0 / 50.0, 0, 1500.0, 3.68e-12, 0.00021, "1485^2", "27000"},
    {"T3.a0.95.inv5", 3, "weibull", 0.95, 1.0 / 5.0, 0, 150.0, 2.61e-13, 0.00048, "10^6", ">10^5"},
    {"T3.a0.95.inv10", 3, "weibull", 0.95, 1.0 / 10.0, 0, 300.0, 2.18e-13, 0.0003, ">10^6", ">10^5"},
    {"T3.a0.95.inv20", 3, "weibull", 0.95, 1.0 / 20.0, 0, 600.0, 2e-13, 0.00022, ">10^6", "40000"},
    {"T3.a0.95.inv50", 3, "weibull", 0.95, 1.0 / 50.0, 0, 1500.0, 1.91e-13, 0.00019, ">10^6", ">10^5"},
    {"T3.a0.95.inv100", 3, "weibull", 0.95, 1.0 / 100.0, 0, 3000.0, 1.88e-13, 0.00017, ">10^6", ">10^5"},
};

const ReferenceCell kCompoundText{"T3.text", 3, "weibull", 0.75, 0.15, 0, 63.361, 5.38e-4, 3e-4, "", ""};

}  // namespace

const std::vector<ReferenceCell>& reference_cells(int table) {
    static const auto split = [] {
        std::vector<std::vector<ReferenceCell>> by(4);
        for (const auto& c : kCells) by[static_cast<std::size_t>(c.table)].push_back(c);
        return by;
    }();
    if (table < 1 || table > 3) {
        throw std::invalid_argument("reference tables are numbered 1 to 3");
    }
    return split[static_cast<std::size_t>(table)];
}

const ReferenceCell& compound_text_cell() { return kCompoundText; }

}  // namespace semicross
