#pragma once
// Named verification suites of the command-line runner.  Each suite returns
// a list of metrics; hard metrics decide the exit status, soft ones are
// diagnostics recorded alongside.

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"

namespace symspace::cli {

// Optional data series behind a metric, written as metric-<name>.csv.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

struct Metric {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
    bool hard = true;
    Table table;
};

struct SuiteResult {
    std::string suite;
    std::string space;
    std::vector<Metric> metrics;
    nlohmann::json extra;  // suite-specific descriptors (engine, Weyl data)
    bool pass() const;
};

using Logger = std::function<void(const std::string&)>;

SuiteResult run_suite(const RunConfig& c, const Logger& log);

// One norm-lab evaluation per value of the axis ("p", "lambda-scale" or
// "translate"); returns the CSV matrix (axis column first).
Table sweep_norm_lab(const RunConfig& c, const std::string& axis, const Logger& log);

// summary.json plus one metric-<name>.csv per metric into c.output_dir.
void write_outputs(const SuiteResult& r, const std::string& dir);

}  // namespace symspace::cli
