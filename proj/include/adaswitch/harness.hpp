#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adaswitch/kserver.hpp"
#include "adaswitch/oltq.hpp"
#include "adaswitch/orra.hpp"

namespace adaswitch::harness {

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- generators

// Arrivals in periods 1..T drawn from the geometric law on {1, 2, ...} with
// success probability p, clipped to ell; zero afterwards.
oltq::Sequence gen_geometric(double p, int ell, int T, std::uint64_t seed);

enum class PatternModel { I, II };

struct PatternPair {
    oltq::Sequence reality;
    oltq::Sequence prediction;
    bool padded = false;  // T was rounded up to a multiple of 2 ell
};

// Intervals of 2 ell periods. Low demand: ell orders in the first period.
// High demand: ell orders in each of the first ell periods. Model I: reality
// is high with probability p_err, prediction all low. Model II exchanges the
// two patterns.
PatternPair gen_pattern(PatternModel model, double p_err, int ell, int T, std::uint64_t seed);

kserver::Sequence gen_points(int n, int T, std::uint64_t seed);
orra::Sequence gen_bernoulli(int n, double p, int T, std::uint64_t seed);

// ---------------------------------------------------------------- spec

struct AlgorithmSpec {
    std::string name;
    std::map<std::string, std::string> params;
};

struct ExperimentSpec {
    std::string application;  // oltq, kserver, caching, orra
    std::string generator;    // geometric, model1, model2, points, bernoulli, file
    double p = 1.0 / 15.0;
    int ell = 30;
    int T = 1000;
    double p_err = 0.0;
    std::string generator_file;
    std::string prediction = "perfect";  // perfect, paired, noisy, file
    double prediction_p_err = 0.0;
    std::string prediction_file;
    std::string metric_file;
    int metric_uniform = 0;
    int k = 0;
    int orra_n = 2;
    int orra_d = 2;
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t root_seed = 0;
    std::string sweep_axis = "none";  // none, robustness, epsilon, T, p_err, p
    std::vector<double> sweep_values{0.0};
    std::vector<AlgorithmSpec> algorithms;
    int threads = 0;  // 0: hardware concurrency
};

// One "key = value" per line; '#' starts a comment; each "algorithm.name" line
// opens a new algorithm block whose "algorithm.<param>" lines follow it.
// Relative file paths are resolved against base_dir.
ExperimentSpec parse_spec(std::istream& in, const std::string& base_dir = ".");
ExperimentSpec load_spec(const std::string& path);
void check_spec(const ExperimentSpec& spec);  // throws SpecError

// ---------------------------------------------------------------- results

struct ResultRow {
    std::string app;
    std::string algorithm;
    std::string sweep_axis;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double val = 0.0;
    double opt = 0.0;
    std::optional<double> ratio;
    double phi_star = 0.0;
    int switches = 0;
    std::optional<double> bound;
    std::string flags;
    std::optional<std::string> error;
};

struct Aggregate {
    std::string algorithm;
    std::string sweep_axis;
    double sweep_value = 0.0;
    int rows = 0;
    int ratio_rows = 0;
    double mean_ratio = 0.0;
    double stderr_ratio = 0.0;
    double mean_val = 0.0;
    double mean_opt = 0.0;
    int errors = 0;
};

struct ExperimentTable {
    std::vector<ResultRow> rows;
    std::vector<Aggregate> aggregates;
};

// Rows are ordered by algorithm, sweep point, then seed, independent of threads.
ExperimentTable run_experiment(const ExperimentSpec& spec);

// Groups by (algorithm, sweep value) in first-appearance order.
std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows);

std::string rows_csv_header();
void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_rows_csv(std::istream& in);
void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggs);
void write_aggregate_table(std::ostream& out, const std::vector<Aggregate>& aggs);
// Mean ratio with standard-error bars against the sweep value, one series per algorithm.
void write_svg(std::ostream& out, const std::vector<Aggregate>& aggs);

}  // namespace adaswitch::harness
