#pragma once

/// @file harness.hpp
/// Experiment orchestration: population-size sweeps with repeated seeded runs,
/// CSV run records, and minimal-popsize summaries at success-rate thresholds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "daeeda/engine.hpp"
#include "daeeda/problems.hpp"

namespace daeeda {

class SchemaError : public ParseError {
  public:
    using ParseError::ParseError;
};

/// Which benchmark to build.
struct ProblemSpec {
    std::string family = "trap"; // trap | nk | hiff
    std::size_t n = 0;
    /// Trap size for traps, epistasis for NK; unused for HIFF.
    std::size_t k = 0;
    /// NK: file to load instead of generating.
    std::optional<std::string> instance_file;
    /// NK: generator seed. Traps: permutation seed when `permuted` is set.
    std::uint64_t instance_seed = 0;
    bool permuted = false;

    /// Throws std::invalid_argument for inconsistent specs. Generated NK
    /// instances with n <= kMaxExactNk are solved exactly so runs can detect success.
    std::unique_ptr<Problem> make() const;
};

struct SweepConfig {
    ProblemSpec problem;
    /// Per-run template; popsize and seed are filled in for every run.
    EdaConfig eda;
    std::vector<std::size_t> popsizes;
    std::size_t runs = 20;
    std::uint64_t base_seed = 0;
    std::string output_path;
    /// Skip larger popsizes once one reaches this success rate.
    std::optional<double> stop_at_rate;
    std::size_t threads = 1;

    /// Throws std::invalid_argument on an empty or non-increasing popsize list or zero runs.
    void validate() const;
};

/// from, 2*from, 4*from, ... up to and including `to` when it lands on the sequence.
std::vector<std::size_t> doubling_popsizes(std::size_t from, std::size_t to);

/// Seed of run `run` at population size `popsize`.
std::uint64_t sweep_run_seed(std::uint64_t base_seed, std::size_t popsize, std::size_t run);

/// Column names, in file order.
const std::vector<std::string>& csv_columns();

/// One CSV line of the run log.
struct CsvRow {
    std::string problem;
    std::string algo;
    std::size_t n = 0;
    std::size_t k = 0;
    std::string instance_id;
    std::size_t popsize = 0;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool success = false;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    double wall_ms = 0.0;
    std::string stop_reason;

    bool failed() const { return stop_reason.rfind("error:", 0) == 0; }
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const CsvRow& row);
/// Throws SchemaError on a header mismatch and ParseError on a bad row.
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> read_csv_file(const std::string& path);

struct SweepRun {
    CsvRow row;
    /// Empty for runs that failed with an error.
    std::optional<RunRecord> record;
};

/// Runs every (popsize, run) pair, appending one CSV row per run to
/// cfg.output_path (flushed row by row, in (popsize, run) order). A run that
/// throws is logged with success=false and an "error:<what>" stop reason.
/// The optional callback observes each finished run in file order.
std::vector<SweepRun> run_sweep(const SweepConfig& cfg, const std::function<void(const SweepRun&)>& on_run = {});

struct PopsizeStats {
    std::size_t popsize = 0;
    std::size_t runs = 0;
    std::size_t successes = 0;
    std::size_t failed = 0;
    double success_rate = 0.0;
    double evaluations_mean = 0.0;
    double evaluations_std = 0.0;
    double wall_ms_mean = 0.0;
    double wall_ms_std = 0.0;
};

struct ThresholdPick {
    double threshold = 0.0;
    /// nullopt when no popsize reached the threshold.
    std::optional<PopsizeStats> selected;
};

struct SweepSummary {
    std::string problem;
    std::string algo;
    std::size_t n = 0;
    std::size_t k = 0;
    std::string instance_id;
    std::vector<PopsizeStats> by_popsize;
    std::vector<ThresholdPick> picks;
};

/// Groups rows by (problem, algo, n, k, instance_id) and popsize. Statistics
/// are over all non-error runs of a popsize, successful or not; a single run
/// has standard deviation 0.
std::vector<SweepSummary> summarize(const std::vector<CsvRow>& rows, const std::vector<double>& thresholds = {0.5, 0.9});

/// "4-Traps 20 bit", "NK n=12, k=4, i=7", "HIFF64".
std::string problem_label(const SweepSummary& s);

/// Plain-text table, one line per (problem, algorithm), with evaluations and
/// time (seconds) at each threshold.
void render_table(std::ostream& out, const std::vector<SweepSummary>& summaries);

/// Machine-readable summary document (JSON).
std::string summary_json(const std::vector<SweepSummary>& summaries);

} // namespace daeeda
