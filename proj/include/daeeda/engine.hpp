#pragma once

/// @file engine.hpp
/// Generational EDA loop: select, build a model, sample, merge.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daeeda/core.hpp"
#include "daeeda/dae.hpp"
#include "daeeda/problems.hpp"

namespace daeeda {

enum class Algorithm { dae, pbil };

std::string to_string(Algorithm a);
/// Accepts "dae" or "pbil"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);

struct PbilConfig {
    double alpha = 0.02;
    std::size_t mu = 1;
};

struct EdaConfig {
    Algorithm algorithm = Algorithm::dae;
    std::size_t popsize = 100;
    std::size_t max_generations = 100;
    std::size_t stall_generations = 20;
    std::uint64_t seed = 0;

    // DAE model
    TrainConfig train;
    std::size_t hidden_size = 0; // 0 means "same as the problem size"
    std::size_t sampling_steps = 10;

    PbilConfig pbil;

    /// Keep per-generation statistics in RunRecord::trace.
    bool record_trace = false;

    /// Generation caps used for each algorithm: 100/20 for the DAE, 2000/400 for PBIL.
    static EdaConfig defaults(Algorithm algorithm);

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

enum class RunStop { success, max_generations, stall };

std::string to_string(RunStop s);

/// Snapshot taken after the initial population and after every generation.
struct GenerationStat {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    std::size_t population_size = 0;
    std::size_t candidates_evaluated = 0;
    std::size_t evaluations = 0;
    std::size_t train_epochs = 0;
};

struct RunRecord {
    double best_fitness = 0.0;
    Bitstring best_genome;
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    double wall_ms = 0.0;
    bool success = false;
    std::uint64_t seed = 0;
    RunStop stop = RunStop::max_generations;
    std::vector<GenerationStat> trace;
};

/// Best-so-far bookkeeping for the stop rules.
class ProgressTracker {
  public:
    /// Records the fitness reached by the initial population (generation 0).
    explicit ProgressTracker(double initial_best);

    /// Closes a generation. The stall counter resets on strict improvement
    /// and grows by one otherwise.
    void advance(double generation_best);

    std::size_t generation() const noexcept { return history_.size() - 1; }
    std::size_t stall() const noexcept { return stall_; }
    double best() const noexcept { return best_; }
    const std::vector<double>& history() const noexcept { return history_; }

  private:
    double best_;
    std::size_t stall_ = 0;
    std::vector<double> history_;
};

struct TerminationCriteria {
    std::size_t max_generations = 100;
    std::size_t stall_generations = 20;
    std::optional<double> optimum;
};

enum class Termination { keep_going, success, max_generations, stall };

/// Stops on the optimum, at generation >= max_generations, or once the stall
/// counter exceeds stall_generations.
Termination check_termination(const ProgressTracker& progress, const TerminationCriteria& criteria);

/// One complete EDA run. Throws std::invalid_argument for configurations that
/// do not fit the problem; model and fitness errors propagate.
RunRecord run_eda(const Problem& problem, const EdaConfig& cfg);

} // namespace daeeda
