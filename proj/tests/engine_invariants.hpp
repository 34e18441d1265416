#pragma once

#include <string>

#include "daeeda/engine.hpp"

namespace daeeda::testing {

/// Empty string when the trace of `rec` satisfies the engine invariants,
/// otherwise a description of the first violation.
inline std::string check_run_invariants(const RunRecord& rec, std::size_t popsize) {
    if (rec.trace.empty()) {
        return "no trace recorded";
    }
    if (rec.trace.size() != rec.generations + 1) {
        return "trace length does not match generation count";
    }
    std::size_t expected_evals = 0;
    double prev_best = rec.trace.front().best_fitness;
    for (const auto& g : rec.trace) {
        if (g.population_size != popsize) {
            return "population size " + std::to_string(g.population_size) + " at generation " +
                   std::to_string(g.generation);
        }
        if (g.best_fitness < prev_best) {
            return "best fitness decreased at generation " + std::to_string(g.generation);
        }
        prev_best = g.best_fitness;
        expected_evals += g.candidates_evaluated;
        if (g.evaluations != expected_evals) {
            return "evaluation count drift at generation " + std::to_string(g.generation);
        }
    }
    if (rec.trace.front().candidates_evaluated != popsize) {
        return "initial population not fully evaluated";
    }
    if (rec.evaluations != expected_evals) {
        return "final evaluation count differs from popsize + sum of candidates";
    }
    if (rec.best_fitness != rec.trace.back().best_fitness) {
        return "record best differs from trace";
    }
    return {};
}

} // namespace daeeda::testing
