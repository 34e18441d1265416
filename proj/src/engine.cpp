#include "daeeda/engine.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "daeeda/pbil.hpp"

namespace daeeda {

std::string to_string(Algorithm a) {
    return a == Algorithm::dae ? "dae" : "pbil";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "dae") {
        return Algorithm::dae;
    }
    if (name == "pbil") {
        return Algorithm::pbil;
    }
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(RunStop s) {
    switch (s) {
    case RunStop::success:
        return "success";
    case RunStop::max_generations:
        return "max-generations";
    case RunStop::stall:
        return "stall";
    }
    return "unknown";
}

EdaConfig EdaConfig::defaults(Algorithm algorithm) {
    EdaConfig cfg;
    cfg.algorithm = algorithm;
    if (algorithm == Algorithm::pbil) {
        cfg.max_generations = 2000;
        cfg.stall_generations = 400;
    }
    return cfg;
}

void EdaConfig::validate() const {
    if (popsize < 4) {
        throw std::invalid_argument("EdaConfig: popsize must be at least 4");
    }
    if (max_generations == 0 || stall_generations == 0) {
        throw std::invalid_argument("EdaConfig: generation limits must be positive");
    }
    if (algorithm == Algorithm::dae) {
        train.validate();
        if ((popsize + 1) / 2 < kMinTrainingExamples) {
            throw std::invalid_argument("EdaConfig: DAE needs popsize >= " +
                                        std::to_string(2 * kMinTrainingExamples - 1) +
                                        " so that selection leaves enough training examples");
        }
        if (sampling_steps == 0) {
            throw std::invalid_argument("EdaConfig: sampling_steps must be positive");
        }
    } else {
        if (!(pbil.alpha > 0.0 && pbil.alpha < 1.0)) {
            throw std::invalid_argument("EdaConfig: PBIL alpha must lie in (0,1)");
        }
        if (pbil.mu == 0 || pbil.mu > popsize) {
            throw std::invalid_argument("EdaConfig: PBIL mu must lie in [1, popsize]");
        }
    }
}

ProgressTracker::ProgressTracker(double initial_best) : best_(initial_best), history_{initial_best} {}

void ProgressTracker::advance(double generation_best) {
    if (generation_best > best_) {
        best_ = generation_best;
        stall_ = 0;
    } else {
        ++stall_;
    }
    history_.push_back(best_);
}

Termination check_termination(const ProgressTracker& progress, const TerminationCriteria& criteria) {
    if (criteria.optimum && progress.best() >= *criteria.optimum) {
        return Termination::success;
    }
    if (progress.generation() >= criteria.max_generations) {
        return Termination::max_generations;
    }
    if (progress.stall() > criteria.stall_generations) {
        return Termination::stall;
    }
    return Termination::keep_going;
}

namespace {

std::size_t evaluate_all(const Problem& problem, Population& pop) {
    std::size_t calls = 0;
    for (auto& ind : pop) {
        if (!ind.evaluated()) {
            ind.set_fitness(problem.evaluate(ind.genome()));
            ++calls;
        }
    }
    return calls;
}

double population_best(const Population& pop) {
    return pop[pop.best_index()].fitness();
}

class RunState {
  public:
    RunState(const Problem& problem, const EdaConfig& cfg)
        : cfg_(cfg), criteria_{cfg.max_generations, cfg.stall_generations, problem.optimum()} {}

    void start(const Population& pop, std::size_t evaluations) {
        evaluations_ = evaluations;
        progress_.emplace(population_best(pop));
        keep_best(pop);
        snapshot(pop.size(), evaluations, 0);
    }

    void close_generation(const Population& pop, std::size_t candidates, std::size_t epochs) {
        evaluations_ += candidates;
        progress_->advance(population_best(pop));
        keep_best(pop);
        snapshot(pop.size(), candidates, epochs);
    }

    Termination status() const { return check_termination(*progress_, criteria_); }
    std::size_t next_generation() const { return progress_->generation() + 1; }

    RunRecord finish(Termination t, std::chrono::steady_clock::time_point t0) {
        record_.evaluations = evaluations_;
        record_.generations = progress_->generation();
        record_.seed = cfg_.seed;
        record_.success = criteria_.optimum.has_value() && record_.best_fitness >= *criteria_.optimum;
        record_.stop = t == Termination::success  ? RunStop::success
                       : t == Termination::stall ? RunStop::stall
                                                 : RunStop::max_generations;
        record_.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return std::move(record_);
    }

  private:
    void keep_best(const Population& pop) {
        const auto& top = pop[pop.best_index()];
        if (record_.best_genome.empty() || top.fitness() > record_.best_fitness) {
            record_.best_fitness = top.fitness();
            record_.best_genome = top.genome();
        }
    }

    void snapshot(std::size_t pop_size, std::size_t candidates, std::size_t epochs) {
        if (cfg_.record_trace) {
            record_.trace.push_back(
                {progress_->generation(), progress_->best(), pop_size, candidates, evaluations_, epochs});
        }
    }

    const EdaConfig& cfg_;
    TerminationCriteria criteria_;
    std::optional<ProgressTracker> progress_;
    std::size_t evaluations_ = 0;
    RunRecord record_;
};

RunRecord run_dae(const Problem& problem, const EdaConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = problem.size();
    const std::size_t m = cfg.hidden_size == 0 ? n : cfg.hidden_size;
    const Rng root(cfg.seed);
    RunState state(problem, cfg);

    auto init_rng = root.substream(0, StreamPurpose::init_population);
    Population pop = random_population(n, cfg.popsize, init_rng);
    state.start(pop, evaluate_all(problem, pop));

    for (auto status = state.status(); ; status = state.status()) {
        if (status != Termination::keep_going) {
            return state.finish(status, t0);
        }
        const std::size_t g = state.next_generation();

        auto select_rng = root.substream(g, StreamPurpose::selection);
        Population next = tournament_select(pop, select_rng);

        auto init_model_rng = root.substream(g, StreamPurpose::model_init);
        auto train_rng = root.substream(g, StreamPurpose::training);
        const auto parents = next.genomes();
        auto [model, report] = train(init_dae(n, m, init_model_rng), parents, cfg.train, train_rng);

        auto sample_rng = root.substream(g, StreamPurpose::sampling);
        Population candidates(n);
        for (std::size_t c = 0; c < cfg.popsize / 2; ++c) {
            auto x = sample(model, cfg.sampling_steps, cfg.train.corruption_rate, sample_rng);
            candidates.push_back(Individual(binarize(x, sample_rng)));
        }
        const std::size_t calls = evaluate_all(problem, candidates);
        next.append(candidates);
        pop = std::move(next);
        state.close_generation(pop, calls, report.epochs_run);
    }
}

std::vector<Bitstring> top_genomes(const Population& pop, std::size_t mu) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&pop](std::size_t a, std::size_t b) { return pop[a].fitness() > pop[b].fitness(); });
    std::vector<Bitstring> out;
    out.reserve(mu);
    for (std::size_t k = 0; k < mu; ++k) {
        out.push_back(pop[idx[k]].genome());
    }
    return out;
}

Population sample_pbil(const ProbabilityVector& p, std::size_t count, Rng& rng) {
    Population pop(p.size());
    for (std::size_t c = 0; c < count; ++c) {
        pop.push_back(Individual(pbil_sample(p, rng)));
    }
    return pop;
}

RunRecord run_pbil(const Problem& problem, const EdaConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const Rng root(cfg.seed);
    RunState state(problem, cfg);

    auto p = pbil_init(problem.size());
    auto init_rng = root.substream(0, StreamPurpose::pbil_sampling);
    Population pop = sample_pbil(p, cfg.popsize, init_rng);
    state.start(pop, evaluate_all(problem, pop));

    for (auto status = state.status(); ; status = state.status()) {
        if (status != Termination::keep_going) {
            return state.finish(status, t0);
        }
        const std::size_t g = state.next_generation();
        p = pbil_update(p, top_genomes(pop, cfg.pbil.mu), cfg.pbil.alpha);
        auto rng = root.substream(g, StreamPurpose::pbil_sampling);
        pop = sample_pbil(p, cfg.popsize, rng);
        state.close_generation(pop, evaluate_all(problem, pop), 0);
    }
}

} // namespace

RunRecord run_eda(const Problem& problem, const EdaConfig& cfg) {
    cfg.validate();
    return cfg.algorithm == Algorithm::dae ? run_dae(problem, cfg) : run_pbil(problem, cfg);
}

} // namespace daeeda
