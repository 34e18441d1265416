#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "daeeda/harness.hpp"

using namespace daeeda;

namespace {

struct ProblemOpts {
    std::string family = "trap";
    std::size_t n = 20;
    std::size_t k = 4;
    std::string instance_file;
    std::uint64_t instance_seed = 0;
    bool permuted = false;

    void add(CLI::App* app) {
        app->add_option("--problem", family, "trap, nk or hiff")
            ->check(CLI::IsMember({"trap", "nk", "hiff"}))
            ->capture_default_str();
        app->add_option("-n,--n", n, "Problem size")->capture_default_str();
        app->add_option("-k,--k", k, "Trap size or NK epistasis")->capture_default_str();
        app->add_option("--instance", instance_file, "NK instance file");
        app->add_option("--instance-seed", instance_seed, "NK generator or trap permutation seed")
            ->capture_default_str();
        app->add_flag("--permuted", permuted, "Scatter trap bits with a seeded permutation");
    }

    ProblemSpec spec() const {
        ProblemSpec s;
        s.family = family;
        s.n = n;
        s.k = k;
        if (!instance_file.empty()) {
            s.instance_file = instance_file;
        }
        s.instance_seed = instance_seed;
        s.permuted = permuted;
        return s;
    }
};

struct EdaOpts {
    std::string algo = "dae";
    std::optional<std::size_t> max_generations;
    std::optional<std::size_t> stall;
    std::optional<std::size_t> hidden;
    std::optional<double> learning_rate;
    std::optional<double> corruption;
    std::optional<std::size_t> sampling_steps;
    std::optional<double> pbil_alpha;
    std::optional<std::size_t> pbil_mu;

    void add(CLI::App* app) {
        app->add_option("--algo", algo, "dae or pbil")->check(CLI::IsMember({"dae", "pbil"}))->capture_default_str();
        app->add_option("--max-generations", max_generations, "Generation cap");
        app->add_option("--stall", stall, "Generations without improvement before stopping");
        app->add_option("--hidden", hidden, "DAE hidden units (default: n)");
        app->add_option("--learning-rate", learning_rate, "DAE learning rate");
        app->add_option("--corruption", corruption, "DAE corruption rate");
        app->add_option("--sampling-steps", sampling_steps, "DAE corrupt/reconstruct iterations per sample");
        app->add_option("--pbil-alpha", pbil_alpha, "PBIL learning rate");
        app->add_option("--pbil-mu", pbil_mu, "PBIL individuals per update");
    }

    EdaConfig config() const {
        auto cfg = EdaConfig::defaults(parse_algorithm(algo));
        if (max_generations) {
            cfg.max_generations = *max_generations;
        }
        if (stall) {
            cfg.stall_generations = *stall;
        }
        if (hidden) {
            cfg.hidden_size = *hidden;
        }
        if (learning_rate) {
            cfg.train.learning_rate = *learning_rate;
        }
        if (corruption) {
            cfg.train.corruption_rate = *corruption;
        }
        if (sampling_steps) {
            cfg.sampling_steps = *sampling_steps;
        }
        if (pbil_alpha) {
            cfg.pbil.alpha = *pbil_alpha;
        }
        if (pbil_mu) {
            cfg.pbil.mu = *pbil_mu;
        }
        return cfg;
    }
};

void print_summary(const std::vector<SweepSummary>& summaries, const std::string& json_path) {
    render_table(std::cout, summaries);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            throw std::runtime_error("cannot open '" + json_path + "' for writing");
        }
        out << summary_json(summaries) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutionary optimization with denoising-autoencoder and PBIL models"};
    app.require_subcommand(1);

    // gen-nk
    auto* gen = app.add_subcommand("gen-nk", "Generate an NK landscape instance");
    std::size_t gen_n = 0;
    std::size_t gen_k = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    bool gen_solve = false;
    gen->add_option("-n,--n", gen_n, "Number of bits")->required();
    gen->add_option("-k,--k", gen_k, "Epistasis")->required();
    gen->add_option("--seed", gen_seed, "Generator seed")->required();
    gen->add_option("-o,--output", gen_out, "Output file")->required();
    gen->add_flag("--solve", gen_solve, "Store the exact optimum (n <= 26)");

    // solve-nk
    auto* solve = app.add_subcommand("solve-nk", "Exhaustively solve an NK instance");
    std::string solve_in;
    std::string solve_out;
    solve->add_option("instance", solve_in, "Instance file")->required();
    solve->add_option("-o,--output", solve_out, "Write the instance with its optimum here");

    // run
    auto* run = app.add_subcommand("run", "Single EDA run");
    ProblemOpts run_problem;
    EdaOpts run_eda_opts;
    std::size_t run_popsize = 100;
    std::uint64_t run_seed = 0;
    bool run_trace = false;
    run_problem.add(run);
    run_eda_opts.add(run);
    run->add_option("--popsize", run_popsize, "Population size")->capture_default_str();
    run->add_option("--seed", run_seed, "Run seed")->required();
    run->add_flag("--trace", run_trace, "Print per-generation statistics");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Population-size sweep with repeated runs");
    ProblemOpts sw_problem;
    EdaOpts sw_eda;
    std::vector<std::size_t> sw_popsizes;
    std::vector<std::size_t> sw_range;
    std::size_t sw_runs = 20;
    std::uint64_t sw_seed = 0;
    std::string sw_out;
    std::optional<double> sw_stop;
    std::size_t sw_threads = 1;
    std::string sw_json;
    sw_problem.add(sweep);
    sw_eda.add(sweep);
    auto* list_opt = sweep->add_option("--popsizes", sw_popsizes, "Explicit increasing popsize list")->delimiter(',');
    auto* range_opt = sweep->add_option("--popsize-range", sw_range, "FROM TO: doubling sequence")->expected(2);
    list_opt->excludes(range_opt);
    sweep->add_option("--runs", sw_runs, "Runs per popsize")->capture_default_str();
    sweep->add_option("--seed", sw_seed, "Base seed")->required();
    sweep->add_option("-o,--output", sw_out, "CSV output")->required();
    sweep->add_option("--stop-at-rate", sw_stop, "Stop once a popsize reaches this success rate")
        ->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--threads", sw_threads, "Concurrent runs per popsize")->capture_default_str();
    sweep->add_option("--json", sw_json, "Write the summary as JSON");

    // report
    auto* report = app.add_subcommand("report", "Summarize sweep CSV files");
    std::vector<std::string> rep_files;
    std::vector<double> rep_thresholds{0.5, 0.9};
    std::string rep_json;
    report->add_option("files", rep_files, "Sweep CSV files")->required();
    report->add_option("--thresholds", rep_thresholds, "Success-rate thresholds")->delimiter(',')->capture_default_str();
    report->add_option("--json", rep_json, "Write the summary as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            auto inst = generate_nk(gen_n, gen_k, gen_seed);
            if (gen_solve) {
                auto [x, f] = solve_nk_exact(inst);
                inst.set_optimum({x, f, true});
            }
            inst.save(gen_out);
        } else if (*solve) {
            auto inst = NkInstance::load(solve_in);
            auto [x, f] = solve_nk_exact(inst);
            inst.set_optimum({x, f, true});
            std::cout << x.to_string() << ' ' << std::setprecision(17) << f << '\n';
            if (!solve_out.empty()) {
                inst.save(solve_out);
            }
        } else if (*run) {
            auto problem = run_problem.spec().make();
            auto cfg = run_eda_opts.config();
            cfg.popsize = run_popsize;
            cfg.seed = run_seed;
            cfg.record_trace = run_trace;
            auto rec = run_eda(*problem, cfg);
            if (run_trace) {
                for (const auto& g : rec.trace) {
                    std::cout << "gen " << g.generation << " best " << g.best_fitness << " evals " << g.evaluations
                              << " epochs " << g.train_epochs << '\n';
                }
            }
            std::cout << "success " << (rec.success ? 1 : 0) << "\nbest_fitness " << std::setprecision(17)
                      << rec.best_fitness << "\nbest " << rec.best_genome.to_string() << "\nevaluations "
                      << rec.evaluations << "\ngenerations " << rec.generations << "\nstop " << to_string(rec.stop)
                      << "\nwall_ms " << std::setprecision(6) << rec.wall_ms << '\n';
        } else if (*sweep) {
            SweepConfig cfg;
            cfg.problem = sw_problem.spec();
            cfg.eda = sw_eda.config();
            if (!sw_range.empty()) {
                cfg.popsizes = doubling_popsizes(sw_range[0], sw_range[1]);
            } else if (!sw_popsizes.empty()) {
                cfg.popsizes = sw_popsizes;
            } else {
                std::cerr << "sweep: give --popsizes or --popsize-range\n";
                return 1;
            }
            cfg.runs = sw_runs;
            cfg.base_seed = sw_seed;
            cfg.output_path = sw_out;
            cfg.stop_at_rate = sw_stop;
            cfg.threads = sw_threads;
            auto runs = run_sweep(cfg, [](const SweepRun& r) {
                std::cerr << "popsize " << r.row.popsize << " run " << r.row.run << ": " << r.row.stop_reason
                          << " evals " << r.row.evaluations << '\n';
            });
            std::vector<CsvRow> rows;
            rows.reserve(runs.size());
            for (const auto& r : runs) {
                rows.push_back(r.row);
            }
            print_summary(summarize(rows), sw_json);
        } else if (*report) {
            std::vector<CsvRow> rows;
            for (const auto& f : rep_files) {
                auto part = read_csv_file(f);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            print_summary(summarize(rows, rep_thresholds), rep_json);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
