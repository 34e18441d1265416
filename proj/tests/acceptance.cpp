// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "daeeda/harness.hpp"
#include "engine_invariants.hpp"

using namespace daeeda;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs) {
    std::printf("[%s] %d. %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
        ++failures;
    }
}

void run_criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    report(id, name, o, seconds_since(t0));
}

std::string fmt(double v, int prec = 1) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(prec);
    s << v;
    return s.str();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Gradient oracle

double reference_loss(const DaeModel& model, const RealVector& x, const RealVector& x_hat) {
    const std::size_t n = model.visible_size();
    const std::size_t m = model.hidden_size();
    std::vector<double> h(m);
    for (std::size_t j = 0; j < m; ++j) {
        double a = model.hidden_bias()[j];
        for (std::size_t i = 0; i < n; ++i) {
            a += x_hat[i] * model.weight(i, j);
        }
        h[j] = 1.0 / (1.0 + std::exp(-a));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = model.visible_bias()[i];
        for (std::size_t j = 0; j < m; ++j) {
            a += h[j] * model.weight(i, j);
        }
        const double z = 1.0 / (1.0 + std::exp(-a));
        loss -= x[i] * std::log(z) + (1.0 - x[i]) * std::log(1.0 - z);
    }
    return loss;
}

Outcome gradient_oracle() {
    const auto t0 = Clock::now();
    Rng r(31415);
    const double step = 1e-5;
    double worst = 0.0;
    std::size_t partials = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + r.below(8);
        const std::size_t m = 1 + r.below(8);
        DaeModel model(n, m);
        for (auto& w : model.weights()) {
            w = r.uniform(-1, 1);
        }
        for (auto& b : model.hidden_bias()) {
            b = r.uniform(-0.5, 0.5);
        }
        for (auto& b : model.visible_bias()) {
            b = r.uniform(-0.5, 0.5);
        }
        const std::size_t batch = 1 + r.below(5);
        std::vector<RealVector> xs;
        std::vector<RealVector> xhats;
        for (std::size_t e = 0; e < batch; ++e) {
            RealVector x(n);
            for (auto& v : x) {
                v = r.coin() ? 1.0 : 0.0;
            }
            xs.push_back(x);
            xhats.push_back(corrupt(x, 0.25, r));
        }
        DaeGradient grad(model);
        for (std::size_t e = 0; e < batch; ++e) {
            accumulate_gradient(model, xs[e], xhats[e], grad);
        }
        auto total = [&](const DaeModel& mm) {
            double l = 0.0;
            for (std::size_t e = 0; e < batch; ++e) {
                l += reference_loss(mm, xs[e], xhats[e]);
            }
            return l;
        };
        auto check = [&](const std::function<double&(DaeModel&)>& param, double analytic) {
            auto plus = model;
            auto minus = model;
            param(plus) += step;
            param(minus) -= step;
            const double numeric = (total(plus) - total(minus)) / (2 * step);
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
            ++partials;
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                check([i, j](DaeModel& mm) -> double& { return mm.weight(i, j); }, grad.w[i * m + j]);
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            check([j](DaeModel& mm) -> double& { return mm.hidden_bias()[j]; }, grad.bh[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            check([i](DaeModel& mm) -> double& { return mm.visible_bias()[i]; }, grad.bz[i]);
        }
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-4 && secs < 10.0,
            std::to_string(partials) + " partials, max relative error " + sci(worst) + " (< 1e-4), " +
                fmt(secs, 2) + " s (< 10 s)"};
}

// ---------------------------------------------------------------------------
// 2. Fitness oracles

Bitstring from_mask(std::uint64_t mask, std::size_t n) {
    Bitstring x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.set(i, ((mask >> (n - 1 - i)) & 1U) != 0);
    }
    return x;
}

double trap_blocks(const Bitstring& x, std::size_t k) {
    double total = 0.0;
    for (std::size_t start = 0; start < x.size(); start += k) {
        std::size_t zeros = 0;
        for (std::size_t j = start; j < start + k; ++j) {
            zeros += x[j] ? 0 : 1;
        }
        total += zeros == 0 ? static_cast<double>(k) : static_cast<double>(zeros) - 1.0;
    }
    return total;
}

std::pair<int, double> hiff_rec(const Bitstring& x, std::size_t lo, std::size_t len) {
    if (len == 1) {
        return {x[lo], 0.0};
    }
    auto [ls, lf] = hiff_rec(x, lo, len / 2);
    auto [rs, rf] = hiff_rec(x, lo + len / 2, len / 2);
    if (ls != -1 && ls == rs) {
        return {ls, lf + rf + static_cast<double>(len)};
    }
    return {-1, lf + rf};
}

Outcome fitness_oracles() {
    const auto t0 = Clock::now();
    TrapProblem trap(4, 2);
    HiffProblem hiff(3);
    std::size_t trap_bad = 0;
    std::size_t hiff_bad = 0;
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
        const auto x = from_mask(mask, 8);
        trap_bad += trap.evaluate(x) != trap_blocks(x, 4) ? 1 : 0;
        hiff_bad += hiff.evaluate(x) != hiff_rec(x, 0, 8).second ? 1 : 0;
    }
    std::size_t nk_bad = 0;
    for (std::size_t k : {2UL, 4UL}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto inst = generate_nk(12, k, 1000 * k + seed);
            double best = -1.0;
            for (std::uint64_t mask = 0; mask < (1U << 12); ++mask) {
                best = std::max(best, inst.evaluate(from_mask(mask, 12)));
            }
            auto [x, f] = solve_nk_exact(inst);
            nk_bad += (f != best || inst.evaluate(x) != f) ? 1 : 0;
        }
    }
    const double secs = seconds_since(t0);
    return {trap_bad == 0 && hiff_bad == 0 && nk_bad == 0 && secs < 30.0,
            "trap mismatches " + std::to_string(trap_bad) + "/256, hiff mismatches " + std::to_string(hiff_bad) +
                "/256, nk mismatches " + std::to_string(nk_bad) + "/10, " + fmt(secs, 2) + " s (< 30 s)"};
}

// ---------------------------------------------------------------------------
// 3. Mode recovery

Outcome mode_recovery() {
    const auto t0 = Clock::now();
    const std::size_t n = 12;
    std::vector<Bitstring> data;
    for (int e = 0; e < 100; ++e) {
        data.push_back(Bitstring(n));
        data.push_back(Bitstring::ones(n));
    }
    Rng r(4242);
    const TrainConfig cfg;
    auto [model, rep] = train(init_dae(n, n, r), data, cfg, r);
    int near = 0;
    const int samples = 500;
    for (int s = 0; s < samples; ++s) {
        const auto ones = binarize(sample(model, 10, cfg.corruption_rate, r), r).count_ones();
        near += (ones <= 1 || ones >= n - 1) ? 1 : 0;
    }
    const double share = static_cast<double>(near) / samples;
    const double secs = seconds_since(t0);
    return {share >= 0.7 && secs < 60.0, std::to_string(near) + "/500 samples within Hamming 1 of a mode (" +
                                             fmt(100 * share) + "% >= 70%), trained " + std::to_string(rep.epochs_run) +
                                             " epochs, " + fmt(secs, 2) + " s (< 60 s)"};
}

// ---------------------------------------------------------------------------
// 4-6, 8. Population sweeps on traps

struct SweepResult {
    std::vector<SweepRun> runs;
    std::optional<PopsizeStats> at_half;
    double median_evals = 0.0;
};

std::size_t invariant_checked = 0;
std::vector<std::string> invariant_violations;

SweepResult trap_sweep(std::size_t k, std::size_t blocks, Algorithm algo, std::size_t max_popsize, std::uint64_t seed,
                       const std::string& csv) {
    SweepConfig cfg;
    cfg.problem = ProblemSpec{"trap", k * blocks, k};
    cfg.eda = EdaConfig::defaults(algo);
    cfg.eda.record_trace = true;
    cfg.popsizes = doubling_popsizes(50, max_popsize);
    cfg.runs = 20;
    cfg.base_seed = seed;
    cfg.output_path = csv;
    cfg.stop_at_rate = 0.5;

    SweepResult out;
    out.runs = run_sweep(cfg, [&](const SweepRun& r) {
        std::fprintf(stderr, "  %s %zu-traps popsize %zu run %zu: %s, %zu evals\n", to_string(algo).c_str(), k,
                     r.row.popsize, r.row.run, r.row.stop_reason.c_str(), r.row.evaluations);
        ++invariant_checked;
        if (!r.record) {
            invariant_violations.push_back(r.row.stop_reason);
            return;
        }
        auto v = testing::check_run_invariants(*r.record, r.row.popsize);
        if (!v.empty()) {
            invariant_violations.push_back(v);
        }
    });
    std::vector<CsvRow> rows;
    for (auto& r : out.runs) {
        rows.push_back(r.row);
    }
    auto summary = summarize(rows, {0.5});
    if (!summary.empty() && summary[0].picks[0].selected) {
        out.at_half = summary[0].picks[0].selected;
        std::vector<double> evals;
        for (const auto& r : rows) {
            if (r.popsize == out.at_half->popsize && !r.failed()) {
                evals.push_back(static_cast<double>(r.evaluations));
            }
        }
        std::sort(evals.begin(), evals.end());
        const std::size_t h = evals.size() / 2;
        out.median_evals = evals.size() % 2 == 1 ? evals[h] : 0.5 * (evals[h - 1] + evals[h]);
    }
    for (auto& r : out.runs) {
        r.record.reset(); // traces are only needed for the invariant check
    }
    return out;
}

Outcome reproduction(const SweepResult& s, double lo, double hi) {
    if (!s.at_half) {
        return {false, "no popsize reached 50% success"};
    }
    const auto& p = *s.at_half;
    const bool ok = p.evaluations_mean >= lo && p.evaluations_mean <= hi;
    return {ok, "popsize " + std::to_string(p.popsize) + " success " + fmt(100 * p.success_rate) +
                    "%, evaluations " + fmt(p.evaluations_mean) + " +- " + fmt(p.evaluations_std) + " (in [" +
                    fmt(lo, 0) + ", " + fmt(hi, 0) + "]), time " + fmt(p.wall_ms_mean / 1000, 2) + " s"};
}

// ---------------------------------------------------------------------------
// 7. Determinism

std::string csv_without_wall(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        for (std::size_t col = 0; std::getline(ls, cell, ','); ++col) {
            if (col != 12) {
                out << cell;
            }
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

Outcome determinism() {
    SweepConfig cfg;
    cfg.problem = ProblemSpec{"trap", 20, 4};
    cfg.eda = EdaConfig::defaults(Algorithm::dae);
    cfg.popsizes = {50, 100};
    cfg.runs = 5;
    cfg.base_seed = 77;
    cfg.output_path = "determinism_a.csv";
    run_sweep(cfg);
    cfg.output_path = "determinism_b.csv";
    run_sweep(cfg);
    auto pcfg = cfg;
    pcfg.eda = EdaConfig::defaults(Algorithm::pbil);
    pcfg.output_path = "determinism_c.csv";
    run_sweep(pcfg);
    pcfg.output_path = "determinism_d.csv";
    run_sweep(pcfg);
    const auto a = csv_without_wall("determinism_a.csv");
    const auto b = csv_without_wall("determinism_b.csv");
    const auto c = csv_without_wall("determinism_c.csv");
    const auto d = csv_without_wall("determinism_d.csv");
    const bool ok = !a.empty() && a == b && !c.empty() && c == d;
    return {ok, std::string("dae sweep CSVs ") + (a == b ? "identical" : "differ") + ", pbil sweep CSVs " +
                    (c == d ? "identical" : "differ") + " (wall_ms excluded)"};
}

} // namespace

int main() {
    std::printf("Acceptance suite\n");
    run_criterion(1, "gradient oracle", gradient_oracle);
    run_criterion(2, "fitness oracles", fitness_oracles);
    run_criterion(3, "mode recovery", mode_recovery);

    SweepResult dae4;
    SweepResult dae5;
    SweepResult pbil4;
    run_criterion(4, "4-traps 20 bit, DAE-EDA minimal 50% popsize", [&] {
        dae4 = trap_sweep(4, 5, Algorithm::dae, 16000, 2015, "accept_dae_trap4.csv");
        return reproduction(dae4, 255.0, 25500.0);
    });
    run_criterion(5, "5-traps 25 bit, DAE-EDA minimal 50% popsize", [&] {
        dae5 = trap_sweep(5, 5, Algorithm::dae, 16000, 2016, "accept_dae_trap5.csv");
        return reproduction(dae5, 0.0, 116500.0);
    });
    run_criterion(6, "4-traps 20 bit, PBIL needs more evaluations than DAE-EDA", [&] {
        pbil4 = trap_sweep(4, 5, Algorithm::pbil, 512000, 2017, "accept_pbil_trap4.csv");
        if (!dae4.at_half) {
            return Outcome{false, "DAE-EDA sweep found no 50% popsize"};
        }
        if (!pbil4.at_half) {
            return Outcome{false, "PBIL sweep found no 50% popsize"};
        }
        const bool ok = pbil4.median_evals > dae4.median_evals;
        return Outcome{ok, "median evaluations PBIL " + fmt(pbil4.median_evals) + " (popsize " +
                               std::to_string(pbil4.at_half->popsize) + ", mean " +
                               fmt(pbil4.at_half->evaluations_mean) + ") vs DAE-EDA " + fmt(dae4.median_evals) +
                               " (popsize " + std::to_string(dae4.at_half->popsize) + ", mean " +
                               fmt(dae4.at_half->evaluations_mean) + ")"};
    });
    run_criterion(7, "sweep determinism", determinism);
    run_criterion(8, "engine invariants over the sweeps of 4-6", [] {
        if (invariant_checked == 0) {
            return Outcome{false, "no runs recorded"};
        }
        return Outcome{invariant_violations.empty(),
                       std::to_string(invariant_checked) + " runs checked, " +
                           std::to_string(invariant_violations.size()) + " violations" +
                           (invariant_violations.empty() ? "" : ": " + invariant_violations.front())};
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
