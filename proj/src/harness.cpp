#include "daeeda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace daeeda {

// ---------------------------------------------------------------------------
// Problems

std::unique_ptr<Problem> ProblemSpec::make() const {
    if (family == "trap") {
        if (k < 2 || n == 0 || n % k != 0) {
            throw std::invalid_argument("trap: n must be a positive multiple of k >= 2");
        }
        if (permuted) {
            return std::make_unique<TrapProblem>(k, n / k, instance_seed);
        }
        return std::make_unique<TrapProblem>(k, n / k);
    }
    if (family == "hiff") {
        std::size_t levels = 0;
        while ((std::size_t{1} << levels) < n) {
            ++levels;
        }
        if (n < 2 || (std::size_t{1} << levels) != n) {
            throw std::invalid_argument("hiff: n must be a power of two >= 2");
        }
        return std::make_unique<HiffProblem>(levels);
    }
    if (family == "nk") {
        if (instance_file) {
            auto inst = NkInstance::load(*instance_file);
            if (n != 0 && inst.n() != n) {
                throw std::invalid_argument("nk: instance file has n = " + std::to_string(inst.n()));
            }
            return std::make_unique<NkInstance>(std::move(inst));
        }
        auto inst = generate_nk(n, k, instance_seed);
        if (n <= kMaxExactNk) {
            auto [x, f] = solve_nk_exact(inst);
            inst.set_optimum({x, f, true});
        }
        return std::make_unique<NkInstance>(std::move(inst));
    }
    throw std::invalid_argument("unknown problem family '" + family + "'");
}

// ---------------------------------------------------------------------------
// Sweep configuration

void SweepConfig::validate() const {
    if (popsizes.empty()) {
        throw std::invalid_argument("sweep: popsize list is empty");
    }
    for (std::size_t i = 1; i < popsizes.size(); ++i) {
        if (popsizes[i] <= popsizes[i - 1]) {
            throw std::invalid_argument("sweep: popsize list must be strictly increasing");
        }
    }
    if (runs == 0) {
        throw std::invalid_argument("sweep: runs must be at least 1");
    }
    if (threads == 0) {
        throw std::invalid_argument("sweep: threads must be at least 1");
    }
    if (stop_at_rate && !(*stop_at_rate > 0.0 && *stop_at_rate <= 1.0)) {
        throw std::invalid_argument("sweep: stop-at rate must lie in (0,1]");
    }
}

std::vector<std::size_t> doubling_popsizes(std::size_t from, std::size_t to) {
    if (from == 0 || to < from) {
        throw std::invalid_argument("doubling_popsizes: need 0 < from <= to");
    }
    std::vector<std::size_t> out;
    for (std::size_t p = from; p <= to; p *= 2) {
        out.push_back(p);
    }
    return out;
}

std::uint64_t sweep_run_seed(std::uint64_t base_seed, std::size_t popsize, std::size_t run) {
    return derive_seed(base_seed, {static_cast<std::uint64_t>(StreamPurpose::sweep_run), popsize, run});
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "problem",     "algo",        "n",        "k",      "instance_id",
        "popsize",     "run",         "seed",     "success", "best_fitness",
        "evaluations", "generations", "wall_ms", "stop_reason"};
    return cols;
}

namespace {

std::string fmt_real(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// CSV fields never need quoting: ids and reasons are kept free of separators.
std::string sanitize(std::string s) {
    for (auto& c : s) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"') {
            c = ' ';
        }
    }
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
T parse_field(const std::string& text, const std::string& column, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("CSV line " + std::to_string(line_no) + ": bad value '" + text + "' in column " + column);
    }
    return value;
}

double parse_real(const std::string& text, const std::string& column, std::size_t line_no) {
    if (text == "nan") {
        return std::nan("");
    }
    return parse_field<double>(text, column, line_no);
}

} // namespace

void write_csv_header(std::ostream& out) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i == 0 ? "" : ",") << cols[i];
    }
    out << '\n';
}

void write_csv_row(std::ostream& out, const CsvRow& r) {
    out << sanitize(r.problem) << ',' << sanitize(r.algo) << ',' << r.n << ',' << r.k << ','
        << sanitize(r.instance_id) << ',' << r.popsize << ',' << r.run << ',' << r.seed << ','
        << (r.success ? 1 : 0) << ',' << (std::isfinite(r.best_fitness) ? fmt_real(r.best_fitness, "%.17g") : "nan")
        << ',' << r.evaluations << ',' << r.generations << ',' << fmt_real(r.wall_ms, "%.3f") << ','
        << sanitize(r.stop_reason) << '\n';
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("CSV: missing header row");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_csv(line);
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < std::max(header.size(), cols.size()); ++i) {
        if (i >= header.size()) {
            throw SchemaError("CSV header: missing column '" + cols[i] + "'");
        }
        if (i >= cols.size()) {
            throw SchemaError("CSV header: unexpected column '" + header[i] + "'");
        }
        if (header[i] != cols[i]) {
            throw SchemaError("CSV header: column " + std::to_string(i + 1) + " is '" + header[i] + "', expected '" +
                              cols[i] + "'");
        }
    }

    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != cols.size()) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols.size()) +
                             " fields, got " + std::to_string(f.size()));
        }
        CsvRow r;
        r.problem = f[0];
        r.algo = f[1];
        r.n = parse_field<std::size_t>(f[2], cols[2], line_no);
        r.k = parse_field<std::size_t>(f[3], cols[3], line_no);
        r.instance_id = f[4];
        r.popsize = parse_field<std::size_t>(f[5], cols[5], line_no);
        r.run = parse_field<std::size_t>(f[6], cols[6], line_no);
        r.seed = parse_field<std::uint64_t>(f[7], cols[7], line_no);
        if (f[8] != "0" && f[8] != "1") {
            throw ParseError("CSV line " + std::to_string(line_no) + ": column success must be 0 or 1");
        }
        r.success = f[8] == "1";
        r.best_fitness = parse_real(f[9], cols[9], line_no);
        r.evaluations = parse_field<std::size_t>(f[10], cols[10], line_no);
        r.generations = parse_field<std::size_t>(f[11], cols[11], line_no);
        r.wall_ms = parse_real(f[12], cols[12], line_no);
        r.stop_reason = f[13];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CsvRow> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    try {
        return read_csv(in);
    } catch (const ParseError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRun> run_sweep(const SweepConfig& cfg, const std::function<void(const SweepRun&)>& on_run) {
    cfg.validate();
    const auto problem = cfg.problem.make();

    std::ofstream out(cfg.output_path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + cfg.output_path + "' for writing");
    }
    write_csv_header(out);
    out.flush();

    std::vector<SweepRun> all;
    std::size_t rows_written = 0;
    for (std::size_t popsize : cfg.popsizes) {
        std::vector<std::optional<SweepRun>> level(cfg.runs);
        std::mutex mu;
        std::size_t next_to_write = 0;
        std::atomic<std::size_t> next_job{0};
        std::exception_ptr io_error;

        auto emit_ready = [&] {
            while (next_to_write < level.size() && level[next_to_write]) {
                const auto& done = *level[next_to_write];
                write_csv_row(out, done.row);
                out.flush();
                if (!out) {
                    throw std::runtime_error(cfg.output_path + ": write failed at data row " +
                                             std::to_string(rows_written + 1));
                }
                ++rows_written;
                if (on_run) {
                    on_run(done);
                }
                ++next_to_write;
            }
        };

        auto worker = [&] {
            for (std::size_t r = next_job++; r < cfg.runs; r = next_job++) {
                EdaConfig eda = cfg.eda;
                eda.popsize = popsize;
                eda.seed = sweep_run_seed(cfg.base_seed, popsize, r);

                SweepRun result;
                CsvRow& row = result.row;
                row.problem = problem->family();
                row.algo = to_string(eda.algorithm);
                row.n = problem->size();
                row.k = problem->parameter_k();
                row.instance_id = problem->instance_id();
                row.popsize = popsize;
                row.run = r;
                row.seed = eda.seed;
                try {
                    RunRecord rec = run_eda(*problem, eda);
                    row.success = rec.success;
                    row.best_fitness = rec.best_fitness;
                    row.evaluations = rec.evaluations;
                    row.generations = rec.generations;
                    row.wall_ms = rec.wall_ms;
                    row.stop_reason = to_string(rec.stop);
                    result.record = std::move(rec);
                } catch (const std::exception& e) {
                    row.success = false;
                    row.best_fitness = std::nan("");
                    row.stop_reason = std::string("error:") + e.what();
                }
                std::lock_guard lock(mu);
                level[r] = std::move(result);
                if (io_error) {
                    return;
                }
                try {
                    emit_ready();
                } catch (...) {
                    io_error = std::current_exception();
                    return;
                }
            }
        };

        const std::size_t workers = std::min(cfg.threads, cfg.runs);
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back(worker);
            }
        }
        if (io_error) {
            std::rethrow_exception(io_error);
        }

        std::size_t successes = 0;
        for (auto& slot : level) {
            successes += slot->row.success ? 1 : 0;
            all.push_back(std::move(*slot));
        }
        const double rate = static_cast<double>(successes) / static_cast<double>(cfg.runs);
        if (cfg.stop_at_rate && rate >= *cfg.stop_at_rate) {
            break;
        }
    }
    return all;
}

// ---------------------------------------------------------------------------
// Summaries

namespace {

std::pair<double, double> mean_and_sample_std(const std::vector<double>& v) {
    if (v.empty()) {
        return {0.0, 0.0};
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

} // namespace

std::vector<SweepSummary> summarize(const std::vector<CsvRow>& rows, const std::vector<double>& thresholds) {
    using Key = std::tuple<std::string, std::string, std::size_t, std::size_t, std::string>;
    std::map<Key, std::map<std::size_t, std::vector<const CsvRow*>>> groups;
    std::vector<Key> order;
    for (const auto& r : rows) {
        Key key{r.problem, r.algo, r.n, r.k, r.instance_id};
        if (!groups.contains(key)) {
            order.push_back(key);
        }
        groups[key][r.popsize].push_back(&r);
    }

    std::vector<SweepSummary> out;
    for (const auto& key : order) {
        SweepSummary s;
        std::tie(s.problem, s.algo, s.n, s.k, s.instance_id) = key;
        for (const auto& [popsize, runs] : groups[key]) {
            PopsizeStats st;
            st.popsize = popsize;
            st.runs = runs.size();
            std::vector<double> evals;
            std::vector<double> walls;
            for (const auto* r : runs) {
                st.successes += r->success ? 1 : 0;
                if (r->failed()) {
                    ++st.failed;
                    continue;
                }
                evals.push_back(static_cast<double>(r->evaluations));
                walls.push_back(r->wall_ms);
            }
            st.success_rate = static_cast<double>(st.successes) / static_cast<double>(st.runs);
            std::tie(st.evaluations_mean, st.evaluations_std) = mean_and_sample_std(evals);
            std::tie(st.wall_ms_mean, st.wall_ms_std) = mean_and_sample_std(walls);
            s.by_popsize.push_back(st);
        }
        for (double t : thresholds) {
            ThresholdPick pick{t, std::nullopt};
            for (const auto& st : s.by_popsize) {
                if (st.success_rate >= t) {
                    pick.selected = st;
                    break;
                }
            }
            s.picks.push_back(pick);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string problem_label(const SweepSummary& s) {
    if (s.problem == "trap") {
        return std::to_string(s.k) + "-Traps " + std::to_string(s.n) + " bit";
    }
    if (s.problem == "nk") {
        return "NK n=" + std::to_string(s.n) + ", k=" + std::to_string(s.k) + ", i=" + s.instance_id;
    }
    if (s.problem == "hiff") {
        return "HIFF" + std::to_string(s.n);
    }
    return s.problem + " " + std::to_string(s.n);
}

namespace {

std::string algo_label(const std::string& algo) {
    if (algo == "dae") {
        return "DAE-EDA";
    }
    if (algo == "pbil") {
        return "PBIL";
    }
    return algo;
}

std::string plus_minus(double mean, double sd, int precision) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << mean << " +- " << sd;
    return ss.str();
}

} // namespace

void render_table(std::ostream& out, const std::vector<SweepSummary>& summaries) {
    std::vector<double> thresholds;
    for (const auto& s : summaries) {
        for (const auto& p : s.picks) {
            if (std::find(thresholds.begin(), thresholds.end(), p.threshold) == thresholds.end()) {
                thresholds.push_back(p.threshold);
            }
        }
    }

    out << std::left << std::setw(22) << "Problem" << std::setw(10) << "Algorithm";
    for (double t : thresholds) {
        std::ostringstream head;
        head << ">=" << std::lround(t * 100) << "%: popsize";
        out << " | " << std::setw(18) << head.str() << std::setw(24) << "Evaluations" << std::setw(18)
            << "Time (sec)";
    }
    out << '\n';

    for (const auto& s : summaries) {
        out << std::left << std::setw(22) << problem_label(s) << std::setw(10) << algo_label(s.algo);
        for (double t : thresholds) {
            const ThresholdPick* pick = nullptr;
            for (const auto& p : s.picks) {
                if (p.threshold == t) {
                    pick = &p;
                }
            }
            out << " | ";
            if (pick == nullptr || !pick->selected) {
                out << std::setw(18) << "-" << std::setw(24) << "-" << std::setw(18) << "-";
                continue;
            }
            const auto& st = *pick->selected;
            out << std::setw(18) << st.popsize << std::setw(24) << plus_minus(st.evaluations_mean, st.evaluations_std, 0)
                << std::setw(18) << plus_minus(st.wall_ms_mean / 1000.0, st.wall_ms_std / 1000.0, 2);
        }
        out << '\n';
    }
}

std::string summary_json(const std::vector<SweepSummary>& summaries) {
    auto stats_json = [](const PopsizeStats& st) {
        return nlohmann::json{{"popsize", st.popsize},
                              {"runs", st.runs},
                              {"successes", st.successes},
                              {"failed", st.failed},
                              {"success_rate", st.success_rate},
                              {"evaluations_mean", st.evaluations_mean},
                              {"evaluations_std", st.evaluations_std},
                              {"wall_ms_mean", st.wall_ms_mean},
                              {"wall_ms_std", st.wall_ms_std}};
    };
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& s : summaries) {
        nlohmann::json entry{{"problem", s.problem},     {"label", problem_label(s)}, {"algo", s.algo},
                             {"n", s.n},                 {"k", s.k},                  {"instance_id", s.instance_id},
                             {"by_popsize", nlohmann::json::array()}, {"thresholds", nlohmann::json::array()}};
        for (const auto& st : s.by_popsize) {
            entry["by_popsize"].push_back(stats_json(st));
        }
        for (const auto& p : s.picks) {
            entry["thresholds"].push_back(
                {{"threshold", p.threshold},
                 {"found", p.selected.has_value()},
                 {"selected", p.selected ? stats_json(*p.selected) : nlohmann::json(nullptr)}});
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2);
}

} // namespace daeeda
