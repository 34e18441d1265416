#include "daeeda/problems.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace daeeda {

namespace {

void require_length(const Bitstring& x, std::size_t n, const char* who) {
    if (x.size() != n) {
        throw ShapeError(std::string(who) + ": expected " + std::to_string(n) + " bits, got " +
                         std::to_string(x.size()));
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Traps

TrapProblem::TrapProblem(std::size_t k, std::size_t l) : k_(k), l_(l) {
    if (k < 2 || l < 1) {
        throw std::invalid_argument("TrapProblem: need k >= 2 and l >= 1");
    }
    layout_.resize(k * l);
    std::iota(layout_.begin(), layout_.end(), std::size_t{0});
}

TrapProblem::TrapProblem(std::size_t k, std::size_t l, std::uint64_t permutation_seed) : TrapProblem(k, l) {
    perm_seed_ = permutation_seed;
    Rng rng(derive_seed(permutation_seed, {static_cast<std::uint64_t>(StreamPurpose::problem_instance)}));
    shuffle(layout_.begin(), layout_.end(), rng);
}

std::string TrapProblem::instance_id() const {
    return perm_seed_ ? "perm" + std::to_string(*perm_seed_) : "0";
}

double trap_contribution(std::size_t k, std::size_t ones) {
    if (ones == k) {
        return static_cast<double>(k);
    }
    return static_cast<double>(k) - static_cast<double>(ones + 1);
}

double TrapProblem::evaluate(const Bitstring& x) const {
    require_length(x, size(), "eval_trap");
    double total = 0.0;
    for (std::size_t t = 0; t < l_; ++t) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < k_; ++j) {
            ones += x[layout_[t * k_ + j]];
        }
        total += trap_contribution(k_, ones);
    }
    return total;
}

double eval_trap(const TrapProblem& p, const Bitstring& x) {
    return p.evaluate(x);
}

// ---------------------------------------------------------------------------
// NK

NkInstance::NkInstance(std::size_t n, std::size_t k, std::uint64_t seed,
                       std::vector<std::vector<std::size_t>> neighbors, std::vector<std::vector<double>> tables)
    : n_(n), k_(k), seed_(seed), neighbors_(std::move(neighbors)), tables_(std::move(tables)) {
    if (n == 0 || k >= n) {
        throw std::invalid_argument("NkInstance: need 0 <= k < n");
    }
    if (k > 30) {
        throw std::invalid_argument("NkInstance: k too large for lookup tables");
    }
    if (neighbors_.size() != n || tables_.size() != n) {
        throw std::invalid_argument("NkInstance: need one neighbor list and one table per variable");
    }
    const std::size_t table_len = std::size_t{1} << (k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = neighbors_[i];
        if (nb.size() != k) {
            throw std::invalid_argument("NkInstance: neighbor list " + std::to_string(i) + " has wrong length");
        }
        std::vector<bool> seen(n, false);
        for (auto j : nb) {
            if (j >= n || j == i || seen[j]) {
                throw std::invalid_argument("NkInstance: invalid neighbor in list " + std::to_string(i));
            }
            seen[j] = true;
        }
        if (tables_[i].size() != table_len) {
            throw std::invalid_argument("NkInstance: table " + std::to_string(i) + " has wrong length");
        }
        for (double v : tables_[i]) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("NkInstance: non-finite table entry");
            }
        }
    }
}

std::size_t NkInstance::component_index(std::size_t i, const Bitstring& x) const {
    std::size_t idx = x[i];
    for (auto j : neighbors_[i]) {
        idx = (idx << 1) | x[j];
    }
    return idx;
}

double NkInstance::evaluate(const Bitstring& x) const {
    require_length(x, n_, "eval_nk");
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        sum += tables_[i][component_index(i, x)];
    }
    return sum / static_cast<double>(n_);
}

double eval_nk(const NkInstance& inst, const Bitstring& x) {
    return inst.evaluate(x);
}

std::optional<double> NkInstance::optimum() const {
    if (optimum_ && optimum_->exact) {
        return optimum_->fitness;
    }
    return std::nullopt;
}

void NkInstance::set_optimum(NkOptimum opt) {
    require_length(opt.genome, n_, "NkInstance::set_optimum");
    double f = evaluate(opt.genome);
    if (std::fabs(f - opt.fitness) > 1e-12) {
        throw std::invalid_argument("NkInstance: stored optimum does not match its re-evaluation");
    }
    optimum_ = std::move(opt);
}

bool operator==(const NkInstance& a, const NkInstance& b) {
    auto opt_eq = [](const std::optional<NkOptimum>& x, const std::optional<NkOptimum>& y) {
        if (x.has_value() != y.has_value()) {
            return false;
        }
        return !x || (x->genome == y->genome && x->fitness == y->fitness && x->exact == y->exact);
    };
    return a.n_ == b.n_ && a.k_ == b.k_ && a.seed_ == b.seed_ && a.neighbors_ == b.neighbors_ &&
           a.tables_ == b.tables_ && opt_eq(a.optimum_, b.optimum_);
}

NkInstance generate_nk(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (n == 0 || k >= n) {
        throw std::invalid_argument("generate_nk: need 0 <= k < n");
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(StreamPurpose::problem_instance)}));
    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i) {
        pool.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                pool.push_back(j);
            }
        }
        // partial Fisher-Yates: the first k slots become the sample
        for (std::size_t s = 0; s < k; ++s) {
            auto r = s + rng.below(pool.size() - s);
            std::swap(pool[s], pool[r]);
        }
        neighbors[i].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    }
    const std::size_t table_len = std::size_t{1} << (k + 1);
    std::vector<std::vector<double>> tables(n, std::vector<double>(table_len));
    for (auto& t : tables) {
        for (auto& v : t) {
            v = rng.uniform();
        }
    }
    return NkInstance(n, k, seed, std::move(neighbors), std::move(tables));
}

std::pair<Bitstring, double> solve_nk_exact(const NkInstance& inst) {
    const std::size_t n = inst.n_;
    if (n > kMaxExactNk) {
        throw TooLargeError("solve_nk_exact: n = " + std::to_string(n) + " exceeds " + std::to_string(kMaxExactNk));
    }
    // x_0 sits in the most significant bit so increasing masks walk the
    // strings in lexicographic order; strict '>' keeps the first maximizer.
    std::vector<unsigned> shift(n);
    for (std::size_t i = 0; i < n; ++i) {
        shift[i] = static_cast<unsigned>(n - 1 - i);
    }
    const auto inv_n = static_cast<double>(n);
    const std::uint64_t total = std::uint64_t{1} << n;

    std::uint64_t best_mask = 0;
    double best = -1.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t idx = (mask >> shift[i]) & 1U;
            for (auto j : inst.neighbors_[i]) {
                idx = (idx << 1) | ((mask >> shift[j]) & 1U);
            }
            sum += inst.tables_[i][idx];
        }
        double f = sum / inv_n;
        if (f > best) {
            best = f;
            best_mask = mask;
        }
    }
    Bitstring x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x.set(i, ((best_mask >> shift[i]) & 1U) != 0);
    }
    return {x, inst.evaluate(x)};
}

// ---------------------------------------------------------------------------
// NK file format

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& tok, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("NK file line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    }
    return value;
}

} // namespace

void NkInstance::write(std::ostream& out) const {
    out << "NK " << n_ << ' ' << k_ << ' ' << seed_ << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
        out << i;
        for (auto j : neighbors_[i]) {
            out << ' ' << j;
        }
        out << '\n';
    }
    for (const auto& t : tables_) {
        for (std::size_t e = 0; e < t.size(); ++e) {
            out << (e == 0 ? "" : " ") << format_real(t[e]);
        }
        out << '\n';
    }
    if (optimum_) {
        out << (optimum_->exact ? "OPT " : "BEST ") << optimum_->genome.to_string() << ' '
            << format_real(optimum_->fitness) << '\n';
    }
}

NkInstance NkInstance::read(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!split_tokens(line).empty()) {
            lines.push_back(line);
        }
    }
    if (lines.empty()) {
        throw ParseError("NK file: empty");
    }
    auto head = split_tokens(lines[0]);
    if (head.size() != 4 || head[0] != "NK") {
        throw ParseError("NK file line 1: expected 'NK <n> <k> <seed>'");
    }
    auto n = parse_number<std::size_t>(head[1], 1);
    auto k = parse_number<std::size_t>(head[2], 1);
    auto seed = parse_number<std::uint64_t>(head[3], 1);
    if (n == 0 || k >= n || k > 30) {
        throw ParseError("NK file line 1: need 0 <= k < n");
    }
    const std::size_t table_len = std::size_t{1} << (k + 1);
    if (lines.size() < 1 + 2 * n || lines.size() > 2 + 2 * n) {
        throw ParseError("NK file: expected " + std::to_string(1 + 2 * n) + " or " + std::to_string(2 + 2 * n) +
                         " lines, got " + std::to_string(lines.size()));
    }

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto toks = split_tokens(lines[1 + i]);
        if (toks.size() != k + 1) {
            throw ParseError("NK file line " + std::to_string(2 + i) + ": expected " + std::to_string(k + 1) +
                             " integers");
        }
        if (parse_number<std::size_t>(toks[0], 2 + i) != i) {
            throw ParseError("NK file line " + std::to_string(2 + i) + ": variable index out of order");
        }
        for (std::size_t j = 1; j <= k; ++j) {
            neighbors[i].push_back(parse_number<std::size_t>(toks[j], 2 + i));
        }
    }
    std::vector<std::vector<double>> tables(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t line_no = 2 + n + i;
        auto toks = split_tokens(lines[1 + n + i]);
        if (toks.size() != table_len) {
            throw ParseError("NK file line " + std::to_string(line_no) + ": expected " + std::to_string(table_len) +
                             " reals, got " + std::to_string(toks.size()));
        }
        for (const auto& t : toks) {
            tables[i].push_back(parse_number<double>(t, line_no));
        }
    }

    std::optional<NkInstance> inst;
    try {
        inst.emplace(n, k, seed, std::move(neighbors), std::move(tables));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("NK file: ") + e.what());
    }

    if (lines.size() == 2 + 2 * n) {
        const std::size_t line_no = 2 + 2 * n;
        auto toks = split_tokens(lines.back());
        if (toks.size() != 3 || (toks[0] != "OPT" && toks[0] != "BEST")) {
            throw ParseError("NK file line " + std::to_string(line_no) + ": expected 'OPT <bits> <fitness>'");
        }
        NkOptimum opt;
        try {
            opt.genome = Bitstring::from_string(toks[1]);
        } catch (const std::invalid_argument&) {
            throw ParseError("NK file line " + std::to_string(line_no) + ": bad bitstring");
        }
        opt.fitness = parse_number<double>(toks[2], line_no);
        opt.exact = toks[0] == "OPT";
        try {
            inst->set_optimum(std::move(opt));
        } catch (const std::exception& e) {
            throw ParseError("NK file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return std::move(*inst);
}

void NkInstance::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write(out);
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

NkInstance NkInstance::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read(in);
}

// ---------------------------------------------------------------------------
// HIFF

HiffProblem::HiffProblem(std::size_t levels) : levels_(levels) {
    if (levels < 1 || levels > 30) {
        throw std::invalid_argument("HiffProblem: levels must be in [1, 30]");
    }
}

double HiffProblem::evaluate(const Bitstring& x) const {
    require_length(x, size(), "eval_hiff");
    constexpr std::uint8_t null_symbol = 2;
    std::vector<std::uint8_t> symbols(x.bits().begin(), x.bits().end());
    double total = 0.0;
    double block_value = 1.0;
    for (std::size_t level = 1; level <= levels_; ++level) {
        block_value *= 2.0;
        const std::size_t half = symbols.size() / 2;
        for (std::size_t b = 0; b < half; ++b) {
            auto a = symbols[2 * b];
            auto c = symbols[2 * b + 1];
            if (a == c && a != null_symbol) {
                total += block_value;
                symbols[b] = a;
            } else {
                symbols[b] = null_symbol;
            }
        }
        symbols.resize(half);
    }
    return total;
}

double eval_hiff(const HiffProblem& p, const Bitstring& x) {
    return p.evaluate(x);
}

} // namespace daeeda
