#pragma once

/// @file problems.hpp
/// Benchmark fitness functions: concatenated deceptive traps, NK landscapes
/// and hierarchical if-and-only-if (HIFF). All are maximized.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "daeeda/core.hpp"

namespace daeeda {

/// Common surface the EDA engine drives.
class Problem {
  public:
    virtual ~Problem() = default;

    virtual std::size_t size() const = 0;
    /// Throws ShapeError when x.size() != size().
    virtual double evaluate(const Bitstring& x) const = 0;
    /// Fitness of the global optimum when it is known exactly.
    virtual std::optional<double> optimum() const = 0;

    /// Short family tag: "trap", "nk" or "hiff".
    virtual std::string family() const = 0;
    /// Family parameter recorded next to results (trap size, epistasis, or 0).
    virtual std::size_t parameter_k() const = 0;
    virtual std::string instance_id() const = 0;
};

// ---------------------------------------------------------------------------
// Concatenated deceptive traps

class TrapProblem final : public Problem {
  public:
    /// `l` traps of `k` contiguous bits each. Requires k >= 2, l >= 1.
    TrapProblem(std::size_t k, std::size_t l);
    /// Trap membership scattered by a seeded permutation of positions.
    TrapProblem(std::size_t k, std::size_t l, std::uint64_t permutation_seed);

    std::size_t trap_size() const noexcept { return k_; }
    std::size_t trap_count() const noexcept { return l_; }
    /// Position in x of bit j of trap t.
    std::size_t position(std::size_t trap, std::size_t j) const noexcept { return layout_[trap * k_ + j]; }
    std::optional<std::uint64_t> permutation_seed() const noexcept { return perm_seed_; }

    std::size_t size() const override { return k_ * l_; }
    double evaluate(const Bitstring& x) const override;
    std::optional<double> optimum() const override { return static_cast<double>(k_ * l_); }
    std::string family() const override { return "trap"; }
    std::size_t parameter_k() const override { return k_; }
    std::string instance_id() const override;

  private:
    std::size_t k_;
    std::size_t l_;
    std::optional<std::uint64_t> perm_seed_;
    std::vector<std::size_t> layout_;
};

/// Single trap: k if all `ones` == k, otherwise k - (ones + 1).
double trap_contribution(std::size_t k, std::size_t ones);

double eval_trap(const TrapProblem& p, const Bitstring& x);

// ---------------------------------------------------------------------------
// NK landscapes

/// Best solution stored with an instance. `exact` marks a proven optimum
/// (exhaustive search); otherwise it is only the best known.
struct NkOptimum {
    Bitstring genome;
    double fitness = 0.0;
    bool exact = true;
};

/// Largest n accepted by solve_nk_exact.
inline constexpr std::size_t kMaxExactNk = 26;

class NkInstance final : public Problem {
  public:
    /// Validates neighbor lists (k distinct indices != i, all < n) and table
    /// lengths (2^(k+1)). Throws std::invalid_argument on violation.
    NkInstance(std::size_t n, std::size_t k, std::uint64_t seed, std::vector<std::vector<std::size_t>> neighbors,
               std::vector<std::vector<double>> tables);

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
    const std::vector<double>& table(std::size_t i) const { return tables_.at(i); }

    const std::optional<NkOptimum>& stored_optimum() const noexcept { return optimum_; }
    /// Throws std::invalid_argument if the genome does not re-evaluate to the
    /// given fitness within 1e-12.
    void set_optimum(NkOptimum opt);

    /// Table index of component i: (x_i, x_nb1, ..., x_nbk) read big-endian,
    /// x_i the most significant bit.
    std::size_t component_index(std::size_t i, const Bitstring& x) const;

    std::size_t size() const override { return n_; }
    double evaluate(const Bitstring& x) const override;
    std::optional<double> optimum() const override;
    std::string family() const override { return "nk"; }
    std::size_t parameter_k() const override { return k_; }
    std::string instance_id() const override { return std::to_string(seed_); }

    /// Line-oriented text form; see README for the layout.
    void write(std::ostream& out) const;
    /// Throws ParseError on malformed content.
    static NkInstance read(std::istream& in);
    void save(const std::string& path) const;
    static NkInstance load(const std::string& path);

    friend bool operator==(const NkInstance& a, const NkInstance& b);

  private:
    friend std::pair<Bitstring, double> solve_nk_exact(const NkInstance& inst);

    std::size_t n_;
    std::size_t k_;
    std::uint64_t seed_;
    std::vector<std::vector<std::size_t>> neighbors_;
    std::vector<std::vector<double>> tables_;
    std::optional<NkOptimum> optimum_;
};

double eval_nk(const NkInstance& inst, const Bitstring& x);

/// Random instance: neighbors uniform without replacement from {0..n-1}\{i},
/// table entries i.i.d. uniform [0,1). Throws std::invalid_argument unless 0 <= k < n.
NkInstance generate_nk(std::size_t n, std::size_t k, std::uint64_t seed);

/// Exhaustive argmax over all 2^n strings; ties go to the lexicographically
/// smallest string. Throws TooLargeError for n > kMaxExactNk.
std::pair<Bitstring, double> solve_nk_exact(const NkInstance& inst);

// ---------------------------------------------------------------------------
// HIFF

class HiffProblem final : public Problem {
  public:
    /// n = 2^levels. Requires 1 <= levels <= 30.
    explicit HiffProblem(std::size_t levels);

    std::size_t levels() const noexcept { return levels_; }

    std::size_t size() const override { return std::size_t{1} << levels_; }
    double evaluate(const Bitstring& x) const override;
    /// Every level contributes n at the optimum.
    std::optional<double> optimum() const override { return static_cast<double>(size() * levels_); }
    std::string family() const override { return "hiff"; }
    std::size_t parameter_k() const override { return 0; }
    std::string instance_id() const override { return "0"; }

  private:
    std::size_t levels_;
};

double eval_hiff(const HiffProblem& p, const Bitstring& x);

} // namespace daeeda
