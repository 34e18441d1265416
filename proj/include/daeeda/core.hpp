#pragma once

/// @file core.hpp
/// Binary genomes, individuals, populations and the population-level
/// operators shared by every EDA variant.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "daeeda/errors.hpp"
#include "daeeda/rng.hpp"

namespace daeeda {

/// Real-valued activations or probabilities; elements are expected in [0,1].
using RealVector = std::vector<double>;

/// Fixed-length string over {0,1}.
class Bitstring {
  public:
    Bitstring() = default;
    /// All-zeros string of length n.
    explicit Bitstring(std::size_t n) : bits_(n, 0) {}
    /// Throws std::invalid_argument if any element is not 0 or 1.
    explicit Bitstring(std::vector<std::uint8_t> bits);

    /// Parses "0101...". Throws std::invalid_argument on other characters.
    static Bitstring from_string(std::string_view text);
    static Bitstring ones(std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    void set(std::size_t i, bool value) noexcept { bits_[i] = value ? 1 : 0; }
    void flip(std::size_t i) noexcept { bits_[i] ^= 1U; }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::size_t count_ones() const noexcept;
    std::string to_string() const;

    friend bool operator==(const Bitstring&, const Bitstring&) = default;
    friend auto operator<=>(const Bitstring&, const Bitstring&) = default;

  private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const Bitstring& a, const Bitstring& b);

/// A genome and its cached fitness.
class Individual {
  public:
    Individual() = default;
    explicit Individual(Bitstring genome) : genome_(std::move(genome)) {}

    const Bitstring& genome() const noexcept { return genome_; }
    bool evaluated() const noexcept { return fitness_.has_value(); }
    /// Throws UnevaluatedError if no fitness has been set.
    double fitness() const;
    /// Throws DivergenceError on a non-finite value.
    void set_fitness(double f);

  private:
    Bitstring genome_;
    std::optional<double> fitness_;
};

/// Individuals that all share genome length n.
class Population {
  public:
    explicit Population(std::size_t n) : n_(n) {}
    Population(std::size_t n, std::vector<Individual> members);

    std::size_t genome_size() const noexcept { return n_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }

    /// Throws ShapeError on a genome of the wrong length.
    void push_back(Individual ind);
    void append(const Population& other);

    Individual& operator[](std::size_t i) noexcept { return members_[i]; }
    const Individual& operator[](std::size_t i) const noexcept { return members_[i]; }
    std::span<const Individual> members() const noexcept { return members_; }
    auto begin() noexcept { return members_.begin(); }
    auto end() noexcept { return members_.end(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool fully_evaluated() const noexcept;
    /// Index of the first member with maximal fitness. Requires full evaluation.
    std::size_t best_index() const;
    std::vector<Bitstring> genomes() const;

  private:
    std::size_t n_;
    std::vector<Individual> members_;
};

/// `size` unevaluated individuals with i.i.d. fair bits.
/// Throws std::invalid_argument if n or size is zero.
Population random_population(std::size_t n, std::size_t size, Rng& rng);

/// Binary tournament without replacement.
///
/// Members are paired in the order given by `pairing` (a permutation of the
/// population indices): (pairing[0], pairing[1]), (pairing[2], pairing[3]), ...
/// The fitter member of each pair survives; equal fitness is settled by a coin
/// from `rng`. With an odd count the trailing unpaired member advances.
/// Output size is ceil(size / 2).
Population tournament_select(const Population& p, std::span<const std::size_t> pairing, Rng& rng);

/// Same, with a uniformly random pairing drawn from `rng`.
Population tournament_select(const Population& p, Rng& rng);

/// Samples bit i ~ Bernoulli(x[i]). Throws std::domain_error if some x[i] is outside [0,1].
Bitstring binarize(std::span<const double> x, Rng& rng);

} // namespace daeeda
