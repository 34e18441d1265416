#include "daeeda/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace daeeda {

Bitstring::Bitstring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("Bitstring: element is not 0 or 1");
        }
    }
}

Bitstring Bitstring::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("Bitstring: invalid character '" + std::string(1, c) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::ones(std::size_t n) {
    return Bitstring(std::vector<std::uint8_t>(n, 1));
}

std::size_t Bitstring::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Bitstring::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] != 0) {
            s[i] = '1';
        }
    }
    return s;
}

std::size_t hamming_distance(const Bitstring& a, const Bitstring& b) {
    if (a.size() != b.size()) {
        throw ShapeError("hamming_distance: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a[i] != b[i] ? 1 : 0;
    }
    return d;
}

double Individual::fitness() const {
    if (!fitness_) {
        throw UnevaluatedError("individual has not been evaluated");
    }
    return *fitness_;
}

void Individual::set_fitness(double f) {
    if (!std::isfinite(f)) {
        throw DivergenceError("non-finite fitness");
    }
    fitness_ = f;
}

Population::Population(std::size_t n, std::vector<Individual> members) : n_(n) {
    members_.reserve(members.size());
    for (auto& m : members) {
        push_back(std::move(m));
    }
}

void Population::push_back(Individual ind) {
    if (ind.genome().size() != n_) {
        throw ShapeError("Population: genome length " + std::to_string(ind.genome().size()) +
                         " != " + std::to_string(n_));
    }
    members_.push_back(std::move(ind));
}

void Population::append(const Population& other) {
    if (other.n_ != n_) {
        throw ShapeError("Population::append: genome length mismatch");
    }
    members_.insert(members_.end(), other.members_.begin(), other.members_.end());
}

bool Population::fully_evaluated() const noexcept {
    return std::all_of(members_.begin(), members_.end(), [](const Individual& i) { return i.evaluated(); });
}

std::size_t Population::best_index() const {
    if (members_.empty()) {
        throw std::invalid_argument("best_index: empty population");
    }
    std::size_t best = 0;
    double best_f = members_[0].fitness();
    for (std::size_t i = 1; i < members_.size(); ++i) {
        double f = members_[i].fitness();
        if (f > best_f) {
            best_f = f;
            best = i;
        }
    }
    return best;
}

std::vector<Bitstring> Population::genomes() const {
    std::vector<Bitstring> out;
    out.reserve(members_.size());
    for (const auto& m : members_) {
        out.push_back(m.genome());
    }
    return out;
}

Population random_population(std::size_t n, std::size_t size, Rng& rng) {
    if (n == 0 || size == 0) {
        throw std::invalid_argument("random_population: n and size must be positive");
    }
    Population pop(n);
    for (std::size_t k = 0; k < size; ++k) {
        Bitstring g(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.set(i, rng.coin());
        }
        pop.push_back(Individual(std::move(g)));
    }
    return pop;
}

Population tournament_select(const Population& p, std::span<const std::size_t> pairing, Rng& rng) {
    if (pairing.size() != p.size()) {
        throw ShapeError("tournament_select: pairing must cover the population");
    }
    std::vector<bool> seen(p.size(), false);
    for (auto idx : pairing) {
        if (idx >= p.size() || seen[idx]) {
            throw std::invalid_argument("tournament_select: pairing is not a permutation");
        }
        seen[idx] = true;
    }
    if (!p.fully_evaluated()) {
        throw UnevaluatedError("tournament_select: population has unevaluated members");
    }

    Population winners(p.genome_size());
    std::size_t i = 0;
    for (; i + 1 < pairing.size(); i += 2) {
        const auto& a = p[pairing[i]];
        const auto& b = p[pairing[i + 1]];
        if (a.fitness() > b.fitness()) {
            winners.push_back(a);
        } else if (b.fitness() > a.fitness()) {
            winners.push_back(b);
        } else {
            winners.push_back(rng.coin() ? a : b);
        }
    }
    if (i < pairing.size()) {
        winners.push_back(p[pairing[i]]);
    }
    return winners;
}

Population tournament_select(const Population& p, Rng& rng) {
    if (!p.fully_evaluated()) {
        throw UnevaluatedError("tournament_select: population has unevaluated members");
    }
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng);
    return tournament_select(p, order, rng);
}

Bitstring binarize(std::span<const double> x, Rng& rng) {
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("binarize: probability outside [0,1]");
        }
    }
    Bitstring out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.set(i, rng.bernoulli(x[i]));
    }
    return out;
}

} // namespace daeeda
