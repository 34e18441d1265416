#pragma once

/// @file pbil.hpp
/// Population-based incremental learning: one independent activation
/// probability per bit, nudged toward the mean of the best individuals.

#include <cstddef>
#include <span>

#include "daeeda/core.hpp"

namespace daeeda {

class ProbabilityVector {
  public:
    /// Throws std::domain_error if any entry is outside [0,1].
    explicit ProbabilityVector(RealVector p);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const noexcept { return p_[i]; }
    std::span<const double> values() const noexcept { return p_; }

  private:
    RealVector p_;
};

/// All entries 0.5. Throws std::invalid_argument if n is zero.
ProbabilityVector pbil_init(std::size_t n);

/// p_i + alpha * (mean_k y_k[i] - p_i), clamped to [0,1].
/// Throws std::invalid_argument unless 0 < alpha < 1 and best is non-empty;
/// ShapeError on a length mismatch.
ProbabilityVector pbil_update(const ProbabilityVector& p, std::span<const Bitstring> best, double alpha);

Bitstring pbil_sample(const ProbabilityVector& p, Rng& rng);

} // namespace daeeda
