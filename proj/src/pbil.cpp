#include "daeeda/pbil.hpp"

#include <algorithm>
#include <stdexcept>

namespace daeeda {

ProbabilityVector::ProbabilityVector(RealVector p) : p_(std::move(p)) {
    for (double v : p_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("ProbabilityVector: entry outside [0,1]");
        }
    }
}

ProbabilityVector pbil_init(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("pbil_init: n must be positive");
    }
    return ProbabilityVector(RealVector(n, 0.5));
}

ProbabilityVector pbil_update(const ProbabilityVector& p, std::span<const Bitstring> best, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("pbil_update: alpha must lie in (0,1)");
    }
    if (best.empty()) {
        throw std::invalid_argument("pbil_update: need at least one individual");
    }
    const std::size_t n = p.size();
    RealVector target(n, 0.0);
    for (const auto& y : best) {
        if (y.size() != n) {
            throw ShapeError("pbil_update: length mismatch");
        }
        for (std::size_t i = 0; i < n; ++i) {
            target[i] += y[i];
        }
    }
    const auto mu = static_cast<double>(best.size());
    RealVector next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = std::clamp(p[i] + alpha * (target[i] / mu - p[i]), 0.0, 1.0);
    }
    return ProbabilityVector(std::move(next));
}

Bitstring pbil_sample(const ProbabilityVector& p, Rng& rng) {
    Bitstring out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.set(i, rng.bernoulli(p[i]));
    }
    return out;
}

} // namespace daeeda
