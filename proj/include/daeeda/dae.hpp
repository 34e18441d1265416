#pragma once

/// @file dae.hpp
/// Single-hidden-layer denoising autoencoder with tied weights.
///
///   h = sigm(x_hat W + b_h)        (encoder, W is n x m)
///   z = sigm(h W^T + b_z)          (decoder)
///
/// Trained with minibatch gradient descent on the cross-entropy between the
/// clean input x and the reconstruction z of its salt-and-pepper corrupted
/// copy x_hat. Sampling runs a corrupt/reconstruct chain from a uniform
/// random start.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "daeeda/core.hpp"

namespace daeeda {

class DaeModel {
  public:
    /// All parameters zero. Throws std::invalid_argument if n or m is zero.
    DaeModel(std::size_t n, std::size_t m);

    std::size_t visible_size() const noexcept { return n_; }
    std::size_t hidden_size() const noexcept { return m_; }

    /// Row-major n x m.
    std::span<const double> weights() const noexcept { return w_; }
    std::span<double> weights() noexcept { return w_; }
    double weight(std::size_t i, std::size_t j) const noexcept { return w_[i * m_ + j]; }
    double& weight(std::size_t i, std::size_t j) noexcept { return w_[i * m_ + j]; }

    std::span<const double> hidden_bias() const noexcept { return bh_; }
    std::span<double> hidden_bias() noexcept { return bh_; }
    std::span<const double> visible_bias() const noexcept { return bz_; }
    std::span<double> visible_bias() noexcept { return bz_; }

    bool all_finite() const noexcept;

    /// Text dump: "DAE 1 <n> <m>" then W (row-major), b_h, b_z, one row per line.
    void write(std::ostream& out) const;
    static DaeModel read(std::istream& in);

    friend bool operator==(const DaeModel&, const DaeModel&) = default;

  private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> w_;
    std::vector<double> bh_;
    std::vector<double> bz_;
};

struct TrainConfig {
    double learning_rate = 0.2;
    std::size_t batch_size = 100;
    double corruption_rate = 0.1;
    std::size_t max_epochs = 500;
    /// Stop once the error drop over the last third of the epochs falls below
    /// this share of the total drop.
    double gamma_threshold = 0.05;
    /// Stop once |e_monitor - e_validation| / e_monitor reaches this value.
    double overfit_threshold = 0.1;
    double validation_fraction = 0.1;
    std::size_t monitor_subset_size = 100;

    /// Throws std::invalid_argument if a field is out of range.
    void validate() const;
};

enum class StopReason { converged_gamma, overfit, max_epochs };

std::string to_string(StopReason r);

struct ErrorCheckpoint {
    std::size_t epoch = 0;
    double train_error = 0.0;      // mean error on the monitor subset
    double validation_error = 0.0; // mean error on the held-out set
};

struct TrainReport {
    std::size_t epochs_run = 0;
    StopReason stop_reason = StopReason::max_epochs;
    std::vector<ErrorCheckpoint> error_history;
};

/// Parameter-shaped gradient buffer.
struct DaeGradient {
    std::vector<double> w;
    std::vector<double> bh;
    std::vector<double> bz;

    explicit DaeGradient(const DaeModel& model);
    void clear() noexcept;
};

struct Activations {
    RealVector h;
    RealVector z;
};

/// W ~ U[-1/sqrt(n), 1/sqrt(n)], zero biases.
DaeModel init_dae(std::size_t n, std::size_t m, Rng& rng);

/// Salt-and-pepper noise: exactly round(rate * n) distinct positions are
/// overwritten by a fair coin in {0,1}. Throws std::domain_error unless rate is in [0,1].
RealVector corrupt(std::span<const double> x, double rate, Rng& rng);

/// Throws ShapeError if x_hat.size() != visible size.
Activations forward(const DaeModel& model, std::span<const double> x_hat);

/// -sum_k [x_k log z_k + (1 - x_k) log(1 - z_k)]. z is clamped away from 0 and 1.
double cross_entropy(std::span<const double> x, std::span<const double> z);

/// Cross-entropy between x and the reconstruction of x_hat, computed from the
/// output pre-activations (no log(0) for saturated units).
double reconstruction_error(const DaeModel& model, std::span<const double> x, std::span<const double> x_hat);

/// Adds d loss / d theta for one example to `grad` and returns the loss.
double accumulate_gradient(const DaeModel& model, std::span<const double> x, std::span<const double> x_hat,
                           DaeGradient& grad);

/// One descent step with pre-drawn corruptions: theta -= alpha * mean gradient.
/// Returns the mean loss at the parameters before the step.
/// Throws DivergenceError if the loss is not finite.
double descent_step(DaeModel& model, std::span<const RealVector> clean, std::span<const RealVector> corrupted,
                    double alpha);

/// Corrupts every member of `batch` with `cfg.corruption_rate` and takes one
/// descent step at `cfg.learning_rate`. Returns the mean batch loss.
double train_step(DaeModel& model, std::span<const Bitstring> batch, const TrainConfig& cfg, Rng& rng);

/// Full training run with the convergence and overfitting stop rules.
/// Throws InsufficientDataError if fewer than 10 examples are given.
std::pair<DaeModel, TrainReport> train(DaeModel model, std::span<const Bitstring> data, const TrainConfig& cfg,
                                       Rng& rng);

/// Runs `steps` corrupt/reconstruct iterations from x ~ U[0,1]^n.
RealVector sample(const DaeModel& model, std::size_t steps, double corruption_rate, Rng& rng);

/// Smallest dataset train() accepts.
inline constexpr std::size_t kMinTrainingExamples = 10;

} // namespace daeeda
