#include "daeeda/dae.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace daeeda {

namespace {

inline double sigm(double a) noexcept {
    return 1.0 / (1.0 + std::exp(-a));
}

// log(1 + e^a) without overflow.
inline double softplus(double a) noexcept {
    return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

// Scratch buffers for one example; reused across a batch.
struct Workspace {
    std::vector<double> h;
    std::vector<double> z_pre;
    std::vector<double> dz;
    std::vector<double> dh;
    std::vector<std::size_t> index;

    Workspace(std::size_t n, std::size_t m) : h(m), z_pre(n), dz(n), dh(m), index(n) {}
};

void check_shape(const DaeModel& model, std::size_t len, const char* who) {
    if (len != model.visible_size()) {
        throw ShapeError(std::string(who) + ": expected length " + std::to_string(model.visible_size()) + ", got " +
                         std::to_string(len));
    }
}

// h and output pre-activations for x_hat, written into ws.
void encode_decode(const DaeModel& model, const double* x_hat, Workspace& ws) {
    const std::size_t n = model.visible_size();
    const std::size_t m = model.hidden_size();
    const double* w = model.weights().data();
    const double* bh = model.hidden_bias().data();
    const double* bz = model.visible_bias().data();

    double* h = ws.h.data();
    std::copy(bh, bh + m, h);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x_hat[i];
        if (xi == 0.0) {
            continue;
        }
        const double* row = w + i * m;
        for (std::size_t j = 0; j < m; ++j) {
            h[j] += xi * row[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        h[j] = sigm(h[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = w + i * m;
        double acc = bz[i];
        for (std::size_t j = 0; j < m; ++j) {
            acc += h[j] * row[j];
        }
        ws.z_pre[i] = acc;
    }
}

double loss_from_logits(const double* x, const double* z_pre, std::size_t n) noexcept {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        loss += softplus(z_pre[i]) - x[i] * z_pre[i];
    }
    return loss;
}

double example_gradient(const DaeModel& model, const double* x, const double* x_hat, DaeGradient& grad,
                        Workspace& ws) {
    const std::size_t n = model.visible_size();
    const std::size_t m = model.hidden_size();
    const double* w = model.weights().data();

    encode_decode(model, x_hat, ws);
    const double loss = loss_from_logits(x, ws.z_pre.data(), n);

    double* dz = ws.dz.data();
    double* dh = ws.dh.data();
    const double* h = ws.h.data();
    for (std::size_t i = 0; i < n; ++i) {
        dz[i] = sigm(ws.z_pre[i]) - x[i];
    }
    std::fill(dh, dh + m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = w + i * m;
        const double d = dz[i];
        for (std::size_t j = 0; j < m; ++j) {
            dh[j] += d * row[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        dh[j] *= h[j] * (1.0 - h[j]);
    }

    // W is shared by encoder and decoder, so both paths contribute.
    double* gw = grad.w.data();
    for (std::size_t i = 0; i < n; ++i) {
        double* grow = gw + i * m;
        const double xi = x_hat[i];
        const double d = dz[i];
        for (std::size_t j = 0; j < m; ++j) {
            grow[j] += xi * dh[j] + d * h[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        grad.bh[j] += dh[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        grad.bz[i] += dz[i];
    }
    return loss;
}

void corrupt_in_place(double* x, std::size_t n, double rate, std::vector<std::size_t>& index, Rng& rng) {
    const auto count = static_cast<std::size_t>(std::lround(rate * static_cast<double>(n)));
    if (count == 0) {
        return;
    }
    std::iota(index.begin(), index.end(), std::size_t{0});
    for (std::size_t s = 0; s < count; ++s) {
        auto r = s + static_cast<std::size_t>(rng.below(n - s));
        std::swap(index[s], index[r]);
        x[index[s]] = rng.coin() ? 1.0 : 0.0;
    }
}

void check_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw std::domain_error("corruption rate must lie in [0,1]");
    }
}

void apply_update(DaeModel& model, const DaeGradient& grad, double scale) {
    auto w = model.weights();
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] -= scale * grad.w[k];
    }
    auto bh = model.hidden_bias();
    for (std::size_t j = 0; j < bh.size(); ++j) {
        bh[j] -= scale * grad.bh[j];
    }
    auto bz = model.visible_bias();
    for (std::size_t i = 0; i < bz.size(); ++i) {
        bz[i] -= scale * grad.bz[i];
    }
}

RealVector to_real(const Bitstring& b) {
    RealVector v(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        v[i] = b[i];
    }
    return v;
}

// Mean clean-input reconstruction error over selected examples.
double mean_error(const DaeModel& model, const std::vector<RealVector>& data, std::span<const std::size_t> which,
                  Workspace& ws) {
    double total = 0.0;
    for (auto idx : which) {
        const double* x = data[idx].data();
        encode_decode(model, x, ws);
        total += loss_from_logits(x, ws.z_pre.data(), model.visible_size());
    }
    return total / static_cast<double>(which.size());
}

} // namespace

// ---------------------------------------------------------------------------

DaeModel::DaeModel(std::size_t n, std::size_t m) : n_(n), m_(m), w_(n * m, 0.0), bh_(m, 0.0), bz_(n, 0.0) {
    if (n == 0 || m == 0) {
        throw std::invalid_argument("DaeModel: sizes must be positive");
    }
}

bool DaeModel::all_finite() const noexcept {
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
    };
    return finite(w_) && finite(bh_) && finite(bz_);
}

void DaeModel::write(std::ostream& out) const {
    const auto old_precision = out.precision(17);
    out << "DAE 1 " << n_ << ' ' << m_ << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            out << (j == 0 ? "" : " ") << w_[i * m_ + j];
        }
        out << '\n';
    }
    for (std::size_t j = 0; j < m_; ++j) {
        out << (j == 0 ? "" : " ") << bh_[j];
    }
    out << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
        out << (i == 0 ? "" : " ") << bz_[i];
    }
    out << '\n';
    out.precision(old_precision);
}

DaeModel DaeModel::read(std::istream& in) {
    std::string tag;
    int version = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    if (!(in >> tag >> version >> n >> m) || tag != "DAE" || version != 1 || n == 0 || m == 0) {
        throw ParseError("DAE dump: bad header");
    }
    DaeModel model(n, m);
    auto read_all = [&in](std::span<double> dst) {
        for (auto& v : dst) {
            if (!(in >> v)) {
                throw ParseError("DAE dump: truncated parameters");
            }
        }
    };
    read_all(model.w_);
    read_all(model.bh_);
    read_all(model.bz_);
    return model;
}

DaeGradient::DaeGradient(const DaeModel& model)
    : w(model.weights().size(), 0.0), bh(model.hidden_size(), 0.0), bz(model.visible_size(), 0.0) {}

void DaeGradient::clear() noexcept {
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(bh.begin(), bh.end(), 0.0);
    std::fill(bz.begin(), bz.end(), 0.0);
}

std::string to_string(StopReason r) {
    switch (r) {
    case StopReason::converged_gamma:
        return "converged-gamma";
    case StopReason::overfit:
        return "overfit";
    case StopReason::max_epochs:
        return "max-epochs";
    }
    return "unknown";
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0 && learning_rate < 1.0)) {
        throw std::invalid_argument("TrainConfig: learning_rate must lie in (0,1)");
    }
    if (batch_size == 0 || max_epochs == 0 || monitor_subset_size == 0) {
        throw std::invalid_argument("TrainConfig: batch_size, max_epochs, monitor_subset_size must be positive");
    }
    if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) {
        throw std::invalid_argument("TrainConfig: corruption_rate must lie in [0,1]");
    }
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw std::invalid_argument("TrainConfig: validation_fraction must lie in (0,1)");
    }
    if (!std::isfinite(gamma_threshold) || !std::isfinite(overfit_threshold)) {
        throw std::invalid_argument("TrainConfig: thresholds must be finite");
    }
}

DaeModel init_dae(std::size_t n, std::size_t m, Rng& rng) {
    DaeModel model(n, m);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& w : model.weights()) {
        w = rng.uniform(-s, s);
    }
    return model;
}

RealVector corrupt(std::span<const double> x, double rate, Rng& rng) {
    check_rate(rate);
    RealVector out(x.begin(), x.end());
    std::vector<std::size_t> index(x.size());
    corrupt_in_place(out.data(), out.size(), rate, index, rng);
    return out;
}

Activations forward(const DaeModel& model, std::span<const double> x_hat) {
    check_shape(model, x_hat.size(), "forward");
    Workspace ws(model.visible_size(), model.hidden_size());
    encode_decode(model, x_hat.data(), ws);
    Activations act{ws.h, RealVector(model.visible_size())};
    for (std::size_t i = 0; i < act.z.size(); ++i) {
        act.z[i] = sigm(ws.z_pre[i]);
    }
    return act;
}

double cross_entropy(std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size()) {
        throw ShapeError("cross_entropy: length mismatch");
    }
    constexpr double eps = 1e-15;
    double e = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double zk = std::clamp(z[k], eps, 1.0 - eps);
        e -= x[k] * std::log(zk) + (1.0 - x[k]) * std::log(1.0 - zk);
    }
    return e;
}

double reconstruction_error(const DaeModel& model, std::span<const double> x, std::span<const double> x_hat) {
    check_shape(model, x.size(), "reconstruction_error");
    check_shape(model, x_hat.size(), "reconstruction_error");
    Workspace ws(model.visible_size(), model.hidden_size());
    encode_decode(model, x_hat.data(), ws);
    return loss_from_logits(x.data(), ws.z_pre.data(), model.visible_size());
}

double accumulate_gradient(const DaeModel& model, std::span<const double> x, std::span<const double> x_hat,
                           DaeGradient& grad) {
    check_shape(model, x.size(), "accumulate_gradient");
    check_shape(model, x_hat.size(), "accumulate_gradient");
    Workspace ws(model.visible_size(), model.hidden_size());
    return example_gradient(model, x.data(), x_hat.data(), grad, ws);
}

double descent_step(DaeModel& model, std::span<const RealVector> clean, std::span<const RealVector> corrupted,
                    double alpha) {
    if (clean.empty() || clean.size() != corrupted.size()) {
        throw ShapeError("descent_step: need equal, non-empty clean and corrupted batches");
    }
    Workspace ws(model.visible_size(), model.hidden_size());
    DaeGradient grad(model);
    double loss = 0.0;
    for (std::size_t e = 0; e < clean.size(); ++e) {
        check_shape(model, clean[e].size(), "descent_step");
        check_shape(model, corrupted[e].size(), "descent_step");
        loss += example_gradient(model, clean[e].data(), corrupted[e].data(), grad, ws);
    }
    const auto count = static_cast<double>(clean.size());
    loss /= count;
    if (!std::isfinite(loss)) {
        throw DivergenceError("DAE training diverged: non-finite loss");
    }
    apply_update(model, grad, alpha / count);
    return loss;
}

double train_step(DaeModel& model, std::span<const Bitstring> batch, const TrainConfig& cfg, Rng& rng) {
    check_rate(cfg.corruption_rate);
    if (batch.empty()) {
        throw std::invalid_argument("train_step: empty batch");
    }
    std::vector<RealVector> clean;
    std::vector<RealVector> noisy;
    clean.reserve(batch.size());
    noisy.reserve(batch.size());
    for (const auto& b : batch) {
        check_shape(model, b.size(), "train_step");
        clean.push_back(to_real(b));
        noisy.push_back(corrupt(clean.back(), cfg.corruption_rate, rng));
    }
    return descent_step(model, clean, noisy, cfg.learning_rate);
}

std::pair<DaeModel, TrainReport> train(DaeModel model, std::span<const Bitstring> data, const TrainConfig& cfg,
                                       Rng& rng) {
    cfg.validate();
    if (data.size() < kMinTrainingExamples) {
        throw InsufficientDataError("train: need at least " + std::to_string(kMinTrainingExamples) +
                                    " examples, got " + std::to_string(data.size()));
    }
    const std::size_t n = model.visible_size();
    const std::size_t m = model.hidden_size();

    std::vector<RealVector> examples;
    examples.reserve(data.size());
    for (const auto& b : data) {
        check_shape(model, b.size(), "train");
        examples.push_back(to_real(b));
    }

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng);

    const auto total = examples.size();
    const auto n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(total))));
    const std::size_t n_train = total - n_val;
    std::vector<std::size_t> train_set(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<std::size_t> validation_set(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    const std::vector<std::size_t> monitor(
        train_set.begin(), train_set.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.monitor_subset_size, n_train)));

    Workspace ws(n, m);
    DaeGradient grad(model);
    RealVector noisy(n);
    const std::size_t batch = std::min(cfg.batch_size, n_train);

    TrainReport report;
    auto checkpoint = [&](std::size_t epoch) {
        report.error_history.push_back(
            {epoch, mean_error(model, examples, monitor, ws), mean_error(model, examples, validation_set, ws)});
    };
    checkpoint(0);

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle(train_set.begin(), train_set.end(), rng);
        for (std::size_t start = 0; start < n_train; start += batch) {
            const std::size_t stop = std::min(start + batch, n_train);
            grad.clear();
            double loss = 0.0;
            for (std::size_t e = start; e < stop; ++e) {
                const RealVector& x = examples[train_set[e]];
                std::copy(x.begin(), x.end(), noisy.begin());
                corrupt_in_place(noisy.data(), n, cfg.corruption_rate, ws.index, rng);
                loss += example_gradient(model, x.data(), noisy.data(), grad, ws);
            }
            if (!std::isfinite(loss)) {
                throw DivergenceError("DAE training diverged: non-finite loss");
            }
            apply_update(model, grad, cfg.learning_rate / static_cast<double>(stop - start));
        }
        report.epochs_run = epoch;

        if (epoch % 2 != 0) {
            continue;
        }
        checkpoint(epoch);
        const auto& now = report.error_history.back();

        if (now.train_error > 0.0 &&
            std::fabs(now.train_error - now.validation_error) / now.train_error >= cfg.overfit_threshold) {
            report.stop_reason = StopReason::overfit;
            return {std::move(model), std::move(report)};
        }

        if (epoch >= 10) {
            const double e0 = report.error_history.front().train_error;
            const double et = now.train_error;
            if (!(e0 > et + 1e-12)) {
                report.stop_reason = StopReason::converged_gamma;
                return {std::move(model), std::move(report)};
            }
            // latest checkpoint at or below 0.67 t
            const auto limit = static_cast<std::size_t>(std::floor(0.67 * static_cast<double>(epoch)));
            double e_mid = e0;
            for (const auto& c : report.error_history) {
                if (c.epoch <= limit) {
                    e_mid = c.train_error;
                }
            }
            const double gamma = (e_mid - et) / (e0 - et);
            if (gamma < cfg.gamma_threshold) {
                report.stop_reason = StopReason::converged_gamma;
                return {std::move(model), std::move(report)};
            }
        }
    }
    report.stop_reason = StopReason::max_epochs;
    return {std::move(model), std::move(report)};
}

RealVector sample(const DaeModel& model, std::size_t steps, double corruption_rate, Rng& rng) {
    check_rate(corruption_rate);
    if (steps == 0) {
        throw std::invalid_argument("sample: need at least one step");
    }
    const std::size_t n = model.visible_size();
    Workspace ws(n, model.hidden_size());
    RealVector x(n);
    for (auto& v : x) {
        v = rng.uniform();
    }
    for (std::size_t s = 0; s < steps; ++s) {
        corrupt_in_place(x.data(), n, corruption_rate, ws.index, rng);
        encode_decode(model, x.data(), ws);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = sigm(ws.z_pre[i]);
        }
    }
    return x;
}

} // namespace daeeda
