#include "dynmo/transfer_boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dynmo {

namespace {

constexpr double kBetaFloor = 1e-10;
constexpr double kBetaCeil = 1.0 - 1e-10;

void normalize(std::span<double> w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw std::runtime_error("transfer weights collapsed to zero");
    for (auto& v : w) v /= total;
}

}  // namespace

std::vector<WeightedSample> build_training_set(const Population& previous, Evaluator& evaluator,
                                               std::size_t target_count, Rng& rng) {
    if (previous.empty()) throw std::invalid_argument("build_training_set: empty population");
    if (target_count < 2) throw std::invalid_argument("build_training_set: target_count < 2");

    std::vector<WeightedSample> samples;
    samples.reserve(previous.size() + target_count);
    for (const auto& ind : previous) {
        if (!ind.evaluated())
            throw std::invalid_argument("build_training_set: unevaluated source individual");
        samples.push_back({ind.x, *ind.f, Domain::Source, 0.0});
    }
    for (std::size_t i = 0; i < target_count; ++i) {
        Vector x = sample_uniform(evaluator.problem(), rng);
        Vector y = evaluator(x);
        samples.push_back({std::move(x), std::move(y), Domain::Target, 0.0});
    }
    const double w = 1.0 / static_cast<double>(samples.size());
    for (auto& s : samples) s.weight = w;
    return samples;
}

std::optional<std::vector<double>> adjusted_errors(std::span<const double> residuals) {
    double worst = 0.0;
    for (double r : residuals) {
        if (!(r >= 0.0)) throw std::invalid_argument("adjusted_errors: residuals must be >= 0");
        worst = std::max(worst, r);
    }
    if (worst == 0.0) return std::nullopt;
    std::vector<double> e(residuals.begin(), residuals.end());
    for (auto& v : e) v /= worst;
    return e;
}

double hypothesis_error(std::span<const double> errors, std::span<const WeightedSample> samples) {
    if (errors.size() != samples.size())
        throw std::invalid_argument("hypothesis_error: length mismatch");
    double eps = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].domain == Domain::Target) eps += errors[i] * samples[i].weight;
    return eps;
}

void update_weight_vector(std::span<double> weights, std::span<const WeightedSample> samples,
                          std::span<const double> errors, double beta_i, double beta) {
    if (weights.size() != samples.size() || errors.size() != samples.size())
        throw std::invalid_argument("update_weights: length mismatch");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].domain == Domain::Source) weights[i] *= std::pow(beta, errors[i]);
        else weights[i] *= std::pow(beta_i, -errors[i]);
    }
    normalize(weights);
}

std::vector<WeightedSample> update_weights(std::span<const WeightedSample> samples,
                                           std::span<const double> errors, double beta_i,
                                           double beta) {
    std::vector<WeightedSample> out(samples.begin(), samples.end());
    std::vector<double> w(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) w[i] = out[i].weight;
    update_weight_vector(w, samples, errors, beta_i, beta);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].weight = w[i];
    return out;
}

double source_decay(std::size_t source_count, std::size_t rounds) {
    if (rounds == 0) throw std::invalid_argument("source_decay: rounds must be >= 1");
    const double n = static_cast<double>(std::max<std::size_t>(source_count, 1));
    return 1.0 / (1.0 + std::sqrt(2.0 * std::log(n) / static_cast<double>(rounds)));
}

double clamp_round_beta(double hypothesis_error) {
    const double b = hypothesis_error / (1.0 - hypothesis_error);
    if (!(b >= kBetaFloor)) return kBetaFloor;
    return std::min(b, kBetaCeil);
}

double weighted_median(std::span<const double> predictions, std::span<const double> weights) {
    if (predictions.empty() || predictions.size() != weights.size())
        throw std::invalid_argument("weighted_median: bad input lengths");
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return predictions[a] < predictions[b]; });
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    // Relative slack keeps the answer independent of summation order.
    const double half = 0.5 * total * (1.0 - 1e-12);
    double cumulative = 0.0;
    for (auto i : order) {
        cumulative += weights[i];
        if (cumulative >= half) return predictions[i];
    }
    return predictions[order.back()];
}

LearnerFactory svr_learner(SvrParams params) {
    return [params](std::span<const Vector> X, std::span<const double> y,
                    std::span<const double> w) -> ScalarRegressor {
        auto model = std::make_shared<const SvrModel>(fit_svr(X, y, w, params));
        return [model](std::span<const double> x) { return model->predict(x); };
    };
}

TransferEnsemble::TransferEnsemble(std::vector<std::vector<WeakHypothesis>> chains)
    : chains_(std::move(chains)) {
    for (const auto& c : chains_)
        if (c.empty()) throw std::invalid_argument("TransferEnsemble: empty hypothesis chain");
}

Vector TransferEnsemble::predict(std::span<const double> x) const {
    Vector out(chains_.size());
    std::vector<double> preds, conf;
    for (std::size_t k = 0; k < chains_.size(); ++k) {
        preds.clear();
        conf.clear();
        for (const auto& h : chains_[k]) {
            preds.push_back(h.model(x));
            conf.push_back(h.confidence);
        }
        out[k] = weighted_median(preds, conf);
    }
    return out;
}

TransferEnsemble train_transfer(std::span<const WeightedSample> samples,
                                const LearnerFactory& learner, const TrainOptions& options,
                                std::vector<ChainSummary>* summaries) {
    const std::size_t K = options.rounds;
    if (K < 2) throw std::invalid_argument("train_transfer: need at least 2 rounds");
    if (samples.empty()) throw std::invalid_argument("train_transfer: empty training set");
    const std::size_t n = samples.size();
    const std::size_t m = samples.front().y.size();
    std::size_t source_count = 0;
    for (const auto& s : samples) {
        if (s.y.size() != m) throw std::invalid_argument("train_transfer: ragged targets");
        if (s.domain == Domain::Source) ++source_count;
    }
    if (source_count == n) throw std::invalid_argument("train_transfer: no target samples");

    std::vector<Vector> X;
    X.reserve(n);
    for (const auto& s : samples) X.push_back(s.x);
    const double beta = source_decay(source_count, K);

    std::vector<std::vector<WeakHypothesis>> chains(m);
    if (summaries) summaries->assign(m, {});

    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> y(n), w(n), residual(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = samples[i].y[k];
            w[i] = samples[i].weight;
        }
        normalize(w);

        std::vector<WeakHypothesis> history;
        ChainSummary summary;
        for (std::size_t round = 1; round <= K; ++round) {
            ScalarRegressor h = learner(X, y, w);
            for (std::size_t i = 0; i < n; ++i) residual[i] = std::abs(y[i] - h(X[i]));

            RoundRecord record;
            record.objective = k;
            record.round = round;

            auto errors = adjusted_errors(residual);
            if (!errors) {
                history.push_back({std::move(h), std::log(1.0 / kBetaFloor), round});
                summary.stop = StopReason::PerfectFit;
                record.beta_i = kBetaFloor;
                record.weights = w;
                if (options.observer) options.observer(record);
                break;
            }

            // Error is measured on the target domain with the current weights.
            double eps = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (samples[i].domain == Domain::Target) eps += (*errors)[i] * w[i];

            if (eps >= 0.5) {
                summary.stop = StopReason::ErrorTooLarge;
                if (history.empty())
                    history.push_back({std::move(h), std::log(1.0 / kBetaCeil), round});
                record.errors = std::move(*errors);
                record.hypothesis_error = eps;
                record.beta_i = kBetaCeil;
                record.weights = w;
                if (options.observer) options.observer(record);
                break;
            }

            const double beta_i = clamp_round_beta(eps);
            update_weight_vector(w, samples, *errors, beta_i, beta);
            history.push_back({std::move(h), std::log(1.0 / beta_i), round});

            if (options.observer) {
                record.errors = std::move(*errors);
                record.hypothesis_error = eps;
                record.beta_i = beta_i;
                record.weights = w;
                options.observer(record);
            }
        }
        summary.completed_rounds = history.size();
        const std::size_t keep = std::max<std::size_t>(1, (history.size() + 1) / 2);
        chains[k].assign(std::make_move_iterator(history.end() - static_cast<std::ptrdiff_t>(keep)),
                         std::make_move_iterator(history.end()));
        if (summaries) (*summaries)[k] = summary;
    }
    return TransferEnsemble(std::move(chains));
}

}  // namespace dynmo
