#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dynmo/evaluator.hpp"
#include "dynmo/svr.hpp"
#include "dynmo/types.hpp"

namespace dynmo {

enum class Domain { Source, Target };

struct WeightedSample {
    Vector x;
    Vector y;
    Domain domain = Domain::Source;
    double weight = 0.0;
};

/// Source samples are `previous` with their stored objectives; target samples
/// are `target_count` uniform draws evaluated through `evaluator`. All weights
/// start at 1/|D|. Throws `std::invalid_argument` if `previous` is empty or has
/// unevaluated members, or if `target_count < 2`.
std::vector<WeightedSample> build_training_set(const Population& previous, Evaluator& evaluator,
                                               std::size_t target_count, Rng& rng);

/// Residuals divided by their maximum. Returns nullopt when every residual is
/// zero (a perfect hypothesis).
std::optional<std::vector<double>> adjusted_errors(std::span<const double> residuals);

/// Sum of error * weight over target-domain samples.
double hypothesis_error(std::span<const double> errors, std::span<const WeightedSample> samples);

/// Source weights shrink by beta^e, target weights grow by beta_i^-e, then the
/// whole vector is renormalized to sum 1.
std::vector<WeightedSample> update_weights(std::span<const WeightedSample> samples,
                                           std::span<const double> errors, double beta_i,
                                           double beta);

/// Same update on a bare weight vector; `samples` supplies the domain tags.
void update_weight_vector(std::span<double> weights, std::span<const WeightedSample> samples,
                          std::span<const double> errors, double beta_i, double beta);

/// Fixed source decay factor 1 / (1 + sqrt(2 ln(n_source) / K)).
double source_decay(std::size_t source_count, std::size_t rounds);

/// beta_i = eps / (1 - eps) clamped into [1e-10, 1 - 1e-10].
double clamp_round_beta(double hypothesis_error);

/// Confidence-weighted median: the smallest prediction whose cumulative
/// weight reaches half of the total.
double weighted_median(std::span<const double> predictions, std::span<const double> weights);

using ScalarRegressor = std::function<double(std::span<const double>)>;
using LearnerFactory = std::function<ScalarRegressor(
    std::span<const Vector> X, std::span<const double> y, std::span<const double> w)>;

/// Weighted SVR base learner.
LearnerFactory svr_learner(SvrParams params = {});

struct WeakHypothesis {
    ScalarRegressor model;
    double confidence = 0.0;  // ln(1 / beta_i)
    std::size_t round = 0;    // 1-based
};

/// Per-objective weighted-median ensembles. Immutable once trained.
class TransferEnsemble {
public:
    TransferEnsemble() = default;
    explicit TransferEnsemble(std::vector<std::vector<WeakHypothesis>> chains);

    Vector predict(std::span<const double> x) const;
    std::size_t objectives() const { return chains_.size(); }
    const std::vector<WeakHypothesis>& chain(std::size_t k) const { return chains_.at(k); }

private:
    std::vector<std::vector<WeakHypothesis>> chains_;
};

enum class StopReason { Completed, ErrorTooLarge, PerfectFit };

/// Snapshot after one boosting round of one objective chain.
struct RoundRecord {
    std::size_t objective = 0;
    std::size_t round = 0;
    std::vector<double> errors;   // adjusted errors (empty for a perfect fit)
    double hypothesis_error = 0.0;
    double beta_i = 0.0;
    std::vector<double> weights;  // after the update
};

struct ChainSummary {
    std::size_t completed_rounds = 0;
    StopReason stop = StopReason::Completed;
};

struct TrainOptions {
    std::size_t rounds = 10;
    /// Called after every round of every chain.
    std::function<void(const RoundRecord&)> observer;
};

/// Independent TrAdaBoost.R2 chain per objective over the shared sample set.
/// Each retains its final ceil(completed/2) rounds. Throws
/// `std::invalid_argument` for `rounds < 2`, an empty set, or a set without
/// target samples.
TransferEnsemble train_transfer(std::span<const WeightedSample> samples,
                                const LearnerFactory& learner, const TrainOptions& options,
                                std::vector<ChainSummary>* summaries = nullptr);

}  // namespace dynmo
