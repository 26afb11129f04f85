#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "dynmo/benchmarks.hpp"
#include "dynmo/types.hpp"

namespace dynmo {

/// Maps a decision vector to predicted objectives (typically a trained
/// `TransferEnsemble`).
using ObjectivePredictor = std::function<Vector(std::span<const double>)>;

struct SeederParams {
    std::size_t population_size = 100;  // N
    std::size_t test_count = 500;
    /// Gaussian padding sigma as a fraction of each variable's range.
    double noise_fraction = 0.05;
};

/// Candidate pool screening followed by front assembly.
///
/// Whole predicted fronts are taken while they fit in N. If the first front
/// alone exceeds N it is truncated by crowding distance on the predicted
/// objectives. The remainder is padded with Gaussian-perturbed copies of the
/// selected members, taken round-robin and clipped to the box. Returned
/// individuals are unevaluated.
Population assemble_initial_population(std::span<const Vector> candidates,
                                       std::span<const Vector> predicted,
                                       const DynamicProblem& problem, const SeederParams& params,
                                       Rng& rng);

/// Draws `test_count` uniform candidates, predicts them, and assembles.
Population predict_initial_population(const ObjectivePredictor& predictor,
                                      const DynamicProblem& problem, const SeederParams& params,
                                      Rng& rng);

}  // namespace dynmo
