#include "dynmo/seeder.hpp"

#include <algorithm>
#include <stdexcept>

#include "dynmo/evaluator.hpp"
#include "dynmo/pareto.hpp"

namespace dynmo {

Population assemble_initial_population(std::span<const Vector> candidates,
                                       std::span<const Vector> predicted,
                                       const DynamicProblem& problem, const SeederParams& params,
                                       Rng& rng) {
    const std::size_t N = params.population_size;
    if (candidates.empty()) throw std::invalid_argument("seeder: empty candidate pool");
    if (predicted.size() != candidates.size())
        throw std::invalid_argument("seeder: prediction count differs from pool size");
    if (N < 2) throw std::invalid_argument("seeder: population size must be >= 2");

    const auto fronts = fast_nondominated_sort(predicted);
    std::vector<std::size_t> chosen;
    for (const auto& front : fronts) {
        if (chosen.size() + front.size() > N) break;
        chosen.insert(chosen.end(), front.begin(), front.end());
    }
    if (chosen.empty()) {
        const auto& first = fronts.front();
        std::vector<Vector> objs;
        objs.reserve(first.size());
        for (auto i : first) objs.push_back(predicted[i]);
        for (auto pos : truncate_by_crowding(objs, N)) chosen.push_back(first[pos]);
    }

    Population pop;
    pop.reserve(N);
    for (auto i : chosen) pop.push_back({candidates[i], std::nullopt, 0});

    const std::size_t basis = pop.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto& bounds = problem.bounds();
    for (std::size_t r = 0; pop.size() < N; ++r) {
        Vector x = pop[r % basis].x;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double sigma = params.noise_fraction * bounds[j].width();
            x[j] = std::clamp(x[j] + sigma * gauss(rng), bounds[j].lower, bounds[j].upper);
        }
        pop.push_back({std::move(x), std::nullopt, 0});
    }
    return pop;
}

Population predict_initial_population(const ObjectivePredictor& predictor,
                                      const DynamicProblem& problem, const SeederParams& params,
                                      Rng& rng) {
    if (params.test_count < params.population_size)
        throw std::invalid_argument("seeder: test_count must be >= population size");
    std::vector<Vector> pool, predicted;
    pool.reserve(params.test_count);
    predicted.reserve(params.test_count);
    for (std::size_t i = 0; i < params.test_count; ++i) pool.push_back(sample_uniform(problem, rng));
    for (const auto& x : pool) predicted.push_back(predictor(x));
    return assemble_initial_population(pool, predicted, problem, params, rng);
}

}  // namespace dynmo
