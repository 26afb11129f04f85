#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "dynmo/evaluator.hpp"
#include "dynmo/types.hpp"

namespace dynmo {

struct OptimizerConfig {
    std::size_t population_size = 100;
    double crossover_index = 20.0;
    double mutation_index = 20.0;
    double crossover_probability = 0.9;
    /// Per-variable mutation probability; values <= 0 mean 1/n.
    double mutation_probability = 0.0;

    /// Throws `std::invalid_argument` unless N is even and >= 2 and the
    /// probabilities lie in [0, 1].
    void validate() const;
};

/// Static multi-objective optimizer run between environment changes.
///
/// `initial` members whose objectives were not computed at the evaluator's
/// environment are (re)evaluated first. The result is `population_size`
/// individuals evaluated at the evaluator's environment.
class StaticOptimizer {
public:
    virtual ~StaticOptimizer() = default;
    virtual std::string_view name() const = 0;
    virtual Population optimize(Population initial, Evaluator& evaluator, std::size_t generations,
                                Rng& rng) const = 0;
};

/// Elitist NSGA-II: binary tournament on (rank, crowding), SBX, polynomial
/// mutation, (mu + lambda) survival by non-dominated sorting and crowding.
class Nsga2 final : public StaticOptimizer {
public:
    explicit Nsga2(OptimizerConfig config);

    std::string_view name() const override { return "nsga2"; }
    Population optimize(Population initial, Evaluator& evaluator, std::size_t generations,
                        Rng& rng) const override;

    const OptimizerConfig& config() const { return config_; }

private:
    OptimizerConfig config_;
};

/// Elitist survivor selection: the best `keep` of `pool` by front order, the
/// overflowing front thinned by crowding distance. Returned in selection order.
Population select_survivors(Population pool, std::size_t keep);

/// "nsga2" builds `Nsga2`. "rmmeda" is reserved and currently rejected. Throws
/// `std::invalid_argument` for unknown names.
std::unique_ptr<StaticOptimizer> make_optimizer(std::string_view name,
                                                const OptimizerConfig& config);

/// True for names `make_optimizer` can build.
bool optimizer_available(std::string_view name);

inline constexpr std::size_t kInitialGenerations = 50;

/// Generations spent in one environment: 50 for the first, tau_t afterwards.
std::size_t budget_for_environment(std::size_t tau_t, bool initial);

}  // namespace dynmo
