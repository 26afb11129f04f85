#pragma once

#include <cstddef>
#include <span>

#include "dynmo/benchmarks.hpp"

namespace dynmo {

/// A problem pinned to one environment, counting true-function evaluations.
/// Not thread-safe; each run owns its evaluators.
class Evaluator {
public:
    Evaluator(const DynamicProblem& problem, Environment env, std::size_t env_index)
        : problem_(&problem), env_(env), env_index_(env_index) {}

    Vector operator()(std::span<const double> x) {
        ++count_;
        return problem_->evaluate(x, env_);
    }

    /// Evaluates `ind` in place and stamps it with this environment.
    void evaluate(Individual& ind) {
        ind.f = (*this)(ind.x);
        ind.env_index = env_index_;
    }

    /// True if `ind` holds objectives computed at this environment.
    bool current(const Individual& ind) const {
        return ind.evaluated() && ind.env_index == env_index_;
    }

    const DynamicProblem& problem() const { return *problem_; }
    const Environment& environment() const { return env_; }
    std::size_t env_index() const { return env_index_; }
    std::size_t count() const { return count_; }

private:
    const DynamicProblem* problem_;
    Environment env_;
    std::size_t env_index_;
    std::size_t count_ = 0;
};

/// Uniform sample of the problem's decision box.
Vector sample_uniform(const DynamicProblem& problem, Rng& rng);

}  // namespace dynmo
