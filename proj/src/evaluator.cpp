#include "dynmo/evaluator.hpp"

namespace dynmo {

Vector sample_uniform(const DynamicProblem& problem, Rng& rng) {
    Vector x(problem.dimension());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto& b = problem.bounds()[j];
        std::uniform_real_distribution<double> u(b.lower, b.upper);
        x[j] = u(rng);
    }
    return x;
}

}  // namespace dynmo
