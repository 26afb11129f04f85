#include "dynmo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynmo/pareto.hpp"

namespace dynmo {

namespace {

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

Ranked rank_population(const Population& pop) {
    std::vector<Vector> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) objs.push_back(*ind.f);
    Ranked r{std::vector<std::size_t>(pop.size()), std::vector<double>(pop.size())};
    const auto fronts = fast_nondominated_sort(objs);
    for (std::size_t level = 0; level < fronts.size(); ++level) {
        std::vector<Vector> front;
        for (auto i : fronts[level]) front.push_back(objs[i]);
        const auto cd = crowding_distance(front);
        for (std::size_t p = 0; p < fronts[level].size(); ++p) {
            r.rank[fronts[level][p]] = level;
            r.crowding[fronts[level][p]] = cd[p];
        }
    }
    return r;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t tournament(const Ranked& r, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, r.rank.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b] ? a : b;
    if (r.crowding[a] != r.crowding[b]) return r.crowding[a] > r.crowding[b] ? a : b;
    return uniform01(rng) < 0.5 ? a : b;
}

// Bounded simulated binary crossover (Deb & Agrawal), per variable with
// probability 0.5.
void sbx(Vector& c1, Vector& c2, const std::vector<Interval>& bounds, double eta, Rng& rng) {
    for (std::size_t j = 0; j < c1.size(); ++j) {
        if (uniform01(rng) > 0.5) continue;
        double y1 = c1[j], y2 = c2[j];
        if (std::abs(y1 - y2) <= 1e-14) continue;
        if (y1 > y2) std::swap(y1, y2);
        const double lo = bounds[j].lower, hi = bounds[j].upper;
        const double rand = uniform01(rng);

        auto spread = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (rand <= 1.0 / alpha) return std::pow(rand * alpha, 1.0 / (eta + 1.0));
            return std::pow(1.0 / (2.0 - rand * alpha), 1.0 / (eta + 1.0));
        };
        const double diff = y2 - y1;
        const double bq1 = spread(1.0 + 2.0 * (y1 - lo) / diff);
        const double bq2 = spread(1.0 + 2.0 * (hi - y2) / diff);
        double a = 0.5 * ((y1 + y2) - bq1 * diff);
        double b = 0.5 * ((y1 + y2) + bq2 * diff);
        a = std::clamp(a, lo, hi);
        b = std::clamp(b, lo, hi);
        if (uniform01(rng) <= 0.5) std::swap(a, b);
        c1[j] = a;
        c2[j] = b;
    }
}

void polynomial_mutation(Vector& x, const std::vector<Interval>& bounds, double eta, double prob,
                         Rng& rng) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (uniform01(rng) > prob) continue;
        const double lo = bounds[j].lower, hi = bounds[j].upper;
        const double y = x[j];
        const double d1 = (y - lo) / (hi - lo);
        const double d2 = (hi - y) / (hi - lo);
        const double rand = uniform01(rng);
        const double power = 1.0 / (eta + 1.0);
        double dq;
        if (rand < 0.5) {
            const double v = 2.0 * rand + (1.0 - 2.0 * rand) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(v, power) - 1.0;
        } else {
            const double v =
                2.0 * (1.0 - rand) + 2.0 * (rand - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(v, power);
        }
        x[j] = std::clamp(y + dq * (hi - lo), lo, hi);
    }
}

}  // namespace

void OptimizerConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0)
        throw std::invalid_argument("optimizer: population size must be even and >= 2");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(crossover_probability) || !(mutation_probability <= 1.0))
        throw std::invalid_argument("optimizer: probabilities must lie in [0, 1]");
    if (!(crossover_index >= 0.0) || !(mutation_index >= 0.0))
        throw std::invalid_argument("optimizer: distribution indices must be >= 0");
}

Nsga2::Nsga2(OptimizerConfig config) : config_(config) { config_.validate(); }

Population select_survivors(Population pool, std::size_t keep) {
    std::vector<Vector> objs;
    objs.reserve(pool.size());
    for (const auto& ind : pool) objs.push_back(*ind.f);
    Population next;
    next.reserve(keep);
    for (const auto& front : fast_nondominated_sort(objs)) {
        if (next.size() == keep) break;
        if (next.size() + front.size() <= keep) {
            for (auto i : front) next.push_back(std::move(pool[i]));
            continue;
        }
        std::vector<Vector> fobjs;
        for (auto i : front) fobjs.push_back(objs[i]);
        for (auto p : truncate_by_crowding(fobjs, keep - next.size()))
            next.push_back(std::move(pool[front[p]]));
    }
    return next;
}

Population Nsga2::optimize(Population pop, Evaluator& evaluator, std::size_t generations,
                           Rng& rng) const {
    const std::size_t N = config_.population_size;
    if (pop.size() != N) throw std::invalid_argument("nsga2: initial population must have N members");
    const auto& problem = evaluator.problem();
    const auto& bounds = problem.bounds();
    for (auto& ind : pop) {
        if (!problem.in_bounds(ind.x))
            throw std::invalid_argument("nsga2: initial member outside the decision box");
        if (!evaluator.current(ind)) evaluator.evaluate(ind);
    }
    const double pm = config_.mutation_probability > 0.0
                          ? config_.mutation_probability
                          : 1.0 / static_cast<double>(problem.dimension());

    for (std::size_t gen = 0; gen < generations; ++gen) {
        const Ranked ranked = rank_population(pop);
        Population pool = pop;
        pool.reserve(2 * N);
        while (pool.size() < 2 * N) {
            Vector c1 = pop[tournament(ranked, rng)].x;
            Vector c2 = pop[tournament(ranked, rng)].x;
            if (uniform01(rng) <= config_.crossover_probability)
                sbx(c1, c2, bounds, config_.crossover_index, rng);
            polynomial_mutation(c1, bounds, config_.mutation_index, pm, rng);
            polynomial_mutation(c2, bounds, config_.mutation_index, pm, rng);
            for (Vector* c : {&c1, &c2}) {
                if (pool.size() == 2 * N) break;
                Individual child{std::move(*c), std::nullopt, 0};
                evaluator.evaluate(child);
                pool.push_back(std::move(child));
            }
        }
        pop = select_survivors(std::move(pool), N);
    }
    return pop;
}

bool optimizer_available(std::string_view name) { return name == "nsga2"; }

std::unique_ptr<StaticOptimizer> make_optimizer(std::string_view name,
                                                const OptimizerConfig& config) {
    if (name == "nsga2") return std::make_unique<Nsga2>(config);
    if (name == "rmmeda")
        throw std::invalid_argument("optimizer 'rmmeda' is reserved but not implemented");
    throw std::invalid_argument("unknown optimizer: " + std::string(name));
}

std::size_t budget_for_environment(std::size_t tau_t, bool initial) {
    if (tau_t == 0) throw std::invalid_argument("budget_for_environment: tau_t must be >= 1");
    return initial ? kInitialGenerations : tau_t;
}

}  // namespace dynmo
