#include <doctest.h>

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dynmo/evaluator.hpp"
#include "dynmo/pareto.hpp"
#include "dynmo/seeder.hpp"

using namespace dynmo;

namespace {

// A line of `n` mutually nondominated predictions offset by `level`.
void add_front(std::vector<Vector>& xs, std::vector<Vector>& fs, std::size_t n, double level,
               double tag) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(n - 1);
        xs.push_back(Vector(10, tag * 0.1));
        xs.back()[0] = a;
        fs.push_back({a + level, 1.0 - a + level});
    }
}

bool contains(const Population& pop, const Vector& x) {
    return std::any_of(pop.begin(), pop.end(), [&](const Individual& i) { return i.x == x; });
}

}  // namespace

TEST_CASE("second front that does not fit is skipped and the rest padded") {
    const auto p = make_problem("dMOP2");
    std::vector<Vector> xs, fs;
    add_front(xs, fs, 30, 0.0, 1.0);
    add_front(xs, fs, 80, 1.0, 2.0);
    SeederParams params;
    Rng rng(1);
    const auto pop = assemble_initial_population(xs, fs, *p, params, rng);
    REQUIRE(pop.size() == 100);
    for (std::size_t i = 0; i < 30; ++i) CHECK(pop[i].x == xs[i]);
    for (std::size_t i = 30; i < 110; ++i) CHECK_FALSE(contains(pop, xs[i]));
    for (const auto& ind : pop) {
        CHECK(p->in_bounds(ind.x));
        CHECK_FALSE(ind.evaluated());
    }
    // Padding copies stay near their parent; round-robin means padded member
    // 30 + j started from member j mod 30.
    for (std::size_t j = 0; j < 70; ++j) {
        const auto& parent = pop[j % 30].x;
        const auto& child = pop[30 + j].x;
        for (std::size_t d = 0; d < child.size(); ++d) CHECK(std::abs(child[d] - parent[d]) < 0.5);
    }
}

TEST_CASE("oversized first front is thinned by crowding") {
    const auto p = make_problem("dMOP2");
    std::vector<Vector> xs, fs;
    add_front(xs, fs, 150, 0.0, 1.0);
    add_front(xs, fs, 20, 1.0, 2.0);
    SeederParams params;
    Rng rng(2);
    const auto pop = assemble_initial_population(xs, fs, *p, params, rng);
    REQUIRE(pop.size() == 100);
    const auto keep = truncate_by_crowding(std::span(fs).first(150), 100);
    for (std::size_t i = 0; i < 100; ++i) CHECK(pop[i].x == xs[keep[i]]);
    CHECK(contains(pop, xs[0]));
    CHECK(contains(pop, xs[149]));
}

TEST_CASE("a pool of exactly N nondominated candidates is returned untouched") {
    const auto p = make_problem("dMOP1");
    std::vector<Vector> xs, fs;
    add_front(xs, fs, 100, 0.0, 1.0);
    SeederParams params;
    params.test_count = 100;
    Rng rng(3);
    const auto pop = assemble_initial_population(xs, fs, *p, params, rng);
    REQUIRE(pop.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) CHECK(pop[i].x == xs[i]);
}

TEST_CASE("selected members respect front order") {
    const auto p = make_problem("FDA1");
    const ObjectivePredictor predictor = [&](std::span<const double> x) {
        return p->evaluate(x, {0.3, 0});
    };
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SeederParams params;
        Rng rng(seed), replay(seed);
        const auto pop = predict_initial_population(predictor, *p, params, rng);
        REQUIRE(pop.size() == params.population_size);
        for (const auto& ind : pop) CHECK(p->in_bounds(ind.x));

        // Rebuild the pool from the same stream to see what was discarded.
        std::vector<Vector> pool, pred;
        for (std::size_t i = 0; i < params.test_count; ++i) pool.push_back(sample_uniform(*p, replay));
        for (const auto& x : pool) pred.push_back(predictor(x));
        const auto fronts = fast_nondominated_sort(pred);
        std::vector<int> rank(pool.size());
        for (std::size_t r = 0; r < fronts.size(); ++r)
            for (auto i : fronts[r]) rank[i] = static_cast<int>(r);
        int worst_selected = -1;
        for (const auto& ind : pop) {
            const auto it = std::find(pool.begin(), pool.end(), ind.x);
            if (it == pool.end()) continue;
            worst_selected = std::max(worst_selected, rank[it - pool.begin()]);
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (rank[i] >= worst_selected || contains(pop, pool[i])) continue;
            for (const auto& ind : pop) {
                const auto it = std::find(pool.begin(), pool.end(), ind.x);
                if (it != pool.end()) CHECK_FALSE(dominates(pred[i], pred[it - pool.begin()]));
            }
        }
    }
}

TEST_CASE("seeding is reproducible") {
    const auto p = make_problem("FDA4");
    const ObjectivePredictor predictor = [&](std::span<const double> x) {
        return p->evaluate(x, {0.0, 0});
    };
    SeederParams params;
    Rng a(8), b(8);
    const auto x = predict_initial_population(predictor, *p, params, a);
    const auto y = predict_initial_population(predictor, *p, params, b);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].x == y[i].x);
}

TEST_CASE("seeder preconditions") {
    const auto p = make_problem("FDA1");
    SeederParams params;
    Rng rng(1);
    CHECK_THROWS_AS(assemble_initial_population({}, {}, *p, params, rng), std::invalid_argument);
    const std::vector<Vector> one{Vector(20, 0.0)};
    const std::vector<Vector> two_preds{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(assemble_initial_population(one, two_preds, *p, params, rng), std::invalid_argument);
    params.test_count = 50;
    const ObjectivePredictor zero = [](std::span<const double>) { return Vector{0, 0}; };
    CHECK_THROWS_AS(predict_initial_population(zero, *p, params, rng), std::invalid_argument);
}
