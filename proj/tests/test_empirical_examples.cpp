// Seeded empirical examples whose outcome depends on the statistics of the
// draws rather than on an exact identity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>
#include <limits>
#include <stdexcept>

#include "dynmo/metrics.hpp"
#include "dynmo/optimizer.hpp"
#include "dynmo/pareto.hpp"
#include "dynmo/svr.hpp"
#include "dynmo/synthetic_tasks.hpp"

using namespace dynmo;

namespace {

double front_igd(const DynamicProblem& p, const Environment& env, const Population& pop) {
    return igd(p.sample_true_pof(env, 500), nondominated_objectives(pop));
}

}  // namespace

TEST_CASE("identical domains: ensemble matches a pooled fit on the target set") {
    std::size_t wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const auto task = make_shifted_task(TaskKind::Identical, 50, 10, 0.05, rng);
        const auto samples = task.combined();
        const auto ens = train_transfer(samples, svr_learner(task_svr_params()), {});

        std::vector<Vector> X;
        std::vector<double> y, w;
        for (const auto& s : samples) {
            X.push_back(s.x);
            y.push_back(s.y[0]);
            w.push_back(1.0);
        }
        const auto pooled = fit_svr(X, y, w, task_svr_params());

        std::vector<LabeledPoint> target;
        for (const auto& s : task.target) target.push_back({s.x, s.y[0]});
        const double boosted = rmse([&](std::span<const double> x) { return ens.predict(x)[0]; }, target);
        const double single = rmse([&](std::span<const double> x) { return pooled.predict(x); }, target);
        std::cout << "seed " << seed << "  ensemble " << boosted << "  pooled " << single << '\n';
        if (boosted <= single) ++wins;
    }
    CHECK_MESSAGE(wins >= 8, "ensemble no worse in " << wins << "/10 seeds");
}

TEST_CASE("linear targets: held-out predictions stay within the widened tube") {
    Rng rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> X;
    std::vector<double> y, w;
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng);
        X.push_back({x});
        y.push_back(2.0 * x);
        w.push_back(1.0);
    }
    const SvrParams params;
    const auto model = fit_svr(X, y, w, params);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng);
        worst = std::max(worst, std::abs(model.predict(Vector{x}) - 2.0 * x));
    }
    CHECK(worst <= params.epsilon + 0.05);
}

TEST_CASE("starting on the optimal set does not make things worse") {
    for (const char* name : {"FDA1", "dMOP2", "FDA4"}) {
        const auto p = make_problem(name);
        const Environment env{0.3, 0};
        Population init;
        const std::size_t side = p->objectives() == 2 ? 100 : 10;
        for (std::size_t i = 0; i < 100; ++i) {
            Vector pos;
            if (p->objectives() == 2) pos = {static_cast<double>(i) / 99.0};
            else pos = {static_cast<double>(i / side) / 9.0, static_cast<double>(i % side) / 9.0};
            init.push_back({p->optimal_decision(env, pos), std::nullopt, 0});
        }
        Evaluator ev(*p, env, 0);
        Population scored = init;
        for (auto& i : scored) ev.evaluate(i);
        const double before = front_igd(*p, env, scored);
        Rng rng(1);
        const auto out = Nsga2({}).optimize(init, ev, 20, rng);
        CHECK_MESSAGE(front_igd(*p, env, out) <= before + 1e-9, std::string(name));
    }
}

