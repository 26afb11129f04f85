#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dynmo/benchmarks.hpp"
#include "dynmo/synthetic_tasks.hpp"
#include "dynmo/transfer_boost.hpp"

using namespace dynmo;

namespace {

Population evaluated_population(const DynamicProblem& p, std::size_t n, Rng& rng) {
    Evaluator ev(p, {0.0, 0}, 0);
    Population pop;
    for (std::size_t i = 0; i < n; ++i) {
        Individual ind{sample_uniform(p, rng), std::nullopt, 0};
        ev.evaluate(ind);
        pop.push_back(ind);
    }
    return pop;
}

WeightedSample sample(Domain d, double w) { return {Vector{0.0}, Vector{0.0}, d, w}; }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("training set composition") {
    const auto p = make_problem("FDA1");
    Rng rng(1);
    const auto prev = evaluated_population(*p, 100, rng);
    Evaluator ev(*p, {0.1, 0}, 1);
    const auto set = build_training_set(prev, ev, 50, rng);
    REQUIRE(set.size() == 150);
    CHECK(ev.count() == 50);
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set[i].weight == doctest::Approx(1.0 / 150.0).epsilon(1e-15));
        CHECK(set[i].domain == (i < 100 ? Domain::Source : Domain::Target));
        if (i < 100) {
            CHECK(set[i].x == prev[i].x);
            CHECK(set[i].y == *prev[i].f);
        } else {
            CHECK(p->in_bounds(set[i].x));
            CHECK(set[i].y == p->evaluate(set[i].x, {0.1, 0}));
        }
    }

    Evaluator small(*p, {0.1, 0}, 1);
    const auto two = build_training_set(prev, small, 2, rng);
    CHECK(std::count_if(two.begin(), two.end(), [](const auto& s) { return s.domain == Domain::Target; }) == 2);
}

TEST_CASE("training set is reproducible and validated") {
    const auto p = make_problem("dMOP2");
    Rng a(9), b(9), pr(3);
    const auto prev = evaluated_population(*p, 20, pr);
    Evaluator ea(*p, {0.1, 0}, 1), eb(*p, {0.1, 0}, 1);
    const auto sa = build_training_set(prev, ea, 10, a);
    const auto sb = build_training_set(prev, eb, 10, b);
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i].x == sb[i].x);

    CHECK_THROWS_AS(build_training_set({}, ea, 10, a), std::invalid_argument);
    CHECK_THROWS_AS(build_training_set(prev, ea, 1, a), std::invalid_argument);
    Population raw = prev;
    raw[4].f.reset();
    CHECK_THROWS_AS(build_training_set(raw, ea, 10, a), std::invalid_argument);
}

TEST_CASE("adjusted errors") {
    CHECK(*adjusted_errors(std::vector<double>{0.2, 0.5, 1.0}) == std::vector<double>{0.2, 0.5, 1.0});
    const auto e = *adjusted_errors(std::vector<double>{1, 3});
    CHECK(e[0] == doctest::Approx(1.0 / 3.0));
    CHECK(e[1] == 1.0);
    CHECK(*adjusted_errors(std::vector<double>{0, 0.5}) == std::vector<double>{0, 1});
    CHECK_FALSE(adjusted_errors(std::vector<double>{0, 0, 0}).has_value());
}

TEST_CASE("hypothesis error sums over the target domain") {
    const std::vector<WeightedSample> s{sample(Domain::Source, 0.7), sample(Domain::Target, 0.1),
                                        sample(Domain::Target, 0.2)};
    CHECK(hypothesis_error(std::vector<double>{1.0, 0.5, 1.0}, s) == doctest::Approx(0.25));
    CHECK(hypothesis_error(std::vector<double>{1.0, 0.0, 0.0}, s) == 0.0);
    const std::vector<WeightedSample> one{sample(Domain::Source, 0.7), sample(Domain::Target, 0.3)};
    CHECK(hypothesis_error(std::vector<double>{1.0, 1.0}, one) == doctest::Approx(0.3));
}

TEST_CASE("weight update before normalization") {
    const std::vector<WeightedSample> s{sample(Domain::Source, 0.1), sample(Domain::Target, 0.1),
                                        sample(Domain::Source, 0.4), sample(Domain::Target, 0.4)};
    const std::vector<double> e{1.0, 1.0, 0.0, 0.0};
    const auto out = update_weights(s, e, 0.25, 0.8);
    const double raw_total = 0.08 + 0.4 + 0.4 + 0.4;
    CHECK(out[0].weight == doctest::Approx(0.08 / raw_total));
    CHECK(out[1].weight == doctest::Approx(0.4 / raw_total));
    CHECK(out[2].weight == doctest::Approx(0.4 / raw_total));
    CHECK(out[3].weight == doctest::Approx(0.4 / raw_total));
    CHECK(s[0].weight == 0.1);  // input untouched

    std::vector<double> w{0.1, 0.1, 0.4, 0.4};
    update_weight_vector(w, s, e, 0.25, 0.8);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == out[i].weight);
}

TEST_CASE("fixed source decay and round beta") {
    CHECK(source_decay(100, 10) == doctest::Approx(0.5103).epsilon(1e-4));
    CHECK(source_decay(100, 10) == doctest::Approx(1.0 / (1.0 + std::sqrt(2.0 * std::log(100.0) / 10.0))));
    CHECK(clamp_round_beta(0.2) == doctest::Approx(0.25));
    CHECK(clamp_round_beta(0.0) == 1e-10);
    CHECK(clamp_round_beta(0.5) == 1.0 - 1e-10);
}

TEST_CASE("weighted median") {
    CHECK(weighted_median(std::vector<double>{1, 2, 3}, std::vector<double>{0.1, 0.5, 0.1}) == 2.0);
    CHECK(weighted_median(std::vector<double>{4.5}, std::vector<double>{0.3}) == 4.5);
    CHECK(weighted_median(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 1, 1, 1}) == 2.0);
    CHECK(weighted_median(std::vector<double>{3, 1, 4, 2}, std::vector<double>{1, 1, 1, 1}) == 2.0);
}

TEST_CASE("retained rounds") {
    Rng rng(1);
    const auto task = make_shifted_task(TaskKind::Shifted, 50, 10, 0.05, rng);
    const auto samples = task.combined();
    const auto learner = svr_learner(task_svr_params());
    for (std::size_t K : {2, 3, 7, 10}) {
        TrainOptions opts;
        opts.rounds = K;
        std::vector<ChainSummary> summary;
        const auto ens = train_transfer(samples, learner, opts, &summary);
        REQUIRE(summary.size() == 1);
        const std::size_t done = summary[0].completed_rounds;
        const auto& chain = ens.chain(0);
        CHECK(chain.size() == std::max<std::size_t>(1, (done + 1) / 2));
        CHECK(chain.back().round == done);
        for (const auto& h : chain) {
            CHECK(std::isfinite(h.confidence));
            CHECK(h.confidence > 0.0);
        }
        if (K == 2 && summary[0].stop == StopReason::Completed) CHECK(chain.size() == 1);
    }
}

TEST_CASE("two rounds retain one hypothesis") {
    const std::vector<WeightedSample> s{{{0.0}, {0.0}, Domain::Source, 0.25},
                                        {{1.0}, {5.0}, Domain::Source, 0.25},
                                        {{0.3}, {0.0}, Domain::Target, 0.25},
                                        {{0.6}, {1.0}, Domain::Target, 0.25}};
    // The learner returns a fixed line, so every round is identical.
    const LearnerFactory line = [](auto, auto, auto) -> ScalarRegressor {
        return [](std::span<const double> x) { return x[0]; };
    };
    TrainOptions opts;
    opts.rounds = 2;
    std::vector<ChainSummary> summary;
    const auto ens = train_transfer(s, line, opts, &summary);
    CHECK(summary[0].completed_rounds == 2);
    CHECK(ens.chain(0).size() == 1);
}

TEST_CASE("early stop on a poor round") {
    const std::vector<WeightedSample> s{{{0.0}, {0.0}, Domain::Source, 0.5},
                                        {{1.0}, {0.0}, Domain::Target, 0.5}};
    const LearnerFactory bad = [](auto, auto, auto) -> ScalarRegressor {
        return [](std::span<const double> x) { return x[0] > 0.5 ? 1.0 : 0.0; };
    };
    TrainOptions opts;
    std::vector<ChainSummary> summary;
    const auto ens = train_transfer(s, bad, opts, &summary);
    CHECK(summary[0].stop == StopReason::ErrorTooLarge);
    CHECK(ens.chain(0).size() == 1);
    CHECK(ens.chain(0)[0].confidence > 0.0);
}

TEST_CASE("perfect fit stops with maximal confidence") {
    const std::vector<WeightedSample> s{{{0.0}, {0.0}, Domain::Source, 0.5},
                                        {{1.0}, {2.0}, Domain::Target, 0.5}};
    const LearnerFactory exact = [](auto, auto, auto) -> ScalarRegressor {
        return [](std::span<const double> x) { return 2.0 * x[0]; };
    };
    std::vector<ChainSummary> summary;
    const auto ens = train_transfer(s, exact, {}, &summary);
    CHECK(summary[0].stop == StopReason::PerfectFit);
    CHECK(summary[0].completed_rounds == 1);
    REQUIRE(ens.chain(0).size() == 1);
    CHECK(ens.chain(0)[0].confidence == doctest::Approx(std::log(1e10)));
    CHECK(ens.predict(Vector{0.5})[0] == 1.0);
}

TEST_CASE("train validates its input") {
    const auto learner = svr_learner();
    std::vector<WeightedSample> only_source{{{0.0}, {0.0}, Domain::Source, 0.5},
                                            {{1.0}, {1.0}, Domain::Source, 0.5}};
    CHECK_THROWS_AS(train_transfer(only_source, learner, {}), std::invalid_argument);
    CHECK_THROWS_AS(train_transfer({}, learner, {}), std::invalid_argument);
    only_source[1].domain = Domain::Target;
    TrainOptions one;
    one.rounds = 1;
    CHECK_THROWS_AS(train_transfer(only_source, learner, one), std::invalid_argument);
}

TEST_CASE("weights stay a distribution and errors stay in the unit interval") {
    for (auto kind : {TaskKind::Identical, TaskKind::Shifted, TaskKind::Unrelated}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Rng rng(seed);
            const auto task = make_shifted_task(kind, 50, 10, 0.05, rng);
            TrainOptions opts;
            std::size_t rounds = 0;
            opts.observer = [&](const RoundRecord& r) {
                ++rounds;
                CHECK(std::abs(sum(r.weights) - 1.0) <= 1e-12);
                for (double w : r.weights) CHECK(w >= 0.0);
                if (!r.errors.empty()) {
                    CHECK(*std::max_element(r.errors.begin(), r.errors.end()) == 1.0);
                    for (double e : r.errors) CHECK((e >= 0.0 && e <= 1.0));
                }
            };
            train_transfer(task.combined(), svr_learner(task_svr_params()), opts);
            CHECK(rounds >= 1);
        }
    }
}

TEST_CASE("persistent source mismatch drains source weight") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const auto task = make_shifted_task(TaskKind::Shifted, 50, 10, 0.05, rng);
        const auto samples = task.combined();
        std::vector<double> source_mass;
        std::vector<double> last;
        TrainOptions opts;
        opts.observer = [&](const RoundRecord& r) {
            double s = 0.0;
            for (std::size_t i = 0; i < samples.size(); ++i)
                if (samples[i].domain == Domain::Source) s += r.weights[i];
            source_mass.push_back(s);
            last = r.weights;
        };
        train_transfer(samples, svr_learner(task_svr_params()), opts);
        double prev = 50.0 / 60.0;
        for (double m : source_mass) {
            CHECK(m <= prev + 1e-12);
            prev = m;
        }
        double src = 0.0, tgt = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            (samples[i].domain == Domain::Source ? src : tgt) += last[i];
        CHECK(src / 50.0 < tgt / 10.0);
    }
}

TEST_CASE("ensemble prediction ignores round storage order") {
    std::vector<WeakHypothesis> chain;
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t r = 1; r <= 7; ++r) {
        const double slope = u(rng) * 4.0 - 2.0, offset = u(rng);
        chain.push_back({[=](std::span<const double> x) { return slope * x[0] + offset; },
                         0.05 + u(rng), r});
    }
    const TransferEnsemble base({chain});
    for (int shuffle = 0; shuffle < 20; ++shuffle) {
        std::shuffle(chain.begin(), chain.end(), rng);
        const TransferEnsemble permuted({chain});
        for (int i = 0; i < 50; ++i) {
            const Vector x{u(rng)};
            CHECK(base.predict(x) == permuted.predict(x));
        }
    }
}

TEST_CASE("single retained round predicts with that round") {
    const TransferEnsemble ens({{{[](std::span<const double> x) { return 3.0 * x[0]; }, 0.7, 1}}});
    CHECK(ens.predict(Vector{0.5})[0] == 1.5);
}

TEST_CASE("one chain per objective") {
    const auto p = make_problem("FDA4");
    Rng rng(2);
    const auto prev = evaluated_population(*p, 40, rng);
    Evaluator ev(*p, {0.1, 0}, 1);
    const auto set = build_training_set(prev, ev, 20, rng);
    std::vector<ChainSummary> summary;
    const auto ens = train_transfer(set, svr_learner(), {}, &summary);
    CHECK(ens.objectives() == 3);
    CHECK(summary.size() == 3);
    CHECK(ens.predict(set.front().x).size() == 3);
}
