#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dynmo/synthetic_tasks.hpp"

using namespace dynmo;

TEST_CASE("noiseless identical task agrees across domains") {
    Rng rng(1);
    const auto task = make_shifted_task(TaskKind::Identical, 20, 20, 0.0, rng);
    for (const auto& s : task.source) CHECK(s.y[0] == doctest::Approx(std::sin(2 * std::numbers::pi * s.x[0])));
    for (const auto& s : task.target) CHECK(s.y[0] == doctest::Approx(std::sin(2 * std::numbers::pi * s.x[0])));
}

TEST_CASE("task shapes") {
    Rng rng(2);
    const auto shifted = make_shifted_task(TaskKind::Shifted, 30, 10, 0.0, rng);
    for (const auto& s : shifted.source)
        CHECK(s.y[0] == doctest::Approx(std::sin(2 * std::numbers::pi * s.x[0]) + kSourceShift));
    const auto unrelated = make_shifted_task(TaskKind::Unrelated, 30, 10, 0.0, rng);
    for (const auto& s : unrelated.source) CHECK(s.y[0] == doctest::Approx(-s.x[0]));
    CHECK(shifted.source.size() == 30);
    CHECK(shifted.target.size() == 10);
    CHECK(shifted.test.size() == kHeldOutCount);
    for (const auto& s : shifted.source) CHECK(s.domain == Domain::Source);
    for (const auto& s : shifted.target) CHECK(s.domain == Domain::Target);
    for (const auto& p : shifted.test) CHECK((p.x[0] >= 0.0 && p.x[0] <= 1.0));
}

TEST_CASE("fixed seed reproduces the task") {
    Rng a(5), b(5);
    const auto x = make_shifted_task(TaskKind::Shifted, 10, 5, 0.1, a);
    const auto y = make_shifted_task(TaskKind::Shifted, 10, 5, 0.1, b);
    for (std::size_t i = 0; i < x.source.size(); ++i) {
        CHECK(x.source[i].x == y.source[i].x);
        CHECK(x.source[i].y == y.source[i].y);
    }
    for (std::size_t i = 0; i < x.test.size(); ++i) CHECK(x.test[i].y == y.test[i].y);
}

TEST_CASE("combined set starts uniform") {
    Rng rng(3);
    const auto all = make_shifted_task(TaskKind::Identical, 6, 4, 0.0, rng).combined();
    REQUIRE(all.size() == 10);
    for (const auto& s : all) CHECK(s.weight == doctest::Approx(0.1));
    CHECK(all[5].domain == Domain::Source);
    CHECK(all[6].domain == Domain::Target);
}

TEST_CASE("undersized tasks are rejected") {
    Rng rng(4);
    CHECK_THROWS_AS(make_shifted_task(TaskKind::Identical, 1, 10, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(make_shifted_task(TaskKind::Identical, 10, 1, 0.0, rng), std::invalid_argument);
}

TEST_CASE("rmse") {
    const ScalarRegressor zero = [](std::span<const double>) { return 0.0; };
    CHECK(rmse(zero, {{{0.0}, 3.0}, {{1.0}, 4.0}}) == doctest::Approx(std::sqrt(12.5)));
    CHECK_THROWS_AS(rmse(zero, {}), std::invalid_argument);
}

TEST_CASE("unrelated sources are filtered out") {
    const auto r = check_unrelated_filtering();
    CHECK(r.trials == 10);
    CHECK(r.required == 9);
    CHECK_MESSAGE(r.passed(), r.successes);
}

TEST_CASE("matching sources do no harm") {
    const auto r = check_identical_harmless();
    CHECK(r.required == 8);
    CHECK_MESSAGE(r.passed(), r.successes);
}
