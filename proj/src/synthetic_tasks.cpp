#include "dynmo/synthetic_tasks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynmo {

namespace {

double wave(double x) { return std::sin(2.0 * std::numbers::pi * x); }

double source_function(TaskKind kind, double x) {
    switch (kind) {
        case TaskKind::Identical: return wave(x);
        case TaskKind::Shifted: return wave(x) + kSourceShift;
        case TaskKind::Unrelated: return -x;
    }
    return 0.0;
}

// Sizes used by the seeded property checks; small target sets are where
// transfer has to earn its keep.
constexpr std::size_t kSourceSize = 50;
constexpr std::size_t kTargetSize = 10;
constexpr double kNoise = 0.05;

struct TrainedTask {
    TransferTask task;
    TransferEnsemble ensemble;
    double source_mass = 0.0;
    double target_mass = 0.0;
};

TrainedTask train_on(TaskKind kind, std::uint64_t seed) {
    Rng rng(seed);
    TrainedTask out{make_shifted_task(kind, kSourceSize, kTargetSize, kNoise, rng), {}, 0.0, 0.0};
    const auto samples = out.task.combined();
    std::vector<double> last_weights;
    TrainOptions opts;
    opts.rounds = 10;
    opts.observer = [&](const RoundRecord& r) { last_weights = r.weights; };
    out.ensemble = train_transfer(samples, svr_learner(task_svr_params()), opts);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].domain == Domain::Source) out.source_mass += last_weights[i];
        else out.target_mass += last_weights[i];
    }
    return out;
}

}  // namespace

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::Identical: return "identical";
        case TaskKind::Shifted: return "shifted";
        case TaskKind::Unrelated: return "unrelated";
    }
    return "?";
}

std::vector<WeightedSample> TransferTask::combined() const {
    std::vector<WeightedSample> all(source.begin(), source.end());
    all.insert(all.end(), target.begin(), target.end());
    const double w = 1.0 / static_cast<double>(all.size());
    for (auto& s : all) s.weight = w;
    return all;
}

TransferTask make_shifted_task(TaskKind kind, std::size_t n_source, std::size_t n_target,
                               double noise_sigma, Rng& rng) {
    if (n_source < 2 || n_target < 2)
        throw std::invalid_argument("make_shifted_task: sizes must be >= 2");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);
    auto jitter = [&] { return noise_sigma > 0.0 ? noise_sigma * noise(rng) : 0.0; };

    TransferTask task;
    for (std::size_t i = 0; i < n_source; ++i) {
        const double x = unit(rng);
        task.source.push_back({{x}, {source_function(kind, x) + jitter()}, Domain::Source, 0.0});
    }
    for (std::size_t i = 0; i < n_target; ++i) {
        const double x = unit(rng);
        task.target.push_back({{x}, {wave(x) + jitter()}, Domain::Target, 0.0});
    }
    for (std::size_t i = 0; i < kHeldOutCount; ++i) {
        const double x = unit(rng);
        task.test.push_back({{x}, wave(x)});
    }
    return task;
}

double rmse(const ScalarRegressor& model, const std::vector<LabeledPoint>& points) {
    if (points.empty()) throw std::invalid_argument("rmse: empty set");
    double s = 0.0;
    for (const auto& p : points) {
        const double d = model(p.x) - p.y;
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(points.size()));
}

PropertyResult check_unrelated_filtering(std::uint64_t base_seed, std::size_t trials) {
    PropertyResult r{"unrelated: source mass < target mass", 0, trials, (trials * 9 + 9) / 10};
    for (std::size_t s = 0; s < trials; ++s) {
        const auto run = train_on(TaskKind::Unrelated, base_seed + s);
        if (run.source_mass < run.target_mass) ++r.successes;
    }
    return r;
}

PropertyResult check_identical_harmless(std::uint64_t base_seed, std::size_t trials) {
    PropertyResult r{"identical: ensemble rmse <= 1.1 x target-only rmse", 0, trials,
                     (trials * 8 + 9) / 10};
    for (std::size_t s = 0; s < trials; ++s) {
        const auto run = train_on(TaskKind::Identical, base_seed + s);
        const auto& ens = run.ensemble;
        const ScalarRegressor boosted = [&ens](std::span<const double> x) {
            return ens.predict(x)[0];
        };

        std::vector<Vector> X;
        std::vector<double> y, w;
        for (const auto& t : run.task.target) {
            X.push_back(t.x);
            y.push_back(t.y[0]);
            w.push_back(1.0);
        }
        const SvrModel alone = fit_svr(X, y, w, task_svr_params());
        const ScalarRegressor baseline = [&alone](std::span<const double> x) {
            return alone.predict(x);
        };
        if (rmse(boosted, run.task.test) <= 1.1 * rmse(baseline, run.task.test)) ++r.successes;
    }
    return r;
}

}  // namespace dynmo
