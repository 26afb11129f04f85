#include "dynmo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dynmo {

double igd(std::span<const Vector> reference, std::span<const Vector> obtained, IgdForm form) {
    if (reference.empty() || obtained.empty())
        throw std::invalid_argument("igd: reference and obtained sets must be non-empty");
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : obtained) {
            if (p.size() != r.size()) throw std::invalid_argument("igd: dimension mismatch");
            double d = 0.0;
            for (std::size_t k = 0; k < r.size(); ++k) d += (r[k] - p[k]) * (r[k] - p[k]);
            best = std::min(best, d);
        }
        total += form == IgdForm::Squared ? best : std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

double migd(std::span<const double> per_environment) {
    if (per_environment.empty()) throw std::invalid_argument("migd: no environments");
    return std::accumulate(per_environment.begin(), per_environment.end(), 0.0) /
           static_cast<double>(per_environment.size());
}

std::vector<Interval> objective_ranges(std::span<const Vector> points) {
    if (points.empty()) throw std::invalid_argument("objective_ranges: empty set");
    std::vector<Interval> out;
    for (double v : points.front()) out.push_back({v, v});
    for (const auto& p : points) {
        if (p.size() != out.size()) throw std::invalid_argument("objective_ranges: ragged set");
        for (std::size_t k = 0; k < p.size(); ++k) {
            out[k].lower = std::min(out[k].lower, p[k]);
            out[k].upper = std::max(out[k].upper, p[k]);
        }
    }
    return out;
}

double maximum_spread(std::span<const Interval> true_ranges, std::span<const Vector> obtained) {
    const auto got = objective_ranges(obtained);
    if (got.size() != true_ranges.size())
        throw std::invalid_argument("maximum_spread: objective count mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        const auto& F = true_ranges[k];
        if (!(F.upper > F.lower)) throw std::invalid_argument("maximum_spread: degenerate true range");
        const double overlap = std::min(F.upper, got[k].upper) - std::max(F.lower, got[k].lower);
        const double term = std::max(overlap, 0.0) / F.width();
        sum += term * term;
    }
    return std::sqrt(sum / static_cast<double>(got.size()));
}

double RunReport::migd() const {
    std::vector<double> v;
    for (const auto& e : environments) v.push_back(e.igd);
    return dynmo::migd(v);
}

double RunReport::mean_ms() const {
    std::vector<double> v;
    for (const auto& e : environments) v.push_back(e.ms);
    if (v.empty()) throw std::invalid_argument("mean_ms: no environments");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::size_t RunReport::total_generations() const {
    std::size_t g = 0;
    for (const auto& e : environments) g += e.generations;
    return g;
}

std::size_t RunReport::total_evaluations() const {
    std::size_t n = 0;
    for (const auto& e : environments) n += e.evals_used;
    return n;
}

}  // namespace dynmo
