#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynmo/types.hpp"

namespace dynmo {

enum class IgdForm {
    Euclidean,  // mean nearest distance
    Squared,    // mean squared nearest distance
};

/// Mean over `reference` of the distance to the nearest `obtained` point.
/// Throws `std::invalid_argument` if either set is empty.
double igd(std::span<const Vector> reference, std::span<const Vector> obtained,
           IgdForm form = IgdForm::Euclidean);

/// Arithmetic mean of per-environment IGD values.
double migd(std::span<const double> per_environment);

/// Per-objective [min, max] of a point set.
std::vector<Interval> objective_ranges(std::span<const Vector> points);

/// Root-mean-square of per-objective range overlap ratios, negative overlaps
/// clamped to 0. Throws `std::invalid_argument` on an empty set, a dimension
/// mismatch, or a degenerate true range.
double maximum_spread(std::span<const Interval> true_ranges, std::span<const Vector> obtained);

struct EnvironmentRecord {
    std::size_t env_index = 0;
    double t = 0.0;
    double igd = 0.0;
    double ms = 0.0;
    std::size_t evals_used = 0;
    std::size_t generations = 0;
};

struct RunReport {
    std::string problem;
    std::size_t tau_t = 0;
    std::size_t n_t = 0;
    std::uint64_t seed = 0;
    std::string variant;
    std::vector<EnvironmentRecord> environments;

    double migd() const;
    double mean_ms() const;
    std::size_t total_generations() const;
    std::size_t total_evaluations() const;
};

}  // namespace dynmo
