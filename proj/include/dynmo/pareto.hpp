#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynmo/types.hpp"

namespace dynmo {

/// True iff `a` is no worse than `b` in every objective and strictly better in
/// at least one (minimization). Throws `std::invalid_argument` on a length
/// mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Ordered fronts of indices into the sorted population. Indices within a
/// front keep their input order.
using FrontPartition = std::vector<std::vector<std::size_t>>;

/// Deb's fast non-dominated sort.
FrontPartition fast_nondominated_sort(std::span<const Vector> points);

/// Crowding distance of each member of `front`. Per-objective boundary
/// members get +inf; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(std::span<const Vector> front);

/// Indices of `points` that survive truncation to `keep` by descending
/// crowding distance. Ties keep input order.
std::vector<std::size_t> truncate_by_crowding(std::span<const Vector> points, std::size_t keep);

/// Objective vectors of the first front of an evaluated population.
std::vector<Vector> nondominated_objectives(const Population& pop);

}  // namespace dynmo
