#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace dynmo {

using Vector = std::vector<double>;

/// All stochastic components draw from this engine; a run owns exactly one.
using Rng = std::mt19937_64;

/// State of a dynamic problem at one environment.
///
/// `time` is the environment variable t. `active_variable` is only consulted
/// by problems whose position-dependent structure changes at random (dMOP3
/// picks which decision variable drives f1); other problems ignore it.
struct Environment {
    double time = 0.0;
    std::size_t active_variable = 0;

    friend bool operator==(const Environment&, const Environment&) = default;
};

struct Individual {
    Vector x;
    std::optional<Vector> f;
    /// Environment index the objectives were computed at. Meaningless while
    /// `f` is unset.
    std::size_t env_index = 0;

    bool evaluated() const { return f.has_value(); }
};

using Population = std::vector<Individual>;

struct Interval {
    double lower;
    double upper;

    double width() const { return upper - lower; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

}  // namespace dynmo
