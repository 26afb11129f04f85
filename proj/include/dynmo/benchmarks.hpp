#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynmo/types.hpp"

namespace dynmo {

/// How an environment change affects the optimal set (decision space) and
/// front (objective space).
enum class ChangeType {
    TypeI,    // POS moves, POF fixed
    TypeII,   // both move
    TypeIII,  // POF moves, POS fixed
};

const char* to_string(ChangeType type);

/// Thrown by `DynamicProblem::evaluate` for decision vectors outside the box.
class OutOfBoundsError : public std::domain_error {
public:
    OutOfBoundsError(std::size_t dimension, double value, Interval bounds);

    std::size_t dimension() const { return dimension_; }

private:
    std::size_t dimension_;
};

/// A box-constrained dynamic multi-objective benchmark F(x, t).
///
/// Instances are immutable after construction; every member function is safe
/// to call concurrently.
class DynamicProblem {
public:
    DynamicProblem(std::string name, std::size_t objectives, std::vector<Interval> bounds,
                   ChangeType change_type);
    virtual ~DynamicProblem() = default;

    const std::string& name() const { return name_; }
    std::size_t objectives() const { return objectives_; }
    std::size_t dimension() const { return bounds_.size(); }
    const std::vector<Interval>& bounds() const { return bounds_; }
    ChangeType change_type() const { return change_type_; }

    bool in_bounds(std::span<const double> x) const;

    /// Objective vector at `env`. Throws `OutOfBoundsError` naming the first
    /// violating dimension, `std::invalid_argument` on a size mismatch or a
    /// negative time.
    Vector evaluate(std::span<const double> x, const Environment& env) const;

    /// `count` points of the analytic front at `env`. Bi-objective fronts use a
    /// uniform grid over the f1 range; tri-objective fronts use a k-by-k grid
    /// over the two spherical angles, k = ceil(sqrt(count)), truncated to
    /// `count` points.
    std::vector<Vector> sample_true_pof(const Environment& env, std::size_t count) const;

    /// A point of the analytic optimal set. `position` holds m-1 coordinates
    /// in [0, 1] that select where on the front the point lands.
    virtual Vector optimal_decision(const Environment& env,
                                    std::span<const double> position) const = 0;

protected:
    virtual Vector compute(std::span<const double> x, const Environment& env) const = 0;
    /// Front point for front parameters in [0,1]^(m-1).
    virtual Vector front_point(const Environment& env, std::span<const double> position) const = 0;

private:
    std::string name_;
    std::size_t objectives_;
    std::vector<Interval> bounds_;
    ChangeType change_type_;
};

using ProblemPtr = std::shared_ptr<const DynamicProblem>;

/// Names accepted by `make_problem`, in canonical order.
const std::vector<std::string>& problem_names();

/// Builds a benchmark by name (case-insensitive): FDA1..FDA5, dMOP1..dMOP3.
/// `dimension` of 0 selects the problem's default. Throws
/// `std::invalid_argument` for unknown names or dimensions below the minimum.
ProblemPtr make_problem(std::string_view name, std::size_t dimension = 0);

/// Environment schedule: t = floor(tau / tau_t) / n_t.
struct TimeController {
    std::size_t severity = 10;   // n_t
    std::size_t frequency = 10;  // tau_t
    std::size_t generation = 0;  // tau
};

double time_of_generation(const TimeController& ctrl);

}  // namespace dynmo
