#include "dynmo/benchmarks.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dynmo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe_violation(std::size_t dimension, double value, Interval bounds) {
    std::ostringstream os;
    os << "decision variable " << dimension << " = " << value << " outside [" << bounds.lower
       << ", " << bounds.upper << "]";
    return os.str();
}

std::vector<Interval> unit_head_box(std::size_t n, std::size_t head, Interval tail) {
    std::vector<Interval> b(n, tail);
    for (std::size_t i = 0; i < head && i < n; ++i) b[i] = {0.0, 1.0};
    return b;
}

double sq(double v) { return v * v; }

// f1 = x1, f2 = g * (1 - (f1/g)^H), tail optimum at `tail_optimum`.
class PowerFront : public DynamicProblem {
public:
    using DynamicProblem::DynamicProblem;

protected:
    virtual double tail_optimum(const Environment& env) const = 0;
    virtual double g_scale() const { return 1.0; }
    virtual double exponent(const Environment& env) const = 0;
    virtual std::size_t head_index(const Environment&) const { return 0; }

    Vector compute(std::span<const double> x, const Environment& env) const override {
        const std::size_t head = head_index(env);
        const double opt = tail_optimum(env);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (i != head) s += sq(x[i] - opt);
        const double g = 1.0 + g_scale() * s;
        const double f1 = x[head];
        const double h = 1.0 - std::pow(f1 / g, exponent(env));
        return {f1, g * h};
    }

    Vector front_point(const Environment& env, std::span<const double> pos) const override {
        const double f1 = pos[0];
        return {f1, 1.0 - std::pow(f1, exponent(env))};
    }

public:
    Vector optimal_decision(const Environment& env, std::span<const double> pos) const override {
        Vector x(dimension(), tail_optimum(env));
        x[head_index(env)] = pos[0];
        return x;
    }
};

double wave(const Environment& env) { return std::sin(0.5 * kPi * env.time); }

class Fda1 final : public PowerFront {
public:
    explicit Fda1(std::size_t n)
        : PowerFront("FDA1", 2, unit_head_box(n, 1, {-1.0, 1.0}), ChangeType::TypeI) {}

protected:
    double tail_optimum(const Environment& env) const override { return wave(env); }
    double exponent(const Environment&) const override { return 0.5; }
};

// Every tail variable enters g with a fixed optimum at 0; only the front's
// curvature moves with t.
class Fda2 final : public PowerFront {
public:
    explicit Fda2(std::size_t n)
        : PowerFront("FDA2", 2, unit_head_box(n, 1, {-1.0, 1.0}), ChangeType::TypeIII) {}

protected:
    double tail_optimum(const Environment&) const override { return 0.0; }
    double exponent(const Environment& env) const override {
        return 1.0 / (0.75 + 0.7 * wave(env));
    }
};

class Dmop1 final : public PowerFront {
public:
    explicit Dmop1(std::size_t n)
        : PowerFront("dMOP1", 2, unit_head_box(n, n, {0.0, 1.0}), ChangeType::TypeIII) {}

protected:
    double tail_optimum(const Environment&) const override { return 0.0; }
    double g_scale() const override { return 9.0; }
    double exponent(const Environment& env) const override { return 0.75 * wave(env) + 1.25; }
};

class Dmop2 final : public PowerFront {
public:
    explicit Dmop2(std::size_t n)
        : PowerFront("dMOP2", 2, unit_head_box(n, n, {0.0, 1.0}), ChangeType::TypeII) {}

protected:
    double tail_optimum(const Environment& env) const override { return std::abs(wave(env)); }
    double exponent(const Environment& env) const override { return 0.75 * wave(env) + 1.25; }
};

class Dmop3 final : public PowerFront {
public:
    explicit Dmop3(std::size_t n)
        : PowerFront("dMOP3", 2, unit_head_box(n, n, {0.0, 1.0}), ChangeType::TypeI) {}

protected:
    double tail_optimum(const Environment& env) const override { return std::abs(wave(env)); }
    double exponent(const Environment&) const override { return 0.5; }
    std::size_t head_index(const Environment& env) const override {
        return env.active_variable % dimension();
    }
};

// f1 = x1^F(t), g = 1 + G + sum (x_i - G)^2, h = 1 - sqrt(f1/g).
class Fda3 final : public DynamicProblem {
public:
    explicit Fda3(std::size_t n)
        : DynamicProblem("FDA3", 2, unit_head_box(n, 1, {-1.0, 1.0}), ChangeType::TypeII) {}

    Vector optimal_decision(const Environment& env, std::span<const double> pos) const override {
        Vector x(dimension(), shift(env));
        // f1 = x1^F spans [0,1] uniformly in pos[0] when x1 = pos^(1/F).
        x[0] = std::pow(pos[0], 1.0 / density(env));
        return x;
    }

protected:
    static double shift(const Environment& env) { return std::abs(wave(env)); }
    static double density(const Environment& env) {
        return std::pow(10.0, 2.0 * wave(env));
    }

    Vector compute(std::span<const double> x, const Environment& env) const override {
        const double G = shift(env);
        double s = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) s += sq(x[i] - G);
        const double g = 1.0 + G + s;
        const double f1 = std::pow(x[0], density(env));
        return {f1, g * (1.0 - std::sqrt(f1 / g))};
    }

    Vector front_point(const Environment& env, std::span<const double> pos) const override {
        const double g = 1.0 + shift(env);
        const double f1 = pos[0];
        return {f1, g * (1.0 - std::sqrt(f1 / g))};
    }
};

// Spherical three-objective family: FDA4 (fixed front) and FDA5 (radius and
// density move with t).
class SphereFront : public DynamicProblem {
public:
    SphereFront(std::string name, std::size_t n, ChangeType type, bool moving_front)
        : DynamicProblem(std::move(name), 3, unit_head_box(n, n, {0.0, 1.0}), type),
          moving_(moving_front) {}

    Vector optimal_decision(const Environment& env, std::span<const double> pos) const override {
        Vector x(dimension(), shift(env));
        const double F = density(env);
        x[0] = std::pow(pos[0], 1.0 / F);
        x[1] = std::pow(pos[1], 1.0 / F);
        return x;
    }

protected:
    double shift(const Environment& env) const { return std::abs(wave(env)); }
    double density(const Environment& env) const {
        return moving_ ? 1.0 + 100.0 * std::pow(wave(env), 4) : 1.0;
    }
    double radius(const Environment& env) const { return moving_ ? 1.0 + shift(env) : 1.0; }

    static Vector sphere(double r, double a, double b) {
        const double u = 0.5 * kPi * a;
        const double v = 0.5 * kPi * b;
        return {r * std::cos(u) * std::cos(v), r * std::cos(u) * std::sin(v), r * std::sin(u)};
    }

    Vector compute(std::span<const double> x, const Environment& env) const override {
        const double G = shift(env);
        double s = 0.0;
        for (std::size_t i = 2; i < x.size(); ++i) s += sq(x[i] - G);
        const double g = (moving_ ? G : 0.0) + s;
        const double F = density(env);
        // FDA4/5 arrange f3 = (1+g) sin(y1 pi/2) with y1 = x1^F.
        return sphere(1.0 + g, std::pow(x[0], F), std::pow(x[1], F));
    }

    Vector front_point(const Environment& env, std::span<const double> pos) const override {
        return sphere(radius(env), pos[0], pos[1]);
    }

private:
    bool moving_;
};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const char* to_string(ChangeType type) {
    switch (type) {
        case ChangeType::TypeI: return "TypeI";
        case ChangeType::TypeII: return "TypeII";
        case ChangeType::TypeIII: return "TypeIII";
    }
    return "?";
}

OutOfBoundsError::OutOfBoundsError(std::size_t dimension, double value, Interval bounds)
    : std::domain_error(describe_violation(dimension, value, bounds)), dimension_(dimension) {}

DynamicProblem::DynamicProblem(std::string name, std::size_t objectives,
                               std::vector<Interval> bounds, ChangeType change_type)
    : name_(std::move(name)),
      objectives_(objectives),
      bounds_(std::move(bounds)),
      change_type_(change_type) {
    if (objectives_ != 2 && objectives_ != 3)
        throw std::invalid_argument(name_ + ": objective count must be 2 or 3");
    if (bounds_.size() < 2) throw std::invalid_argument(name_ + ": dimension must be >= 2");
    for (const auto& b : bounds_)
        if (!(b.lower < b.upper)) throw std::invalid_argument(name_ + ": empty bound interval");
}

bool DynamicProblem::in_bounds(std::span<const double> x) const {
    if (x.size() != bounds_.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!bounds_[j].contains(x[j])) return false;
    return true;
}

Vector DynamicProblem::evaluate(std::span<const double> x, const Environment& env) const {
    if (x.size() != bounds_.size())
        throw std::invalid_argument(name_ + ": decision vector has wrong dimension");
    if (!(env.time >= 0.0)) throw std::invalid_argument(name_ + ": environment time must be >= 0");
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!bounds_[j].contains(x[j])) throw OutOfBoundsError(j, x[j], bounds_[j]);
    return compute(x, env);
}

std::vector<Vector> DynamicProblem::sample_true_pof(const Environment& env,
                                                    std::size_t count) const {
    if (count < 2) throw std::invalid_argument("sample_true_pof: count must be >= 2");
    std::vector<Vector> out;
    out.reserve(count);
    if (objectives_ == 2) {
        for (std::size_t i = 0; i < count; ++i) {
            const double p[1] = {static_cast<double>(i) / static_cast<double>(count - 1)};
            out.push_back(front_point(env, p));
        }
        return out;
    }
    auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
    k = std::max<std::size_t>(k, 2);
    for (std::size_t i = 0; i < k && out.size() < count; ++i) {
        for (std::size_t j = 0; j < k && out.size() < count; ++j) {
            const double p[2] = {static_cast<double>(i) / static_cast<double>(k - 1),
                                 static_cast<double>(j) / static_cast<double>(k - 1)};
            out.push_back(front_point(env, p));
        }
    }
    return out;
}

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = {"FDA1", "FDA2",  "FDA3",  "FDA4",
                                                   "FDA5", "dMOP1", "dMOP2", "dMOP3"};
    return names;
}

ProblemPtr make_problem(std::string_view name, std::size_t dimension) {
    const std::string key = lowercase(name);
    auto dim = [&](std::size_t fallback, std::size_t minimum) {
        const std::size_t n = dimension == 0 ? fallback : dimension;
        if (n < minimum)
            throw std::invalid_argument(std::string(name) + ": dimension below minimum");
        return n;
    };
    if (key == "fda1") return std::make_shared<Fda1>(dim(20, 2));
    if (key == "fda2") return std::make_shared<Fda2>(dim(31, 2));
    if (key == "fda3") return std::make_shared<Fda3>(dim(30, 2));
    if (key == "fda4") return std::make_shared<SphereFront>("FDA4", dim(12, 3), ChangeType::TypeI, false);
    if (key == "fda5") return std::make_shared<SphereFront>("FDA5", dim(12, 3), ChangeType::TypeII, true);
    if (key == "dmop1") return std::make_shared<Dmop1>(dim(10, 2));
    if (key == "dmop2") return std::make_shared<Dmop2>(dim(10, 2));
    if (key == "dmop3") return std::make_shared<Dmop3>(dim(10, 2));
    throw std::invalid_argument("unknown problem: " + std::string(name));
}

double time_of_generation(const TimeController& ctrl) {
    if (ctrl.severity == 0 || ctrl.frequency == 0)
        throw std::invalid_argument("time_of_generation: n_t and tau_t must be >= 1");
    const auto steps = ctrl.generation / ctrl.frequency;
    return static_cast<double>(steps) / static_cast<double>(ctrl.severity);
}

}  // namespace dynmo
