#include "dynmo/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dynmo {

namespace {

constexpr double kTau = 1e-12;

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double v = a[k] - b[k];
        d += v * v;
    }
    return std::exp(-gamma * d);
}

// Dual over 2l variables beta = [alpha; alpha*] with labels s = [+1; -1]:
//   min 1/2 beta' Q beta + p' beta,  s' beta = 0,  0 <= beta_t <= C_(t mod l)
// where Q_tu = s_t s_u K(t mod l, u mod l) and p = [eps - y; eps + y].
class DualSolver {
public:
    DualSolver(std::vector<double> kernel, std::size_t l, std::span<const double> y,
               std::vector<double> caps, double epsilon)
        : K_(std::move(kernel)), l_(l), caps_(std::move(caps)) {
        beta_.assign(2 * l_, 0.0);
        grad_.resize(2 * l_);
        for (std::size_t i = 0; i < l_; ++i) {
            grad_[i] = epsilon - y[i];
            grad_[i + l_] = epsilon + y[i];
        }
    }

    void solve(double tolerance, std::size_t max_iter) {
        for (iterations_ = 0; iterations_ < max_iter; ++iterations_) {
            std::size_t i = 0, j = 0;
            if (!select_pair(tolerance, i, j)) {
                converged_ = true;
                return;
            }
            update(i, j);
        }
        std::size_t i = 0, j = 0;
        converged_ = !select_pair(tolerance, i, j);
    }

    double coefficient(std::size_t i) const { return beta_[i] - beta_[i + l_]; }

    double bias() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -ub;
        double free_sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t t = 0; t < 2 * l_; ++t) {
            const double c = cap(t);
            if (c <= 0.0) continue;
            const double yg = sign(t) * grad_[t];
            if (beta_[t] >= c) {
                if (sign(t) < 0) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else if (beta_[t] <= 0.0) {
                if (sign(t) > 0) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else {
                free_sum += yg;
                ++free_count;
            }
        }
        double rho = 0.0;
        if (free_count > 0) rho = free_sum / static_cast<double>(free_count);
        else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
        else if (std::isfinite(ub)) rho = ub;
        else if (std::isfinite(lb)) rho = lb;
        return -rho;
    }

    std::size_t iterations() const { return iterations_; }
    bool converged() const { return converged_; }

private:
    double sign(std::size_t t) const { return t < l_ ? 1.0 : -1.0; }
    double cap(std::size_t t) const { return caps_[t % l_]; }
    double q(std::size_t t, std::size_t u) const {
        return sign(t) * sign(u) * K_[(t % l_) * l_ + (u % l_)];
    }

    bool in_up(std::size_t t) const {
        return sign(t) > 0 ? beta_[t] < cap(t) : beta_[t] > 0.0;
    }
    bool in_low(std::size_t t) const {
        return sign(t) > 0 ? beta_[t] > 0.0 : beta_[t] < cap(t);
    }

    bool select_pair(double tolerance, std::size_t& i, std::size_t& j) const {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        bool have_i = false, have_j = false;
        for (std::size_t t = 0; t < 2 * l_; ++t) {
            const double v = -sign(t) * grad_[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
                have_i = true;
            }
            if (in_low(t) && v < gmin) {
                gmin = v;
                j = t;
                have_j = true;
            }
        }
        return have_i && have_j && gmax - gmin >= tolerance;
    }

    void update(std::size_t i, std::size_t j) {
        const double Ci = cap(i), Cj = cap(j);
        const double old_i = beta_[i], old_j = beta_[j];
        double& ai = beta_[i];
        double& aj = beta_[j];
        const double qij = q(i, j);
        const double qii = K_[(i % l_) * l_ + (i % l_)];
        const double qjj = K_[(j % l_) * l_ + (j % l_)];

        if (sign(i) != sign(j)) {
            double quad = qii + qjj + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = -diff; }
            }
            if (diff > Ci - Cj) {
                if (ai > Ci) { ai = Ci; aj = Ci - diff; }
            } else {
                if (aj > Cj) { aj = Cj; ai = Cj + diff; }
            }
        } else {
            double quad = qii + qjj - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > Ci) {
                if (ai > Ci) { ai = Ci; aj = sum - Ci; }
            } else {
                if (aj < 0.0) { aj = 0.0; ai = sum; }
            }
            if (sum > Cj) {
                if (aj > Cj) { aj = Cj; ai = sum - Cj; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = sum; }
            }
        }

        const double di = ai - old_i, dj = aj - old_j;
        for (std::size_t t = 0; t < 2 * l_; ++t) grad_[t] += q(t, i) * di + q(t, j) * dj;
    }

    std::vector<double> K_;
    std::size_t l_;
    std::vector<double> caps_;
    std::vector<double> beta_;
    std::vector<double> grad_;
    std::size_t iterations_ = 0;
    bool converged_ = false;
};

}  // namespace

double SvrModel::predict(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("SvrModel::predict: dimension mismatch");
    double s = bias_;
    for (std::size_t i = 0; i < coef_.size(); ++i) s += coef_[i] * rbf(support_vector(i), x, gamma_);
    return s;
}

SvrModel fit_svr(std::span<const Vector> X, std::span<const double> y,
                 std::span<const double> weights, const SvrParams& params) {
    const std::size_t l = X.size();
    if (l < 2) throw std::invalid_argument("fit_svr: need at least two samples");
    if (y.size() != l || weights.size() != l)
        throw std::invalid_argument("fit_svr: X, y and weights differ in length");
    const std::size_t dim = X.front().size();
    for (const auto& row : X)
        if (row.size() != dim) throw std::invalid_argument("fit_svr: ragged input matrix");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("fit_svr: non-finite target");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("fit_svr: weights must be finite and non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("fit_svr: all weights are zero");

    SvrModel model;
    model.dim_ = dim;
    model.gamma_ = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(dim);

    std::vector<double> caps(l);
    for (std::size_t i = 0; i < l; ++i)
        caps[i] = params.C * weights[i] / total * static_cast<double>(l);

    std::vector<double> kernel(l * l);
    for (std::size_t i = 0; i < l; ++i) {
        kernel[i * l + i] = 1.0;
        for (std::size_t j = i + 1; j < l; ++j) {
            const double v = rbf(X[i], X[j], model.gamma_);
            kernel[i * l + j] = v;
            kernel[j * l + i] = v;
        }
    }

    DualSolver solver(std::move(kernel), l, y, caps, params.epsilon);
    solver.solve(params.tolerance, params.max_passes_factor * l * l);

    double eq = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
        const double c = solver.coefficient(i);
        eq += c;
        if (c == 0.0) continue;
        model.coef_.push_back(c);
        model.caps_.push_back(caps[i]);
        model.sv_.insert(model.sv_.end(), X[i].begin(), X[i].end());
    }
    model.bias_ = solver.bias();
    model.iterations_ = solver.iterations();
    model.converged_ = solver.converged();
    model.equality_residual_ = std::abs(eq);
    return model;
}

}  // namespace dynmo
