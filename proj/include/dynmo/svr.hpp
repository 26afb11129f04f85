#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynmo/types.hpp"

namespace dynmo {

struct SvrParams {
    double C = 1.0;
    double epsilon = 0.1;
    /// RBF width; values <= 0 mean 1/n for n-dimensional inputs.
    double gamma = 0.0;
    /// Stop once the maximal KKT violation falls below this.
    double tolerance = 1e-3;
    /// Full passes over the training set before giving up; one pass is |X|
    /// pair updates.
    std::size_t max_passes_factor = 10;
};

/// Fitted epsilon-SVR with RBF kernel exp(-gamma |u - v|^2). Immutable.
class SvrModel {
public:
    double predict(std::span<const double> x) const;

    std::size_t input_dimension() const { return dim_; }
    std::size_t support_count() const { return coef_.size(); }
    /// Rows of the support-vector matrix, stored flat.
    std::span<const double> support_vector(std::size_t i) const {
        return {sv_.data() + i * dim_, dim_};
    }
    /// alpha_i - alpha_i* for each support vector.
    const std::vector<double>& coefficients() const { return coef_; }
    /// Box cap C_i of each support vector.
    const std::vector<double>& caps() const { return caps_; }
    double bias() const { return bias_; }
    double gamma() const { return gamma_; }

    std::size_t iterations() const { return iterations_; }
    bool converged() const { return converged_; }
    /// |sum_i (alpha_i - alpha_i*)| over all training samples at exit.
    double equality_residual() const { return equality_residual_; }

private:
    friend SvrModel fit_svr(std::span<const Vector>, std::span<const double>,
                            std::span<const double>, const SvrParams&);

    std::size_t dim_ = 0;
    std::vector<double> sv_;
    std::vector<double> coef_;
    std::vector<double> caps_;
    double bias_ = 0.0;
    double gamma_ = 1.0;
    std::size_t iterations_ = 0;
    bool converged_ = false;
    double equality_residual_ = 0.0;
};

/// Weighted epsilon-SVR. Weights are normalized and folded into per-sample box
/// caps C_i = C * w_i / sum(w) * |X|, so rescaling all weights leaves the fit
/// unchanged. Throws `std::invalid_argument` on size mismatches, fewer than two
/// samples, negative or all-zero weights, or non-finite targets.
SvrModel fit_svr(std::span<const Vector> X, std::span<const double> y,
                 std::span<const double> weights, const SvrParams& params = {});

}  // namespace dynmo
