#pragma once

#include <optional>

#include "bufstarv/ballot.hpp"
#include "bufstarv/core.hpp"

// Start-up threshold optimisation. Every cost is a starvation measure plus
// gamma * (x1 / lambda)^2, the squared mean start-up delay.

namespace bufstarv::qoe {

/// gamma >= 0 weights the start-up delay, delta > 0 the playback interval.
/// The closed-form optimizers need gamma > 0.
struct QoeWeights {
    double gamma;
    double delta = 1.0;

    QoeWeights(double gamma_weight, double delta_weight = 1.0);
};

/// Optional clamps on the threshold (in packets). Unset means unbounded.
struct ThresholdBounds {
    std::optional<double> lower;
    std::optional<double> upper;
};

enum class OptimizationMethod { LambertClosedForm, GridSearch };

struct OptimizationResult {
    /// Real-valued optimum (equal to `x1` for grid searches).
    double x1_real;
    /// Best integer threshold under the true cost.
    Count x1;
    double cost_at_optimum;
    OptimizationMethod method;
};

/// Principal branch of the Lambert W function, W e^W = x, for x >= -1/e.
double lambert_w0(double x);

/// C1 for a file of N packets. With `tolerated_starvations` = t the starvation
/// term is P(more than t starvations) instead of P(at least one).
double cost_finite(const QueueParams& params, Count file_size, Count threshold, const QoeWeights& w,
                   Count tolerated_starvations = 0, ballot::PmfMode mode = ballot::PmfMode::Exact);

/// Exhaustive scan of x1 over 1..N (restricted by the bounds). Ties go to
/// the smaller threshold. The cost is neither convex nor concave in x1, so
/// no local search is attempted.
OptimizationResult optimize_finite(const QueueParams& params, Count file_size, const QoeWeights& w,
                                   Count tolerated_starvations = 0, ThresholdBounds bounds = {},
                                   ballot::PmfMode mode = ballot::PmfMode::Exact);

/// exp(x1 (1-2p)/(2pq)) + gamma (x1/lambda)^2, for rho > 1.
double cost_infinite_supercritical(const QueueParams& params, const QoeWeights& w, double threshold);

/// exp(-delta x1 / (lambda (1-rho))) + gamma (x1/lambda)^2, for rho < 1.
double cost_infinite_subcritical(const QueueParams& params, const QoeWeights& w, double threshold);

/// exp(-theta x1 mu / (mu-lambda)) + gamma (x1/lambda)^2, exponential file sizes.
double cost_file_level(double lambda, double mu, double theta, const QoeWeights& w, double threshold);

/// Closed form W(((2p-1) lambda / (2pq))^2 / (2 gamma)) 2pq / (2p-1).
/// DomainError unless rho > 1.
OptimizationResult optimize_infinite_supercritical(const QueueParams& params, const QoeWeights& w,
                                                   ThresholdBounds bounds = {});

/// Closed form W(delta^2 / (2 gamma (1-rho)^2)) lambda (1-rho) / delta.
/// DomainError unless rho < 1.
OptimizationResult optimize_infinite_subcritical(const QueueParams& params, const QoeWeights& w,
                                                 ThresholdBounds bounds = {});

/// Closed form W((theta mu lambda / (mu-lambda))^2 / (2 gamma)) (mu-lambda) / (mu theta).
/// At mu == lambda nothing starves and the optimum is the smallest threshold.
/// DomainError when mu < lambda.
OptimizationResult optimize_file_level(double lambda, double mu, double theta, const QoeWeights& w,
                                       ThresholdBounds bounds = {});

} // namespace bufstarv::qoe
