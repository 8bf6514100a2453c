#include "bufstarv/qoe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bufstarv::qoe {

namespace {

double delay_cost(double gamma, double threshold, double lambda)
{
    const double t = threshold / lambda;
    return gamma * t * t;
}

double clamp_real(double x, const ThresholdBounds& b)
{
    if (b.lower && x < *b.lower)
        x = *b.lower;
    if (b.upper && x > *b.upper)
        x = *b.upper;
    return x;
}

void check_closed_form(const QoeWeights& w)
{
    if (w.gamma == 0.0)
        throw DomainError("gamma = 0 has no finite optimal threshold");
}

void check_bounds(const ThresholdBounds& b)
{
    if (b.lower && b.upper && *b.lower > *b.upper)
        throw ParameterError("threshold lower bound exceeds upper bound");
}

// Better of floor/ceil of the real optimum under the true cost; ties to floor.
template <typename Cost>
OptimizationResult round_closed_form(double x_real, const ThresholdBounds& bounds, Cost cost)
{
    Count lo = std::max<Count>(1, static_cast<Count>(std::floor(x_real)));
    Count hi = std::max<Count>(1, static_cast<Count>(std::ceil(x_real)));
    if (bounds.lower) {
        const Count lb = static_cast<Count>(std::ceil(*bounds.lower));
        lo = std::max(lo, lb);
        hi = std::max(hi, lb);
    }
    if (bounds.upper) {
        const Count ub = static_cast<Count>(std::floor(*bounds.upper));
        lo = std::min(lo, ub);
        hi = std::min(hi, ub);
    }
    const double c_lo = cost(static_cast<double>(lo));
    const double c_hi = cost(static_cast<double>(hi));
    if (c_hi < c_lo)
        return {x_real, hi, c_hi, OptimizationMethod::LambertClosedForm};
    return {x_real, lo, c_lo, OptimizationMethod::LambertClosedForm};
}

} // namespace

QoeWeights::QoeWeights(double gamma_weight, double delta_weight)
    : gamma(gamma_weight)
    , delta(delta_weight)
{
    if (!(std::isfinite(gamma) && gamma >= 0.0))
        throw ParameterError("delay weight gamma must be non-negative");
    if (!(std::isfinite(delta) && delta > 0.0))
        throw ParameterError("playback weight delta must be positive");
}

double lambert_w0(double x)
{
    constexpr double branch_point = -1.0 / std::numbers::e;
    if (std::isnan(x) || x < branch_point)
        throw DomainError("Lambert W0 is defined for x >= -1/e");
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return x;
    if (x == branch_point)
        return -1.0;

    double w;
    if (x < -0.3) {
        // Series about the branch point.
        const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 3.0) {
        w = std::log1p(x);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    // Halley iteration.
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (f == 0.0)
            break;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0)
            break;
        const double next = w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        const bool done = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next));
        w = next;
        if (done)
            break;
    }
    return w;
}

double cost_finite(const QueueParams& params, Count file_size, Count threshold, const QoeWeights& w,
                   Count tolerated_starvations, ballot::PmfMode mode)
{
    const ScenarioSpec spec(file_size, threshold);
    if (tolerated_starvations < 0)
        throw ParameterError("tolerated starvation count must be non-negative");
    double starvation;
    if (tolerated_starvations == 0) {
        starvation = ballot::starvation_probability(params, spec, mode);
    } else if (tolerated_starvations >= spec.max_starvations()) {
        starvation = 0.0;
    } else {
        const StarvationDistribution d = ballot::starvation_pmf(params, spec, tolerated_starvations, mode);
        CompensatedSum acc;
        for (Count j = 0; j <= tolerated_starvations; ++j)
            acc += d.pmf(j);
        starvation = clamp_probability(1.0 - acc.value());
    }
    return starvation + delay_cost(w.gamma, static_cast<double>(threshold), params.lambda());
}

OptimizationResult optimize_finite(const QueueParams& params, Count file_size, const QoeWeights& w,
                                   Count tolerated_starvations, ThresholdBounds bounds, ballot::PmfMode mode)
{
    check_bounds(bounds);
    if (file_size < 1)
        throw ParameterError("file size N must be at least 1");
    Count lo = 1;
    Count hi = file_size;
    if (bounds.lower)
        lo = std::max(lo, static_cast<Count>(std::ceil(*bounds.lower)));
    if (bounds.upper)
        hi = std::min(hi, static_cast<Count>(std::floor(*bounds.upper)));
    if (lo > hi)
        throw ParameterError("threshold bounds leave no admissible integer threshold");

    Count best_x = lo;
    double best = std::numeric_limits<double>::infinity();
    for (Count x1 = lo; x1 <= hi; ++x1) {
        const double c = cost_finite(params, file_size, x1, w, tolerated_starvations, mode);
        if (c < best) {
            best = c;
            best_x = x1;
        }
    }
    return {static_cast<double>(best_x), best_x, best, OptimizationMethod::GridSearch};
}

double cost_infinite_supercritical(const QueueParams& params, const QoeWeights& w, double threshold)
{
    const double p = params.p();
    const double q = params.q();
    const double starvation = params.rho() <= 1.0 ? 1.0 : std::exp(threshold * (1.0 - 2.0 * p) / (2.0 * p * q));
    return starvation + delay_cost(w.gamma, threshold, params.lambda());
}

double cost_infinite_subcritical(const QueueParams& params, const QoeWeights& w, double threshold)
{
    if (params.rho() >= 1.0)
        throw DomainError("playback-interval cost needs rho < 1");
    return std::exp(-w.delta * threshold / (params.lambda() * (1.0 - params.rho())))
        + delay_cost(w.gamma, threshold, params.lambda());
}

double cost_file_level(double lambda, double mu, double theta, const QoeWeights& w, double threshold)
{
    if (!(lambda > 0.0 && mu >= lambda))
        throw DomainError("file-level cost needs 0 < lambda <= mu");
    if (!(theta > 0.0))
        throw ParameterError("exponential rate theta must be positive");
    const double starvation = mu == lambda ? 0.0 : std::exp(-theta * threshold * mu / (mu - lambda));
    return starvation + delay_cost(w.gamma, threshold, lambda);
}

OptimizationResult optimize_infinite_supercritical(const QueueParams& params, const QoeWeights& w,
                                                   ThresholdBounds bounds)
{
    check_bounds(bounds);
    check_closed_form(w);
    if (params.rho() <= 1.0)
        throw DomainError("supercritical optimum needs rho > 1; use the subcritical variant");
    const double p = params.p();
    const double q = params.q();
    const double scale = (2.0 * p - 1.0) / (2.0 * p * q);
    const double arg = (scale * params.lambda()) * (scale * params.lambda()) / (2.0 * w.gamma);
    const double x = clamp_real(lambert_w0(arg) / scale, bounds);
    return round_closed_form(x, bounds, [&](double t) { return cost_infinite_supercritical(params, w, t); });
}

OptimizationResult optimize_infinite_subcritical(const QueueParams& params, const QoeWeights& w,
                                                 ThresholdBounds bounds)
{
    check_bounds(bounds);
    check_closed_form(w);
    if (params.rho() >= 1.0)
        throw DomainError("subcritical optimum needs rho < 1; use the supercritical variant");
    const double slack = 1.0 - params.rho();
    const double arg = w.delta * w.delta / (2.0 * w.gamma * slack * slack);
    const double x = clamp_real(lambert_w0(arg) * params.lambda() * slack / w.delta, bounds);
    return round_closed_form(x, bounds, [&](double t) { return cost_infinite_subcritical(params, w, t); });
}

OptimizationResult optimize_file_level(double lambda, double mu, double theta, const QoeWeights& w,
                                       ThresholdBounds bounds)
{
    check_bounds(bounds);
    check_closed_form(w);
    if (!(lambda > 0.0 && mu >= lambda))
        throw DomainError("file-level optimum needs 0 < lambda <= mu");
    if (!(theta > 0.0))
        throw ParameterError("exponential rate theta must be positive");
    auto cost = [&](double t) { return cost_file_level(lambda, mu, theta, w, t); };
    if (mu == lambda) {
        // Nothing can starve; only the delay term is left and it grows with x1.
        return round_closed_form(clamp_real(0.0, bounds), bounds, cost);
    }
    const double rate = theta * mu / (mu - lambda);
    const double arg = (rate * lambda) * (rate * lambda) / (2.0 * w.gamma);
    const double x = clamp_real(lambert_w0(arg) / rate, bounds);
    return round_closed_form(x, bounds, cost);
}

} // namespace bufstarv::qoe
