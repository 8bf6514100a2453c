#include "bufstarv/ballot.hpp"

#include <cmath>
#include <numbers>
#include <variant>

#include "bufstarv/starvation_paths.hpp"

namespace bufstarv::ballot {

namespace {

void require_poisson(const ScenarioSpec& spec)
{
    if (!std::holds_alternative<PoissonArrivals>(spec.arrivals()))
        throw ParameterError("ballot solver requires Poisson arrivals");
}

bool gaussian_guard(double p, double q, double n)
{
    if (n * p > 5.0 && n * q > 5.0)
        return true;
    return std::abs((std::sqrt(q / p) - std::sqrt(p / q)) / std::sqrt(n)) < 0.3;
}

} // namespace

PmfMode default_mode(Count file_size) noexcept
{
    return file_size <= 2000 ? PmfMode::Exact : PmfMode::Gaussian;
}

double berry_esseen_bound(double p, Count trials)
{
    const double q = 1.0 - p;
    return 0.7655 * (p * p + q * q) / std::sqrt(static_cast<double>(trials) * p * q);
}

GaussianTerm gaussian_term(const QueueParams& params, Count k, Count threshold)
{
    if (threshold < 1 || k < threshold)
        throw ParameterError("gaussian term requires k >= x1 >= 1");
    const Count trials = 2 * k - threshold;
    const Count successes = k - threshold;
    const double p = params.p();
    const double q = params.q();
    const double n = static_cast<double>(trials);
    const double bound = berry_esseen_bound(p, trials);
    if (!gaussian_guard(p, q, n))
        return {log_binomial_pmf(trials, successes, p).prob(), bound, false};
    const double var = n * p * q;
    const double dev = static_cast<double>(successes) - n * p;
    return {std::exp(-dev * dev / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var), bound, true};
}

double emptying_term(const QueueParams& params, Count delta, Count threshold, PmfMode mode)
{
    if (threshold < 1)
        throw ParameterError("threshold x1 must be at least 1");
    if (delta < threshold)
        return 0.0;
    const Count trials = 2 * delta - threshold;
    const double ballot_ratio = static_cast<double>(threshold) / static_cast<double>(trials);
    if (mode == PmfMode::Gaussian)
        return ballot_ratio * gaussian_term(params, delta, threshold).value;
    // C(2k-x1, k-x1) p^(k-x1) q^k is a binomial pmf with k-x1 successes.
    const LogProb lp = log_binomial_pmf(trials, delta - threshold, params.p());
    if (lp.is_zero())
        return 0.0;
    return std::exp(std::log(ballot_ratio) + lp.value);
}

Vector<double> emptying_generator(const QueueParams& params, Count file_size, Count threshold, PmfMode mode)
{
    if (threshold < 1 || threshold > file_size)
        throw ParameterError("threshold x1 must satisfy 1 <= x1 <= N");
    Vector<double> g = Vector<double>::Zero(file_size);
    for (Count d = threshold; d < file_size; ++d)
        g(d) = emptying_term(params, d, threshold, mode);
    return g;
}

double starvation_probability(const QueueParams& params, const ScenarioSpec& spec, PmfMode mode)
{
    require_poisson(spec);
    const Count n = spec.file_size();
    const Count x1 = spec.threshold();
    CompensatedSum acc;
    for (Count k = x1; k < n; ++k)
        acc += emptying_term(params, k, x1, mode);
    return clamp_probability(acc.value());
}

Vector<double> first_starvation_vector(const QueueParams& params, const ScenarioSpec& spec)
{
    require_poisson(spec);
    return paths::first_event_vector(emptying_generator(params, spec.file_size(), spec.threshold()),
                                     spec.file_size(), spec.threshold());
}

Vector<double> last_starvation_vector(const QueueParams& params, const ScenarioSpec& spec, Count j)
{
    require_poisson(spec);
    return paths::last_event_vector(emptying_generator(params, spec.file_size(), spec.threshold()),
                                    spec.file_size(), spec.threshold(), j);
}

BandedToeplitzMatrix<double> inter_starvation_matrix(const QueueParams& params, const ScenarioSpec& spec, Count j,
                                                     Count l)
{
    require_poisson(spec);
    return paths::transition_matrix(emptying_generator(params, spec.file_size(), spec.threshold()),
                                    spec.file_size(), spec.threshold(), j, l);
}

StarvationDistribution starvation_pmf(const QueueParams& params, const ScenarioSpec& spec, Count j_max, PmfMode mode)
{
    require_poisson(spec);
    const Count n = spec.file_size();
    const Count x1 = spec.threshold();
    if (j_max < 0 || j_max > spec.max_starvations())
        throw ParameterError("j_max must satisfy 0 <= j_max <= floor(N/x1)");
    const Vector<double> g = emptying_generator(params, n, x1, mode);
    return {paths::assemble_pmf(g, n, x1, j_max),
            mode == PmfMode::Exact ? Method::BallotExact : Method::BallotGaussian, spec.max_starvations()};
}

StarvationDistribution starvation_pmf(const QueueParams& params, const ScenarioSpec& spec)
{
    return starvation_pmf(params, spec, spec.max_starvations(), default_mode(spec.file_size()));
}

double pgf(const StarvationDistribution& dist, double z)
{
    if (!dist.complete())
        throw ParameterError("generating function needs the pmf up to J");
    if (!(z >= 0.0 && z <= 1.0))
        throw ParameterError("generating function argument must lie in [0, 1]");
    double acc = 0.0;
    for (Count j = dist.pmf.size() - 1; j >= 0; --j)
        acc = acc * z + dist.pmf(j);
    return acc;
}

double asymptotic_starvation_probability(const QueueParams& params, Count threshold)
{
    if (threshold < 1)
        throw ParameterError("threshold x1 must be at least 1");
    if (params.rho() <= 1.0)
        return 1.0;
    const double p = params.p();
    const double q = params.q();
    return std::exp(static_cast<double>(threshold) * (1.0 - 2.0 * p) / (2.0 * p * q));
}

double mean_starvation_interval(const QueueParams& params, Count threshold)
{
    if (threshold < 1)
        throw ParameterError("threshold x1 must be at least 1");
    if (params.rho() >= 1.0)
        throw DomainError("mean starvation interval is undefined for rho >= 1");
    return static_cast<double>(threshold) / (params.mu() - params.lambda());
}

} // namespace bufstarv::ballot
