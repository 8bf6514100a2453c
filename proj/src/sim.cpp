#include "bufstarv/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <variant>

namespace bufstarv::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Engine = std::mt19937_64;

double exp_draw(Engine& rng, double rate)
{
    return std::exponential_distribution<double>(rate)(rng);
}

// Time from an arrival (source ON) to the next arrival.
double next_interarrival(Engine& rng, const QueueParams& params, const std::optional<IppParams>& ipp)
{
    if (!ipp)
        return exp_draw(rng, params.lambda());
    const double lambda = params.lambda();
    double t = 0.0;
    for (;;) {
        t += exp_draw(rng, lambda + ipp->alpha);
        if (std::uniform_real_distribution<double>(0.0, lambda + ipp->alpha)(rng) < lambda)
            return t;
        t += exp_draw(rng, ipp->beta);
    }
}

struct Replication {
    Count starvations = 0;
    Count intervals = 0;
    double interval_sum = 0.0;
    double interval_sq_sum = 0.0;
    Count arrivals = 0;
    Count departures = 0;
};

struct Model {
    QueueParams params;
    std::optional<IppParams> ipp;
    std::optional<double> slot;
    Count file_size;
    Count threshold;
    Count resume;
};

Model make_model(const SimConfig& c)
{
    Model m{c.params, std::nullopt, std::nullopt, c.scenario.file_size(), c.scenario.threshold(),
            c.resume_threshold.value_or(c.scenario.threshold())};
    if (const auto* ipp = std::get_if<IppParams>(&c.scenario.arrivals()))
        m.ipp = *ipp;
    if (const auto* s = std::get_if<SlotParams>(&c.scenario.arrivals()))
        m.slot = s->d;
    return m;
}

Replication run_one(const Model& m, std::uint64_t seed)
{
    Engine rng(seed);
    auto service = [&] { return m.slot ? *m.slot : exp_draw(rng, m.params.mu()); };

    Replication r;
    const Count n = m.file_size;
    Count buffer = 0;
    Count needed = m.threshold;
    bool playing = false;
    double play_start = 0.0;
    double t_arr = next_interarrival(rng, m.params, m.ipp);
    double t_dep = kInf;

    while (r.departures < n) {
        if (r.arrivals < n && (!playing || t_arr < t_dep)) {
            const double t = t_arr;
            ++r.arrivals;
            ++buffer;
            t_arr = r.arrivals < n ? t + next_interarrival(rng, m.params, m.ipp) : kInf;
            if (!playing && (buffer >= needed || r.arrivals == n)) {
                playing = true;
                play_start = t;
                t_dep = t + service();
            }
        } else {
            const double t = t_dep;
            ++r.departures;
            --buffer;
            if (buffer > 0) {
                t_dep = t + service();
            } else if (r.departures < n) {
                ++r.starvations;
                const double len = t - play_start;
                ++r.intervals;
                r.interval_sum += len;
                r.interval_sq_sum += len * len;
                playing = false;
                needed = m.resume;
                t_dep = kInf;
            }
        }
    }
    return r;
}

} // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, Count index)
{
    return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

bool SimReport::same_results(const SimReport& o) const
{
    return replications == o.replications && histogram == o.histogram && empirical_pmf == o.empirical_pmf
        && standard_error == o.standard_error && intervals_observed == o.intervals_observed
        && mean_interval == o.mean_interval && mean_interval_se == o.mean_interval_se
        && total_arrivals == o.total_arrivals && total_departures == o.total_departures
        && max_starvations_observed == o.max_starvations_observed;
}

SimReport simulate(const SimConfig& config)
{
    if (config.replications < 1)
        throw ParameterError("replications must be at least 1");
    const Model model = make_model(config);
    if (model.resume < 1 || model.resume > model.file_size)
        throw ParameterError("resume threshold must satisfy 1 <= R <= N");

    const auto start = std::chrono::steady_clock::now();
    const Count reps = config.replications;
    std::vector<Replication> results(static_cast<std::size_t>(reps));
    auto run_range = [&](Count lo, Count hi) {
        for (Count i = lo; i < hi; ++i)
            results[static_cast<std::size_t>(i)] = run_one(model, replication_seed(config.master_seed, i));
    };

    const Count workers = config.parallel
        ? std::clamp<Count>(static_cast<Count>(std::thread::hardware_concurrency()), 2, std::min<Count>(reps, 64))
        : 1;
    if (workers <= 1) {
        run_range(0, reps);
    } else {
        std::vector<std::thread> pool;
        const Count chunk = (reps + workers - 1) / workers;
        for (Count w = 0; w < workers; ++w)
            pool.emplace_back(run_range, std::min(reps, w * chunk), std::min(reps, (w + 1) * chunk));
        for (auto& t : pool)
            t.join();
    }

    // Reduce in replication order so the report does not depend on scheduling.
    const Count bound = model.file_size / std::min(model.threshold, model.resume);
    SimReport rep;
    rep.replications = reps;
    rep.histogram.assign(static_cast<std::size_t>(bound + 1), 0);
    double sum = 0.0;
    double sq = 0.0;
    for (const Replication& r : results) {
        ++rep.histogram[static_cast<std::size_t>(r.starvations)];
        rep.max_starvations_observed = std::max(rep.max_starvations_observed, r.starvations);
        rep.intervals_observed += r.intervals;
        sum += r.interval_sum;
        sq += r.interval_sq_sum;
        rep.total_arrivals += r.arrivals;
        rep.total_departures += r.departures;
    }
    rep.empirical_pmf.resize(bound + 1);
    rep.standard_error.resize(bound + 1);
    const double rd = static_cast<double>(reps);
    for (Count j = 0; j <= bound; ++j) {
        const double f = static_cast<double>(rep.histogram[static_cast<std::size_t>(j)]) / rd;
        rep.empirical_pmf(j) = f;
        rep.standard_error(j) = std::sqrt(f * (1.0 - f) / rd);
    }
    if (rep.intervals_observed > 0) {
        const double k = static_cast<double>(rep.intervals_observed);
        rep.mean_interval = sum / k;
        if (rep.intervals_observed > 1) {
            const double var = std::max(0.0, (sq - k * rep.mean_interval * rep.mean_interval) / (k - 1.0));
            rep.mean_interval_se = std::sqrt(var / k);
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

BinVerdict check_bin(double analytic, double empirical, Count replications, double max_z)
{
    if (replications < 1)
        throw ParameterError("replications must be at least 1");
    const double p = clamp_probability(analytic);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
    const double diff = std::abs(analytic - empirical);
    if (se == 0.0) {
        // Exact agreement is required; allow rounding of the analytic value.
        const bool ok = diff <= 1e-12;
        return {analytic, empirical, se, ok ? 0.0 : std::numeric_limits<double>::infinity(), ok};
    }
    const double z = diff / se;
    return {analytic, empirical, se, z, z <= max_z};
}

KernelCheck simulate_kernel_check(const QueueParams& params, Count population, Count samples, std::uint64_t seed,
                                  std::optional<IppParams> ipp)
{
    if (population < 1)
        throw ParameterError("kernel check needs at least one queued packet");
    if (samples < 1)
        throw ParameterError("kernel check needs at least one sample");
    Engine rng(splitmix64(seed));
    std::vector<Count> counts(static_cast<std::size_t>(population + 1), 0);
    for (Count s = 0; s < samples; ++s) {
        const double period = next_interarrival(rng, params, ipp);
        double t = 0.0;
        Count k = 0;
        while (k < population) {
            t += exp_draw(rng, params.mu());
            if (t > period)
                break;
            ++k;
        }
        ++counts[static_cast<std::size_t>(k)];
    }
    KernelCheck out{Vector<double>(population + 1), Vector<double>(population + 1), samples};
    const double sd = static_cast<double>(samples);
    for (Count k = 0; k <= population; ++k) {
        const double f = static_cast<double>(counts[static_cast<std::size_t>(k)]) / sd;
        out.frequency(k) = f;
        out.standard_error(k) = std::sqrt(f * (1.0 - f) / sd);
    }
    return out;
}

} // namespace bufstarv::sim
