#include "bufstarv/takacs.hpp"

#include <cmath>
#include <variant>

#include "bufstarv/starvation_paths.hpp"

namespace bufstarv::takacs {

namespace {

double emptying_term(double per_slot_mean, Count delta, Count threshold)
{
    if (delta < threshold)
        return 0.0;
    const double mean = per_slot_mean * static_cast<double>(delta);
    return static_cast<double>(threshold) / static_cast<double>(delta) * poisson_pmf(delta - threshold, mean);
}

Vector<double> generator(const SlottedScenario& scn)
{
    const Count n = scn.file_size();
    Vector<double> g = Vector<double>::Zero(n);
    for (Count d = scn.threshold(); d < n; ++d)
        g(d) = emptying_term(scn.per_slot_mean(), d, scn.threshold());
    return g;
}

} // namespace

SlottedScenario::SlottedScenario(double lambda, SlotParams slot, Count file_size, Count threshold)
    : lambda_(lambda)
    , slot_(slot.d)
    , file_size_(file_size)
    , threshold_(threshold)
{
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
        throw ParameterError("arrival rate lambda must be positive and finite");
    // Reuse the scenario's own validation of N and x1.
    (void)ScenarioSpec(file_size, threshold);
}

SlottedScenario::SlottedScenario(const QueueParams& params, const ScenarioSpec& spec)
    : SlottedScenario(params.lambda(),
                      [&] {
                          if (const auto* s = std::get_if<SlotParams>(&spec.arrivals()))
                              return *s;
                          throw ParameterError("slotted solver requires a SlotParams arrival model");
                      }(),
                      spec.file_size(), spec.threshold())
{
}

double takacs_first_starvation(const SlottedScenario& scn, Count l)
{
    if (l < scn.threshold() || l > scn.file_size() - 1)
        return 0.0;
    return emptying_term(scn.per_slot_mean(), l, scn.threshold());
}

double takacs_starvation_probability(const SlottedScenario& scn)
{
    CompensatedSum acc;
    for (Count l = scn.threshold(); l < scn.file_size(); ++l)
        acc += takacs_first_starvation(scn, l);
    return clamp_probability(acc.value());
}

StarvationDistribution takacs_pmf(const SlottedScenario& scn, Count j_max)
{
    if (j_max < 0 || j_max > scn.max_starvations())
        throw ParameterError("j_max must satisfy 0 <= j_max <= floor(N/x1)");
    return {paths::assemble_pmf(generator(scn), scn.file_size(), scn.threshold(), j_max), Method::Takacs,
            scn.max_starvations()};
}

} // namespace bufstarv::takacs
