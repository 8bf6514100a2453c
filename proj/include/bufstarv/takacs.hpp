#pragma once

#include "bufstarv/core.hpp"

// Slotted playback (M/D/1): one packet leaves at the end of every playback
// slot of length d while the buffer is non-empty; arrivals are Poisson(lambda).
// All indices count departures, so a starvation "after packet l" is the one
// revealed by the l-th departure since playback (re)started.

namespace bufstarv::takacs {

class SlottedScenario {
public:
    SlottedScenario(double lambda, SlotParams slot, Count file_size, Count threshold);
    /// Builds from a scenario whose arrival model is SlotParams.
    SlottedScenario(const QueueParams& params, const ScenarioSpec& spec);

    double lambda() const noexcept { return lambda_; }
    double slot() const noexcept { return slot_; }
    Count file_size() const noexcept { return file_size_; }
    Count threshold() const noexcept { return threshold_; }
    Count max_starvations() const noexcept { return file_size_ / threshold_; }
    /// Mean arrivals per slot, lambda d.
    double per_slot_mean() const noexcept { return lambda_ * slot_; }

private:
    double lambda_;
    double slot_;
    Count file_size_;
    Count threshold_;
};

/// (x1/l) * Poisson(l - x1; lambda l d) for x1 <= l <= N-1, and 0 for any
/// other l.
double takacs_first_starvation(const SlottedScenario& scn, Count l);

/// Sum of the first-starvation pmf over l = x1..N-1.
double takacs_starvation_probability(const SlottedScenario& scn);

/// pmf(0..j_max) of the starvation count.
StarvationDistribution takacs_pmf(const SlottedScenario& scn, Count j_max);

} // namespace bufstarv::takacs
