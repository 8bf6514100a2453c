#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bufstarv/core.hpp"

// Discrete-event Monte Carlo simulation of the prefetching playout buffer.
//
// Each replication transfers one file of N packets. Playback starts once x1
// packets are buffered (or the whole file has arrived), serves packets with
// exponential service times (or one per slot of length d for slotted
// scenarios), and records a starvation when a departure other than that of
// packet N leaves the buffer empty. Playback then pauses until the resume
// threshold is re-buffered, or until the rest of the file has arrived.

namespace bufstarv::sim {

struct SimConfig {
    QueueParams params;
    ScenarioSpec scenario;
    Count replications = 5000;
    std::uint64_t master_seed = 0;
    bool parallel = false;
    /// Packets re-buffered before playback resumes; x1 when unset.
    std::optional<Count> resume_threshold = std::nullopt;
};

struct SimReport {
    Count replications = 0;
    /// histogram[j] = number of replications with exactly j starvations.
    std::vector<Count> histogram;
    Vector<double> empirical_pmf;
    /// sqrt(p (1-p) / R) per bin.
    Vector<double> standard_error;

    /// Playback periods that ended in a starvation: their count, mean length
    /// (seconds) and the standard error of that mean.
    Count intervals_observed = 0;
    double mean_interval = 0.0;
    double mean_interval_se = 0.0;

    Count total_arrivals = 0;
    Count total_departures = 0;
    Count max_starvations_observed = 0;

    /// Not part of the result; excluded from comparisons and output files.
    double wall_seconds = 0.0;

    /// Bitwise equality of every field except wall time.
    bool same_results(const SimReport& other) const;
};

SimReport simulate(const SimConfig& config);

/// Agreement of an analytic probability with an empirical frequency from R
/// replications, judged as a z-test under the analytic value: the standard
/// error is sqrt(p (1-p) / R) with p the analytic probability. When p is 0 or
/// 1 the frequency must match exactly.
struct BinVerdict {
    double analytic;
    double empirical;
    double standard_error;
    /// |analytic - empirical| / standard_error (0 when both agree exactly).
    double z;
    bool pass;
};

BinVerdict check_bin(double analytic, double empirical, Count replications, double max_z = 3.0);

/// Seed of replication `index`, a pure function of (master, index).
std::uint64_t replication_seed(std::uint64_t master_seed, Count index);

struct KernelCheck {
    Vector<double> frequency;
    Vector<double> standard_error;
    Count samples;
};

/// Empirical distribution of the number of departures, out of `population`
/// queued packets, during one inter-arrival period. With `ipp` set the period
/// starts in the ON state of the interrupted Poisson source.
KernelCheck simulate_kernel_check(const QueueParams& params, Count population, Count samples, std::uint64_t seed,
                                  std::optional<IppParams> ipp = std::nullopt);

} // namespace bufstarv::sim
