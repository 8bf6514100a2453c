#pragma once

#include "bufstarv/banded_toeplitz.hpp"
#include "bufstarv/core.hpp"

// Explicit starvation analysis of an M/M/1 playout buffer fed by a file of N
// packets, with playback (re)starting once x1 packets are buffered.
//
// While playing, the next event is an arrival with probability p and a
// departure with probability q. Starting from x1 buffered packets, the buffer
// first empties after exactly k departures with probability
//
//     x1/(2k-x1) * C(2k-x1, k-x1) * p^(k-x1) * q^k
//
// (ballot theorem on the reversed path). Everything below is assembled from
// that term.

namespace bufstarv::ballot {

enum class PmfMode { Exact, Gaussian };

/// Exact up to N = 2000, Gaussian above.
PmfMode default_mode(Count file_size) noexcept;

/// Emptying probability after exactly `delta` departures, 0 for delta < x1.
double emptying_term(const QueueParams& params, Count delta, Count threshold, PmfMode mode = PmfMode::Exact);

/// g(delta) for delta = 0..N-1, the generator of every event probability.
Vector<double> emptying_generator(const QueueParams& params, Count file_size, Count threshold,
                                  PmfMode mode = PmfMode::Exact);

/// Probability of at least one starvation. Summed in ascending k with
/// compensation; 0 when x1 == N.
double starvation_probability(const QueueParams& params, const ScenarioSpec& spec, PmfMode mode = PmfMode::Exact);

/// P_E(k1), k1 = 0..N (entry 0 unused).
Vector<double> first_starvation_vector(const QueueParams& params, const ScenarioSpec& spec);

/// P_U_j(k_j), k_j = 0..N (entry 0 unused). Requires 1 <= j <= J.
Vector<double> last_starvation_vector(const QueueParams& params, const ScenarioSpec& spec, Count j);

/// P_S_l for a path with j starvations in total. Requires 1 <= l <= j-1.
BandedToeplitzMatrix<double> inter_starvation_matrix(const QueueParams& params, const ScenarioSpec& spec, Count j,
                                                     Count l);

/// pmf(0..j_max). Gaussian mode is used only when asked for.
StarvationDistribution starvation_pmf(const QueueParams& params, const ScenarioSpec& spec, Count j_max,
                                      PmfMode mode = PmfMode::Exact);

/// Full distribution j = 0..J with the default mode for N.
StarvationDistribution starvation_pmf(const QueueParams& params, const ScenarioSpec& spec);

/// G(z) = sum_j pmf(j) z^j. Requires a complete distribution and z in [0, 1].
double pgf(const StarvationDistribution& dist, double z);

struct GaussianTerm {
    /// Approximation of C(n, k-x1) p^(k-x1) q^k with n = 2k - x1.
    double value;
    /// Berry-Esseen bound 0.7655 (p^2+q^2) / sqrt(n p q) on the CDF error.
    double error_bound;
    /// False when the validity guard failed and the exact term was returned.
    bool approximated;
};

/// Normal-density approximation of the binomial factor of the emptying term.
/// Valid when n p > 5 and n q > 5, or |(sqrt(q/p) - sqrt(p/q)) / sqrt(n)| < 0.3;
/// otherwise falls back to the exact value.
GaussianTerm gaussian_term(const QueueParams& params, Count k, Count threshold);

double berry_esseen_bound(double p, Count trials);

/// Large-N limit of the starvation probability: 1 for rho <= 1, else
/// exp(x1 (1-2p) / (2pq)).
double asymptotic_starvation_probability(const QueueParams& params, Count threshold);

/// Mean playback time between starvations: the mean busy period of an M/M/1
/// queue started with x1 customers, x1 / (mu - lambda).
/// Throws DomainError for rho >= 1.
double mean_starvation_interval(const QueueParams& params, Count threshold);

} // namespace bufstarv::ballot
