#pragma once

#include "bufstarv/banded_toeplitz.hpp"
#include "bufstarv/core.hpp"

// Decomposition of a sample path into first-starvation, inter-starvation and
// last-starvation events. Shared by the M/M/1 (Ballot) and slotted M/D/1
// (Takacs) solvers, which differ only in the emptying generator g:
//
//   g(delta) = P[buffer started with x1 packets first empties after exactly
//               delta departures],   x1 <= delta <= N-1.
//
// All vectors are indexed by packet number 0..N with entry 0 unused.

namespace bufstarv::paths {

/// Probability of at least one starvation: sum_{k=x1}^{N-1} g(k).
double starvation_probability(const Vector<double>& g, Count file_size, Count threshold);

/// P_E(k): first starvation after departure k.
Vector<double> first_event_vector(const Vector<double>& g, Count file_size, Count threshold);

/// P_U_j(k): no further starvation once the j-th starvation happened after departure k.
Vector<double> last_event_vector(const Vector<double>& g, Count file_size, Count threshold, Count j);

/// P_S_l for a path with j starvations in total (1 <= l <= j-1).
BandedToeplitzMatrix<double> transition_matrix(const Vector<double>& g, Count file_size, Count threshold, Count j,
                                               Count l);

/// pmf(0..j_max) of the starvation count. Runs P_E through the chain of
/// transition matrices one level at a time, so the cost is O(j_max N^2).
Vector<double> assemble_pmf(const Vector<double>& g, Count file_size, Count threshold, Count j_max);

} // namespace bufstarv::paths
