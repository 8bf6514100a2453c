#pragma once

#include <optional>

#include "bufstarv/core.hpp"

// Recursive starvation analysis over arrival epochs.
//
// State: a packet of the file arrives and sees i packets in the system, with
// n packets of the file left (counting the arriving one). Between two
// arrivals k of the i+1 packets in the system depart with probability
// Q_{i+1}(k); the next packet then sees i+1-k. A packet that sees an empty
// system marks a starvation, after which playback waits for the resume
// threshold to be re-buffered.
//
// The initial state is the arrival of packet x1: it sees x1-1 packets and
// N-x1+1 packets remain.

namespace bufstarv::recursive {

enum class KernelVariant { Mm1, IppOn };

/// Q_i(k): probability that k of i packets leave during one inter-arrival
/// period. For both arrival models Q_i(k) for k < i does not depend on i, so
/// the kernel stores a body b(k) and a boundary term Q_i(i).
class DepartureKernel {
public:
    DepartureKernel(KernelVariant variant, Vector<double> body, Vector<double> boundary);

    KernelVariant variant() const noexcept { return variant_; }
    /// Largest population i covered.
    Count max_population() const noexcept { return boundary_.size() - 1; }

    double operator()(Count i, Count k) const
    {
        if (k < 0 || k > i || i > max_population())
            return 0.0;
        return k < i ? body_(k) : boundary_(i);
    }
    const Vector<double>& body() const noexcept { return body_; }
    const Vector<double>& boundary() const noexcept { return boundary_; }

private:
    KernelVariant variant_;
    Vector<double> body_;
    Vector<double> boundary_;
};

/// Q_i(k) = p q^k for k < i, Q_i(i) = q^i.
DepartureKernel mm1_kernel(const QueueParams& params, Count i_max);

/// Roots and weights of the ON-state kernel Q_i(k) = c1 a1^-k + c2 a2^-k.
struct IppCoefficients {
    double discriminant;
    double a1;
    double a2;
    double c1;
    double c2;
};

IppCoefficients ipp_coefficients(const QueueParams& params, const IppParams& ipp);

/// Kernel for arrivals from an interrupted Poisson source. `params.lambda()`
/// is the arrival rate while ON; service continues while OFF.
DepartureKernel ipp_kernel(const QueueParams& params, const IppParams& ipp, Count i_max);

/// P_i(n) for 0 <= i, 1 <= n, i + n <= N; entries outside that set are 0.
/// Column 0 is unused. P_0(n) is the state right after a starvation (= 1).
DenseMatrix<double> starvation_table(const DepartureKernel& kernel, Count file_size);

/// Probability of at least one starvation.
double starvation_probability_recursive(const DepartureKernel& kernel, Count file_size, Count threshold);

struct RecursionOptions {
    /// Packets buffered before playback resumes after a starvation. Unset
    /// means x1, which is the convention of the explicit solver.
    std::optional<Count> resume_threshold;
};

/// pmf(0..j_max). Iterates j outermost, then n, then i, keeping two n-slabs
/// of the table, so memory is O(N j_max) and time O((j_max+1) N^3).
StarvationDistribution starvation_pmf_recursive(const DepartureKernel& kernel, Count file_size, Count threshold,
                                                Count j_max, RecursionOptions options = {});

} // namespace bufstarv::recursive
