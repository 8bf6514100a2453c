#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace bufstarv {

/// Packet counts and indices. Signed so that differences such as 2k - x1 are safe.
using Count = std::int64_t;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Invalid input: out-of-range count, non-positive rate, malformed distribution.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Valid input for which the requested quantity is undefined (e.g. rho >= 1
/// for the mean starvation interval).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Arrival rate lambda, service rate mu and the derived Bernoulli step
/// probabilities of the embedded arrival/departure race.
class QueueParams {
public:
    static QueueParams from_rates(double lambda, double mu);
    /// Service rate normalised to 1.
    static QueueParams from_rho(double rho) { return from_rates(rho, 1.0); }

    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    double rho() const noexcept { return rho_; }
    /// Probability that the next event of a busy queue is an arrival.
    double p() const noexcept { return p_; }
    /// 1 - p, computed by subtraction so that p + q == 1 exactly.
    double q() const noexcept { return q_; }

private:
    QueueParams(double lambda, double mu);

    double lambda_;
    double mu_;
    double rho_;
    double p_;
    double q_;
};

/// ON/OFF gating of a Poisson source: alpha is the ON->OFF rate, beta OFF->ON.
struct IppParams {
    double alpha;
    double beta;

    IppParams(double alpha_rate, double beta_rate);
};

/// Constant-rate playback: one packet per slot of length d seconds.
struct SlotParams {
    double d;

    explicit SlotParams(double slot_seconds);
};

struct PoissonArrivals {};

using ArrivalModel = std::variant<PoissonArrivals, IppParams, SlotParams>;

class ScenarioSpec {
public:
    ScenarioSpec(Count file_size, Count threshold, ArrivalModel arrivals = PoissonArrivals{});

    Count file_size() const noexcept { return file_size_; }
    Count threshold() const noexcept { return threshold_; }
    const ArrivalModel& arrivals() const noexcept { return arrivals_; }
    /// floor(N / x1): each starvation consumes at least x1 departures.
    Count max_starvations() const noexcept { return file_size_ / threshold_; }

private:
    Count file_size_;
    Count threshold_;
    ArrivalModel arrivals_;
};

enum class Method { BallotExact, BallotGaussian, Recursive, Takacs, Ipp };

std::string to_string(Method m);

/// Distribution of the number of starvations. `pmf(j)` for j = 0..pmf.size()-1;
/// `max_starvations` is J, so the distribution is complete when pmf.size() == J+1.
struct StarvationDistribution {
    Vector<double> pmf;
    Method method;
    Count max_starvations;

    bool complete() const noexcept { return pmf.size() == max_starvations + 1; }
    double operator[](Count j) const { return j < pmf.size() ? pmf(j) : 0.0; }
};

/// Natural-log probability. Zero probability is stored as exactly -infinity.
struct LogProb {
    double value;

    static constexpr LogProb zero() noexcept { return {-std::numeric_limits<double>::infinity()}; }
    static constexpr LogProb one() noexcept { return {0.0}; }

    bool is_zero() const noexcept { return std::isinf(value) && value < 0; }
    double prob() const noexcept { return is_zero() ? 0.0 : std::exp(value); }
};

/// ln C(n, k).
double log_binomial_coefficient(Count n, Count k);

/// ln[C(n,k) p^k (1-p)^(n-k)].
LogProb log_binomial_pmf(Count n, Count k, double p);

/// m^k e^{-m} / k!, evaluated in log space.
double poisson_pmf(Count k, double m);

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Clamp a computed probability into [0, 1] to absorb rounding at the edges.
inline double clamp_probability(double x) noexcept
{
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

} // namespace bufstarv
