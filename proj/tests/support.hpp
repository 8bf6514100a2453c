#pragma once

// Test-only oracles. None of these share code with the library solvers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "bufstarv/core.hpp"

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt binomial(long n, long k)
{
    if (k < 0 || k > n)
        return 0;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

inline Rational power(const Rational& x, long e)
{
    Rational r = 1;
    for (long i = 0; i < e; ++i)
        r *= x;
    return r;
}

/// Number of sample paths with j starvations that used `np` arrival races
/// and `nq` departure races. Only races (playing, file not fully arrived)
/// carry a p or q factor; forced moves have probability 1.
class PathCounts {
public:
    PathCounts(long file_size, long threshold, long resume)
        : n_(file_size)
        , x1_(threshold)
        , r_(resume)
        , jmax_(file_size / std::min(threshold, resume))
        , counts_(static_cast<std::size_t>((jmax_ + 1) * (n_ + 1) * (n_ + 1)), 0)
    {
        walk(0, 0, false, x1_, 0, 0, 0);
    }

    long max_starvations() const { return jmax_; }

    /// Exact pmf with arrival race probability p.
    std::vector<Rational> pmf(const Rational& p) const
    {
        const Rational q = 1 - p;
        std::vector<Rational> out(static_cast<std::size_t>(jmax_ + 1), 0);
        for (long j = 0; j <= jmax_; ++j)
            for (long a = 0; a <= n_; ++a)
                for (long d = 0; d <= n_; ++d) {
                    const std::uint64_t c = at(j, a, d);
                    if (c)
                        out[static_cast<std::size_t>(j)] += Rational(c) * power(p, a) * power(q, d);
                }
        return out;
    }

private:
    std::uint64_t& at(long j, long a, long d)
    {
        return counts_[static_cast<std::size_t>((j * (n_ + 1) + a) * (n_ + 1) + d)];
    }
    std::uint64_t at(long j, long a, long d) const
    {
        return counts_[static_cast<std::size_t>((j * (n_ + 1) + a) * (n_ + 1) + d)];
    }

    void walk(long arrived, long served, bool playing, long needed, long j, long np, long nq)
    {
        if (served == n_) {
            ++at(j, np, nq);
            return;
        }
        const long buffer = arrived - served;
        if (!playing) {
            const long a = arrived + 1;
            const bool start = a - served >= needed || a == n_;
            walk(a, served, start, needed, j, np, nq);
            return;
        }
        const bool race = arrived < n_;
        if (race)
            walk(arrived + 1, served, true, needed, j, np + 1, nq);
        // departure
        const long s = served + 1;
        const long dq = race ? 1 : 0;
        if (buffer - 1 == 0 && s < n_)
            walk(arrived, s, false, r_, j + 1, np, nq + dq);
        else
            walk(arrived, s, true, needed, j, np, nq + dq);
    }

    long n_;
    long x1_;
    long r_;
    long jmax_;
    std::vector<std::uint64_t> counts_;
};

/// Golden-section minimisation of a unimodal function on [a, b].
inline double golden_section(const std::function<double(double)>& f, double a, double b, double tol = 1e-7)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Dense O(N^2) DP over (arrived, served, playing) states for pmf[0..j_max]
/// in double precision. Used where exhaustive enumeration is too large.
inline std::vector<double> dp_pmf(long n, long x1, long resume, double p, long jmax)
{
    const double q = 1.0 - p;
    std::vector<double> out(static_cast<std::size_t>(jmax + 1), 0.0);
    // state[j][a][s][playing]; playing is implied by the path for a given
    // (a, s, j) except at the threshold, so keep both.
    const auto idx = [&](long j, long a, long s, int pl) {
        return static_cast<std::size_t>(((j * (n + 1) + a) * (n + 1) + s) * 2 + pl);
    };
    std::vector<double> w(static_cast<std::size_t>((jmax + 2) * (n + 1) * (n + 1) * 2), 0.0);
    w[idx(0, 0, 0, 0)] = 1.0;
    // Process states in order of total events a + s.
    for (long t = 0; t < 2 * n; ++t)
        for (long s = 0; s <= n && s <= t; ++s) {
            const long a = t - s;
            if (a > n || a < s)
                continue;
            for (long j = 0; j <= jmax; ++j) {
                for (int pl = 0; pl < 2; ++pl) {
                    const double v = w[idx(j, a, s, pl)];
                    if (v == 0.0)
                        continue;
                    if (s == n)
                        continue;
                    if (!pl) {
                        const long na = a + 1;
                        const long need = j == 0 ? x1 : resume;
                        const bool start = na - s >= need || na == n;
                        w[idx(j, na, s, start ? 1 : 0)] += v;
                        continue;
                    }
                    const bool race = a < n;
                    if (race)
                        w[idx(j, a + 1, s, 1)] += v * p;
                    const double dv = race ? v * q : v;
                    const long ns = s + 1;
                    if (a - ns == 0 && ns < n) {
                        if (j + 1 <= jmax)
                            w[idx(j + 1, a, ns, 0)] += dv;
                    } else {
                        w[idx(j, a, ns, 1)] += dv;
                    }
                }
            }
        }
    for (long j = 0; j <= jmax; ++j)
        out[static_cast<std::size_t>(j)] = w[idx(j, n, n, 1)];
    return out;
}

} // namespace oracle
