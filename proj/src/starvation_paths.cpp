#include "bufstarv/starvation_paths.hpp"

#include <string>

namespace bufstarv::paths {

namespace {

void check_generator(const Vector<double>& g, Count n, Count x1)
{
    if (x1 < 1 || x1 > n)
        throw ParameterError("threshold x1 must satisfy 1 <= x1 <= N");
    if (g.size() != n)
        throw ParameterError("emptying generator must have N entries");
}

// cumulative(M) = sum_{m=x1}^{M} g(m), for M in 0..N-1.
Vector<double> cumulative(const Vector<double>& g, Count n, Count x1)
{
    Vector<double> c = Vector<double>::Zero(n);
    CompensatedSum acc;
    for (Count m = 0; m < n; ++m) {
        if (m >= x1)
            acc += g(m);
        c(m) = acc.value();
    }
    return c;
}

Vector<double> last_event_from_cumulative(const Vector<double>& cum, Count n, Count x1, Count j)
{
    Vector<double> u = Vector<double>::Zero(n + 1);
    for (Count k = j * x1; k < n; ++k) {
        if (k >= n - x1)
            u(k) = 1.0;
        else
            u(k) = clamp_probability(1.0 - cum(n - k - 1));
    }
    return u;
}

} // namespace

double starvation_probability(const Vector<double>& g, Count file_size, Count threshold)
{
    check_generator(g, file_size, threshold);
    CompensatedSum acc;
    for (Count k = threshold; k < file_size; ++k)
        acc += g(k);
    return clamp_probability(acc.value());
}

Vector<double> first_event_vector(const Vector<double>& g, Count file_size, Count threshold)
{
    check_generator(g, file_size, threshold);
    Vector<double> e = Vector<double>::Zero(file_size + 1);
    for (Count k = threshold; k < file_size; ++k)
        e(k) = g(k);
    return e;
}

Vector<double> last_event_vector(const Vector<double>& g, Count file_size, Count threshold, Count j)
{
    check_generator(g, file_size, threshold);
    if (j < 1 || j > file_size / threshold)
        throw ParameterError("starvation index j must satisfy 1 <= j <= floor(N/x1)");
    return last_event_from_cumulative(cumulative(g, file_size, threshold), file_size, threshold, j);
}

BandedToeplitzMatrix<double> transition_matrix(const Vector<double>& g, Count file_size, Count threshold, Count j,
                                               Count l)
{
    check_generator(g, file_size, threshold);
    if (j < 2 || j > file_size / threshold)
        throw ParameterError("transition matrices exist only for 2 <= j <= floor(N/x1)");
    if (l < 1 || l > j - 1)
        throw ParameterError("transition level l must satisfy 1 <= l <= j-1");
    // k_l >= l x1 and k_l + x1 <= k_{l+1} < N - (j-l-1) x1.
    return BandedToeplitzMatrix<double>(file_size, l * threshold, file_size - (j - l - 1) * threshold, threshold, g);
}

Vector<double> assemble_pmf(const Vector<double>& g, Count file_size, Count threshold, Count j_max)
{
    check_generator(g, file_size, threshold);
    const Count n = file_size;
    const Count x1 = threshold;
    if (j_max < 0 || j_max > n / x1)
        throw ParameterError("j_max must satisfy 0 <= j_max <= floor(N/x1)");

    Vector<double> pmf = Vector<double>::Zero(j_max + 1);
    const Vector<double> cum = cumulative(g, n, x1);
    pmf(0) = clamp_probability(1.0 - (n - 1 >= 0 ? cum(n - 1) : 0.0));

    Vector<double> reach = first_event_vector(g, n, x1);
    for (Count j = 1; j <= j_max; ++j) {
        const Vector<double> u = last_event_from_cumulative(cum, n, x1, j);
        CompensatedSum acc;
        for (Count k = j * x1; k < n; ++k)
            acc += reach(k) * u(k);
        pmf(j) = clamp_probability(acc.value());
        if (j < j_max) {
            // Level-j transition with the loosest column mask; the tighter
            // masks for larger totals are implied by the later levels.
            const BandedToeplitzMatrix<double> s(n, j * x1, n, x1, g);
            reach = row_times(reach, s);
        }
    }
    return pmf;
}

} // namespace bufstarv::paths
