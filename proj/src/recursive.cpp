#include "bufstarv/recursive.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace bufstarv::recursive {

namespace {

void require_kernel_covers(const DepartureKernel& kernel, Count file_size)
{
    if (kernel.max_population() < file_size)
        throw ParameterError("departure kernel must cover populations up to N");
}

void require_scenario(Count file_size, Count threshold)
{
    (void)ScenarioSpec(file_size, threshold);
}

// One arrival step out of a state in which playback is running:
// sum_{k=0}^{i} b(k) prev(i+1-k) + Q_{i+1}(i+1) prev(0).
double step(const DepartureKernel& kernel, const Vector<double>& prev, Count i)
{
    const auto& body = kernel.body();
    double acc = 0.0;
    for (Count k = 0; k <= i; ++k)
        acc += body(k) * prev(i + 1 - k);
    return acc + kernel.boundary()(i + 1) * prev(0);
}

} // namespace

DepartureKernel::DepartureKernel(KernelVariant variant, Vector<double> body, Vector<double> boundary)
    : variant_(variant)
    , body_(std::move(body))
    , boundary_(std::move(boundary))
{
    if (boundary_.size() < 2 || body_.size() != boundary_.size())
        throw ParameterError("departure kernel needs body and boundary terms for populations 0..i_max");
}

DepartureKernel mm1_kernel(const QueueParams& params, Count i_max)
{
    if (i_max < 1)
        throw ParameterError("kernel population bound must be at least 1");
    const double p = params.p();
    const double q = params.q();
    Vector<double> body(i_max + 1);
    Vector<double> boundary(i_max + 1);
    for (Count k = 0; k <= i_max; ++k) {
        const double qk = std::pow(q, static_cast<double>(k));
        body(k) = p * qk;
        boundary(k) = qk;
    }
    return DepartureKernel(KernelVariant::Mm1, std::move(body), std::move(boundary));
}

IppCoefficients ipp_coefficients(const QueueParams& params, const IppParams& ipp)
{
    const double lambda = params.lambda();
    const double mu = params.mu();
    const double alpha = ipp.alpha;
    const double beta = ipp.beta;
    const double s = lambda + alpha + beta;
    const double disc = s * s - 4.0 * lambda * beta;
    if (!(disc >= 0.0))
        throw DomainError("IPP kernel discriminant is negative");
    const double root = std::sqrt(disc);
    IppCoefficients c{};
    c.discriminant = disc;
    c.a1 = 1.0 + s / (2.0 * mu) + root / (2.0 * mu);
    c.a2 = 1.0 + s / (2.0 * mu) - root / (2.0 * mu);
    c.c1 = (lambda * (beta + mu) - lambda * mu * c.a1) / (c.a1 * (c.a2 - c.a1));
    c.c2 = (lambda * (beta + mu) - lambda * mu * c.a2) / (c.a2 * (c.a1 - c.a2));
    return c;
}

DepartureKernel ipp_kernel(const QueueParams& params, const IppParams& ipp, Count i_max)
{
    if (i_max < 1)
        throw ParameterError("kernel population bound must be at least 1");
    const IppCoefficients c = ipp_coefficients(params, ipp);
    const double r1 = 1.0 / c.a1;
    const double r2 = 1.0 / c.a2;
    Vector<double> body(i_max + 1);
    Vector<double> boundary(i_max + 1);
    for (Count k = 0; k <= i_max; ++k) {
        const double t1 = c.c1 * std::pow(r1, static_cast<double>(k));
        const double t2 = c.c2 * std::pow(r2, static_cast<double>(k));
        body(k) = t1 + t2;
        boundary(k) = t1 / (1.0 - r1) + t2 / (1.0 - r2);
    }
    return DepartureKernel(KernelVariant::IppOn, std::move(body), std::move(boundary));
}

DenseMatrix<double> starvation_table(const DepartureKernel& kernel, Count file_size)
{
    if (file_size < 1)
        throw ParameterError("file size N must be at least 1");
    require_kernel_covers(kernel, file_size);
    const Count n_max = file_size;
    DenseMatrix<double> table = DenseMatrix<double>::Zero(n_max + 1, n_max + 1);
    for (Count n = 1; n <= n_max; ++n)
        table(0, n) = 1.0;
    // P_i(1) = 0 for i >= 1 is already in place.
    Vector<double> prev(n_max + 1);
    for (Count n = 2; n <= n_max; ++n) {
        prev = table.col(n - 1);
        for (Count i = 1; i + n <= n_max; ++i)
            table(i, n) = step(kernel, prev, i);
    }
    return table;
}

double starvation_probability_recursive(const DepartureKernel& kernel, Count file_size, Count threshold)
{
    require_scenario(file_size, threshold);
    require_kernel_covers(kernel, file_size);
    const Count n_start = file_size - threshold + 1;
    if (n_start == 1)
        return 0.0;
    // P_i(n) is needed up to n = n_start - 1 only.
    const Count n_top = n_start - 1;
    Vector<double> prev = Vector<double>::Zero(file_size + 1);
    Vector<double> cur = Vector<double>::Zero(file_size + 1);
    prev(0) = 1.0;
    for (Count n = 2; n <= n_top; ++n) {
        cur.setZero();
        cur(0) = 1.0;
        for (Count i = 1; i + n <= file_size; ++i)
            cur(i) = step(kernel, prev, i);
        std::swap(prev, cur);
    }
    // The start state is a running state even when x1 = 1 sees 0 packets.
    return clamp_probability(step(kernel, prev, threshold - 1));
}

StarvationDistribution starvation_pmf_recursive(const DepartureKernel& kernel, Count file_size, Count threshold,
                                                Count j_max, RecursionOptions options)
{
    require_scenario(file_size, threshold);
    require_kernel_covers(kernel, file_size);
    const Count big_j = file_size / threshold;
    if (j_max < 0 || j_max > big_j)
        throw ParameterError("j_max must satisfy 0 <= j_max <= floor(N/x1)");
    const Count resume = options.resume_threshold.value_or(threshold);
    if (resume < 1 || resume > file_size)
        throw ParameterError("resume threshold must satisfy 1 <= R <= N");

    const Method method = kernel.variant() == KernelVariant::Mm1 ? Method::Recursive : Method::Ipp;
    Vector<double> pmf = Vector<double>::Zero(j_max + 1);
    const Count n_start = file_size - threshold + 1;
    if (n_start == 1) {
        pmf(0) = 1.0;
        return {pmf, method, big_j};
    }

    const Count n_top = n_start - 1;
    const Count seen_on_resume = resume - 1;
    // resumed[j](n): j further starvations from the packet that restarts
    // playback, seeing R-1 packets with n packets left.
    std::vector<Vector<double>> resumed(j_max + 1, Vector<double>::Zero(n_top + 1));

    Vector<double> prev(file_size + 1);
    Vector<double> cur(file_size + 1);
    for (Count j = 0; j <= j_max; ++j) {
        // Empty-system slot 0: a packet arriving to an empty buffer after a
        // starvation, that starvation already counted.
        auto after_starvation = [&](Count n) -> double {
            if (j == 0)
                return 0.0;
            if (n <= resume)
                return j == 1 ? 1.0 : 0.0;
            return resumed[j - 1](n - seen_on_resume);
        };

        prev.setZero();
        for (Count i = 1; i + 1 <= file_size; ++i)
            prev(i) = j == 0 ? 1.0 : 0.0;
        prev(0) = after_starvation(1);
        resumed[j](1) = j == 0 ? 1.0 : 0.0;

        for (Count n = 2; n <= n_top; ++n) {
            cur.setZero();
            for (Count i = 1; i + n <= file_size; ++i)
                cur(i) = step(kernel, prev, i);
            cur(0) = after_starvation(n);
            if (seen_on_resume == 0)
                resumed[j](n) = step(kernel, prev, 0);
            else if (seen_on_resume + n <= file_size)
                resumed[j](n) = cur(seen_on_resume);
            std::swap(prev, cur);
        }
        pmf(j) = clamp_probability(step(kernel, prev, threshold - 1));
    }
    return {pmf, method, big_j};
}

} // namespace bufstarv::recursive
