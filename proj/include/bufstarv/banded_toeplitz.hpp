#pragma once

#include <algorithm>

#include "bufstarv/core.hpp"

namespace bufstarv {

/// Upper-triangular N x N matrix over packet indices 1..N whose non-zero
/// entries depend only on the offset c - r:
///
///     M(r, c) = g[c - r]   if r >= first_row, c < column_end, c - r >= min_offset
///     M(r, c) = 0          otherwise
///
/// This is the structure of the transition between consecutive starvations:
/// the probability of going from an empty buffer after packet r to the next
/// empty buffer after packet c depends only on c - r. Only the generator is
/// stored, so products cost O(N^2) instead of O(N^3).
template <typename Scalar>
class BandedToeplitzMatrix {
public:
    using Generator = Vector<Scalar>;

    /// `generator` has size n; entries below `min_offset` are ignored.
    BandedToeplitzMatrix(Count n, Count first_row, Count column_end, Count min_offset, Generator generator)
        : n_(n)
        , first_row_(std::max<Count>(first_row, 1))
        , column_end_(std::min<Count>(column_end, n + 1))
        , min_offset_(std::max<Count>(min_offset, 1))
        , g_(std::move(generator))
    {
        if (n_ < 1)
            throw ParameterError("banded matrix dimension must be positive");
        if (g_.size() != n_)
            throw ParameterError("banded matrix generator must have one entry per offset 0..N-1");
        for (Count d = 0; d < std::min(min_offset_, n_); ++d)
            g_(d) = Scalar(0);
    }

    Count size() const noexcept { return n_; }
    Count first_row() const noexcept { return first_row_; }
    Count column_end() const noexcept { return column_end_; }
    Count min_offset() const noexcept { return min_offset_; }
    const Generator& generator() const noexcept { return g_; }

    bool on_band(Count r, Count c) const noexcept
    {
        return r >= first_row_ && r <= n_ && c < column_end_ && c >= 1 && c - r >= min_offset_;
    }

    Scalar operator()(Count r, Count c) const
    {
        return on_band(r, c) ? g_(c - r) : Scalar(0);
    }

    /// (N+1) x (N+1) dense copy with an unused zero row/column 0, so that
    /// dense(r, c) == (*this)(r, c) for packet indices. Intended for tests
    /// and small N only.
    DenseMatrix<Scalar> to_dense() const
    {
        DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n_ + 1, n_ + 1);
        for (Count r = first_row_; r <= n_; ++r)
            for (Count c = r + min_offset_; c < column_end_; ++c)
                m(r, c) = g_(c - r);
        return m;
    }

private:
    Count n_;
    Count first_row_;
    Count column_end_;
    Count min_offset_;
    Generator g_;
};

/// Product of two banded Toeplitz matrices. The result is again banded
/// Toeplitz: its generator is the convolution of the two generators.
///
/// Valid when the masks of the factors are implied by the band of the
/// product (always the case for consecutive inter-starvation matrices);
/// otherwise throws ParameterError.
template <typename Scalar>
BandedToeplitzMatrix<Scalar> operator*(const BandedToeplitzMatrix<Scalar>& a, const BandedToeplitzMatrix<Scalar>& b)
{
    if (a.size() != b.size())
        throw ParameterError("banded matrix dimensions differ");
    if (b.first_row() > a.first_row() + a.min_offset() || b.column_end() - b.min_offset() > a.column_end())
        throw ParameterError("banded matrix masks are not compatible with a Toeplitz product");

    const Count n = a.size();
    const Count lo = a.min_offset() + b.min_offset();
    Vector<Scalar> h = Vector<Scalar>::Zero(n);
    const auto& ga = a.generator();
    const auto& gb = b.generator();
    for (Count d = lo; d < n; ++d) {
        Scalar acc(0);
        for (Count s = a.min_offset(); s <= d - b.min_offset(); ++s)
            acc += ga(s) * gb(d - s);
        h(d) = acc;
    }
    return BandedToeplitzMatrix<Scalar>(n, a.first_row(), b.column_end(), lo, std::move(h));
}

/// Row vector times banded matrix: out(c) = sum_r v(r) M(r, c). `v` is indexed
/// by packet 0..N (entry 0 unused). O(N^2).
template <typename Scalar, typename Derived>
Vector<Scalar> row_times(const Eigen::MatrixBase<Derived>& v, const BandedToeplitzMatrix<Scalar>& m)
{
    const Count n = m.size();
    if (v.size() != n + 1)
        throw ParameterError("row vector must have N+1 entries");
    const auto& g = m.generator();
    Vector<Scalar> out = Vector<Scalar>::Zero(n + 1);
    for (Count c = 1; c < m.column_end(); ++c) {
        Scalar acc(0);
        const Count r_end = c - m.min_offset();
        for (Count r = m.first_row(); r <= r_end; ++r)
            acc += v(r) * g(c - r);
        out(c) = acc;
    }
    return out;
}

} // namespace bufstarv
