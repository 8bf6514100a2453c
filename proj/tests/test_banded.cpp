#include <doctest.h>

#include <random>

#include "bufstarv/banded_toeplitz.hpp"

using namespace bufstarv;

namespace {

Vector<double> random_generator(Count n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector<double> g(n);
    for (Count i = 0; i < n; ++i)
        g(i) = u(rng);
    return g;
}

} // namespace

TEST_CASE("banded product equals dense product")
{
    std::mt19937_64 rng(11);
    for (Count n = 1; n <= 64; ++n) {
        for (Count off_a = 1; off_a <= std::min<Count>(n, 4); ++off_a) {
            for (Count off_b = 1; off_b <= std::min<Count>(n, 4); ++off_b) {
                const Count fr_a = 1 + (n / 3);
                const Count fr_b = fr_a + off_a; // loosest compatible row start
                const Count ce_b = n + 1;
                const Count ce_a = ce_b - off_b;
                const BandedToeplitzMatrix<double> a(n, fr_a, ce_a, off_a, random_generator(n, rng));
                const BandedToeplitzMatrix<double> b(n, fr_b, ce_b, off_b, random_generator(n, rng));
                const DenseMatrix<double> want = a.to_dense() * b.to_dense();
                const DenseMatrix<double> got = (a * b).to_dense();
                CHECK((want - got).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + want.cwiseAbs().maxCoeff()));
            }
        }
    }
}

TEST_CASE("row vector times banded matrix equals dense")
{
    std::mt19937_64 rng(5);
    for (Count n : {1, 2, 9, 40}) {
        const BandedToeplitzMatrix<double> m(n, 2, n, 1, random_generator(n, rng));
        Vector<double> v = random_generator(n + 1, rng);
        v(0) = 0.0;
        const Vector<double> want = (v.transpose() * m.to_dense()).transpose();
        CHECK((row_times(v, m) - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("entries depend only on the offset")
{
    std::mt19937_64 rng(3);
    const Count n = 30;
    const BandedToeplitzMatrix<double> m(n, 4, 25, 3, random_generator(n, rng));
    for (Count r = 4; r <= n; ++r)
        for (Count c = 1; c < 25; ++c)
            if (m.on_band(r, c) && m.on_band(r + 1, c + 1))
                CHECK(m(r, c) == m(r + 1, c + 1));
}

TEST_CASE("masked rows and columns are zero")
{
    std::mt19937_64 rng(9);
    const Count n = 20;
    const BandedToeplitzMatrix<double> m(n, 6, 15, 2, random_generator(n, rng));
    const DenseMatrix<double> d = m.to_dense();
    for (Count r = 0; r <= n; ++r)
        for (Count c = 0; c <= n; ++c)
            if (r < 6 || c >= 15 || c - r < 2)
                CHECK(d(r, c) == 0.0);
    CHECK(d.row(0).isZero());
    CHECK(d.col(0).isZero());
}

TEST_CASE("incompatible masks are rejected")
{
    const Vector<double> g = Vector<double>::Ones(10);
    const BandedToeplitzMatrix<double> a(10, 1, 11, 1, g);
    const BandedToeplitzMatrix<double> b(10, 5, 11, 1, g);
    CHECK_THROWS_AS(a * b, ParameterError);
    CHECK_THROWS_AS(BandedToeplitzMatrix<double>(10, 1, 11, 1, Vector<double>::Ones(9)), ParameterError);
}
