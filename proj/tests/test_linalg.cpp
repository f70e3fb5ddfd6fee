#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rigidlab/linalg.hpp"
#include "rigidlab/scalar.hpp"

using namespace rigidlab;

namespace {

Matrix rational_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int rank_cap = -1) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    auto draw = [&] {
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = Scalar::exact(num(rng), den(rng));
        return m;
    };
    if (rank_cap < 0) return draw();
    // Product of rows x k and k x cols factors caps the rank at k.
    const auto k = static_cast<std::size_t>(rank_cap);
    Matrix left(rows, k), right(k, cols), out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < k; ++c) left(r, c) = Scalar::exact(num(rng), den(rng));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < cols; ++c) right(r, c) = Scalar::exact(num(rng), den(rng));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            Scalar s(0);
            for (std::size_t t = 0; t < k; ++t) s += left(r, t) * right(t, c);
            out(r, c) = s;
        }
    return out;
}

oracle::QMatrix to_q(const Matrix& m) {
    oracle::QMatrix q(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) q[r][c] = m(r, c).rational();
    return q;
}

Matrix to_floating(const Matrix& m) {
    Matrix f(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) f(r, c) = Scalar::real(m(r, c).value());
    return f;
}

}  // namespace

TEST(Scalar, ExactArithmeticStaysExact) {
    const Scalar a = Scalar::exact(1, 3), b = Scalar::exact(1, 6);
    EXPECT_TRUE((a + b).is_exact());
    EXPECT_EQ((a + b).rational(), mpq_class(1, 2));
    EXPECT_EQ((a / b).rational(), mpq_class(2));
    EXPECT_FALSE((a + Scalar::real(0.5)).is_exact());
    EXPECT_THROW((void)Scalar::real(0.5).rational(), ArithmeticModeError);
}

TEST(Scalar, ParseRationalForms) {
    EXPECT_EQ(parse_rational("3/4").rational(), mpq_class(3, 4));
    EXPECT_EQ(parse_rational("-7").rational(), mpq_class(-7));
    EXPECT_EQ(parse_rational("1.25").rational(), mpq_class(5, 4));
    EXPECT_EQ(parse_rational("2.5e-1").rational(), mpq_class(1, 4));
    EXPECT_THROW(parse_rational("abc"), ParseError);
    EXPECT_THROW(parse_rational("1/0"), ParseError);
}

TEST(Scalar, DivisionByZeroIsRejected) {
    EXPECT_THROW(Scalar::exact(1, 2) / Scalar(0), InvalidInputError);
}

TEST(Rank, SmallExamplesBothModes) {
    for (const auto& policy : {RankPolicy::exact(), RankPolicy::floating()}) {
        EXPECT_EQ(rank(Matrix::identity(3), policy), 3u);
        EXPECT_EQ(rank(Matrix::from_rows({{1, 2}, {2, 4}}, 2), policy), 1u);
        EXPECT_EQ(rank(Matrix(2, 3), policy), 0u);
    }
}

TEST(Rank, EmptyMatrix) {
    EXPECT_EQ(rank(Matrix(0, 4), RankPolicy::exact()), 0u);
    EXPECT_EQ(rank(Matrix(0, 4), RankPolicy::floating()), 0u);
    EXPECT_EQ(kernel_basis(Matrix(0, 3), RankPolicy::exact()).size(), 3u);
}

TEST(Rank, ExactModeRejectsFloatingEntries) {
    Matrix m = Matrix::identity(2);
    m(0, 1) = Scalar::real(0.5);
    EXPECT_THROW(rank(m, RankPolicy::exact()), ArithmeticModeError);
}

TEST(Rank, InvalidPolicyIsRejected) {
    EXPECT_THROW(rank(Matrix::identity(2), RankPolicy::floating(-1.0)), InvalidInputError);
    EXPECT_THROW(parse_mode("quantum"), InvalidInputError);
}

TEST(Kernel, SmallExamples) {
    const auto k = kernel_basis(Matrix::from_rows({{1, 1}}, 2), RankPolicy::exact());
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0][0].rational(), -k[0][1].rational());
    EXPECT_TRUE(kernel_basis(Matrix::identity(3), RankPolicy::exact()).empty());
    EXPECT_TRUE(left_kernel_basis(Matrix::identity(3), RankPolicy::floating()).empty());

    const auto lk = left_kernel_basis(Matrix::from_rows({{1}, {1}}, 1), RankPolicy::floating());
    ASSERT_EQ(lk.size(), 1u);
    EXPECT_NEAR(lk[0][0].value(), -lk[0][1].value(), 1e-12);
}

TEST(RankProperty, AgreesWithOracleAndTranspose) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> size(1, 7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = static_cast<std::size_t>(size(rng)), cols = static_cast<std::size_t>(size(rng));
        const int cap = trial % 2 ? static_cast<int>(std::min(rows, cols)) / 2 : -1;
        const Matrix m = rational_matrix(rows, cols, rng, cap == 0 ? -1 : cap);
        const std::size_t expected = oracle::rank(to_q(m));
        EXPECT_EQ(rank(m, RankPolicy::exact()), expected);
        EXPECT_EQ(rank(m.transpose(), RankPolicy::exact()), expected);
        EXPECT_EQ(rank(to_floating(m), RankPolicy::floating()), expected);
        EXPECT_EQ(rank(m, RankPolicy::exact()) + nullity(m, RankPolicy::exact()), cols);
    }
}

TEST(KernelProperty, BasisVectorsAnnihilateAndAreIndependent) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix m = rational_matrix(4, 7, rng, 1 + trial % 4);
        const auto exact = kernel_basis(m, RankPolicy::exact());
        for (const auto& v : exact) EXPECT_TRUE(is_zero_vector(multiply(m, v)));
        EXPECT_EQ(rank(Matrix::from_rows(exact, 7), RankPolicy::exact()), exact.size());

        const Matrix f = to_floating(m);
        const auto floating = kernel_basis(f, RankPolicy::floating());
        EXPECT_EQ(floating.size(), exact.size());
        for (const auto& v : floating) EXPECT_LE(relative_residual(f, v), 1e-12);

        for (const auto& w : left_kernel_basis(m, RankPolicy::exact()))
            EXPECT_TRUE(is_zero_vector(multiply(m.transpose(), w)));
    }
}

TEST(Rank, ToleranceControlsNumericalRank) {
    const Matrix m = Matrix::from_rows({{Scalar::real(1.0), Scalar::real(0.0)}, {Scalar::real(0.0), Scalar::real(1e-12)}}, 2);
    EXPECT_EQ(rank(m, RankPolicy::floating(1e-9)), 1u);
    EXPECT_EQ(rank(m, RankPolicy::floating(1e-14)), 2u);
}
