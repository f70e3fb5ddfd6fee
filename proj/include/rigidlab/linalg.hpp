#ifndef RIGIDLAB_LINALG_HPP
#define RIGIDLAB_LINALG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "rigidlab/errors.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

enum class ArithmeticMode { exact_rational, floating };

inline std::string to_string(ArithmeticMode mode) {
    return mode == ArithmeticMode::exact_rational ? "exact-rational" : "floating";
}

inline ArithmeticMode parse_mode(const std::string& text) {
    if (text == "exact" || text == "exact-rational") return ArithmeticMode::exact_rational;
    if (text == "floating" || text == "float") return ArithmeticMode::floating;
    throw InvalidInputError("unknown arithmetic mode '" + text + "'");
}

/// Governs every dimension decision. In floating mode a singular value counts
/// toward the rank when it exceeds rel_tol times the largest singular value.
struct RankPolicy {
    ArithmeticMode mode = ArithmeticMode::floating;
    double rel_tol = 1e-9;
    std::uint64_t seed = 0;

    static RankPolicy exact(std::uint64_t seed = 0) {
        return {ArithmeticMode::exact_rational, 1e-9, seed};
    }
    static RankPolicy floating(double rel_tol = 1e-9, std::uint64_t seed = 0) {
        return {ArithmeticMode::floating, rel_tol, seed};
    }

    bool is_exact() const noexcept { return mode == ArithmeticMode::exact_rational; }

    void validate() const {
        if (mode == ArithmeticMode::floating && !(rel_tol > 0.0))
            throw InvalidInputError("floating mode requires rel_tol > 0");
    }
};

namespace detail {

inline void require_exact(const Matrix& m) {
    if (!m.is_exact())
        throw ArithmeticModeError("exact-rational mode requested on a matrix with floating entries");
}

/// Rows of m scaled by the lcm of their denominators.
inline std::vector<std::vector<mpz_class>> integer_rows(const Matrix& m) {
    std::vector<std::vector<mpz_class>> rows(m.rows(), std::vector<mpz_class>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        mpz_class lcm = 1;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const mpq_class& q = m(r, c).rational();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const mpq_class& q = m(r, c).rational();
            rows[r][c] = q.get_num() * (lcm / q.get_den());
        }
    }
    return rows;
}

/// Fraction-free (Bareiss) elimination; intermediate entries stay minors of the input.
inline std::size_t exact_rank(const Matrix& m) {
    auto a = integer_rows(m);
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t rank = 0;
    mpz_class previous = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                mpz_class v = a[rank][col] * a[r][c] - a[r][col] * a[rank][c];
                mpz_divexact(a[r][c].get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
            }
            a[r][col] = 0;
        }
        previous = a[rank][col];
        ++rank;
    }
    return rank;
}

/// Kernel of m from its reduced row echelon form: one vector per free column.
inline std::vector<Vector> exact_kernel(const Matrix& m) {
    const auto ints = integer_rows(m);
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = ints[r][c];

    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && sgn(a[pivot][col]) == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        const mpq_class inv = 1 / a[rank][col];
        for (std::size_t c = col; c < cols; ++c) a[rank][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || sgn(a[r][col]) == 0) continue;
            const mpq_class factor = a[r][col];
            for (std::size_t c = col; c < cols; ++c)
                if (sgn(a[rank][c]) != 0) a[r][c] -= factor * a[rank][c];
        }
        pivot_cols.push_back(col);
        ++rank;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols, Scalar(0));
        v[free] = Scalar(1);
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            v[pivot_cols[i]] = Scalar::exact(mpq_class(-a[i][free]));
        basis.push_back(std::move(v));
    }
    return basis;
}

struct FloatingDecomposition {
    std::size_t rank = 0;
    Eigen::MatrixXd right;  // full V
};

inline FloatingDecomposition floating_svd(const Matrix& m, double rel_tol, bool want_vectors) {
    FloatingDecomposition out;
    const auto cols = static_cast<Eigen::Index>(m.cols());
    if (m.rows() == 0 || m.cols() == 0) {
        out.right = Eigen::MatrixXd::Identity(cols, cols);
        return out;
    }
    const Eigen::MatrixXd a = m.to_eigen();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd;
    if (want_vectors)
        svd.compute(a, Eigen::ComputeFullV);
    else
        svd.compute(a);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    if (largest > 0.0)
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > rel_tol * largest) ++out.rank;
    if (want_vectors) out.right = svd.matrixV();
    return out;
}

}  // namespace detail

/// Rank over the rationals in exact mode; singular-value count above the
/// relative cutoff in floating mode.
inline std::size_t rank(const Matrix& m, const RankPolicy& policy) {
    policy.validate();
    if (policy.is_exact()) {
        detail::require_exact(m);
        return detail::exact_rank(m);
    }
    return detail::floating_svd(m, policy.rel_tol, false).rank;
}

inline std::size_t nullity(const Matrix& m, const RankPolicy& policy) {
    return m.cols() - rank(m, policy);
}

/// Basis of {v : m v = 0}. Exact-mode vectors are unnormalized rationals;
/// floating-mode vectors are orthonormal right singular vectors.
inline std::vector<Vector> kernel_basis(const Matrix& m, const RankPolicy& policy) {
    policy.validate();
    if (policy.is_exact()) {
        detail::require_exact(m);
        return detail::exact_kernel(m);
    }
    const auto dec = detail::floating_svd(m, policy.rel_tol, true);
    std::vector<Vector> basis;
    for (auto c = static_cast<Eigen::Index>(dec.rank); c < dec.right.cols(); ++c) {
        Vector v;
        v.reserve(m.cols());
        for (Eigen::Index r = 0; r < dec.right.rows(); ++r) v.push_back(Scalar::real(dec.right(r, c)));
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::vector<Vector> left_kernel_basis(const Matrix& m, const RankPolicy& policy) {
    return kernel_basis(m.transpose(), policy);
}

}  // namespace rigidlab

#endif  // RIGIDLAB_LINALG_HPP
