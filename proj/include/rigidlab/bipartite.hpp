#ifndef RIGIDLAB_BIPARTITE_HPP
#define RIGIDLAB_BIPARTITE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rigidlab/errors.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/linalg.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

/// A realization of K_{m,n}: side A holds m points, side B holds n points.
struct BipartiteRealization {
    std::size_t dim = 0;
    std::vector<Point> A;
    std::vector<Point> B;

    std::size_t m() const noexcept { return A.size(); }
    std::size_t n() const noexcept { return B.size(); }

    void validate() const {
        if (dim < 1) throw InvalidInputError("bipartite realization dimension must be >= 1");
        if (A.empty() || B.empty()) throw InvalidInputError("both sides of K_{m,n} need at least one point");
        for (const auto* side : {&A, &B})
            for (const auto& p : *side)
                if (p.size() != dim) throw InvalidInputError("point with wrong number of coordinates");
    }

    /// A followed by B.
    std::vector<Point> vertices() const {
        std::vector<Point> all = A;
        all.insert(all.end(), B.begin(), B.end());
        return all;
    }

    Framework to_framework() const {
        validate();
        return Framework(Graph::complete_bipartite(m(), n()), Realization{dim, vertices()});
    }
};

struct Subspace {
    std::vector<Vector> basis;
    std::size_t dimension = 0;
};

/// Affine dependencies: kernel of the (d+1) x k matrix of coordinates over a row of ones.
inline Matrix affine_dependency_matrix(const std::vector<Point>& points, std::size_t dim) {
    Matrix m(dim + 1, points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t t = 0; t < dim; ++t) m(t, i) = points[i][t];
        m(dim, i) = Scalar(1);
    }
    return m;
}

inline Subspace affine_dependency_space(const std::vector<Point>& points, std::size_t dim, const RankPolicy& policy) {
    if (points.empty()) throw InvalidInputError("affine dependencies need at least one point");
    Subspace s;
    s.basis = kernel_basis(affine_dependency_matrix(points, dim), policy);
    s.dimension = s.basis.size();
    return s;
}

inline std::size_t affine_dependency_dim(const std::vector<Point>& points, std::size_t dim, const RankPolicy& policy) {
    if (points.empty()) throw InvalidInputError("affine dependencies need at least one point");
    return nullity(affine_dependency_matrix(points, dim), policy);
}

/// Appending p to hull does not raise the affine span dimension.
inline bool in_affine_hull(const Point& p, const std::vector<Point>& hull, std::size_t dim, const RankPolicy& policy) {
    std::vector<Point> extended = hull;
    extended.push_back(p);
    return affine_span_dim(extended, dim, policy) == affine_span_dim(hull, dim, policy);
}

/// (A ∩ hull(B), B ∩ hull(A)), each part in input order.
inline std::vector<Point> boundary_set(const BipartiteRealization& br, const RankPolicy& policy) {
    br.validate();
    std::vector<Point> c;
    for (const auto& a : br.A)
        if (in_affine_hull(a, br.B, br.dim, policy)) c.push_back(a);
    for (const auto& b : br.B)
        if (in_affine_hull(b, br.A, br.dim, policy)) c.push_back(b);
    return c;
}

inline std::size_t quadric_coefficient_count(std::size_t dim) { return dim * (dim + 3) / 2 + 1; }

/// Monomials x_i x_j (i <= j, lexicographic), then x_i, then 1.
template <class T>
std::vector<T> quadric_monomials(const std::vector<T>& x) {
    std::vector<T> out;
    out.reserve(quadric_coefficient_count(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i; j < x.size(); ++j) out.push_back(x[i] * x[j]);
    for (const auto& xi : x) out.push_back(xi);
    out.push_back(T(1));
    return out;
}

inline double evaluate_quadric(const std::vector<double>& coefficients, const std::vector<double>& x) {
    const auto mono = quadric_monomials(x);
    if (mono.size() != coefficients.size()) throw MismatchError("quadric coefficient count does not match dimension");
    double acc = 0.0;
    for (std::size_t i = 0; i < mono.size(); ++i) acc += coefficients[i] * mono[i];
    return acc;
}

inline Matrix quadric_evaluation_matrix(const std::vector<Point>& points, std::size_t dim) {
    Matrix m(points.size(), quadric_coefficient_count(dim));
    for (std::size_t r = 0; r < points.size(); ++r) {
        if (points[r].size() != dim) throw InvalidInputError("point with wrong number of coordinates");
        const auto mono = quadric_monomials(points[r]);
        for (std::size_t c = 0; c < mono.size(); ++c) m(r, c) = mono[c];
    }
    return m;
}

/// Q(C): quadratic polynomials vanishing at every point, as coefficient vectors.
inline Subspace quadric_space(const std::vector<Point>& points, std::size_t dim, const RankPolicy& policy) {
    Subspace s;
    s.basis = kernel_basis(quadric_evaluation_matrix(points, dim), policy);
    s.dimension = s.basis.size();
    return s;
}

inline std::size_t quadric_space_dim(const std::vector<Point>& points, std::size_t dim, const RankPolicy& policy) {
    return nullity(quadric_evaluation_matrix(points, dim), policy);
}

struct StressSpace {
    std::vector<Matrix> stresses;  // m x n tables, entry (i, j) weights edge a_i b_j
    std::size_t dimension = 0;
};

inline StressSpace stress_space_direct(const BipartiteRealization& br, const RankPolicy& policy) {
    const auto basis = left_kernel_basis(rigidity_matrix(br.to_framework()), policy);
    StressSpace s;
    for (const auto& v : basis) s.stresses.emplace_back(br.m(), br.n(), v);
    s.dimension = basis.size();
    return s;
}

inline std::size_t stress_space_dim(const BipartiteRealization& br, const RankPolicy& policy) {
    const Matrix rm = rigidity_matrix(br.to_framework());
    return rm.rows() - rank(rm, policy);
}

/// Largest coordinate of sum_j w_ij (a_i - b_j) and sum_i w_ij (b_j - a_i).
inline double stress_balance_residual(const BipartiteRealization& br, const Matrix& w) {
    double worst = 0.0;
    for (std::size_t i = 0; i < br.m(); ++i)
        for (std::size_t t = 0; t < br.dim; ++t) {
            Scalar acc(0);
            for (std::size_t j = 0; j < br.n(); ++j) acc += w(i, j) * (br.A[i][t] - br.B[j][t]);
            worst = std::max(worst, std::abs(acc.value()));
        }
    for (std::size_t j = 0; j < br.n(); ++j)
        for (std::size_t t = 0; t < br.dim; ++t) {
            Scalar acc(0);
            for (std::size_t i = 0; i < br.m(); ++i) acc += w(i, j) * (br.B[j][t] - br.A[i][t]);
            worst = std::max(worst, std::abs(acc.value()));
        }
    return worst;
}

/// True when both balance equations hold with exact zero residual.
inline bool stress_balanced_exactly(const BipartiteRealization& br, const Matrix& w) {
    for (std::size_t i = 0; i < br.m(); ++i)
        for (std::size_t t = 0; t < br.dim; ++t) {
            Scalar acc(0);
            for (std::size_t j = 0; j < br.n(); ++j) acc += w(i, j) * (br.A[i][t] - br.B[j][t]);
            if (!acc.is_exact() || !acc.is_zero()) return false;
        }
    for (std::size_t j = 0; j < br.n(); ++j)
        for (std::size_t t = 0; t < br.dim; ++t) {
            Scalar acc(0);
            for (std::size_t i = 0; i < br.m(); ++i) acc += w(i, j) * (br.B[j][t] - br.A[i][t]);
            if (!acc.is_exact() || !acc.is_zero()) return false;
        }
    return true;
}

enum class Classification { infinitesimally_rigid, vertices_on_quadric, C_not_spanning };

inline std::string to_string(Classification c) {
    switch (c) {
        case Classification::infinitesimally_rigid: return "infinitesimally_rigid";
        case Classification::vertices_on_quadric: return "vertices_on_quadric";
        case Classification::C_not_spanning: return "C_not_spanning";
    }
    return "unknown";
}

struct BolkerRothReport {
    std::size_t dimDA = 0;
    std::size_t dimDB = 0;
    std::vector<Point> C_points;
    std::size_t k = 0;
    std::size_t dimC_span = 0;
    std::size_t dimQC = 0;
    std::optional<long> dim_omega_formula;  // absent when C does not span
    std::size_t dim_omega_direct = 0;
    long kernel_dim_via_stress = 0;
    std::size_t kernel_dim_direct = 0;
    std::size_t trivial_dim = 0;
    Classification classification = Classification::C_not_spanning;

    bool formula_matches_direct() const {
        return dim_omega_formula && *dim_omega_formula == static_cast<long>(dim_omega_direct);
    }
};

/// dim D(A) dim D(B) + dim Q(C) + k - d(d+3)/2 - 1, from precomputed parts.
inline long bolker_roth_formula(std::size_t dimDA, std::size_t dimDB, std::size_t dimQC, std::size_t k,
                                std::size_t dim) {
    return static_cast<long>(dimDA * dimDB + dimQC + k) - static_cast<long>(quadric_coefficient_count(dim));
}

/// Stress-space dimension from the affine-dependency / boundary-quadric formula.
/// Refuses when the boundary set does not affinely span the ambient space.
inline long stress_space_dim_bolker_roth(const BipartiteRealization& br, const RankPolicy& policy) {
    const auto c = boundary_set(br, policy);
    if (affine_span_dim(c, br.dim, policy) < br.dim)
        throw HypothesisError("C_not_spanning", "the boundary set C does not affinely span R^d");
    return bolker_roth_formula(affine_dependency_dim(br.A, br.dim, policy), affine_dependency_dim(br.B, br.dim, policy),
                               quadric_space_dim(c, br.dim, policy), c.size(), br.dim);
}

/// dim ker R = dim Omega + (m+n)d - mn.
inline long kernel_dim_via_stress(const BipartiteRealization& br, const RankPolicy& policy) {
    const long omega = static_cast<long>(stress_space_dim(br, policy));
    return omega + static_cast<long>((br.m() + br.n()) * br.dim) - static_cast<long>(br.m() * br.n());
}

/// Computes every quantity of the bipartite analysis without enforcing
/// hypotheses; classification is C_not_spanning when the formula does not apply.
inline BolkerRothReport bolker_roth_report(const BipartiteRealization& br, const RankPolicy& policy) {
    br.validate();
    BolkerRothReport r;
    r.dimDA = affine_dependency_dim(br.A, br.dim, policy);
    r.dimDB = affine_dependency_dim(br.B, br.dim, policy);
    r.C_points = boundary_set(br, policy);
    r.k = r.C_points.size();
    r.dimC_span = affine_span_dim(r.C_points, br.dim, policy);
    r.dimQC = quadric_space_dim(r.C_points, br.dim, policy);

    const Framework f = br.to_framework();
    const Matrix rm = rigidity_matrix(f);
    const std::size_t rk = rank(rm, policy);
    r.dim_omega_direct = rm.rows() - rk;
    r.kernel_dim_direct = rm.cols() - rk;
    r.kernel_dim_via_stress = static_cast<long>(r.dim_omega_direct) + static_cast<long>((br.m() + br.n()) * br.dim) -
                              static_cast<long>(br.m() * br.n());
    r.trivial_dim = trivial_motion_space(f.realization(), policy).dimension;

    if (r.dimC_span == br.dim) {
        r.dim_omega_formula = bolker_roth_formula(r.dimDA, r.dimDB, r.dimQC, r.k, br.dim);
        r.classification = r.dimQC == 0 ? Classification::infinitesimally_rigid : Classification::vertices_on_quadric;
    }
    return r;
}

/// Quadric dichotomy for K_{m,n} with both sides affinely spanning R^d:
/// infinitesimally rigid exactly when no nonzero quadric vanishes on all vertices.
inline BolkerRothReport classify(const BipartiteRealization& br, const RankPolicy& policy) {
    br.validate();
    if (affine_span_dim(br.A, br.dim, policy) < br.dim || affine_span_dim(br.B, br.dim, policy) < br.dim)
        throw HypothesisError("side_not_spanning", "classification requires both sides to affinely span R^d");
    return bolker_roth_report(br, policy);
}

}  // namespace rigidlab

#endif  // RIGIDLAB_BIPARTITE_HPP
