#ifndef RIGIDLAB_FRAMEWORK_HPP
#define RIGIDLAB_FRAMEWORK_HPP

#include <algorithm>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rigidlab/errors.hpp"
#include "rigidlab/linalg.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph. The order of `edges` fixes the coordinate order of
/// the edge function and the row order of the rigidity matrix.
struct Graph {
    std::size_t vertex_count = 0;
    std::vector<Edge> edges;

    void validate() const {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto& e : edges) {
            if (e.i == e.j) throw InvalidInputError("graph has a loop at vertex " + std::to_string(e.i));
            if (e.i >= vertex_count || e.j >= vertex_count)
                throw InvalidInputError("edge endpoint out of range");
            if (!seen.insert(std::minmax(e.i, e.j)).second)
                throw InvalidInputError("duplicate edge {" + std::to_string(e.i) + "," + std::to_string(e.j) + "}");
        }
    }

    static Graph complete(std::size_t n) {
        Graph g{n, {}};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) g.edges.push_back({i, j});
        return g;
    }

    /// K_{m,n} on vertices a_0..a_{m-1}, b_0..b_{n-1}; edges a_i b_j in row-major (i, j) order.
    static Graph complete_bipartite(std::size_t m, std::size_t n) {
        Graph g{m + n, {}};
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) g.edges.push_back({i, m + j});
        return g;
    }

    friend bool operator==(const Graph&, const Graph&) = default;
};

struct Realization {
    std::size_t dim = 0;
    std::vector<Point> points;

    void validate() const {
        if (dim < 1) throw InvalidInputError("realization dimension must be >= 1");
        for (const auto& p : points)
            if (p.size() != dim) throw InvalidInputError("point with wrong number of coordinates");
    }

    bool is_exact() const {
        return std::all_of(points.begin(), points.end(), [](const Point& p) { return all_exact(p); });
    }
};

class Framework {
public:
    Framework(Graph graph, Realization realization)
        : graph_(std::move(graph)), realization_(std::move(realization)) {
        graph_.validate();
        realization_.validate();
        if (realization_.points.size() != graph_.vertex_count)
            throw MismatchError("realization has " + std::to_string(realization_.points.size()) +
                                " points but the graph has " + std::to_string(graph_.vertex_count) + " vertices");
    }

    const Graph& graph() const noexcept { return graph_; }
    const Realization& realization() const noexcept { return realization_; }
    std::size_t dim() const noexcept { return realization_.dim; }
    std::size_t vertex_count() const noexcept { return graph_.vertex_count; }
    const Point& point(std::size_t v) const { return realization_.points[v]; }

private:
    Graph graph_;
    Realization realization_;
};

/// Squared edge lengths in edge order.
inline Vector edge_function(const Framework& f) {
    Vector out;
    out.reserve(f.graph().edges.size());
    for (const auto& e : f.graph().edges) out.push_back(squared_distance(f.point(e.i), f.point(e.j)));
    return out;
}

/// Jacobian of the edge function: the row of edge {i,j} holds 2(p_i - p_j)
/// in the columns of vertex i and 2(p_j - p_i) in those of vertex j.
inline Matrix rigidity_matrix(const Framework& f) {
    const std::size_t d = f.dim();
    Matrix m(f.graph().edges.size(), d * f.vertex_count());
    for (std::size_t r = 0; r < f.graph().edges.size(); ++r) {
        const auto& e = f.graph().edges[r];
        const Point& pi = f.point(e.i);
        const Point& pj = f.point(e.j);
        for (std::size_t t = 0; t < d; ++t) {
            Scalar diff = pi[t] - pj[t];
            m(r, e.i * d + t) = Scalar(2) * diff;
            m(r, e.j * d + t) = Scalar(-2) * diff;
        }
    }
    return m;
}

struct TrivialMotions {
    std::vector<Vector> generators;  // d translations, then d(d-1)/2 rotations
    std::size_t dimension = 0;
};

/// Velocity fields of rigid motions evaluated at the realization. Rotation
/// field (a, b) assigns vertex i the velocity S p_i with S = e_b e_a^T - e_a e_b^T,
/// so in d = 2 it is the quarter turn (x, y) -> (-y, x).
inline TrivialMotions trivial_motion_space(const Realization& r, const RankPolicy& policy) {
    r.validate();
    if (r.points.empty()) throw InvalidInputError("trivial motions need at least one point");
    const std::size_t d = r.dim, n = r.points.size();
    TrivialMotions out;
    for (std::size_t t = 0; t < d; ++t) {
        Vector v(d * n, Scalar(0));
        for (std::size_t i = 0; i < n; ++i) v[i * d + t] = Scalar(1);
        out.generators.push_back(std::move(v));
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            Vector v(d * n, Scalar(0));
            for (std::size_t i = 0; i < n; ++i) {
                v[i * d + a] = -r.points[i][b];
                v[i * d + b] = r.points[i][a];
            }
            out.generators.push_back(std::move(v));
        }
    }
    out.dimension = rank(Matrix::from_rows(out.generators, d * n), policy);
    return out;
}

/// Dimension of the affine hull: rank of the differences p_i - p_0.
inline std::size_t affine_span_dim(const std::vector<Point>& points, std::size_t dim, const RankPolicy& policy) {
    if (points.size() <= 1) return 0;
    Matrix diffs(points.size() - 1, dim);
    for (std::size_t i = 1; i < points.size(); ++i)
        for (std::size_t t = 0; t < dim; ++t) diffs(i - 1, t) = points[i][t] - points[0][t];
    return rank(diffs, policy);
}

struct RigidityReport {
    std::size_t kernel_dim = 0;
    std::size_t trivial_dim = 0;
    std::size_t affine_span_dim = 0;
    std::size_t rigidity_rank = 0;
    bool is_infinitesimally_rigid = false;
    RankPolicy policy;
};

inline RigidityReport infinitesimal_rigidity(const Framework& f, const RankPolicy& policy) {
    RigidityReport report;
    report.policy = policy;
    const Matrix rm = rigidity_matrix(f);
    report.rigidity_rank = rank(rm, policy);
    report.kernel_dim = rm.cols() - report.rigidity_rank;
    report.trivial_dim = f.vertex_count() == 0 ? 0 : trivial_motion_space(f.realization(), policy).dimension;
    report.affine_span_dim = affine_span_dim(f.realization().points, f.dim(), policy);
    if (report.kernel_dim < report.trivial_dim)
        throw InvariantViolation("kernel dimension below trivial-motion dimension; tolerance too loose");
    report.is_infinitesimally_rigid = report.kernel_dim == report.trivial_dim;
    return report;
}

/// Same graph, edge lengths agree entrywise within tol (exactly when tol = 0 on exact data).
inline bool are_equivalent(const Framework& f1, const Framework& f2, double tol) {
    if (!(f1.graph() == f2.graph())) throw MismatchError("equivalence needs identical graphs");
    if (f1.dim() != f2.dim()) throw MismatchError("equivalence needs equal dimensions");
    const Vector a = edge_function(f1), b = edge_function(f2);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!within(a[k], b[k], tol)) return false;
    return true;
}

/// Largest |length difference| over the graph's edges.
inline double max_edge_discrepancy(const Framework& f1, const Framework& f2) {
    if (!(f1.graph() == f2.graph())) throw MismatchError("edge discrepancy needs identical graphs");
    double worst = 0.0;
    for (const auto& e : f1.graph().edges) {
        const double l1 = std::sqrt(squared_distance(f1.point(e.i), f1.point(e.j)).value());
        const double l2 = std::sqrt(squared_distance(f2.point(e.i), f2.point(e.j)).value());
        worst = std::max(worst, std::abs(l1 - l2));
    }
    return worst;
}

/// Distances of all vertex pairs agree within tol. Exact data with equal
/// squared distances always agrees.
inline bool are_congruent(const std::vector<Point>& p, const std::vector<Point>& q, double tol) {
    if (p.size() != q.size()) throw MismatchError("congruence needs equal vertex counts");
    if (!p.empty() && p[0].size() != q[0].size()) throw MismatchError("congruence needs equal dimensions");
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const Scalar dp = squared_distance(p[i], p[j]);
            const Scalar dq = squared_distance(q[i], q[j]);
            if (dp.is_exact() && dq.is_exact() && dp == dq) continue;
            if (std::abs(std::sqrt(dp.value()) - std::sqrt(dq.value())) > tol) return false;
        }
    }
    return true;
}

inline bool are_congruent(const Framework& f1, const Framework& f2, double tol) {
    if (f1.dim() != f2.dim()) throw MismatchError("congruence needs equal dimensions");
    return are_congruent(f1.realization().points, f2.realization().points, tol);
}

struct RegularityProbe {
    std::size_t rank_at_p = 0;
    std::size_t max_rank_seen = 0;
    bool is_regular_estimate = true;
};

/// Compares the rigidity-matrix rank at p with its rank at seeded random
/// perturbations. Can refute regularity, never prove it. Exact data stays
/// exact: perturbations are dyadic rationals.
inline RegularityProbe regularity_probe(const Framework& f, std::size_t trials, double perturbation,
                                        const RankPolicy& policy) {
    if (trials < 1) throw InvalidInputError("regularity probe needs at least one trial");
    RegularityProbe out;
    out.rank_at_p = rank(rigidity_matrix(f), policy);
    out.max_rank_seen = out.rank_at_p;
    std::mt19937_64 rng(policy.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const bool keep_exact = policy.is_exact();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Realization moved = f.realization();
        for (auto& p : moved.points)
            for (auto& x : p) {
                const double delta = perturbation * unit(rng);
                x = x + (keep_exact ? Scalar::exact_from_double(delta) : Scalar::real(delta));
            }
        const Framework g(f.graph(), std::move(moved));
        out.max_rank_seen = std::max(out.max_rank_seen, rank(rigidity_matrix(g), policy));
    }
    out.is_regular_estimate = out.rank_at_p == out.max_rank_seen;
    return out;
}

}  // namespace rigidlab

#endif  // RIGIDLAB_FRAMEWORK_HPP
