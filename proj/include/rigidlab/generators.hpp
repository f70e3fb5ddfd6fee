#ifndef RIGIDLAB_GENERATORS_HPP
#define RIGIDLAB_GENERATORS_HPP

// Seeded random configurations for experiments and self-checks.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rigidlab/bipartite.hpp"
#include "rigidlab/curves.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab::gen {

using Rng = std::mt19937_64;

inline Scalar random_rational(Rng& rng, long num_bound = 12, long den_max = 5) {
    std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_max);
    return Scalar::exact(num(rng), den(rng));
}

inline Point random_rational_point(std::size_t dim, Rng& rng) {
    Point p;
    for (std::size_t t = 0; t < dim; ++t) p.push_back(random_rational(rng));
    return p;
}

inline std::vector<Point> random_rational_points(std::size_t count, std::size_t dim, Rng& rng) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_rational_point(dim, rng));
    return out;
}

/// Rational point on the unit sphere of R^dim by inverse stereographic projection.
inline Point rational_sphere_point(std::size_t dim, Rng& rng) {
    Point u;
    Scalar norm2(0);
    for (std::size_t t = 0; t + 1 < dim; ++t) {
        u.push_back(random_rational(rng, 6, 4));
        norm2 += u.back() * u.back();
    }
    const Scalar denom = norm2 + Scalar(1);
    Point p;
    for (const auto& ui : u) p.push_back(Scalar(2) * ui / denom);
    p.push_back((norm2 - Scalar(1)) / denom);
    return p;
}

enum class QuadricKind { sphere, ellipsoid, cylinder };

/// Fixed random quadric surface from which points are drawn exactly.
struct QuadricSurface {
    QuadricKind kind = QuadricKind::sphere;
    std::size_t dim = 0;
    std::vector<Scalar> axes;    // semi-axes (sphere: all equal)
    std::vector<Scalar> center;

    Point sample(Rng& rng) const {
        Point p;
        if (kind == QuadricKind::cylinder) {
            const Point c = rational_sphere_point(2, rng);
            p = {c[0] * axes[0], c[1] * axes[0]};
            for (std::size_t t = 2; t < dim; ++t) p.push_back(random_rational(rng));
        } else {
            const Point s = rational_sphere_point(dim, rng);
            for (std::size_t t = 0; t < dim; ++t) p.push_back(s[t] * axes[t]);
        }
        for (std::size_t t = 0; t < dim; ++t) p[t] += center[t];
        return p;
    }
};

inline QuadricSurface random_quadric_surface(QuadricKind kind, std::size_t dim, Rng& rng) {
    std::uniform_int_distribution<long> size(1, 4);
    QuadricSurface q{kind, dim, {}, {}};
    const Scalar r = Scalar::exact(size(rng), 1);
    for (std::size_t t = 0; t < dim; ++t) {
        q.axes.push_back(kind == QuadricKind::ellipsoid ? Scalar::exact(size(rng) * 2 + 1, 2) : r);
        q.center.push_back(random_rational(rng, 3, 2));
    }
    return q;
}

inline BipartiteRealization generic_bipartite(std::size_t dim, std::size_t m, std::size_t n, Rng& rng) {
    return {dim, random_rational_points(m, dim, rng), random_rational_points(n, dim, rng)};
}

inline BipartiteRealization quadric_bipartite(const QuadricSurface& q, std::size_t m, std::size_t n, Rng& rng) {
    BipartiteRealization br{q.dim, {}, {}};
    for (std::size_t i = 0; i < m; ++i) br.A.push_back(q.sample(rng));
    for (std::size_t j = 0; j < n; ++j) br.B.push_back(q.sample(rng));
    return br;
}

/// Side A squeezed into the hyperplane x_d = c, so A does not span.
inline BipartiteRealization flat_side_bipartite(std::size_t dim, std::size_t m, std::size_t n, Rng& rng) {
    BipartiteRealization br = generic_bipartite(dim, m, n, rng);
    const Scalar c = random_rational(rng);
    for (auto& a : br.A) a[dim - 1] = c;
    return br;
}

inline BipartiteRealization to_floating(const BipartiteRealization& br) {
    BipartiteRealization out{br.dim, {}, {}};
    for (const auto& a : br.A) out.A.push_back(to_reals(to_doubles(a)));
    for (const auto& b : br.B) out.B.push_back(to_reals(to_doubles(b)));
    return out;
}

/// Random graph (each pair an edge with probability p) on random points.
inline Framework random_framework(std::size_t vertices, std::size_t dim, double p, bool exact, Rng& rng) {
    std::bernoulli_distribution coin(p);
    Graph g{vertices, {}};
    for (std::size_t i = 0; i < vertices; ++i)
        for (std::size_t j = i + 1; j < vertices; ++j)
            if (coin(rng)) g.edges.push_back({i, j});
    Realization r{dim, {}};
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < vertices; ++i) {
        if (exact) {
            r.points.push_back(random_rational_point(dim, rng));
        } else {
            RealPoint x(dim);
            for (auto& xi : x) xi = normal(rng);
            r.points.push_back(to_reals(x));
        }
    }
    return Framework(std::move(g), std::move(r));
}

/// Haar-random orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline Eigen::MatrixXd random_orthogonal(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = normal(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

inline Isometry random_isometry(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 2.0);
    Isometry iso{random_orthogonal(dim, rng), Eigen::VectorXd(static_cast<Eigen::Index>(dim))};
    for (Eigen::Index i = 0; i < iso.translation.size(); ++i) iso.translation(i) = normal(rng);
    return iso;
}

inline BipartiteRealization apply_isometry(const Isometry& iso, const BipartiteRealization& br) {
    BipartiteRealization out{br.dim, {}, {}};
    for (const auto& a : br.A) out.A.push_back(to_reals(iso.apply(to_doubles(a))));
    for (const auto& b : br.B) out.B.push_back(to_reals(iso.apply(to_doubles(b))));
    return out;
}

inline HelixSpec random_helix_spec(std::size_t dim, Rng& rng, std::size_t min_blocks = 1) {
    std::uniform_int_distribution<std::size_t> blocks(min_blocks, dim / 2);
    std::uniform_real_distribution<double> rho(0.5, 2.0), lambda(0.5, 2.0), theta(0.0, 2 * std::numbers::pi),
        w(-1.0, 1.0), sign(-1.0, 1.0);
    HelixSpec h;
    h.dim = dim;
    const std::size_t k = blocks(rng);
    for (std::size_t i = 0; i < k; ++i)
        h.blocks.push_back({rho(rng) * (sign(rng) < 0 ? -1.0 : 1.0), lambda(rng) * (sign(rng) < 0 ? -1.0 : 1.0),
                            theta(rng)});
    for (std::size_t i = 2 * k; i < dim; ++i) h.w.push_back(w(rng));
    return h;
}

inline PolynomialCurve random_polynomial_curve(std::size_t dim, std::size_t degree, Rng& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    PolynomialCurve poly;
    for (std::size_t t = 0; t < dim; ++t) {
        std::vector<double> c(degree + 1);
        for (auto& x : c) x = coeff(rng);
        poly.coeffs.push_back(std::move(c));
    }
    return poly;
}

}  // namespace rigidlab::gen

#endif  // RIGIDLAB_GENERATORS_HPP
