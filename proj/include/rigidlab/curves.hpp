#ifndef RIGIDLAB_CURVES_HPP
#define RIGIDLAB_CURVES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rigidlab/bipartite.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/linalg.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

using RealPoint = std::vector<double>;

inline double euclidean_norm(const RealPoint& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

inline double euclidean_distance(const RealPoint& a, const RealPoint& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

struct HelixBlock {
    double rho = 1.0;
    double lambda = 1.0;
    double theta = 0.0;
};

/// gamma(t) = (rho_1 cos(lambda_1 t + theta_1), rho_1 sin(...), ..., t w) + offset.
struct HelixSpec {
    std::size_t dim = 0;
    std::vector<HelixBlock> blocks;
    std::vector<double> w;       // length dim - 2 * blocks
    std::vector<double> offset;  // empty means zero

    void validate() const {
        if (dim < 1) throw InvalidInputError("helix dimension must be >= 1");
        if (2 * blocks.size() > dim) throw InvalidInputError("helix has more rotation blocks than fit in dimension");
        if (w.size() != dim - 2 * blocks.size())
            throw InvalidInputError("helix linear part must have length dim - 2*blocks");
        if (!offset.empty() && offset.size() != dim) throw InvalidInputError("helix offset must have length dim");
        for (const auto& b : blocks) {
            if (b.rho == 0.0 || b.lambda == 0.0) throw InvalidInputError("helix rho and lambda must be nonzero");
            if (!(b.theta >= 0.0 && b.theta < 2 * std::numbers::pi))
                throw InvalidInputError("helix theta must lie in [0, 2pi)");
        }
    }
};

/// Per-coordinate univariate polynomials, coefficients in ascending powers.
struct PolynomialCurve {
    std::vector<std::vector<double>> coeffs;
};

/// Piecewise-linear interpolation through (t_k, point_k); point evaluation only.
struct TabulatedCurve {
    std::vector<double> t;
    std::vector<RealPoint> points;
};

enum class CurveKind { helix, polynomial, tabulated };

class CurveHandle {
public:
    static CurveHandle helix(HelixSpec spec, double t_lo, double t_hi) {
        spec.validate();
        if (spec.offset.empty()) spec.offset.assign(spec.dim, 0.0);
        CurveHandle c(CurveKind::helix, spec.dim, t_lo, t_hi);
        c.helix_ = std::move(spec);
        return c;
    }

    static CurveHandle polynomial(PolynomialCurve poly, double t_lo, double t_hi) {
        if (poly.coeffs.empty()) throw InvalidInputError("polynomial curve needs at least one coordinate");
        CurveHandle c(CurveKind::polynomial, poly.coeffs.size(), t_lo, t_hi);
        c.polynomial_ = std::move(poly);
        return c;
    }

    static CurveHandle tabulated(TabulatedCurve tab) {
        if (tab.t.size() < 2 || tab.t.size() != tab.points.size())
            throw InvalidInputError("tabulated curve needs >= 2 knots with one point each");
        if (!std::is_sorted(tab.t.begin(), tab.t.end()) ||
            std::adjacent_find(tab.t.begin(), tab.t.end()) != tab.t.end())
            throw InvalidInputError("tabulated knots must be strictly increasing");
        const std::size_t d = tab.points.front().size();
        for (const auto& p : tab.points)
            if (p.size() != d) throw InvalidInputError("tabulated points must share one dimension");
        CurveHandle c(CurveKind::tabulated, d, tab.t.front(), tab.t.back());
        c.tabulated_ = std::move(tab);
        return c;
    }

    CurveKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    double t_lo() const noexcept { return t_lo_; }
    double t_hi() const noexcept { return t_hi_; }
    const std::optional<HelixSpec>& helix_spec() const noexcept { return helix_; }
    const std::optional<PolynomialCurve>& polynomial_curve() const noexcept { return polynomial_; }
    const std::optional<TabulatedCurve>& tabulated_curve() const noexcept { return tabulated_; }

    bool contains(double t) const noexcept { return t >= t_lo_ && t <= t_hi_; }

    void require_in_domain(double t) const {
        if (!contains(t))
            throw DomainError("parameter " + std::to_string(t) + " outside [" + std::to_string(t_lo_) + ", " +
                              std::to_string(t_hi_) + "]");
    }

private:
    CurveHandle(CurveKind kind, std::size_t dim, double t_lo, double t_hi)
        : kind_(kind), dim_(dim), t_lo_(t_lo), t_hi_(t_hi) {
        if (!(t_lo < t_hi)) throw InvalidInputError("curve domain needs t_lo < t_hi");
    }

    CurveKind kind_;
    std::size_t dim_;
    double t_lo_;
    double t_hi_;
    std::optional<HelixSpec> helix_;
    std::optional<PolynomialCurve> polynomial_;
    std::optional<TabulatedCurve> tabulated_;
};

namespace detail {

inline double polynomial_derivative(const std::vector<double>& coeffs, double t, int order) {
    double acc = 0.0;
    for (std::size_t p = coeffs.size(); p-- > static_cast<std::size_t>(order);) {
        double falling = 1.0;
        for (int k = 0; k < order; ++k) falling *= static_cast<double>(p - static_cast<std::size_t>(k));
        acc = acc * t + coeffs[p] * falling;
    }
    return acc;
}

}  // namespace detail

inline RealPoint curve_point(const CurveHandle& c, double t) {
    c.require_in_domain(t);
    RealPoint out(c.dim(), 0.0);
    switch (c.kind()) {
        case CurveKind::helix: {
            const auto& h = *c.helix_spec();
            std::size_t k = 0;
            for (const auto& b : h.blocks) {
                out[k] = b.rho * std::cos(b.lambda * t + b.theta);
                out[k + 1] = b.rho * std::sin(b.lambda * t + b.theta);
                k += 2;
            }
            for (double wi : h.w) out[k++] = t * wi;
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += h.offset[i];
            break;
        }
        case CurveKind::polynomial:
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = detail::polynomial_derivative(c.polynomial_curve()->coeffs[i], t, 0);
            break;
        case CurveKind::tabulated: {
            const auto& tab = *c.tabulated_curve();
            auto hi = std::upper_bound(tab.t.begin(), tab.t.end(), t);
            if (hi == tab.t.end()) return tab.points.back();
            const auto k = static_cast<std::size_t>(hi - tab.t.begin());
            const double s = (t - tab.t[k - 1]) / (tab.t[k] - tab.t[k - 1]);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = (1.0 - s) * tab.points[k - 1][i] + s * tab.points[k][i];
            break;
        }
    }
    return out;
}

/// j-th derivative in closed form. Each helix block turns by j quarter turns
/// and scales by lambda^j; the linear part survives only at j = 1.
inline RealPoint curve_derivative(const CurveHandle& c, double t, int order) {
    if (order < 1) throw InvalidInputError("derivative order must be >= 1");
    c.require_in_domain(t);
    RealPoint out(c.dim(), 0.0);
    switch (c.kind()) {
        case CurveKind::helix: {
            const auto& h = *c.helix_spec();
            std::size_t k = 0;
            for (const auto& b : h.blocks) {
                const double scale = b.rho * std::pow(b.lambda, order);
                const double phase = b.lambda * t + b.theta + order * std::numbers::pi / 2;
                out[k] = scale * std::cos(phase);
                out[k + 1] = scale * std::sin(phase);
                k += 2;
            }
            if (order == 1)
                for (double wi : h.w) out[k++] = wi;
            break;
        }
        case CurveKind::polynomial:
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] = detail::polynomial_derivative(c.polynomial_curve()->coeffs[i], t, order);
            break;
        case CurveKind::tabulated:
            throw InvalidInputError("tabulated curves carry no derivative information");
    }
    return out;
}

/// sum_i rho_i^2 lambda_i^{2j} + [j = 1] |w|^2.
inline double helix_derivative_norm(const HelixSpec& h, int order) {
    double acc = 0.0;
    for (const auto& b : h.blocks) acc += b.rho * b.rho * std::pow(b.lambda, 2 * order);
    if (order == 1)
        for (double wi : h.w) acc += wi * wi;
    return std::sqrt(acc);
}

/// t_lo + i (t_hi - t_lo) / (count - 1), endpoints included.
inline std::vector<double> parameter_grid(double t_lo, double t_hi, std::size_t count) {
    if (count < 2) throw InvalidInputError("parameter grid needs at least two points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.back() = t_hi;
    return out;
}

struct DerivativeProfile {
    struct Order {
        int order = 0;
        double min_norm = 0.0;
        double max_norm = 0.0;
        double spread = 0.0;
    };
    std::vector<Order> orders;
};

inline DerivativeProfile derivative_profile(const CurveHandle& c, int first_order, int last_order,
                                            std::size_t grid_size) {
    DerivativeProfile profile;
    const auto grid = parameter_grid(c.t_lo(), c.t_hi(), grid_size);
    for (int j = first_order; j <= last_order; ++j) {
        DerivativeProfile::Order rec{j, std::numeric_limits<double>::infinity(), 0.0, 0.0};
        for (double t : grid) {
            const double nrm = euclidean_norm(j == 0 ? curve_point(c, t) : curve_derivative(c, t, j));
            rec.min_norm = std::min(rec.min_norm, nrm);
            rec.max_norm = std::max(rec.max_norm, nrm);
        }
        rec.spread = rec.max_norm - rec.min_norm;
        profile.orders.push_back(rec);
    }
    return profile;
}

struct QkMembership {
    bool is_member_estimate = false;
    DerivativeProfile profile;
};

/// Samples orders k..k+3 on a grid; a member estimate needs every spread
/// within tol times that order's largest norm. Refutes membership, never proves it.
inline QkMembership qk_membership(const CurveHandle& c, int k, std::size_t grid_size, double tol) {
    if (k < 0) throw InvalidInputError("Q_k needs k >= 0");
    QkMembership out;
    out.profile = derivative_profile(c, k, k + 3, grid_size);
    out.is_member_estimate = std::all_of(out.profile.orders.begin(), out.profile.orders.end(),
                                         [tol](const auto& o) { return o.spread <= tol * o.max_norm; });
    return out;
}

namespace detail {

inline std::vector<double> uniform_parameters(const CurveHandle& c, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(c.t_lo(), c.t_hi());
    std::vector<double> out(count);
    for (auto& t : out) t = dist(rng);
    return out;
}

/// Curve sample as Scalars; polynomial curves evaluate exactly on dyadic data when asked.
inline Point sample_point(const CurveHandle& c, double t, bool exact) {
    if (!exact) return to_reals(curve_point(c, t));
    if (c.kind() != CurveKind::polynomial)
        throw ArithmeticModeError("exact sampling is only available for polynomial curves");
    c.require_in_domain(t);
    const Scalar tt = Scalar::exact_from_double(t);
    Point out;
    for (const auto& coeffs : c.polynomial_curve()->coeffs) {
        Scalar acc(0);
        for (std::size_t p = coeffs.size(); p-- > 0;) acc = acc * tt + Scalar::exact_from_double(coeffs[p]);
        out.push_back(acc);
    }
    return out;
}

}  // namespace detail

/// |q(x)| / (|q| |monomials(x)|): the cosine between q and the monomial vector of x.
inline double quadric_relative_residual(const std::vector<double>& q, const RealPoint& x) {
    const auto mono = quadric_monomials(x);
    const double scale = euclidean_norm(q) * euclidean_norm(mono);
    return scale == 0.0 ? 0.0 : std::abs(evaluate_quadric(q, x)) / scale;
}

struct QuadricFit {
    std::vector<double> coefficients;        // first basis vector of Q(samples)
    std::vector<std::vector<double>> basis;  // all of Q(samples)
    double fresh_residual = 0.0;             // worst relative residual of `coefficients` on fresh samples
};

/// Quadrics through seeded samples of the curve. Fresh residuals use three
/// times as many independent samples.
inline std::optional<QuadricFit> quadric_containment(const CurveHandle& c, std::size_t sample_count,
                                                     const RankPolicy& policy) {
    if (sample_count <= quadric_coefficient_count(c.dim()))
        throw InvalidInputError("quadric containment needs more samples than quadric coefficients");
    std::vector<Point> samples;
    for (double t : detail::uniform_parameters(c, sample_count, policy.seed))
        samples.push_back(detail::sample_point(c, t, policy.is_exact()));
    const Subspace q = quadric_space(samples, c.dim(), policy);
    if (q.dimension == 0) return std::nullopt;

    QuadricFit fit;
    for (const auto& v : q.basis) fit.basis.push_back(to_doubles(v));
    fit.coefficients = fit.basis.front();
    for (double t : detail::uniform_parameters(c, 3 * sample_count, policy.seed + 0x9e3779b97f4a7c15ULL))
        fit.fresh_residual = std::max(fit.fresh_residual, quadric_relative_residual(fit.coefficients, curve_point(c, t)));
    return fit;
}

/// Coefficients of (x_1 - o_1)^2 + (x_2 - o_2)^2 - rho_1^2 in quadric monomial order.
inline std::vector<double> block_cylinder_quadric(const HelixSpec& h) {
    if (h.blocks.empty()) throw InvalidInputError("cylinder quadric needs a rotation block");
    std::vector<double> q(quadric_coefficient_count(h.dim), 0.0);
    const double o1 = h.offset.empty() ? 0.0 : h.offset[0];
    const double o2 = h.offset.empty() ? 0.0 : h.offset[1];
    q[0] = 1.0;       // x_1 x_1
    q[h.dim] = 1.0;   // x_2 x_2 follows the d entries x_1 x_j
    const std::size_t linear = h.dim * (h.dim + 1) / 2;
    q[linear] = -2 * o1;
    q[linear + 1] = -2 * o2;
    q.back() = o1 * o1 + o2 * o2 - h.blocks[0].rho * h.blocks[0].rho;
    return q;
}

/// |v - P v| / |v| with P the orthogonal projector onto span(basis).
inline double distance_to_span(const std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    const double nv = euclidean_norm(v);
    if (nv == 0.0) return 0.0;
    if (basis.empty()) return 1.0;
    Eigen::MatrixXd b(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t r = 0; r < v.size(); ++r)
            b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = basis[c][r];
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    const Eigen::MatrixXd qthin =
        qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
    return (x - qthin * (qthin.transpose() * x)).norm() / nv;
}

struct TranslationBin {
    double difference = 0.0;  // x - y
    double min_distance = 0.0;
    double max_distance = 0.0;
    double spread = 0.0;
};

struct TranslationInvariance {
    bool holds = false;
    std::vector<TranslationBin> table;  // sorted by difference
};

/// Bins grid pairs (x_i, y_j) on the shared interval by i - j and checks the
/// distance is constant within each bin.
inline TranslationInvariance translation_invariance_check(const CurveHandle& c1, const CurveHandle& c2,
                                                          std::size_t grid, double tol) {
    if (c1.dim() != c2.dim()) throw MismatchError("curves live in different dimensions");
    const double lo = std::max(c1.t_lo(), c2.t_lo()), hi = std::min(c1.t_hi(), c2.t_hi());
    if (!(lo < hi)) throw DomainError("curves share no parameter interval");
    const auto ts = parameter_grid(lo, hi, grid);
    std::vector<RealPoint> p1, p2;
    for (double t : ts) {
        p1.push_back(curve_point(c1, t));
        p2.push_back(curve_point(c2, t));
    }
    std::map<long, TranslationBin> bins;
    const double step = (hi - lo) / static_cast<double>(grid - 1);
    for (std::size_t i = 0; i < grid; ++i) {
        for (std::size_t j = 0; j < grid; ++j) {
            const long key = static_cast<long>(i) - static_cast<long>(j);
            const double dist = euclidean_distance(p1[i], p2[j]);
            auto [it, fresh] = bins.try_emplace(key, TranslationBin{static_cast<double>(key) * step, dist, dist, 0.0});
            if (!fresh) {
                it->second.min_distance = std::min(it->second.min_distance, dist);
                it->second.max_distance = std::max(it->second.max_distance, dist);
            }
        }
    }
    TranslationInvariance out;
    out.holds = true;
    for (auto& [key, bin] : bins) {
        bin.spread = bin.max_distance - bin.min_distance;
        out.holds = out.holds && bin.spread <= tol;
        out.table.push_back(bin);
    }
    return out;
}

/// Realizations (A_delta, B_delta) with a_i = c1(x0_i + delta), b_j = c2(y0_j + delta).
inline std::vector<BipartiteRealization> sliding_family(const CurveHandle& c1, const CurveHandle& c2,
                                                        const std::vector<double>& x0, const std::vector<double>& y0,
                                                        const std::vector<double>& deltas) {
    if (c1.dim() != c2.dim()) throw MismatchError("curves live in different dimensions");
    const std::size_t d = c1.dim();
    if (x0.size() < d + 1 || y0.size() < d + 1)
        throw HypothesisError("side_too_small", "sliding families need m, n >= d + 1");
    std::vector<BipartiteRealization> family;
    for (double delta : deltas) {
        BipartiteRealization br{d, {}, {}};
        for (double x : x0) br.A.push_back(to_reals(curve_point(c1, x + delta)));
        for (double y : y0) br.B.push_back(to_reals(curve_point(c2, y + delta)));
        family.push_back(std::move(br));
    }
    return family;
}

struct FamilyEquivalence {
    bool pairwise_equivalent = true;
    double max_discrepancy = 0.0;  // largest edge-length difference over all pairs
};

inline FamilyEquivalence family_equivalence(const std::vector<BipartiteRealization>& family, double tol) {
    FamilyEquivalence out;
    std::vector<Framework> frameworks;
    for (const auto& br : family) frameworks.push_back(br.to_framework());
    for (std::size_t a = 0; a < frameworks.size(); ++a)
        for (std::size_t b = a + 1; b < frameworks.size(); ++b) {
            out.max_discrepancy = std::max(out.max_discrepancy, max_edge_discrepancy(frameworks[a], frameworks[b]));
            out.pairwise_equivalent = out.pairwise_equivalent && are_equivalent(frameworks[a], frameworks[b], tol);
        }
    return out;
}

/// x -> orthogonal * x + translation.
struct Isometry {
    Eigen::MatrixXd orthogonal;
    Eigen::VectorXd translation;

    RealPoint apply(const RealPoint& x) const {
        const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
        const Eigen::VectorXd y = orthogonal * v + translation;
        return RealPoint(y.data(), y.data() + y.size());
    }
};

/// Recovers the isometry carrying br1 onto br2 (A then B as one vertex list)
/// when the two are congruent within tol. Reflections are allowed.
inline std::optional<Isometry> isometry_witness(const BipartiteRealization& br1, const BipartiteRealization& br2,
                                                const RankPolicy& policy, double tol) {
    br1.validate();
    br2.validate();
    if (br1.dim != br2.dim || br1.m() != br2.m() || br1.n() != br2.n())
        throw MismatchError("isometry witness needs matching m, n and d");
    const auto p = br1.vertices(), q = br2.vertices();
    if (affine_span_dim(p, br1.dim, policy) < br1.dim)
        throw HypothesisError("degenerate_span", "first realization does not affinely span R^d; isometry not determined");
    if (!are_congruent(p, q, tol)) return std::nullopt;

    const auto d = static_cast<Eigen::Index>(br1.dim);
    const auto count = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd P(count, d), Q(count, d);
    for (Eigen::Index i = 0; i < count; ++i)
        for (Eigen::Index t = 0; t < d; ++t) {
            P(i, t) = p[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)].value();
            Q(i, t) = q[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)].value();
        }
    const Eigen::RowVectorXd pc = P.colwise().mean(), qc = Q.colwise().mean();
    const Eigen::MatrixXd Pc = P.rowwise() - pc, Qc = Q.rowwise() - qc;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Pc.transpose() * Qc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Isometry iso;
    iso.orthogonal = svd.matrixV() * svd.matrixU().transpose();
    iso.translation = qc.transpose() - iso.orthogonal * pc.transpose();

    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::VectorXd mapped = iso.orthogonal * P.row(i).transpose() + iso.translation;
        if ((mapped - Q.row(i).transpose()).norm() > tol) return std::nullopt;
    }
    return iso;
}

inline std::optional<Isometry> isometry_witness(const BipartiteRealization& br1, const BipartiteRealization& br2,
                                                const RankPolicy& policy) {
    double scale = 1.0;
    for (const auto& p : br1.vertices())
        for (const auto& x : p) scale = std::max(scale, std::abs(x.value()));
    return isometry_witness(br1, br2, policy, policy.rel_tol * scale);
}

}  // namespace rigidlab

#endif  // RIGIDLAB_CURVES_HPP
