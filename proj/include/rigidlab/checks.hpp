#ifndef RIGIDLAB_CHECKS_HPP
#define RIGIDLAB_CHECKS_HPP

// Invariant checks over seeded random configurations. The CLI selfcheck runs
// them at small sizes; the acceptance suite runs them at full size.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <sstream>
#include <string>
#include <vector>

#include "rigidlab/bipartite.hpp"
#include "rigidlab/census.hpp"
#include "rigidlab/curves.hpp"
#include "rigidlab/framework.hpp"
#include "rigidlab/generators.hpp"
#include "rigidlab/linalg.hpp"

namespace rigidlab::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

inline CheckResult timed(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
    CheckResult r;
    r.name = name;
    std::ostringstream detail;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.passed = body(detail);
    } catch (const std::exception& e) {
        detail << " exception: " << e.what();
        r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.detail = detail.str();
    return r;
}

/// Mix of generic, sphere, ellipsoid and cylinder configurations plus a
/// share with one side squeezed into a hyperplane (so C fails to span).
struct BipartiteSweep {
    std::vector<BipartiteRealization> configs;
    std::size_t spanning = 0;
};

inline BipartiteSweep bipartite_sweep(std::size_t spanning_target, std::size_t flat_count, std::uint64_t seed) {
    gen::Rng rng(seed);
    BipartiteSweep sweep;
    const RankPolicy exact = RankPolicy::exact();
    std::size_t i = 0, flats = 0;
    while (sweep.spanning < spanning_target || flats < flat_count) {
        const std::size_t d = 2 + i % 3;
        std::uniform_int_distribution<std::size_t> side(d + 1, d + 4);
        const std::size_t m = side(rng), n = side(rng);
        const std::size_t kind = i % 5;
        ++i;
        BipartiteRealization br;
        if (kind == 4) {
            if (flats >= flat_count) continue;
            br = gen::flat_side_bipartite(d, m, n, rng);
            ++flats;
        } else {
            if (sweep.spanning >= spanning_target) continue;
            if (kind == 0) {
                br = gen::generic_bipartite(d, m, n, rng);
            } else {
                const auto q = gen::random_quadric_surface(
                    kind == 1 ? gen::QuadricKind::sphere : kind == 2 ? gen::QuadricKind::ellipsoid : gen::QuadricKind::cylinder,
                    d, rng);
                br = gen::quadric_bipartite(q, m, n, rng);
            }
            if (affine_span_dim(br.A, d, exact) < d || affine_span_dim(br.B, d, exact) < d) continue;
            ++sweep.spanning;
        }
        sweep.configs.push_back(std::move(br));
    }
    return sweep;
}

struct BipartiteSweepOutcome {
    std::size_t configs = 0;
    std::size_t spanning = 0;
    std::size_t formula_mismatches = 0;
    std::size_t kernel_identity_mismatches = 0;
};

inline BipartiteSweepOutcome run_bipartite_sweep(const BipartiteSweep& sweep, const RankPolicy& policy) {
    BipartiteSweepOutcome out;
    for (const auto& config : sweep.configs) {
        const BipartiteRealization br = policy.is_exact() ? config : gen::to_floating(config);
        const auto report = bolker_roth_report(br, policy);
        ++out.configs;
        if (report.dim_omega_formula) {
            ++out.spanning;
            if (!report.formula_matches_direct()) ++out.formula_mismatches;
        }
        if (report.kernel_dim_via_stress != static_cast<long>(report.kernel_dim_direct)) ++out.kernel_identity_mismatches;
    }
    return out;
}

/// Bolker-Roth formula against the direct left-kernel dimension, both backends.
inline CheckResult bolker_roth_equality(std::size_t spanning_target, std::size_t flat_count, std::uint64_t seed) {
    return timed("Bolker-Roth formula equals direct stress dimension", [&](std::ostringstream& os) {
        const auto sweep = bipartite_sweep(spanning_target, flat_count, seed);
        const auto ex = run_bipartite_sweep(sweep, RankPolicy::exact());
        const auto fl = run_bipartite_sweep(sweep, RankPolicy::floating(1e-9));
        os << "configs=" << ex.configs << " spanning=" << ex.spanning << " exact_mismatches=" << ex.formula_mismatches
           << " floating_mismatches=" << fl.formula_mismatches;
        return ex.spanning >= spanning_target && ex.formula_mismatches == 0 && fl.formula_mismatches == 0 &&
               fl.spanning == ex.spanning;
    });
}

/// dim ker = dim Omega + (m+n)d - mn on every sweep configuration.
inline CheckResult kernel_identity(std::size_t spanning_target, std::size_t flat_count, std::uint64_t seed) {
    return timed("kernel dimension identity via stresses", [&](std::ostringstream& os) {
        const auto sweep = bipartite_sweep(spanning_target, flat_count, seed);
        const auto ex = run_bipartite_sweep(sweep, RankPolicy::exact());
        const auto fl = run_bipartite_sweep(sweep, RankPolicy::floating(1e-9));
        os << "configs=" << ex.configs << " exact_mismatches=" << ex.kernel_identity_mismatches
           << " floating_mismatches=" << fl.kernel_identity_mismatches;
        return ex.kernel_identity_mismatches == 0 && fl.kernel_identity_mismatches == 0;
    });
}

/// Generic spanning K_{m,n} with m + n >= d(d+3)/2 + 1 is rigid; quadric samples are not,
/// with kernel excess equal to dim Q(C).
inline CheckResult quadric_dichotomy(std::size_t per_class, std::uint64_t seed) {
    return timed("quadric dichotomy classification", [&](std::ostringstream& os) {
        gen::Rng rng(seed);
        const RankPolicy exact = RankPolicy::exact();
        std::size_t wrong_generic = 0, wrong_quadric = 0, bad_excess = 0, generic = 0, quadric = 0;
        for (std::size_t i = 0; generic < per_class; ++i) {
            const std::size_t d = 2 + i % 3;
            const std::size_t total = quadric_coefficient_count(d);
            const std::size_t m = (total + 1) / 2 < d + 1 ? d + 1 : (total + 1) / 2;
            const std::size_t n = total - m < d + 1 ? d + 1 : total - m;
            const auto br = gen::generic_bipartite(d, m, n, rng);
            if (affine_span_dim(br.A, d, exact) < d || affine_span_dim(br.B, d, exact) < d) continue;
            ++generic;
            const auto r = classify(br, exact);
            if (r.classification != Classification::infinitesimally_rigid || r.kernel_dim_direct != r.trivial_dim)
                ++wrong_generic;
        }
        for (std::size_t i = 0; quadric < per_class; ++i) {
            const std::size_t d = 2 + i % 3;
            std::uniform_int_distribution<std::size_t> side(d + 1, d + 4);
            const auto kind = static_cast<gen::QuadricKind>(i % 3);
            const auto q = gen::random_quadric_surface(kind, d, rng);
            const auto br = gen::quadric_bipartite(q, side(rng), side(rng), rng);
            if (affine_span_dim(br.A, d, exact) < d || affine_span_dim(br.B, d, exact) < d) continue;
            ++quadric;
            const auto r = classify(br, exact);
            if (r.classification != Classification::vertices_on_quadric) ++wrong_quadric;
            if (r.kernel_dim_direct - r.trivial_dim != r.dimQC) ++bad_excess;
        }
        os << "generic=" << generic << " misclassified=" << wrong_generic << " quadric=" << quadric
           << " misclassified=" << wrong_quadric << " excess_mismatch=" << bad_excess;
        return wrong_generic == 0 && wrong_quadric == 0 && bad_excess == 0;
    });
}

/// Every trivial-motion generator lies in the kernel of the rigidity matrix.
inline CheckResult trivial_motions_in_kernel(std::size_t count, std::uint64_t seed) {
    return timed("trivial motions lie in the rigidity kernel", [&](std::ostringstream& os) {
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> verts(1, 8), dims(1, 4);
        std::uniform_real_distribution<double> density(0.2, 1.0);
        double worst = 0.0;
        std::size_t exact_failures = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const bool exact = i % 2 == 0;
            const auto f = gen::random_framework(verts(rng), dims(rng), density(rng), exact, rng);
            const Matrix rm = rigidity_matrix(f);
            const RankPolicy policy = exact ? RankPolicy::exact() : RankPolicy::floating();
            for (const auto& v : trivial_motion_space(f.realization(), policy).generators) {
                if (exact) {
                    if (!is_zero_vector(multiply(rm, v))) ++exact_failures;
                } else {
                    worst = std::max(worst, relative_residual(rm, v));
                }
            }
        }
        os << "frameworks=" << count << " exact_nonzero=" << exact_failures << " worst_floating_residual=" << worst;
        return exact_failures == 0 && worst <= 1e-9;
    });
}

/// Point sets with collinear, coplanar and repeated degeneracies.
inline std::vector<Point> degenerate_point_set(gen::Rng& rng, std::size_t& dim_out) {
    std::uniform_int_distribution<std::size_t> dims(1, 4), counts(1, 8), style(0, 3);
    const std::size_t d = dims(rng), k = counts(rng);
    dim_out = d;
    const auto s = style(rng);
    if (s == 0) return gen::random_rational_points(k, d, rng);
    const std::size_t flat = s == 1 ? 1 : s == 2 ? 2 : 0;  // 0 = repeated points
    const Point origin = gen::random_rational_point(d, rng);
    std::vector<Point> dirs;
    for (std::size_t i = 0; i < flat; ++i) dirs.push_back(gen::random_rational_point(d, rng));
    std::vector<Point> out;
    for (std::size_t i = 0; i < k; ++i) {
        Point p = origin;
        for (const auto& v : dirs) {
            const Scalar c = gen::random_rational(rng);
            for (std::size_t t = 0; t < d; ++t) p[t] += c * v[t];
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// dim D(A) + dim aff(A) = k - 1, both backends.
inline CheckResult affine_identity(std::size_t count, std::uint64_t seed) {
    return timed("affine dependency identity", [&](std::ostringstream& os) {
        gen::Rng rng(seed);
        std::size_t failures = 0;
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t d = 0;
            const auto pts = degenerate_point_set(rng, d);
            std::vector<Point> floating;
            for (const auto& p : pts) floating.push_back(to_reals(to_doubles(p)));
            for (const auto& [set, policy] :
                 {std::pair<const std::vector<Point>*, RankPolicy>{&pts, RankPolicy::exact()},
                  std::pair<const std::vector<Point>*, RankPolicy>{&floating, RankPolicy::floating()}}) {
                const auto dep = affine_dependency_space(*set, d, policy).dimension;
                const auto span = affine_span_dim(*set, d, policy);
                if (dep + span != set->size() - 1) ++failures;
            }
        }
        os << "point_sets=" << count << " failures=" << failures;
        return failures == 0;
    });
}

/// Helix derivative norms are constant and the block-1 cylinder is recovered.
inline CheckResult helix_properties(std::size_t count, std::uint64_t seed) {
    return timed("helix constant derivative norms and cylinder containment", [&](std::ostringstream& os) {
        gen::Rng rng(seed);
        double worst_spread = 0.0, worst_span = 0.0, worst_residual = 0.0;
        std::size_t missing = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t d = 3 + i % 3;
            const auto spec = gen::random_helix_spec(d, rng);
            const auto c = CurveHandle::helix(spec, -3.0, 3.0);
            for (const auto& o : derivative_profile(c, 1, 4, 64).orders)
                worst_spread = std::max(worst_spread, o.spread / o.max_norm);
            RankPolicy policy = RankPolicy::floating(1e-9, mix_seed(seed, i, 7));
            const auto fit = quadric_containment(c, 3 * quadric_coefficient_count(d), policy);
            if (!fit) {
                ++missing;
                continue;
            }
            const auto cylinder = block_cylinder_quadric(*c.helix_spec());
            worst_span = std::max(worst_span, distance_to_span(cylinder, fit->basis));
            // Projection of the cylinder onto the recovered space, checked on fresh samples.
            Eigen::VectorXd proj = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cylinder.size()));
            for (const auto& b : fit->basis) {
                const Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
                const Eigen::Map<const Eigen::VectorXd> cv(cylinder.data(), static_cast<Eigen::Index>(cylinder.size()));
                proj += bv.dot(cv) * bv;
            }
            const std::vector<double> projected(proj.data(), proj.data() + proj.size());
            for (double t : sample_parameters(c, 9 * quadric_coefficient_count(d), Sampler::uniform, mix_seed(seed, i, 8)))
                worst_residual = std::max(worst_residual, quadric_relative_residual(projected, curve_point(c, t)));
        }
        os << "helices=" << count << " worst_rel_spread=" << worst_spread << " missing_quadric=" << missing
           << " worst_cylinder_span_distance=" << worst_span << " worst_fresh_residual=" << worst_residual;
        // The floating kernel can carry near-null directions of the sample window, so span
        // membership is a coarse sanity bound; the pinned quantity is the fresh residual.
        return worst_spread <= 1e-9 && missing == 0 && worst_span <= 1e-6 && worst_residual <= 1e-9;
    });
}

inline CheckResult sliding_families(std::size_t delta_count, std::uint64_t seed) {
    return timed("sliding families are equivalent; square/rhombus control", [&](std::ostringstream& os) {
        gen::Rng rng(seed);
        std::uniform_real_distribution<double> param(0.0, 2.0);
        std::vector<double> deltas;
        for (std::size_t k = 0; k < delta_count; ++k) deltas.push_back(0.1 * static_cast<double>(k));

        auto family_of = [&](const CurveHandle& c1, const CurveHandle& c2, std::size_t d) {
            std::vector<double> x0(d + 2), y0(d + 2);
            for (auto& x : x0) x = param(rng);
            for (auto& y : y0) y = param(rng);
            return family_equivalence(sliding_family(c1, c2, x0, y0, deltas), 1e-10);
        };

        const auto circle1 = CurveHandle::helix({2, {{1.0, 1.0, 0.0}}, {}, {}}, -10.0, 10.0);
        const auto circle2 = CurveHandle::helix({2, {{2.0, 1.0, 0.7}}, {}, {}}, -10.0, 10.0);
        const auto circles = family_of(circle1, circle2, 2);

        const auto helix1 = CurveHandle::helix({3, {{1.5, 1.3, 0.2}}, {0.4}, {}}, -10.0, 10.0);
        const auto helix2 = CurveHandle::helix({3, {{0.7, 1.3, 2.5}}, {0.4}, {0.0, 0.0, 1.0}}, -10.0, 10.0);  // shared axis
        const auto helices = family_of(helix1, helix2, 3);
        const bool helix_law = translation_invariance_check(helix1, helix2, 41, 1e-10).holds;

        // Unit square vs unit rhombus on the 4-cycle K_{2,2}.
        const BipartiteRealization square{2, {{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}};
        const BipartiteRealization rhombus{2,
                                           {{0, 0}, {Scalar::exact(8, 5), Scalar::exact(4, 5)}},
                                           {{1, 0}, {Scalar::exact(3, 5), Scalar::exact(4, 5)}}};
        const bool equivalent = are_equivalent(square.to_framework(), rhombus.to_framework(), 0.0);
        const bool congruent = are_congruent(square.to_framework(), rhombus.to_framework(), 1e-12);

        os << "circles_max_discrepancy=" << circles.max_discrepancy
           << " helices_max_discrepancy=" << helices.max_discrepancy << " helix_law=" << helix_law
           << " control_equivalent=" << equivalent << " control_congruent=" << congruent;
        return circles.pairwise_equivalent && circles.max_discrepancy <= 1e-10 && helices.pairwise_equivalent &&
               helices.max_discrepancy <= 1e-10 && helix_law && equivalent && !congruent;
    });
}

struct ContrastCurves {
    CurveHandle circle1, circle2, line1, line2;
};

inline ContrastCurves contrast_curves() {
    const double two_pi = 2 * std::numbers::pi;
    return {CurveHandle::helix({2, {{1.0, 1.0, 0.0}}, {}, {}}, 0.0, two_pi),
            CurveHandle::helix({2, {{2.0, 1.0, 0.0}}, {}, {}}, 0.0, two_pi),
            CurveHandle::polynomial({{{0.0, 1.0}, {0.0}}}, 0.0, 4096.0),
            CurveHandle::polynomial({{{0.0, 1.0}, {1.0}}}, 0.0, 4096.0)};
}

/// A curve is rejected when its samples lie on a quadric or in a hyperplane.
inline bool is_quadric_or_flat(const CurveHandle& c, std::uint64_t seed) {
    const RankPolicy policy = RankPolicy::floating(1e-9, seed);
    if (quadric_containment(c, 3 * quadric_coefficient_count(c.dim()), policy)) return true;
    std::vector<Point> pts;
    for (const auto& p : sample_curve(c, 4 * c.dim(), Sampler::uniform, seed + 1)) pts.push_back(to_reals(p));
    return affine_span_dim(pts, c.dim(), policy) < c.dim();
}

struct GenericDraw {
    std::optional<std::pair<CurveHandle, CurveHandle>> curves;
    std::size_t attempts = 0;
};

/// Draws random degree-`degree` polynomial curve pairs in R^3 until both
/// avoid quadrics and hyperplanes, or the attempt budget runs out.
inline GenericDraw draw_generic_pair(std::size_t degree, std::size_t max_attempts, std::uint64_t seed) {
    gen::Rng rng(seed);
    GenericDraw out;
    for (; out.attempts < max_attempts && !out.curves;) {
        ++out.attempts;
        auto c1 = CurveHandle::polynomial(gen::random_polynomial_curve(3, degree, rng), -1.0, 1.0);
        auto c2 = CurveHandle::polynomial(gen::random_polynomial_curve(3, degree, rng), -1.0, 1.0);
        if (is_quadric_or_flat(c1, mix_seed(seed, out.attempts, 1)) || is_quadric_or_flat(c2, mix_seed(seed, out.attempts, 2)))
            continue;
        out.curves.emplace(std::move(c1), std::move(c2));
    }
    return out;
}


struct ContrastOutcome {
    std::vector<CensusRun> runs;  // circles, lines, generic pair (when drawn)
    GenericDraw cubic;            // degree-3 draw, expected to exhaust its budget
    GenericDraw quintic;
};

/// Growth exponents for the special pairs (circles, lines) and a generic
/// polynomial pair in R^3.
inline ContrastOutcome run_contrast(const std::vector<std::size_t>& schedule, std::size_t cubic_attempts,
                                    std::uint64_t seed) {
    const auto curves = contrast_curves();
    ContrastOutcome out;
    out.runs.push_back(growth_fit(curves.circle1, curves.circle2, schedule, Sampler::equispaced, 1e-9, seed));
    out.runs.push_back(growth_fit(curves.line1, curves.line2, schedule, Sampler::integer, 1e-9, seed));
    out.cubic = draw_generic_pair(3, cubic_attempts, mix_seed(seed, 3, 0));
    out.quintic = draw_generic_pair(5, 50, mix_seed(seed, 5, 0));
    if (out.quintic.curves)
        out.runs.push_back(growth_fit(out.quintic.curves->first, out.quintic.curves->second, schedule, Sampler::uniform,
                                      1e-9, seed));
    return out;
}

inline CheckResult distinct_distance_contrast(const ContrastOutcome& c) {
    return timed("distinct-distance growth contrast", [&](std::ostringstream& os) {
        if (c.runs.size() < 3) {
            os << "no generic degree-5 pair found in " << c.quintic.attempts << " attempts";
            return false;
        }
        const double circles = c.runs[0].fit.slope, lines = c.runs[1].fit.slope, generic = c.runs[2].fit.slope;
        os << "circle_slope=" << circles << " line_slope=" << lines << " generic_slope=" << generic
           << " degree3_pairs_rejected=" << c.cubic.attempts - (c.cubic.curves ? 1 : 0) << "/" << c.cubic.attempts
           << " degree5_attempts=" << c.quintic.attempts;
        return std::abs(circles - 1.0) <= 0.15 && std::abs(lines - 1.0) <= 0.15 && generic >= 1.5;
    });
}

/// Every census row, plus seeded random sets, satisfies triple_count >= |A||B|.
inline CheckResult triple_lower_bound(const ContrastOutcome& c, std::size_t random_sets, std::uint64_t seed) {
    return timed("triple count lower bound |A||B|", [&](std::ostringstream& os) {
        std::size_t rows = 0, violations = 0;
        for (const auto& run : c.runs)
            for (const auto& row : run.rows) {
                ++rows;
                if (row.triples.triple_count < row.triples.sizeA * row.triples.sizeB) ++violations;
            }
        gen::Rng rng(seed);
        std::uniform_int_distribution<std::size_t> size(1, 40), dims(1, 4);
        std::uniform_int_distribution<int> grid(-3, 3);
        for (std::size_t i = 0; i < random_sets; ++i) {
            const std::size_t d = dims(rng);
            std::vector<RealPoint> p1(size(rng), RealPoint(d)), p2(size(rng), RealPoint(d));
            for (auto* set : {&p1, &p2})
                for (auto& p : *set)
                    for (auto& x : p) x = grid(rng);  // coarse lattice forces repeated coordinates and distances
            const auto t = projected_triple_count(p1, p2, 1e-9);
            ++rows;
            if (t.triple_count < t.sizeA * t.sizeB) ++violations;
        }
        os << "census_runs=" << rows << " violations=" << violations;
        return violations == 0;
    });
}

inline CheckResult exact_small_counts() {
    return timed("exact small distinct-distance counts", [&](std::ostringstream& os) {
        const std::vector<Point> inner{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const std::vector<Point> outer{{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
        const std::vector<Point> line1{{0, 0}, {1, 0}, {2, 0}};
        const std::vector<Point> line2{{0, 1}, {1, 1}, {2, 1}};
        const std::vector<Point> single{{Scalar::exact(1, 3), Scalar::exact(-2, 7)}};
        const auto circles = distinct_distances(inner, outer, 0.0, CensusMode::exact_squared);
        const auto lines = distinct_distances(line1, line2, 0.0, CensusMode::exact_squared);
        const auto point = distinct_distances(single, single, 0.0, CensusMode::exact_squared);
        os << "circles=" << circles.distinct_count << " lines=" << lines.distinct_count
           << " single=" << point.distinct_count;
        return circles.distinct_count == 3 && lines.distinct_count == 3 && point.distinct_count == 1;
    });
}

}  // namespace rigidlab::checks

#endif  // RIGIDLAB_CHECKS_HPP
