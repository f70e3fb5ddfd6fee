#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rigidlab/bipartite.hpp"
#include "rigidlab/generators.hpp"

using namespace rigidlab;

namespace {

const RankPolicy kExact = RankPolicy::exact();
const RankPolicy kFloat = RankPolicy::floating();

BipartiteRealization circle_k33() {
    return {2, {{5, 0}, {4, 3}, {3, 4}}, {{0, 5}, {-3, 4}, {-4, 3}}};
}

std::vector<std::vector<mpq_class>> to_q(const std::vector<Point>& pts) {
    std::vector<std::vector<mpq_class>> out;
    for (const auto& p : pts) {
        std::vector<mpq_class> row;
        for (const auto& x : p) row.push_back(x.rational());
        out.push_back(row);
    }
    return out;
}

/// Stress dimension by oracle: left kernel of the rigidity matrix.
std::size_t oracle_stress_dim(const BipartiteRealization& br) {
    const auto m = static_cast<int>(br.m()), n = static_cast<int>(br.n());
    const auto r = oracle::rigidity(to_q(br.vertices()), oracle::bipartite_edges(m, n));
    return static_cast<std::size_t>(m * n) - oracle::rank(r);
}

}  // namespace

TEST(AffineDependencies, Examples) {
    gen::Rng rng(31);
    EXPECT_EQ(affine_dependency_dim(gen::random_rational_points(4, 2, rng), 2, kExact), 1u);
    EXPECT_EQ(affine_dependency_dim({{0, 0}, {1, 0}, {0, 1}}, 2, kExact), 0u);
    const auto line = affine_dependency_space({{0, 0}, {1, 0}, {2, 0}}, 2, kExact);
    ASSERT_EQ(line.dimension, 1u);
    const auto& v = line.basis[0];
    EXPECT_EQ(v[1].rational(), -2 * v[0].rational());
    EXPECT_EQ(v[2].rational(), v[0].rational());
}

TEST(AffineDependencies, IdentityWithSpanOnDegenerateSets) {
    gen::Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + trial % 3, k = 1 + trial % 7;
        auto pts = gen::random_rational_points(k, d, rng);
        if (trial % 3 == 1)
            for (auto& p : pts) p[d - 1] = p[0];  // coplanar
        if (trial % 3 == 2)
            for (auto& p : pts)
                for (std::size_t t = 1; t < d; ++t) p[t] = p[0] * Scalar(static_cast<int>(t));  // collinear
        EXPECT_EQ(affine_dependency_dim(pts, d, kExact) + affine_span_dim(pts, d, kExact), k - 1);
        EXPECT_EQ(affine_span_dim(pts, d, kExact), oracle::affine_span(to_q(pts)));
    }
}

TEST(BoundarySet, Examples) {
    gen::Rng rng(33);
    const auto generic = gen::generic_bipartite(2, 4, 4, rng);
    EXPECT_EQ(boundary_set(generic, kExact).size(), 8u);

    const BipartiteRealization axes{2, {{1, 0}, {2, 0}}, {{0, 1}, {0, 2}}};
    EXPECT_TRUE(boundary_set(axes, kExact).empty());

    const BipartiteRealization singles{2, {{0, 0}}, {{1, 1}}};
    EXPECT_TRUE(boundary_set(singles, kExact).empty());

    // A on the x-axis, B spanning: all of A lies in the hull of B, B lies outside the line.
    const BipartiteRealization flat{2, {{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 3}, {4, 2}}};
    EXPECT_EQ(boundary_set(flat, kExact).size(), 3u);
}

TEST(QuadricSpace, Examples) {
    EXPECT_EQ(quadric_coefficient_count(2), 6u);
    EXPECT_EQ(quadric_coefficient_count(3), 10u);
    EXPECT_EQ(quadric_space_dim({}, 2, kExact), 6u);
    gen::Rng rng(34);
    EXPECT_EQ(quadric_space_dim(gen::random_rational_points(5, 2, rng), 2, kExact), 1u);

    const auto circle = quadric_space(circle_k33().vertices(), 2, kExact);
    ASSERT_EQ(circle.dimension, 1u);
    // Proportional to x^2 + y^2 - 25 in the order xx, xy, yy, x, y, 1.
    const auto& q = circle.basis[0];
    const mpq_class s = q[0].rational();
    const std::vector<long> expected{1, 0, 1, 0, 0, -25};
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(q[k].rational(), s * expected[k]);
}

TEST(QuadricSpace, AgreesWithOracleAndFloating) {
    gen::Rng rng(35);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 2 + trial % 3, k = 1 + trial % 17;
        std::vector<Point> pts;
        if (trial % 2) {
            const auto q = gen::random_quadric_surface(static_cast<gen::QuadricKind>(trial % 3), d, rng);
            for (std::size_t i = 0; i < k; ++i) pts.push_back(q.sample(rng));
        } else {
            pts = gen::random_rational_points(k, d, rng);
        }
        const auto expected = oracle::quadric_dim(to_q(pts), d);
        EXPECT_EQ(quadric_space_dim(pts, d, kExact), expected);
        std::vector<Point> real;
        for (const auto& p : pts) real.push_back(to_reals(to_doubles(p)));
        EXPECT_EQ(quadric_space_dim(real, d, kFloat), expected);
    }
}

TEST(QuadricSpace, MonomialOrder) {
    const auto m = quadric_monomials<double>({2.0, 3.0, 5.0});
    const std::vector<double> expected{4, 6, 10, 9, 15, 25, 2, 3, 5, 1};
    EXPECT_EQ(m, expected);
    EXPECT_DOUBLE_EQ(evaluate_quadric({1, 0, 1, 0, 0, -25}, {3, 4}), 0.0);
}

TEST(StressSpace, Examples) {
    gen::Rng rng(36);
    EXPECT_EQ(stress_space_dim(gen::generic_bipartite(2, 3, 3, rng), kExact), 0u);
    EXPECT_EQ(stress_space_dim(circle_k33(), kExact), 1u);
    EXPECT_EQ(stress_space_dim(circle_k33(), kFloat), 1u);
    const BipartiteRealization bar{2, {{0, 0}}, {{1, 2}}};
    EXPECT_EQ(stress_space_dim(bar, kExact), 0u);
}

TEST(StressSpace, BalanceAndOracle) {
    gen::Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 2 + trial % 2;
        BipartiteRealization br;
        if (trial % 2)
            br = gen::quadric_bipartite(gen::random_quadric_surface(gen::QuadricKind::sphere, d, rng), d + 2, d + 2, rng);
        else
            br = gen::generic_bipartite(d, 2 + trial % 4, 2 + trial % 5, rng);
        const auto exact = stress_space_direct(br, kExact);
        EXPECT_EQ(exact.dimension, oracle_stress_dim(br));
        for (const auto& w : exact.stresses) EXPECT_TRUE(stress_balanced_exactly(br, w));
        const auto real = gen::to_floating(br);
        const auto floating = stress_space_direct(real, kFloat);
        EXPECT_EQ(floating.dimension, exact.dimension);
        for (const auto& w : floating.stresses) EXPECT_LE(stress_balance_residual(real, w), 1e-9);
    }
}

TEST(BolkerRoth, FormulaExamples) {
    gen::Rng rng(38);
    const auto k33 = bolker_roth_report(gen::generic_bipartite(2, 3, 3, rng), kExact);
    EXPECT_EQ(k33.dimDA, 0u);
    EXPECT_EQ(k33.dimDB, 0u);
    EXPECT_EQ(k33.dimQC, 0u);
    EXPECT_EQ(k33.k, 6u);
    ASSERT_TRUE(k33.dim_omega_formula);
    EXPECT_EQ(*k33.dim_omega_formula, 0);
    EXPECT_EQ(k33.dim_omega_direct, 0u);

    const auto k44 = bolker_roth_report(gen::generic_bipartite(3, 4, 4, rng), kExact);
    EXPECT_EQ(k44.dimQC, 2u);
    EXPECT_EQ(k44.k, 8u);
    ASSERT_TRUE(k44.dim_omega_formula);
    EXPECT_EQ(*k44.dim_omega_formula, 0);
    EXPECT_TRUE(k44.formula_matches_direct());

    EXPECT_EQ(bolker_roth_formula(0, 0, 1, 6, 2), 1);
    EXPECT_EQ(stress_space_dim_bolker_roth(circle_k33(), kExact), 1);
}

TEST(BolkerRoth, FormulaThrowsWhenBoundaryDoesNotSpan) {
    const BipartiteRealization flat{2, {{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 3}, {4, 2}}};
    try {
        stress_space_dim_bolker_roth(flat, kExact);
        FAIL() << "expected a hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.code(), "C_not_spanning");
    }
    const auto r = bolker_roth_report(flat, kExact);
    EXPECT_FALSE(r.dim_omega_formula);
    EXPECT_EQ(r.classification, Classification::C_not_spanning);
}

TEST(BolkerRoth, FormulaMatchesDirectOnRandomSpanningConfigurations) {
    gen::Rng rng(39);
    std::size_t spanning = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t d = 2 + trial % 3;
        std::uniform_int_distribution<std::size_t> side(d + 1, d + 4);
        BipartiteRealization br;
        switch (trial % 4) {
            case 0: br = gen::generic_bipartite(d, side(rng), side(rng), rng); break;
            case 1: br = gen::quadric_bipartite(gen::random_quadric_surface(gen::QuadricKind::ellipsoid, d, rng),
                                                side(rng), side(rng), rng); break;
            case 2: br = gen::quadric_bipartite(gen::random_quadric_surface(gen::QuadricKind::cylinder, d, rng),
                                                side(rng), side(rng), rng); break;
            default: br = gen::flat_side_bipartite(d, side(rng), side(rng), rng);
        }
        const auto r = bolker_roth_report(br, kExact);
        EXPECT_EQ(r.dim_omega_direct, oracle_stress_dim(br));
        EXPECT_EQ(r.kernel_dim_via_stress, static_cast<long>(r.kernel_dim_direct));
        if (r.dim_omega_formula) {
            ++spanning;
            EXPECT_TRUE(r.formula_matches_direct()) << "trial " << trial;
        }
    }
    EXPECT_GT(spanning, 40u);
}

TEST(KernelIdentity, Examples) {
    gen::Rng rng(40);
    EXPECT_EQ(kernel_dim_via_stress(circle_k33(), kExact), 4);
    EXPECT_EQ(kernel_dim_via_stress(gen::generic_bipartite(2, 3, 3, rng), kExact), 3);
    EXPECT_EQ(kernel_dim_via_stress(BipartiteRealization{2, {{0, 0}}, {{1, 0}}}, kExact), 3);
}

TEST(Classify, Examples) {
    gen::Rng rng(41);
    EXPECT_EQ(classify(gen::generic_bipartite(2, 4, 4, rng), kExact).classification,
              Classification::infinitesimally_rigid);

    const auto sphere = gen::quadric_bipartite({gen::QuadricKind::sphere, 3, {1, 1, 1}, {0, 0, 0}}, 5, 5, rng);
    const auto r = classify(sphere, kExact);
    EXPECT_EQ(r.classification, Classification::vertices_on_quadric);
    EXPECT_GE(r.dimQC, 1u);
    EXPECT_EQ(r.kernel_dim_direct - r.trivial_dim, r.dimQC);

    const auto c = classify(circle_k33(), kExact);
    EXPECT_EQ(c.classification, Classification::vertices_on_quadric);
    EXPECT_EQ(c.dimQC, 1u);
}

TEST(Classify, RejectsNonSpanningSides) {
    gen::Rng rng(42);
    const auto flat = gen::flat_side_bipartite(3, 5, 5, rng);
    try {
        classify(flat, kExact);
        FAIL() << "expected a hypothesis error";
    } catch (const HypothesisError& e) {
        EXPECT_EQ(e.code(), "side_not_spanning");
    }
}

TEST(Classify, ExcessEqualsQuadricDimensionOnQuadricSamples) {
    gen::Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const auto q = gen::random_quadric_surface(static_cast<gen::QuadricKind>(trial % 3), d, rng);
        const auto br = gen::quadric_bipartite(q, d + 2, d + 3, rng);
        for (const auto& policy : {kExact, kFloat}) {
            const auto input = policy.is_exact() ? br : gen::to_floating(br);
            const auto r = classify(input, policy);
            EXPECT_EQ(r.classification, Classification::vertices_on_quadric);
            EXPECT_EQ(r.kernel_dim_direct - r.trivial_dim, r.dimQC);
        }
    }
}

TEST(BipartiteRealization, ValidationErrors) {
    EXPECT_THROW((BipartiteRealization{2, {}, {{0, 0}}}.validate()), InvalidInputError);
    EXPECT_THROW((BipartiteRealization{2, {{0, 0, 0}}, {{0, 0}}}.validate()), InvalidInputError);
}
