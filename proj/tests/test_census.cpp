#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rigidlab/census.hpp"
#include "rigidlab/generators.hpp"

using namespace rigidlab;

namespace {

std::vector<std::vector<mpq_class>> to_q(const std::vector<Point>& pts) {
    std::vector<std::vector<mpq_class>> out;
    for (const auto& p : pts) {
        std::vector<mpq_class> row;
        for (const auto& x : p) row.push_back(x.rational());
        out.push_back(row);
    }
    return out;
}

/// Brute-force triple count: distinct (first coord of p, first coord of q, |p - q|) with exact equality.
std::size_t brute_triples(const std::vector<RealPoint>& p, const std::vector<RealPoint>& q) {
    std::set<std::tuple<double, double, double>> triples;
    for (const auto& a : p)
        for (const auto& b : q) triples.emplace(a[0], b[0], euclidean_distance(a, b));
    return triples.size();
}

CurveHandle circle(double rho) {
    return CurveHandle::helix({2, {{rho, 1.0, 0.0}}, {}, {}}, 0.0, 2 * std::numbers::pi);
}

}  // namespace

TEST(DistinctDistances, ExactExamples) {
    const std::vector<Point> inner{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::vector<Point> outer{{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
    const auto circles = distinct_distances(inner, outer, 0.0, CensusMode::exact_squared);
    EXPECT_EQ(circles.distinct_count, 3u);
    EXPECT_EQ(circles.distances.size(), 3u);
    EXPECT_NEAR(circles.distances[0], 1.0, 1e-15);
    EXPECT_NEAR(circles.distances[1], std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(circles.distances[2], 3.0, 1e-15);

    const std::vector<Point> l1{{0, 0}, {1, 0}, {2, 0}}, l2{{0, 1}, {1, 1}, {2, 1}};
    EXPECT_EQ(distinct_distances(l1, l2, 0.0, CensusMode::exact_squared).distinct_count, 3u);

    const std::vector<Point> single{{Scalar::exact(2, 3), Scalar::exact(1, 9)}};
    const auto one = distinct_distances(single, single, 0.0, CensusMode::exact_squared);
    EXPECT_EQ(one.distinct_count, 1u);
    EXPECT_EQ(one.distances[0], 0.0);
}

TEST(DistinctDistances, BucketedAgreesOnExamples) {
    const std::vector<RealPoint> inner{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::vector<RealPoint> outer{{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
    EXPECT_EQ(distinct_distances(inner, outer, 1e-9).distinct_count, 3u);
}

TEST(DistinctDistances, ExactModeMatchesBruteForce) {
    gen::Rng rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 1 + trial % 3;
        // Small lattice coordinates force many coincident distances.
        std::uniform_int_distribution<long> c(-3, 3);
        std::vector<Point> p(1 + trial % 9, Point(d)), q(1 + trial % 7, Point(d));
        for (auto* set : {&p, &q})
            for (auto& pt : *set)
                for (auto& x : pt) x = Scalar::exact(c(rng), 1);
        const auto census = distinct_distances(p, q, 0.0, CensusMode::exact_squared);
        EXPECT_EQ(census.distinct_count, oracle::distinct_squared(to_q(p), to_q(q)));
        // Integer lattice distances sqrt(k) are separated by far more than 1e-9.
        EXPECT_EQ(distinct_distances(p, q, 1e-9, CensusMode::bucketed).distinct_count, census.distinct_count);
    }
}

TEST(DistinctDistances, BucketingSanity) {
    const std::vector<RealPoint> origin{{0.0}};
    const std::vector<RealPoint> chain{{1.0}, {1.0 + 4e-10}, {1.0 + 8e-10}, {1.0 + 1.2e-9}, {2.0}};
    // Gaps of 4e-10 chain into one bucket even though the span exceeds tol.
    const auto c = distinct_distances(origin, chain, 5e-10);
    EXPECT_EQ(c.distinct_count, 2u);
    EXPECT_DOUBLE_EQ(c.distances[0], 1.0);
    EXPECT_EQ(distinct_distances(origin, chain, 0.0).distinct_count, 5u);
    // Representatives are separated by more than tol.
    for (std::size_t k = 1; k < c.distances.size(); ++k) EXPECT_GT(c.distances[k] - c.distances[k - 1], 5e-10);
}

TEST(DistinctDistances, MonotoneInTolerance) {
    gen::Rng rng(62);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<RealPoint> p(30, RealPoint(2)), q(30, RealPoint(2));
    for (auto* set : {&p, &q})
        for (auto& pt : *set)
            for (auto& x : pt) x = normal(rng);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double tol : {0.0, 1e-6, 1e-3, 1e-2, 1e-1, 1.0}) {
        const auto n = distinct_distances(p, q, tol).distinct_count;
        EXPECT_LE(n, previous);
        previous = n;
    }
}

TEST(DistinctDistances, InvariantUnderRigidMotion) {
    gen::Rng rng(63);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 2 + trial % 2;
        const auto br = gen::generic_bipartite(d, 12, 12, rng);
        const auto moved = gen::apply_isometry(gen::random_isometry(d, rng), br);
        const auto before = distinct_distances(detail::to_real_points(br.A), detail::to_real_points(br.B), 1e-9);
        const auto after = distinct_distances(detail::to_real_points(moved.A), detail::to_real_points(moved.B), 1e-9);
        EXPECT_EQ(before.distinct_count, after.distinct_count);
        EXPECT_EQ(before.distinct_count, distinct_distances(br.A, br.B, 0.0, CensusMode::exact_squared).distinct_count);
    }
}

TEST(DistinctDistances, Errors) {
    EXPECT_THROW(distinct_distances(std::vector<RealPoint>{}, std::vector<RealPoint>{{0.0}}, 0.0), InvalidInputError);
    const std::vector<Point> real{to_reals({0.5, 0.0})};
    EXPECT_THROW(distinct_distances(real, real, 0.0, CensusMode::exact_squared), ArithmeticModeError);
}

TEST(TripleCount, Examples) {
    const std::vector<RealPoint> inner{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::vector<RealPoint> outer{{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
    const auto t = projected_triple_count(inner, outer, 1e-9);
    EXPECT_EQ(t.sizeA, 3u);
    EXPECT_EQ(t.sizeB, 3u);
    EXPECT_EQ(t.sizeC, 3u);
    EXPECT_GE(t.triple_count, t.sizeA * t.sizeB);
    EXPECT_EQ(t.triple_count, brute_triples(inner, outer));

    const auto single = projected_triple_count(std::vector<RealPoint>{{0, 0}}, std::vector<RealPoint>{{3, 4}}, 1e-9);
    EXPECT_EQ(single.sizeA, 1u);
    EXPECT_EQ(single.sizeB, 1u);
    EXPECT_EQ(single.sizeC, 1u);
    EXPECT_EQ(single.triple_count, 1u);
}

TEST(TripleCount, GenericSetsGiveProductCount) {
    gen::Rng rng(64);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<RealPoint> p(15, RealPoint(3)), q(11, RealPoint(3));
        for (auto* set : {&p, &q})
            for (auto& pt : *set)
                for (auto& x : pt) x = normal(rng);
        const auto t = projected_triple_count(p, q, 1e-12);
        EXPECT_EQ(t.triple_count, 15u * 11u);
        EXPECT_EQ(t.sizeC, 15u * 11u);
    }
}

TEST(TripleCount, LatticeSetsMatchBruteForce) {
    gen::Rng rng(65);
    std::uniform_int_distribution<int> c(-2, 2);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<RealPoint> p(2 + trial % 8, RealPoint(2)), q(2 + trial % 5, RealPoint(2));
        for (auto* set : {&p, &q})
            for (auto& pt : *set)
                for (auto& x : pt) x = c(rng);
        const auto t = projected_triple_count(p, q, 1e-9);
        EXPECT_EQ(t.triple_count, brute_triples(p, q));
        EXPECT_GE(t.triple_count, t.sizeA * t.sizeB);
        EXPECT_LE(t.triple_count, t.sizeA * t.sizeB * t.sizeC);
    }
}

TEST(Sampler, DeterministicAndDomainBound) {
    const auto c = circle(1.0);
    EXPECT_EQ(sample_parameters(c, 10, Sampler::uniform, 3), sample_parameters(c, 10, Sampler::uniform, 3));
    EXPECT_NE(sample_parameters(c, 10, Sampler::uniform, 3), sample_parameters(c, 10, Sampler::uniform, 4));
    const auto eq = sample_parameters(c, 4, Sampler::equispaced, 0);
    ASSERT_EQ(eq.size(), 4u);
    EXPECT_DOUBLE_EQ(eq[1], std::numbers::pi / 2);
    const auto line = CurveHandle::polynomial({{{0, 1}, {0}}}, 0.0, 10.0);
    const auto ints = sample_parameters(line, 5, Sampler::integer, 0);
    EXPECT_EQ(ints, (std::vector<double>{0, 1, 2, 3, 4}));
    EXPECT_THROW(sample_parameters(line, 12, Sampler::integer, 0), DomainError);
    EXPECT_THROW(parse_sampler("sobol"), InvalidInputError);
}

TEST(GrowthFit, LogLogFitRecoversPowerLaw) {
    const auto fit = fit_loglog({10, 20, 40, 80}, {300, 1200, 4800, 19200});
    EXPECT_NEAR(fit.slope, 2.0, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
    EXPECT_NEAR(fit.residual, 0.0, 1e-12);
    EXPECT_THROW(fit_loglog({1, 2}, {0, 1}), InvalidInputError);
}

TEST(GrowthFit, ContrastCurves) {
    const std::vector<std::size_t> schedule{64, 128, 256, 512};
    const auto circles = growth_fit(circle(1.0), circle(2.0), schedule, Sampler::equispaced, 1e-9, 7);
    EXPECT_NEAR(circles.fit.slope, 1.0, 0.15);
    const auto l1 = CurveHandle::polynomial({{{0, 1}, {0}}}, 0.0, 4096.0);
    const auto l2 = CurveHandle::polynomial({{{0, 1}, {1}}}, 0.0, 4096.0);
    const auto lines = growth_fit(l1, l2, schedule, Sampler::integer, 1e-9, 7);
    EXPECT_NEAR(lines.fit.slope, 1.0, 0.15);
    for (const auto& row : lines.rows) EXPECT_EQ(row.distinct_count, row.n);

    gen::Rng rng(66);
    const auto q1 = CurveHandle::polynomial(gen::random_polynomial_curve(3, 5, rng), -1, 1);
    const auto q2 = CurveHandle::polynomial(gen::random_polynomial_curve(3, 5, rng), -1, 1);
    EXPECT_GE(growth_fit(q1, q2, schedule, Sampler::uniform, 1e-9, 7).fit.slope, 1.5);
}

TEST(GrowthFit, ParallelAndSerialAgree) {
    gen::Rng rng(67);
    const auto q1 = CurveHandle::polynomial(gen::random_polynomial_curve(3, 5, rng), -1, 1);
    const auto q2 = CurveHandle::polynomial(gen::random_polynomial_curve(3, 5, rng), -1, 1);
    const auto par = growth_fit(q1, q2, {16, 32, 64}, Sampler::uniform, 1e-9, 9, true);
    const auto ser = growth_fit(q1, q2, {16, 32, 64}, Sampler::uniform, 1e-9, 9, false);
    EXPECT_EQ(par.fit.counts, ser.fit.counts);
    EXPECT_EQ(par.fit.slope, ser.fit.slope);
}

TEST(GrowthFit, ScheduleValidation) {
    const auto c = circle(1.0);
    EXPECT_THROW(growth_fit(c, c, {8, 16}, Sampler::uniform, 1e-9, 0), InvalidInputError);
    EXPECT_THROW(growth_fit(c, c, {8, 16, 16}, Sampler::uniform, 1e-9, 0), InvalidInputError);
    EXPECT_THROW(growth_fit(c, c, {0, 16, 32}, Sampler::uniform, 1e-9, 0), InvalidInputError);
}
