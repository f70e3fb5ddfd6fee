#ifndef RIGIDLAB_CENSUS_HPP
#define RIGIDLAB_CENSUS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "rigidlab/curves.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/scalar.hpp"

namespace rigidlab {

enum class CensusMode { exact_squared, bucketed };

inline std::string to_string(CensusMode mode) {
    return mode == CensusMode::exact_squared ? "exact-squared" : "bucketed";
}

struct DistanceCensus {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t distinct_count = 0;
    std::vector<double> distances;  // sorted representatives
    double tol = 0.0;
    CensusMode mode = CensusMode::bucketed;
};

namespace detail {

struct Buckets {
    std::vector<double> representatives;
    std::vector<std::size_t> index;  // bucket of each input value
};

/// Sorts values and merges runs whose consecutive gaps are <= tol; the
/// representative of a run is its smallest member.
inline Buckets bucket_values(const std::vector<double>& values, double tol) {
    Buckets b;
    b.index.resize(values.size());
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return values[a] < values[c]; });
    double previous = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double v = values[order[k]];
        if (k == 0 || v - previous > tol) b.representatives.push_back(v);
        b.index[order[k]] = b.representatives.size() - 1;
        previous = v;
    }
    return b;
}

inline std::vector<double> pair_distances(const std::vector<RealPoint>& p1, const std::vector<RealPoint>& p2) {
    std::vector<double> out;
    out.reserve(p1.size() * p2.size());
    for (const auto& p : p1)
        for (const auto& q : p2) out.push_back(euclidean_distance(p, q));
    return out;
}

inline std::vector<RealPoint> to_real_points(const std::vector<Point>& points) {
    std::vector<RealPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(to_doubles(p));
    return out;
}

inline void require_nonempty(std::size_t n1, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw InvalidInputError("distance census needs two nonempty point sets");
}

}  // namespace detail

/// Distinct distances between floating point sets (bucketed mode only).
inline DistanceCensus distinct_distances(const std::vector<RealPoint>& p1, const std::vector<RealPoint>& p2,
                                         double tol) {
    detail::require_nonempty(p1.size(), p2.size());
    DistanceCensus c;
    c.n1 = p1.size();
    c.n2 = p2.size();
    c.tol = tol;
    c.mode = CensusMode::bucketed;
    c.distances = detail::bucket_values(detail::pair_distances(p1, p2), tol).representatives;
    c.distinct_count = c.distances.size();
    return c;
}

/// Exact-squared mode deduplicates exact squared distances and requires
/// rational coordinates; bucketed mode merges sorted distances within tol.
inline DistanceCensus distinct_distances(const std::vector<Point>& p1, const std::vector<Point>& p2, double tol,
                                         CensusMode mode) {
    detail::require_nonempty(p1.size(), p2.size());
    if (mode == CensusMode::bucketed)
        return distinct_distances(detail::to_real_points(p1), detail::to_real_points(p2), tol);

    std::vector<mpq_class> squared;
    squared.reserve(p1.size() * p2.size());
    for (const auto& p : p1)
        for (const auto& q : p2) squared.push_back(squared_distance(p, q).rational());
    std::sort(squared.begin(), squared.end());
    squared.erase(std::unique(squared.begin(), squared.end()), squared.end());

    DistanceCensus c;
    c.n1 = p1.size();
    c.n2 = p2.size();
    c.tol = 0.0;
    c.mode = CensusMode::exact_squared;
    for (const auto& s : squared) c.distances.push_back(std::sqrt(s.get_d()));
    c.distinct_count = squared.size();
    return c;
}

struct TripleCount {
    std::size_t sizeA = 0;  // distinct first coordinates of P1
    std::size_t sizeB = 0;  // distinct first coordinates of P2
    std::size_t sizeC = 0;  // distinct distances
    std::size_t triple_count = 0;
    std::size_t max_fiber_A = 0;  // most points of P1 sharing one first coordinate
    std::size_t max_fiber_B = 0;
};

/// Counts triples (a, b, c) realized by some p in P1, q in P2 with first
/// coordinates a, b and |p - q| = c (all three bucketed within tol). Every
/// pair (a, b) is realized, so triple_count >= |A||B| is enforced.
inline TripleCount projected_triple_count(const std::vector<RealPoint>& p1, const std::vector<RealPoint>& p2,
                                          double tol) {
    detail::require_nonempty(p1.size(), p2.size());
    auto first_coordinates = [](const std::vector<RealPoint>& pts) {
        std::vector<double> out;
        out.reserve(pts.size());
        for (const auto& p : pts) out.push_back(p.at(0));
        return out;
    };
    const auto a = detail::bucket_values(first_coordinates(p1), tol);
    const auto b = detail::bucket_values(first_coordinates(p2), tol);
    const auto c = detail::bucket_values(detail::pair_distances(p1, p2), tol);

    TripleCount out;
    out.sizeA = a.representatives.size();
    out.sizeB = b.representatives.size();
    out.sizeC = c.representatives.size();

    auto max_fiber = [](const detail::Buckets& bk) {
        std::vector<std::size_t> counts(bk.representatives.size(), 0);
        for (auto i : bk.index) ++counts[i];
        return counts.empty() ? std::size_t{0} : *std::max_element(counts.begin(), counts.end());
    };
    out.max_fiber_A = max_fiber(a);
    out.max_fiber_B = max_fiber(b);

    std::vector<std::uint64_t> keys;
    keys.reserve(p1.size() * p2.size());
    const auto nb = static_cast<std::uint64_t>(out.sizeB), nc = static_cast<std::uint64_t>(out.sizeC);
    std::size_t pair = 0;
    for (std::size_t i = 0; i < p1.size(); ++i)
        for (std::size_t j = 0; j < p2.size(); ++j, ++pair)
            keys.push_back((a.index[i] * nb + b.index[j]) * nc + c.index[pair]);
    std::sort(keys.begin(), keys.end());
    out.triple_count = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());

    if (out.triple_count < out.sizeA * out.sizeB)
        throw InvariantViolation("triple count below |A||B|");
    if (out.triple_count > out.sizeA * out.sizeB * out.sizeC) throw InvariantViolation("triple count above |A||B||C|");
    return out;
}

inline TripleCount projected_triple_count(const std::vector<Point>& p1, const std::vector<Point>& p2, double tol) {
    return projected_triple_count(detail::to_real_points(p1), detail::to_real_points(p2), tol);
}

enum class Sampler { uniform, equispaced, integer };

inline std::string to_string(Sampler s) {
    switch (s) {
        case Sampler::uniform: return "uniform";
        case Sampler::equispaced: return "equispaced";
        case Sampler::integer: return "integer";
    }
    return "unknown";
}

inline Sampler parse_sampler(const std::string& text) {
    if (text == "uniform") return Sampler::uniform;
    if (text == "equispaced") return Sampler::equispaced;
    if (text == "integer") return Sampler::integer;
    throw InvalidInputError("unknown sampler '" + text + "'");
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

/// Uniform: seeded draws in the domain. Equispaced: t_lo + k (t_hi - t_lo) / n,
/// k < n (a full period gives no repeated point). Integer: t_lo + k.
inline std::vector<double> sample_parameters(const CurveHandle& c, std::size_t n, Sampler sampler,
                                             std::uint64_t seed) {
    std::vector<double> out(n);
    switch (sampler) {
        case Sampler::uniform: {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> dist(c.t_lo(), c.t_hi());
            for (auto& t : out) t = dist(rng);
            break;
        }
        case Sampler::equispaced:
            for (std::size_t k = 0; k < n; ++k)
                out[k] = c.t_lo() + (c.t_hi() - c.t_lo()) * static_cast<double>(k) / static_cast<double>(n);
            break;
        case Sampler::integer:
            for (std::size_t k = 0; k < n; ++k) out[k] = c.t_lo() + static_cast<double>(k);
            if (n > 0) c.require_in_domain(out.back());
            break;
    }
    return out;
}

inline std::vector<RealPoint> sample_curve(const CurveHandle& c, std::size_t n, Sampler sampler, std::uint64_t seed) {
    std::vector<RealPoint> out;
    out.reserve(n);
    for (double t : sample_parameters(c, n, sampler, seed)) out.push_back(curve_point(c, t));
    return out;
}

struct CensusRow {
    std::size_t n = 0;
    std::size_t distinct_count = 0;
    TripleCount triples;
    double seconds = 0.0;
};

struct GrowthFit {
    std::vector<std::size_t> schedule;
    std::vector<std::size_t> counts;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of log-log residuals
};

/// Ordinary least squares of log(count) on log(n).
inline GrowthFit fit_loglog(const std::vector<std::size_t>& schedule, const std::vector<std::size_t>& counts) {
    if (schedule.size() != counts.size() || schedule.size() < 2)
        throw InvalidInputError("growth fit needs matching schedule and counts with >= 2 entries");
    GrowthFit fit{schedule, counts, 0.0, 0.0, 0.0};
    const double k = static_cast<double>(schedule.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (counts[i] == 0) throw InvalidInputError("growth fit aborted: zero distinct-distance count");
        const double x = std::log(static_cast<double>(schedule[i])), y = std::log(static_cast<double>(counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) throw InvalidInputError("growth fit needs at least two distinct sizes");
    fit.slope = (k * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / k;
    double ss = 0.0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double r = std::log(static_cast<double>(counts[i])) -
                         (fit.intercept + fit.slope * std::log(static_cast<double>(schedule[i])));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / k);
    return fit;
}

struct CensusRun {
    std::vector<CensusRow> rows;
    GrowthFit fit;
    std::vector<std::string> warnings;
};

inline CensusRow census_row(const CurveHandle& c1, const CurveHandle& c2, std::size_t n, Sampler sampler, double tol,
                            std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const auto p1 = sample_curve(c1, n, sampler, mix_seed(seed, n, 1));
    const auto p2 = sample_curve(c2, n, sampler, mix_seed(seed, n, 2));
    CensusRow row;
    row.n = n;
    row.triples = projected_triple_count(p1, p2, tol);
    row.distinct_count = row.triples.sizeC;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

/// Runs the census at every schedule size and fits the log-log growth
/// exponent. Entries may run concurrently; each draws from its own seed
/// stream, so results do not depend on execution order.
inline CensusRun growth_fit(const CurveHandle& c1, const CurveHandle& c2, const std::vector<std::size_t>& schedule,
                            Sampler sampler, double tol, std::uint64_t seed, bool parallel = true) {
    if (schedule.size() < 3) throw InvalidInputError("census schedule needs at least three sizes");
    if (!std::is_sorted(schedule.begin(), schedule.end()) ||
        std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end())
        throw InvalidInputError("census schedule must be strictly increasing");
    if (schedule.front() == 0) throw InvalidInputError("census sizes must be positive");
    if (c1.dim() != c2.dim()) throw MismatchError("curves live in different dimensions");

    CensusRun run;
    if (parallel) {
        std::vector<std::future<CensusRow>> jobs;
        for (std::size_t n : schedule)
            jobs.push_back(std::async(std::launch::async, census_row, std::cref(c1), std::cref(c2), n, sampler, tol, seed));
        for (auto& j : jobs) run.rows.push_back(j.get());
    } else {
        for (std::size_t n : schedule) run.rows.push_back(census_row(c1, c2, n, sampler, tol, seed));
    }

    std::vector<std::size_t> counts;
    for (const auto& row : run.rows) {
        counts.push_back(row.distinct_count);
        const auto fiber = std::max(row.triples.max_fiber_A, row.triples.max_fiber_B);
        if (static_cast<double>(fiber) > std::sqrt(static_cast<double>(row.n)))
            run.warnings.push_back("n=" + std::to_string(row.n) + ": first-coordinate fiber of size " +
                                   std::to_string(fiber) + " looks unbounded; rotate the curves generically");
    }
    run.fit = fit_loglog(schedule, counts);
    return run;
}

}  // namespace rigidlab

#endif  // RIGIDLAB_CENSUS_HPP
