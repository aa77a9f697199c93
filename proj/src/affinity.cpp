#include "hypermatch/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

namespace hypermatch {

namespace {

void check_points(const PointSet& ps, const char* what)
{
    for (const auto& pt : ps)
        if (!std::isfinite(pt.x) || !std::isfinite(pt.y))
            throw InvalidInput(std::string(what) + ": non-finite coordinate");
}

double dist(const Point2& a, const Point2& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::uint64_t choose3(std::uint64_t n)
{
    return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
}

std::uint64_t encode(const Triangle& t, std::size_t n)
{
    return (static_cast<std::uint64_t>(t[0]) * n + t[1]) * n + t[2];
}

/// Distinct sorted vertex sets with a usable feature: all of them if there
/// are at most `limit`, otherwise `limit` drawn uniformly without repetition.
std::vector<std::pair<Triangle, Feature>> collect_sets(const PointSet& ps, std::size_t limit, double min_side,
                                                       std::mt19937_64& rng)
{
    const std::size_t n = ps.size();
    std::vector<std::pair<Triangle, Feature>> out;
    if (choose3(n) <= limit) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c)
                    if (auto f = triangle_feature(ps, {a, b, c}, min_side))
                        out.emplace_back(Triangle{a, b, c}, *f);
        return out;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::unordered_set<std::uint64_t> seen;
    const std::size_t max_attempts = 50 * limit + 1000;
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < limit; ++attempt) {
        Triangle t{pick(rng), pick(rng), pick(rng)};
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
            continue;
        std::sort(t.begin(), t.end());
        if (!seen.insert(encode(t, n)).second)
            continue;
        if (auto f = triangle_feature(ps, t, min_side))
            out.emplace_back(t, *f);
    }
    return out;
}

constexpr std::array<std::array<std::size_t, 3>, 6> kOrders{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

struct OrderedTriple {
    Triangle idx;
    Feature f;
};

double sqdist(const Feature& a, const Feature& b)
{
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace

std::optional<Feature> triangle_feature(const PointSet& ps, const Triangle& tri, double min_side)
{
    for (auto i : tri)
        if (i >= ps.size())
            throw DimensionError("triangle_feature: vertex index out of range");
    if (tri[0] == tri[1] || tri[0] == tri[2] || tri[1] == tri[2])
        throw InvalidInput("triangle_feature: vertices must be distinct");
    const Point2& a = ps[tri[0]];
    const Point2& b = ps[tri[1]];
    const Point2& c = ps[tri[2]];
    const double ab = dist(a, b), bc = dist(b, c), ca = dist(c, a);
    if (std::min({ab, bc, ca}) < min_side)
        return std::nullopt;
    const double cross = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    // |cross| = 2 * area = product of two sides times the sine of their angle.
    Feature f{cross / (ab * ca), cross / (ab * bc), cross / (bc * ca)};
    if (std::min({f[0], f[1], f[2]}) <= 1e-12)
        return std::nullopt;
    for (auto& s : f)
        s = std::min(s, 1.0);
    return f;
}

AffinityTensor build_tensor(const PointSet& p, const PointSet& q, const SamplingConfig& sc, const AffinityParams& ap)
{
    if (p.size() < 3)
        throw InvalidInput("build_tensor: P needs at least 3 points");
    if (p.size() > q.size())
        throw InvalidInput("build_tensor: |P| must not exceed |Q|");
    if (sc.triples_per_point < 1 || sc.knn < 1 || !(sc.min_side > 0.0))
        throw InvalidInput("build_tensor: triples_per_point, knn must be >= 1 and min_side > 0");
    if (ap.gamma && !(*ap.gamma > 0.0 && std::isfinite(*ap.gamma)))
        throw InvalidInput("build_tensor: gamma must be positive");
    check_points(p, "build_tensor P");
    check_points(q, "build_tensor Q");

    const MatchingShape shape(p.size(), q.size());
    std::mt19937_64 rng(sc.seed);
    const auto p_sets = collect_sets(p, sc.triples_per_point * p.size(), sc.min_side, rng);
    const auto q_sets = collect_sets(q, sc.q_triple_cap, sc.min_side, rng);

    std::vector<OrderedTriple> q_ordered;
    q_ordered.reserve(6 * q_sets.size());
    for (const auto& [t, f] : q_sets)
        for (const auto& o : kOrders)
            q_ordered.push_back({Triangle{t[o[0]], t[o[1]], t[o[2]]}, Feature{f[o[0]], f[o[1]], f[o[2]]}});

    struct Match {
        std::size_t p_set;
        std::size_t q_idx;
        double d2;
    };
    std::vector<Match> kept;
    const std::size_t k = std::min(sc.knn, q_ordered.size());
    kept.reserve(p_sets.size() * k);
    std::vector<std::pair<double, std::size_t>> cand(q_ordered.size());
    for (std::size_t s = 0; s < p_sets.size(); ++s) {
        const Feature& fp = p_sets[s].second;
        for (std::size_t j = 0; j < q_ordered.size(); ++j)
            cand[j] = {sqdist(fp, q_ordered[j].f), j};
        // Pairs compare by (distance, index): ties resolve to the lower index.
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        for (std::size_t r = 0; r < k; ++r)
            kept.push_back({s, cand[r].second, cand[r].first});
    }

    double gamma = 1.0;
    if (ap.gamma) {
        gamma = *ap.gamma;
    } else if (!kept.empty()) {
        double sum = 0.0;
        for (const auto& m : kept)
            sum += m.d2;
        const double mean = sum / static_cast<double>(kept.size());
        if (mean > 0.0)
            gamma = 1.0 / mean;
    }

    std::vector<TripleEntry> entries;
    entries.reserve(kept.size());
    for (const auto& m : kept) {
        const Triangle& tp = p_sets[m.p_set].first;
        const Triangle& tq = q_ordered[m.q_idx].idx;
        const std::size_t a = shape.index(tp[0], tq[0]);
        const std::size_t b = shape.index(tp[1], tq[1]);
        const std::size_t c = shape.index(tp[2], tq[2]);
        if (a == b || a == c || b == c)
            continue;
        entries.push_back({a, b, c, std::exp(-gamma * m.d2)});
    }
    return AffinityTensor{SparseTensor3::from_entries(shape, entries), gamma, p_sets.size(), q_sets.size()};
}

QapMatrix build_matrix2(const PointSet& p, const PointSet& q, const AffinityParams& ap)
{
    if (p.empty())
        throw InvalidInput("build_matrix2: P is empty");
    if (p.size() > q.size())
        throw InvalidInput("build_matrix2: |P| must not exceed |Q|");
    if (!(ap.sigma_s > 0.0 && std::isfinite(ap.sigma_s)))
        throw InvalidInput("build_matrix2: sigma_s must be positive");
    check_points(p, "build_matrix2 P");
    check_points(q, "build_matrix2 Q");

    const MatchingShape shape(p.size(), q.size());
    const auto n = static_cast<Eigen::Index>(shape.size());
    if (shape.size() > kDenseThreshold)
        throw ThresholdError("build_matrix2: n = " + std::to_string(shape.size()) + " exceeds dense threshold");
    const double s2 = ap.sigma_s * ap.sigma_s;
    Matrix a = Matrix::Zero(n, n);
    for (std::size_t i1 = 0; i1 < shape.n1; ++i1)
        for (std::size_t i2 = 0; i2 < shape.n1; ++i2) {
            if (i1 == i2)
                continue;
            const double dp = dist(p[i1], p[i2]);
            for (std::size_t j1 = 0; j1 < shape.n2; ++j1)
                for (std::size_t j2 = 0; j2 < shape.n2; ++j2) {
                    if (j1 == j2)
                        continue;
                    const double gap = dp - dist(q[j1], q[j2]);
                    a(static_cast<Eigen::Index>(shape.index(i1, j1)), static_cast<Eigen::Index>(shape.index(i2, j2))) =
                        std::exp(-gap * gap / s2);
                }
        }
    return QapMatrix(shape, std::move(a));
}

}  // namespace hypermatch
