#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypermatch/qap.hpp"
#include "hypermatch/tensor.hpp"

namespace hypermatch {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

using PointSet = std::vector<Point2>;
using Triangle = std::array<std::size_t, 3>;
using Feature = std::array<double, 3>;

struct SamplingConfig {
    /// P-triples sampled per template point.
    std::size_t triples_per_point = 50;
    /// Nearest Q-triples kept per P-triple.
    std::size_t knn = 300;
    double min_side = 1e-9;
    std::uint64_t seed = 0;
    /// Maximum number of unordered Q-triples scanned; above it a seeded sample is drawn.
    std::size_t q_triple_cap = 200000;
};

struct AffinityParams {
    /// Unset: 1 / mean of the retained squared feature distances.
    std::optional<double> gamma;
    double sigma_s = 0.5;
};

/// Sines of the interior angles at each vertex, in tuple order.
/// Empty if the triangle is degenerate (a side shorter than min_side, or
/// collinear points). Throws on out-of-range or repeated indices.
std::optional<Feature> triangle_feature(const PointSet& ps, const Triangle& tri, double min_side = 1e-9);

struct AffinityTensor {
    SparseTensor3 tensor;
    double gamma = 0.0;
    std::size_t p_triples = 0;
    std::size_t q_triples = 0;
};

/// Third-order angle affinities exp(-gamma ||f_P - f_Q||^2).
///
/// P-triples are distinct unordered vertex sets (all of them when there are
/// at most triples_per_point * n1, otherwise a seeded sample). Every
/// non-degenerate Q vertex set is taken in all six vertex orders, so the
/// correspondence (p1->q1, p2->q2, p3->q3) can align with any labeling.
/// Output is independent of evaluation order.
AffinityTensor build_tensor(const PointSet& p, const PointSet& q, const SamplingConfig& sc,
                            const AffinityParams& ap = {});

/// Pairwise distance-consistency affinities for second-order baselines.
QapMatrix build_matrix2(const PointSet& p, const PointSet& q, const AffinityParams& ap = {});

}  // namespace hypermatch
