#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hypermatch/shape.hpp"

namespace hypermatch {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest n for which n x n matrices are materialized.
inline constexpr std::size_t kDenseThreshold = 5000;
/// Largest n for which the exact O(n^4) lifted norm is computed.
inline constexpr std::size_t kBruteForceThreshold = 40;

/// One canonical representative (i < j < k, 0-based) of a symmetric entry.
struct Orbit {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    std::uint32_t k = 0;
    double value = 0.0;

    friend bool operator==(const Orbit&, const Orbit&) = default;
};

/// Unordered input triple; canonicalized on ingest.
struct TripleEntry {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;
    double value = 0.0;
};

/// Symmetric third-order tensor with zero entries on every repeated index.
///
/// Only strictly increasing index triples are stored, one per permutation
/// orbit, sorted lexicographically. Every stored orbit stands for six equal
/// entries of the full tensor. Immutable after construction.
class SparseTensor3 {
public:
    SparseTensor3() = default;
    explicit SparseTensor3(MatchingShape shape) : shape_(shape) {}

    /// Sorts each triple, rejects repeated indices, negative or non-finite
    /// values, and sums entries that land on the same orbit.
    static SparseTensor3 from_entries(MatchingShape shape, std::span<const TripleEntry> entries);

    const MatchingShape& shape() const { return shape_; }
    std::size_t dim() const { return shape_.size(); }
    std::span<const Orbit> orbits() const { return orbits_; }
    bool empty() const { return orbits_.empty(); }

    /// Full-tensor entry lookup, any index order. O(log #orbits).
    double at(std::size_t a, std::size_t b, std::size_t c) const;

private:
    MatchingShape shape_;
    std::vector<Orbit> orbits_;
};

/// F3 paired with the convexification weight; stands for F4 + alpha * G4
/// where F4 is the lifting of F3. F4 is never materialized.
struct LiftedOperator {
    const SparseTensor3* tensor = nullptr;
    double alpha = 0.0;

    LiftedOperator(const SparseTensor3& t, double a);
};

// Third-order contractions over the full symmetric tensor.

/// S3(x) = sum_{ijk} F_ijk x_i x_j x_k.
double eval_s3(const SparseTensor3& tensor, const Vector& x);
/// F3(x, y, z).
double eval_f3(const SparseTensor3& tensor, const Vector& x, const Vector& y, const Vector& z);
/// l -> sum_{ij} F_ijl x_i y_j.
Vector contract3_vec(const SparseTensor3& tensor, const Vector& x, const Vector& y);
/// (k, l) -> sum_i F_ikl x_i.
Matrix contract3_mat(const SparseTensor3& tensor, const Vector& x);

double eval_g4(const Vector& x, const Vector& y, const Vector& z, const Vector& t);

// Lifted fourth-order contractions.

Vector lift_contract_vec(const LiftedOperator& op, const Vector& x, const Vector& y, const Vector& z);
Matrix lift_contract_mat(const LiftedOperator& op, const Vector& x, const Vector& y);
double eval_f4_alpha(const LiftedOperator& op, const Vector& x, const Vector& y, const Vector& z,
                     const Vector& t);
double eval_s4_alpha(const LiftedOperator& op, const Vector& x);

/// Frobenius norm of the full F3: sqrt(6 * sum v^2).
double f3_norm(const SparseTensor3& tensor);
/// 12 * sqrt(n) * ||F3||, an upper bound on 3 * ||F4||.
double alpha_bound(const SparseTensor3& tensor);
/// Exact ||F4|| by materializing all n^4 lifted entries. n <= kBruteForceThreshold.
double f4_norm_exact(const SparseTensor3& tensor, std::size_t threshold = kBruteForceThreshold);

}  // namespace hypermatch
