#pragma once

#include <cstddef>
#include <vector>

#include "hypermatch/shape.hpp"
#include "hypermatch/tensor.hpp"

namespace hypermatch {

/// A one-to-one matching: every row gets exactly one column, every column
/// at most one row. Holds both the row map and the 0/1 indicator vector.
class Assignment {
public:
    Assignment() = default;
    /// Throws InvalidInput unless row_map is an injection into [0, n2).
    Assignment(MatchingShape shape, std::vector<std::size_t> row_map);

    static Assignment identity(MatchingShape shape);
    /// Parses a 0/1 indicator vector of length n1*n2.
    static Assignment from_indicator(MatchingShape shape, const Vector& indicator);

    const MatchingShape& shape() const { return shape_; }
    const std::vector<std::size_t>& row_map() const { return row_map_; }
    std::size_t operator[](std::size_t row) const { return row_map_[row]; }
    const Vector& indicator() const { return indicator_; }

    friend bool operator==(const Assignment& a, const Assignment& b)
    {
        return a.shape_ == b.shape_ && a.row_map_ == b.row_map_;
    }

private:
    MatchingShape shape_;
    std::vector<std::size_t> row_map_;
    Vector indicator_;
};

/// n1 x n2 profits; maximized by solve_lap_max.
using ProfitMatrix = Matrix;

/// Row-major reshape of a length n1*n2 vector.
ProfitMatrix reshape_to_profit(const Vector& v, MatchingShape shape);
Vector flatten_profit(const ProfitMatrix& p);

/// Globally optimal max-profit rectangular assignment (n1 <= n2).
///
/// Shortest-augmenting-path Hungarian method on costs max(p) - p, one row
/// at a time, without padding to square. Scans columns in index order and
/// keeps the first minimum, so equal inputs give equal outputs.
Assignment solve_lap_max(const ProfitMatrix& profit);

/// Sum of the selected profits, accumulated in row order.
double assignment_profit(const ProfitMatrix& profit, const Assignment& a);

}  // namespace hypermatch
