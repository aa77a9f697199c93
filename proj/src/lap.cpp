#include "hypermatch/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hypermatch {

Assignment::Assignment(MatchingShape shape, std::vector<std::size_t> row_map)
    : shape_(shape), row_map_(std::move(row_map))
{
    if (row_map_.size() != shape_.n1)
        throw DimensionError("Assignment: row map has " + std::to_string(row_map_.size()) + " rows, expected " +
                             std::to_string(shape_.n1));
    std::vector<bool> taken(shape_.n2, false);
    indicator_ = Vector::Zero(static_cast<Eigen::Index>(shape_.size()));
    for (std::size_t r = 0; r < shape_.n1; ++r) {
        const std::size_t c = row_map_[r];
        if (c >= shape_.n2)
            throw InvalidInput("Assignment: column index out of range in row " + std::to_string(r));
        if (taken[c])
            throw InvalidInput("Assignment: column " + std::to_string(c) + " used twice");
        taken[c] = true;
        indicator_[static_cast<Eigen::Index>(shape_.index(r, c))] = 1.0;
    }
}

Assignment Assignment::identity(MatchingShape shape)
{
    std::vector<std::size_t> rm(shape.n1);
    for (std::size_t r = 0; r < shape.n1; ++r)
        rm[r] = r;
    return Assignment(shape, std::move(rm));
}

Assignment Assignment::from_indicator(MatchingShape shape, const Vector& indicator)
{
    if (static_cast<std::size_t>(indicator.size()) != shape.size())
        throw DimensionError("Assignment::from_indicator: length mismatch");
    std::vector<std::size_t> rm(shape.n1, shape.n2);
    for (std::size_t r = 0; r < shape.n1; ++r) {
        for (std::size_t c = 0; c < shape.n2; ++c) {
            const double v = indicator[static_cast<Eigen::Index>(shape.index(r, c))];
            if (v == 1.0) {
                if (rm[r] != shape.n2)
                    throw InvalidInput("Assignment::from_indicator: row " + std::to_string(r) + " has two ones");
                rm[r] = c;
            } else if (v != 0.0) {
                throw InvalidInput("Assignment::from_indicator: entries must be 0 or 1");
            }
        }
        if (rm[r] == shape.n2)
            throw InvalidInput("Assignment::from_indicator: row " + std::to_string(r) + " is unassigned");
    }
    return Assignment(shape, std::move(rm));
}

ProfitMatrix reshape_to_profit(const Vector& v, MatchingShape shape)
{
    if (static_cast<std::size_t>(v.size()) != shape.size())
        throw DimensionError("reshape_to_profit: expected length " + std::to_string(shape.size()));
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    return Eigen::Map<const RowMajor>(v.data(), static_cast<Eigen::Index>(shape.n1),
                                      static_cast<Eigen::Index>(shape.n2));
}

Vector flatten_profit(const ProfitMatrix& p)
{
    Vector out(p.size());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < p.rows(); ++r)
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            out[k++] = p(r, c);
    return out;
}

Assignment solve_lap_max(const ProfitMatrix& profit)
{
    const auto rows = static_cast<std::size_t>(profit.rows());
    const auto cols = static_cast<std::size_t>(profit.cols());
    if (rows < 1 || cols < rows)
        throw InvalidInput("solve_lap_max: need 1 <= n1 <= n2, got " + std::to_string(rows) + " x " +
                           std::to_string(cols));
    if (!profit.allFinite())
        throw InvalidInput("solve_lap_max: profit matrix has non-finite entries");

    const double top = profit.maxCoeff();
    auto cost = [&](std::size_t r, std::size_t c) { return top - profit(static_cast<Eigen::Index>(r - 1),
                                                                         static_cast<Eigen::Index>(c - 1)); };

    // 1-based arrays; column 0 is the virtual source.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0), minv(cols + 1);
    std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
    std::vector<char> used(cols + 1);

    for (std::size_t r = 1; r <= rows; ++r) {
        owner[0] = r;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= cols; ++j) {
                if (used[j])
                    continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_map(rows);
    for (std::size_t j = 1; j <= cols; ++j)
        if (owner[j] != 0)
            row_map[owner[j] - 1] = j - 1;
    return Assignment(MatchingShape(rows, cols), std::move(row_map));
}

double assignment_profit(const ProfitMatrix& profit, const Assignment& a)
{
    double acc = 0.0;
    for (std::size_t r = 0; r < a.shape().n1; ++r)
        acc += profit(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a[r]));
    return acc;
}

}  // namespace hypermatch
