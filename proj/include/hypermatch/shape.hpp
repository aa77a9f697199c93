#pragma once

#include <cstddef>

#include "hypermatch/error.hpp"

namespace hypermatch {

/// Size of a matching problem: n1 template points matched into n2 scene points.
///
/// Correspondences are linearized row-major: pair (i, j), 0-based, maps to
/// i * n2 + j. External documents use 1-based (i, j) and (i-1)*n2 + j.
struct MatchingShape {
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    MatchingShape() = default;
    MatchingShape(std::size_t rows, std::size_t cols) : n1(rows), n2(cols)
    {
        if (n1 < 1 || n2 < n1)
            throw InvalidInput("MatchingShape requires 1 <= n1 <= n2");
    }

    std::size_t size() const { return n1 * n2; }
    std::size_t index(std::size_t row, std::size_t col) const { return row * n2 + col; }
    std::size_t row_of(std::size_t idx) const { return idx / n2; }
    std::size_t col_of(std::size_t idx) const { return idx % n2; }

    friend bool operator==(const MatchingShape&, const MatchingShape&) = default;
};

}  // namespace hypermatch
