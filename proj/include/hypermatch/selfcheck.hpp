#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypermatch/tensor.hpp"

namespace hypermatch {

struct CheckResult {
    std::string group;
    bool passed = false;
    std::string detail;
};

/// Seeded random tensor with `orbits` distinct orbits, values U(0, 1).
SparseTensor3 random_tensor(MatchingShape shape, std::size_t orbits, std::uint64_t seed);

/// Fast invariant suite: multilinear identities, bounds on mixed forms
/// at exact alpha, tiny-scale max equivalence, LAP vs enumeration, QAP
/// guard, and solver monotonicity. One result per group, fixed order.
/// `force_fail` marks the last group failed (test hook).
std::vector<CheckResult> run_selfcheck(std::uint64_t seed = 1, bool force_fail = false);

}  // namespace hypermatch
