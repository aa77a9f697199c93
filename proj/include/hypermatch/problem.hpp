#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypermatch/harness.hpp"

namespace hypermatch {

/// Malformed problem/result document. `field` names the offending key path.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& msg)
        : std::runtime_error(field + ": " + msg), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline constexpr int kFormatVersion = 1;

struct ProblemOptions {
    Method method = Method::bcagm;
    AlphaSchedule schedule = AlphaSchedule::zero_then_bound;
    SamplingConfig sampling;
    AffinityParams affinity;
    std::size_t max_outer_iters = 100;
};

/// Problem document:
/// {
///   "format_version": 1,
///   "P": [[x, y], ...], "Q": [[x, y], ...],
///   "ground_truth": [q index per P point, 1-based],      (optional)
///   "options": { "method", "alpha_mode", "triples_per_point", "knn",
///                "min_side", "seed", "gamma", "sigma_s",
///                "max_outer_iters" }                        (all optional)
/// }
struct Problem {
    PointSet p;
    PointSet q;
    std::optional<std::vector<std::size_t>> ground_truth;  // 0-based
    ProblemOptions options;
};

/// Throws ParseError on syntax errors, missing or mistyped fields. Does not
/// check |P| <= |Q|; that is a property of the problem, not the document.
Problem parse_problem(std::string_view text);
std::string problem_to_json(const Problem& problem);

struct MatchReport {
    Method method = Method::bcagm;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<std::size_t> assignment;  // 0-based row -> column
    double score3 = 0.0;
    double score4_alpha = 0.0;
    std::size_t iterations = 0;
    std::size_t num_orbits = 0;
    double gamma = 0.0;
    SolverTrace trace;
    std::optional<double> accuracy;
};

/// Builds the tensor and runs the configured method. Throws InvalidInput for
/// unsolvable problems (|P| > |Q|, fewer than 3 points) and SolverAnomaly if
/// a BCAGM trace breaks monotonicity.
MatchReport run_match(const Problem& problem);

/// Result document with 1-based assignment, scores, and the trace.
std::string report_to_json(const MatchReport& report);
MatchReport parse_report(std::string_view text);

}  // namespace hypermatch
