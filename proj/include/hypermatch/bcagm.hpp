#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hypermatch/lap.hpp"
#include "hypermatch/qap.hpp"
#include "hypermatch/tensor.hpp"

namespace hypermatch {

enum class Variant { bcagm, bcagm_psi };

/// How the convexification weight evolves during a solve.
///  - zero_then_bound: alpha = 0 until the first stall that merging cannot
///    resolve, then alpha = bound with all blocks reset to the best u.
///  - bound_always: alpha = bound from the start (the guaranteed setting).
///  - zero_only: alpha = 0 throughout; ascent is then only guaranteed if
///    S4 happens to be convex.
enum class AlphaSchedule { zero_then_bound, bound_always, zero_only };

std::string_view to_string(AlphaSchedule s);
AlphaSchedule alpha_schedule_from_string(std::string_view s);

struct SolverConfig {
    Variant variant = Variant::bcagm;
    PsiMethod subroutine = PsiMethod::mpm;  // bcagm_psi only
    AlphaSchedule schedule = AlphaSchedule::zero_then_bound;
    double equality_tol_rel = 1e-12;
    std::size_t max_outer_iters = 100;
    /// Replaces alpha_bound(tensor) as the nonzero alpha.
    std::optional<double> alpha_override;
    /// First sweep uses all-ones vectors for the not-yet-updated blocks.
    bool raw_ones_start = false;
    PsiConfig psi;
};

enum class Termination { converged, max_iterations, anomaly, degenerate };

std::string_view to_string(Termination t);

struct SolverTrace {
    /// Multilinear value after every block update and every merge.
    std::vector<double> stage_scores;
    /// S3 of the start point followed by S3 of every accepted merge point u^m.
    /// Strictly increasing; the last entry is the score of the returned point.
    std::vector<double> u_scores3;
    /// Index into stage_scores where each alpha phase begins, and its alpha.
    std::vector<std::size_t> alpha_phase_starts;
    std::vector<double> alpha_values;
    Termination terminated = Termination::converged;
};

struct Solution {
    Assignment assignment;
    double score3 = 0.0;
    double score4_alpha = 0.0;
    SolverTrace trace;
    std::size_t outer_iterations = 0;
};

/// Discretization of the first block update from all-ones blocks (alpha = 0).
Assignment default_start(const SparseTensor3& tensor);

/// Four-block ascent; each block update is a linear assignment problem.
Solution bcagm_solve(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start);
/// Two-block ascent; each block update is a guarded QAP subroutine.
Solution bcagm_psi_solve(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start);

/// Dispatches on cfg.variant; starts from default_start.
Solution solve(const SparseTensor3& tensor, const SolverConfig& cfg);

/// Third-order power iteration v <- F3(v, v, .) / ||.|| from all-ones,
/// discretized by one LAP. No ascent guarantee.
Solution hopm_baseline(const SparseTensor3& tensor, std::size_t max_iter = 1000, double tol = 1e-10);

/// Throws SolverAnomaly unless stage_scores are non-decreasing within each
/// alpha phase and u_scores3 strictly increase.
void audit_trace(const SolverTrace& trace, double tol_rel = 1e-12);

}  // namespace hypermatch
