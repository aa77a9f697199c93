#include "hypermatch/bcagm.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hypermatch {

std::string_view to_string(AlphaSchedule s)
{
    switch (s) {
    case AlphaSchedule::zero_then_bound:
        return "zero-then-bound";
    case AlphaSchedule::bound_always:
        return "bound";
    case AlphaSchedule::zero_only:
        return "zero";
    }
    return "?";
}

AlphaSchedule alpha_schedule_from_string(std::string_view s)
{
    if (s == "zero-then-bound" || s == "zero_then_bound")
        return AlphaSchedule::zero_then_bound;
    if (s == "bound" || s == "bound_always")
        return AlphaSchedule::bound_always;
    if (s == "zero" || s == "zero_only")
        return AlphaSchedule::zero_only;
    throw InvalidInput("unknown alpha mode '" + std::string(s) + "'");
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::converged:
        return "converged";
    case Termination::max_iterations:
        return "max_iterations";
    case Termination::anomaly:
        return "anomaly";
    case Termination::degenerate:
        return "degenerate";
    }
    return "?";
}

Assignment default_start(const SparseTensor3& tensor)
{
    const LiftedOperator op(tensor, 0.0);
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(tensor.dim()));
    return solve_lap_max(reshape_to_profit(lift_contract_vec(op, ones, ones, ones), tensor.shape()));
}

namespace {

void check_start(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start)
{
    if (!(start.shape() == tensor.shape()))
        throw DimensionError("solver: start assignment shape differs from the tensor shape");
    if (cfg.max_outer_iters < 1 || !(cfg.equality_tol_rel > 0.0))
        throw InvalidInput("solver: max_outer_iters must be >= 1 and equality_tol_rel > 0");
    if (cfg.alpha_override && !(std::isfinite(*cfg.alpha_override) && *cfg.alpha_override >= 0.0))
        throw InvalidInput("solver: alpha override must be finite and nonnegative");
}

/// Block state shared by both variants. Blocks hold assignments once they
/// are in M; `vecs` may hold all-ones for blocks not yet updated.
struct BlockState {
    std::vector<Assignment> blocks;
    std::vector<Vector> vecs;
};

/// Outer loop common to both drivers: sweep, stall test, merge to the best
/// homogeneous point, alpha switch, termination.
///
/// `sweep(op, state, trace)` updates every block in order, appends the
/// multilinear value after each update to trace.stage_scores and returns the
/// value after the last one.
template <typename Sweep>
Solution run_ascent(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start,
                    std::size_t nblocks, Sweep&& sweep)
{
    check_start(tensor, cfg, start);
    const double bound = cfg.alpha_override.value_or(alpha_bound(tensor));
    const double tol = cfg.equality_tol_rel;
    auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); };

    double alpha = cfg.schedule == AlphaSchedule::bound_always ? bound : 0.0;
    bool can_switch = cfg.schedule == AlphaSchedule::zero_then_bound && bound > 0.0;

    Solution sol;
    SolverTrace& tr = sol.trace;
    auto start_phase = [&](double a) {
        tr.alpha_phase_starts.push_back(tr.stage_scores.size());
        tr.alpha_values.push_back(a);
    };

    BlockState st{std::vector<Assignment>(nblocks, start), std::vector<Vector>(nblocks, start.indicator())};
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(tensor.dim()));
    bool raw_sweep = cfg.raw_ones_start;
    if (raw_sweep)
        for (std::size_t b = 1; b < nblocks; ++b)
            st.vecs[b] = ones;

    Assignment u = start;
    double u3 = eval_s3(tensor, u.indicator());
    tr.u_scores3.push_back(u3);

    LiftedOperator op(tensor, alpha);
    start_phase(alpha);
    double fk = eval_s4_alpha(op, u.indicator());
    if (!raw_sweep)
        tr.stage_scores.push_back(fk);

    auto reset_blocks = [&](const Assignment& a) {
        for (std::size_t b = 0; b < nblocks; ++b) {
            st.blocks[b] = a;
            st.vecs[b] = a.indicator();
        }
    };

    tr.terminated = Termination::max_iterations;
    std::size_t k = 0;
    for (; k < cfg.max_outer_iters; ++k) {
        const double ftil = sweep(op, st, tr);
        if (raw_sweep) {
            // Comparisons start once every block is in M.
            raw_sweep = false;
            tr.alpha_phase_starts.back() = tr.stage_scores.size() - 1;
            fk = ftil;
            continue;
        }
        if (ftil < fk && !close(ftil, fk)) {
            tr.terminated = Termination::anomaly;
            ++k;
            break;
        }
        if (!close(ftil, fk)) {
            fk = ftil;
            continue;
        }

        // Stall: best homogeneous point among the blocks, first block wins ties.
        std::size_t pick = 0;
        double pick_val = eval_s4_alpha(op, st.vecs[0]);
        for (std::size_t b = 1; b < nblocks; ++b) {
            const double v = eval_s4_alpha(op, st.vecs[b]);
            if (v > pick_val) {
                pick = b;
                pick_val = v;
            }
        }
        const Assignment cand = st.blocks[pick];
        const double cand3 = eval_s3(tensor, cand.indicator());

        if (pick_val > ftil && !close(pick_val, ftil)) {
            u = cand;
            u3 = cand3;
            tr.u_scores3.push_back(u3);
            reset_blocks(u);
            fk = pick_val;
            tr.stage_scores.push_back(fk);
            continue;
        }

        // Merging does not improve. Keep whichever of u, cand scores higher.
        if (cand3 >= u3) {
            u = cand;
            u3 = cand3;
        }
        if (can_switch) {
            can_switch = false;
            alpha = bound;
            op = LiftedOperator(tensor, alpha);
            if (u3 > tr.u_scores3.back())
                tr.u_scores3.push_back(u3);
            reset_blocks(u);
            start_phase(alpha);
            fk = eval_s4_alpha(op, u.indicator());
            tr.stage_scores.push_back(fk);
            continue;
        }
        if (u3 > tr.u_scores3.back())
            tr.u_scores3.push_back(u3);
        tr.terminated = Termination::converged;
        ++k;
        break;
    }

    sol.assignment = u;
    sol.score3 = u3;
    sol.score4_alpha = eval_s4_alpha(op, u.indicator());
    sol.outer_iterations = k;
    return sol;
}

}  // namespace

Solution bcagm_solve(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start)
{
    const MatchingShape shape = tensor.shape();
    auto sweep = [&](const LiftedOperator& op, BlockState& st, SolverTrace& tr) {
        double val = 0.0;
        for (std::size_t b = 0; b < 4; ++b) {
            const Vector& p = st.vecs[(b + 1) % 4];
            const Vector& q = st.vecs[(b + 2) % 4];
            const Vector& r = st.vecs[(b + 3) % 4];
            // F is symmetric, so the free slot can be taken last.
            const Vector g = lift_contract_vec(op, p, q, r);
            st.blocks[b] = solve_lap_max(reshape_to_profit(g, shape));
            st.vecs[b] = st.blocks[b].indicator();
            val = g.dot(st.vecs[b]);
            tr.stage_scores.push_back(val);
        }
        return val;
    };
    return run_ascent(tensor, cfg, start, 4, sweep);
}

Solution bcagm_psi_solve(const SparseTensor3& tensor, const SolverConfig& cfg, const Assignment& start)
{
    const MatchingShape shape = tensor.shape();
    auto sweep = [&](const LiftedOperator& op, BlockState& st, SolverTrace& tr) {
        double val = 0.0;
        for (std::size_t b = 0; b < 2; ++b) {
            const Vector& other = st.vecs[1 - b];
            const QapMatrix a(shape, lift_contract_mat(op, other, other));
            const QapResult r = psi_with_guard(a, st.blocks[b], cfg.subroutine, cfg.psi);
            st.blocks[b] = r.assignment;
            st.vecs[b] = r.assignment.indicator();
            val = r.objective;
            tr.stage_scores.push_back(val);
        }
        return val;
    };
    return run_ascent(tensor, cfg, start, 2, sweep);
}

Solution solve(const SparseTensor3& tensor, const SolverConfig& cfg)
{
    const Assignment start = default_start(tensor);
    return cfg.variant == Variant::bcagm ? bcagm_solve(tensor, cfg, start) : bcagm_psi_solve(tensor, cfg, start);
}

Solution hopm_baseline(const SparseTensor3& tensor, std::size_t max_iter, double tol)
{
    const auto n = static_cast<Eigen::Index>(tensor.dim());
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    Solution sol;
    sol.trace.terminated = Termination::max_iterations;
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        Vector next = contract3_vec(tensor, v, v);
        const double nn = next.norm();
        if (nn == 0.0) {
            sol.trace.terminated = Termination::degenerate;
            v = Vector::Ones(n);
            break;
        }
        next /= nn;
        const double diff = (next - v).norm();
        v = std::move(next);
        if (diff <= tol) {
            sol.trace.terminated = Termination::converged;
            ++it;
            break;
        }
    }
    sol.assignment = solve_lap_max(reshape_to_profit(v, tensor.shape()));
    sol.score3 = eval_s3(tensor, sol.assignment.indicator());
    sol.score4_alpha = eval_s4_alpha(LiftedOperator(tensor, 0.0), sol.assignment.indicator());
    sol.outer_iterations = it;
    return sol;
}

void audit_trace(const SolverTrace& tr, double tol_rel)
{
    auto slack = [tol_rel](double v) { return tol_rel * (1.0 + std::abs(v)); };
    if (tr.terminated == Termination::anomaly)
        throw SolverAnomaly("solver reported a decrease of the multilinear value");
    for (std::size_t p = 0; p < tr.alpha_phase_starts.size(); ++p) {
        const std::size_t lo = tr.alpha_phase_starts[p];
        const std::size_t hi =
            p + 1 < tr.alpha_phase_starts.size() ? tr.alpha_phase_starts[p + 1] : tr.stage_scores.size();
        for (std::size_t i = lo + 1; i < hi; ++i)
            if (tr.stage_scores[i] < tr.stage_scores[i - 1] - slack(tr.stage_scores[i - 1]))
                throw SolverAnomaly("stage score decreased at step " + std::to_string(i));
    }
    const auto& u = tr.u_scores3;
    for (std::size_t m = 1; m < u.size(); ++m)
        if (u[m] <= u[m - 1])
            throw SolverAnomaly("merge score sequence not strictly increasing at m = " + std::to_string(m));
}

}  // namespace hypermatch
