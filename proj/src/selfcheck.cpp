#include "hypermatch/selfcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hypermatch/bcagm.hpp"
#include "hypermatch/lap.hpp"
#include "hypermatch/qap.hpp"

namespace hypermatch {

SparseTensor3 random_tensor(MatchingShape shape, std::size_t orbits, std::uint64_t seed)
{
    const std::size_t n = shape.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    const std::size_t total = n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
    orbits = std::min(orbits, total);
    std::set<std::array<std::size_t, 3>> seen;
    std::vector<TripleEntry> entries;
    while (entries.size() < orbits) {
        std::array<std::size_t, 3> t{pick(rng), pick(rng), pick(rng)};
        if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
            continue;
        std::sort(t.begin(), t.end());
        if (!seen.insert(t).second)
            continue;
        entries.push_back({t[0], t[1], t[2], val(rng)});
    }
    return SparseTensor3::from_entries(shape, entries);
}

namespace {

/// Calls f with every injective row map of an n1 x n2 shape.
void for_each_assignment(MatchingShape shape, const std::function<void(const Assignment&)>& f)
{
    std::vector<std::size_t> rm(shape.n1);
    std::vector<bool> used(shape.n2, false);
    std::function<void(std::size_t)> rec = [&](std::size_t r) {
        if (r == shape.n1) {
            f(Assignment(shape, rm));
            return;
        }
        for (std::size_t c = 0; c < shape.n2; ++c) {
            if (used[c])
                continue;
            used[c] = true;
            rm[r] = c;
            rec(r + 1);
            used[c] = false;
        }
    };
    rec(0);
}

std::vector<Assignment> all_assignments(MatchingShape shape)
{
    std::vector<Assignment> out;
    for_each_assignment(shape, [&](const Assignment& a) { out.push_back(a); });
    return out;
}

Vector random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v)
        e = g(rng);
    return v;
}

bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

struct Group {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            why << what;
        }
    }
};

CheckResult multilinear_identities(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(3, 4);
    for (int rep = 0; rep < 10 && g.ok; ++rep) {
        const SparseTensor3 t = random_tensor(shape, 30, rng());
        const LiftedOperator op0(t, 0.0);
        const LiftedOperator op(t, alpha_bound(t));
        const std::size_t n = t.dim();
        const Vector x = random_vector(n, rng), y = random_vector(n, rng), z = random_vector(n, rng),
                     w = random_vector(n, rng);
        const double s4 = eval_f4_alpha(op0, x, x, x, x);
        g.expect(rel_close(s4, 4.0 * eval_s3(t, x) * x.sum(), 1e-12), "lifting identity");
        const double xx = x.squaredNorm();
        g.expect(rel_close(eval_g4(x, x, x, x), xx * xx, 1e-12), "G4(x,x,x,x) = ||x||^4");

        std::array<const Vector*, 4> args{&x, &y, &z, &w};
        const double ref = eval_f4_alpha(op, x, y, z, w);
        std::sort(args.begin(), args.end());
        do {
            g.expect(rel_close(eval_f4_alpha(op, *args[0], *args[1], *args[2], *args[3]), ref, 1e-12),
                     "F4_alpha permutation symmetry");
        } while (std::next_permutation(args.begin(), args.end()));

        const Vector grad = 4.0 * lift_contract_vec(op, x, x, x);
        const double h = 1e-4;
        for (std::size_t i = 0; i < n; ++i) {
            Vector xp = x, xm = x;
            xp[static_cast<Eigen::Index>(i)] += h;
            xm[static_cast<Eigen::Index>(i)] -= h;
            const double fd = (eval_s4_alpha(op, xp) - eval_s4_alpha(op, xm)) / (2.0 * h);
            g.expect(std::abs(fd - grad[static_cast<Eigen::Index>(i)]) <= 1e-5 * (1.0 + grad.cwiseAbs().maxCoeff()),
                     "gradient vs finite differences");
        }

        const Assignment a = Assignment::identity(shape);
        const double n1 = static_cast<double>(shape.n1);
        g.expect(rel_close(eval_s4_alpha(op, a.indicator()) - eval_s4_alpha(op0, a.indicator()), op.alpha * n1 * n1,
                           1e-10),
                 "alpha term constant on M");
    }
    return {"multilinear_identities", g.ok, g.why.str()};
}

CheckResult mixed_form_bounds(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(3, 4);
    for (int rep = 0; rep < 5 && g.ok; ++rep) {
        const SparseTensor3 t = random_tensor(shape, 40, rng());
        const LiftedOperator op(t, 3.0 * f4_norm_exact(t));
        for (int s = 0; s < 200 && g.ok; ++s) {
            const std::size_t n = t.dim();
            const Vector x = random_vector(n, rng), y = random_vector(n, rng), z = random_vector(n, rng),
                         w = random_vector(n, rng);
            const double sx = eval_s4_alpha(op, x), sy = eval_s4_alpha(op, y), sz = eval_s4_alpha(op, z),
                         sw = eval_s4_alpha(op, w);
            const double scale = std::max({std::abs(sx), std::abs(sy), std::abs(sz), std::abs(sw)});
            g.expect(eval_f4_alpha(op, x, x, y, y) <= std::max(sx, sy) + 1e-9 * (1.0 + scale), "F(x,x,y,y) bound");
            g.expect(eval_f4_alpha(op, x, y, z, w) <= std::max({sx, sy, sz, sw}) + 1e-9 * (1.0 + scale),
                     "F(x,y,z,t) bound");
        }
    }
    return {"mixed_form_bounds", g.ok, g.why.str()};
}

CheckResult tiny_equivalence(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(3, 3);
    const auto all = all_assignments(shape);
    for (int rep = 0; rep < 5 && g.ok; ++rep) {
        const SparseTensor3 t = random_tensor(shape, 25, rng());
        const LiftedOperator op(t, 3.0 * f4_norm_exact(t));
        double best1 = -INFINITY, best4 = -INFINITY;
        for (const auto& a : all)
            best1 = std::max(best1, eval_s4_alpha(op, a.indicator()));
        for (const auto& a : all)
            for (const auto& b : all)
                for (const auto& c : all)
                    for (const auto& d : all)
                        best4 = std::max(best4,
                                         eval_f4_alpha(op, a.indicator(), b.indicator(), c.indicator(), d.indicator()));
        g.expect(rel_close(best1, best4, 1e-10), "max over M equals max over M^4");
    }
    return {"tiny_equivalence", g.ok, g.why.str()};
}

CheckResult lap_bruteforce(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(4, 6);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int rep = 0; rep < 20 && g.ok; ++rep) {
        ProfitMatrix p(4, 6);
        for (auto& e : p.reshaped())
            e = u(rng);
        double best = -INFINITY;
        for_each_assignment(shape, [&](const Assignment& a) { best = std::max(best, assignment_profit(p, a)); });
        g.expect(assignment_profit(p, solve_lap_max(p)) == best, "LAP objective differs from enumeration");
    }
    return {"lap_bruteforce", g.ok, g.why.str()};
}

CheckResult qap_guard(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(3, 4);
    const auto all = all_assignments(shape);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20 && g.ok; ++rep) {
        Matrix m(12, 12);
        for (Eigen::Index i = 0; i < 12; ++i)
            for (Eigen::Index j = 0; j <= i; ++j)
                m(i, j) = m(j, i) = u(rng);
        const QapMatrix a(shape, m);
        double best = -INFINITY;
        for (const auto& x : all)
            best = std::max(best, a.objective(x.indicator()));
        const Assignment& x0 = all[static_cast<std::size_t>(rng() % all.size())];
        const double inc = a.objective(x0.indicator());
        for (PsiMethod meth : {PsiMethod::ipfp, PsiMethod::mpm}) {
            const QapResult r = psi_with_guard(a, x0, meth);
            g.expect(r.objective >= inc, "guard let the objective drop");
            g.expect(r.objective <= best + 1e-12 * (1.0 + best), "objective above the QAP optimum");
        }
    }
    return {"qap_guard", g.ok, g.why.str()};
}

CheckResult solver_monotonicity(std::mt19937_64& rng)
{
    Group g;
    const MatchingShape shape(5, 8);
    for (int rep = 0; rep < 10 && g.ok; ++rep) {
        const SparseTensor3 t = random_tensor(shape, 50, rng());
        for (int v = 0; v < 3; ++v) {
            SolverConfig cfg;
            cfg.variant = v == 0 ? Variant::bcagm : Variant::bcagm_psi;
            cfg.subroutine = v == 1 ? PsiMethod::ipfp : PsiMethod::mpm;
            const Solution sol = solve(t, cfg);
            try {
                audit_trace(sol.trace, cfg.equality_tol_rel);
            } catch (const SolverAnomaly& e) {
                g.expect(false, e.what());
            }
            g.expect(sol.trace.terminated == Termination::converged, "solver did not terminate normally");
            g.expect(rel_close(sol.score3, eval_s3(t, sol.assignment.indicator()), 1e-10), "score3 mismatch");
        }
    }
    return {"solver_monotonicity", g.ok, g.why.str()};
}

}  // namespace

std::vector<CheckResult> run_selfcheck(std::uint64_t seed, bool force_fail)
{
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(multilinear_identities(rng));
    out.push_back(mixed_form_bounds(rng));
    out.push_back(tiny_equivalence(rng));
    out.push_back(lap_bruteforce(rng));
    out.push_back(qap_guard(rng));
    out.push_back(solver_monotonicity(rng));
    if (force_fail) {
        out.back().passed = false;
        out.back().detail = "forced failure";
    }
    return out;
}

}  // namespace hypermatch
