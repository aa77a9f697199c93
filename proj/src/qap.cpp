#include "hypermatch/qap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypermatch {

QapMatrix::QapMatrix(MatchingShape shape, Matrix a) : shape_(shape), a_(std::move(a))
{
    const auto n = static_cast<Eigen::Index>(shape_.size());
    if (a_.rows() != n || a_.cols() != n)
        throw DimensionError("QapMatrix: expected " + std::to_string(n) + " x " + std::to_string(n));
    if (!a_.allFinite())
        throw InvalidInput("QapMatrix: non-finite entry");
    if ((a_.array() < 0.0).any())
        throw InvalidInput("QapMatrix: negative entry");
    const double scale = a_.cwiseAbs().maxCoeff();
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
        throw InvalidInput("QapMatrix: matrix is not symmetric");
}

namespace {

Assignment discretize(const Vector& v, MatchingShape shape)
{
    return solve_lap_max(reshape_to_profit(v, shape));
}

}  // namespace

QapResult ipfp(const QapMatrix& qa, const Assignment& x0, std::size_t max_iter)
{
    if (!(x0.shape() == qa.shape()))
        throw DimensionError("ipfp: start assignment shape differs from the matrix shape");
    const Matrix& a = qa.matrix();
    const MatchingShape shape = qa.shape();

    QapResult best{x0, qa.objective(x0.indicator()), 0, {}};
    auto consider = [&](const Assignment& cand) {
        const double obj = qa.objective(cand.indicator());
        if (obj > best.objective) {
            best.assignment = cand;
            best.objective = obj;
        }
    };

    Vector x = x0.indicator();
    best.inner_objectives.push_back(best.objective);
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        const Vector ax = a * x;
        const Assignment b = discretize(ax, shape);
        consider(b);

        const Vector d = b.indicator() - x;
        if (d.squaredNorm() == 0.0)
            break;
        const Vector ad = a * d;
        const double slope = x.dot(ad);
        const double curv = d.dot(ad);
        double step = 1.0;
        if (curv < 0.0)
            step = std::clamp(-slope / curv, 0.0, 1.0);
        if (step <= 0.0)
            break;
        x += step * d;
        best.inner_objectives.push_back(qa.objective(x));
        if (step * std::sqrt(d.squaredNorm()) <= 1e-12)
            break;
    }
    best.inner_iterations = it;
    consider(discretize(a * x, shape));
    consider(discretize(x, shape));
    return best;
}

MpmResult mpm(const QapMatrix& qa, const Vector& x0, std::size_t max_iter, double tol)
{
    const MatchingShape shape = qa.shape();
    const auto n = static_cast<Eigen::Index>(shape.size());
    if (x0.size() != n)
        throw DimensionError("mpm: start vector length differs from the matrix size");
    if (!x0.allFinite() || (x0.array() < 0.0).any())
        throw InvalidInput("mpm: start vector must be finite and nonnegative");
    const double norm0 = x0.norm();
    if (norm0 == 0.0)
        throw InvalidInput("mpm: start vector is zero");

    const Matrix& a = qa.matrix();
    const std::size_t n1 = shape.n1, n2 = shape.n2;
    MpmResult res{x0 / norm0, 0, false, false};
    Vector next(n);
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Vector& x = res.x;
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t ca = 0; ca < n2; ++ca) {
                const auto p = static_cast<Eigen::Index>(shape.index(i, ca));
                double acc = x[p] * a(p, p);
                for (std::size_t j = 0; j < n1; ++j) {
                    if (j == i)
                        continue;
                    double best = 0.0;
                    for (std::size_t cb = 0; cb < n2; ++cb) {
                        const auto q = static_cast<Eigen::Index>(shape.index(j, cb));
                        best = std::max(best, a(q, p) * x[q]);  // symmetric; column access
                    }
                    acc += best;
                }
                next[p] = acc;
            }
        }
        const double nn = next.norm();
        if (nn == 0.0) {
            res.degenerate = true;
            if (it == 0)
                res.x = x0;
            return res;
        }
        next /= nn;
        const double diff = (next - res.x).norm();
        res.x = next;
        res.iterations = it + 1;
        if (diff <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

std::string_view to_string(PsiMethod m)
{
    return m == PsiMethod::ipfp ? "ipfp" : "mpm";
}

PsiMethod psi_method_from_string(std::string_view s)
{
    if (s == "ipfp")
        return PsiMethod::ipfp;
    if (s == "mpm")
        return PsiMethod::mpm;
    throw InvalidInput("unknown QAP subroutine '" + std::string(s) + "'");
}

QapResult psi_with_guard(const QapMatrix& a, const Assignment& x0, PsiMethod method, const PsiConfig& cfg)
{
    if (!(x0.shape() == a.shape()))
        throw DimensionError("psi_with_guard: start assignment shape differs from the matrix shape");
    const double incumbent = a.objective(x0.indicator());

    QapResult cand;
    if (method == PsiMethod::ipfp) {
        cand = ipfp(a, x0, cfg.ipfp_max_iter);
    } else {
        const MpmResult r = mpm(a, x0.indicator(), cfg.mpm_max_iter, cfg.mpm_tol);
        cand.assignment = discretize(r.x, a.shape());
        cand.objective = a.objective(cand.assignment.indicator());
        cand.inner_iterations = r.iterations;
    }
    if (cand.objective >= incumbent)
        return cand;
    return QapResult{x0, incumbent, cand.inner_iterations, std::move(cand.inner_objectives)};
}

}  // namespace hypermatch
