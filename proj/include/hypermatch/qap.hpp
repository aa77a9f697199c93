#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hypermatch/lap.hpp"

namespace hypermatch {

/// Nonnegative symmetric n x n matrix defining max_{x in M} <x, A x>.
class QapMatrix {
public:
    /// Validates symmetry (1e-12 relative), nonnegativity and finiteness.
    QapMatrix(MatchingShape shape, Matrix a);

    const MatchingShape& shape() const { return shape_; }
    const Matrix& matrix() const { return a_; }
    double objective(const Vector& x) const { return x.dot(a_ * x); }

private:
    MatchingShape shape_;
    Matrix a_;
};

struct QapResult {
    Assignment assignment;
    double objective = 0.0;
    std::size_t inner_iterations = 0;
    /// Continuous objective after each inner step (IPFP only).
    std::vector<double> inner_objectives;
};

/// Integer projected fixed point, warm-started at x0.
///
/// Each step moves from x toward b = argmax_{b in M} <b, A x> with an exact
/// line search on [0, 1]. Returns the best of: the final iterate discretized
/// through A x and through x itself, every b visited, and x0.
QapResult ipfp(const QapMatrix& a, const Assignment& x0, std::size_t max_iter = 100);

struct MpmResult {
    Vector x;
    std::size_t iterations = 0;
    bool converged = false;
    /// The update annihilated the iterate; x is the last nonzero iterate.
    bool degenerate = false;
};

/// Max-pooling power iteration:
///   x'_(i,a) = x_(i,a) A_(i,a),(i,a) + sum_{j != i} max_b A_(i,a),(j,b) x_(j,b)
/// followed by 2-norm normalization. Continuous output.
MpmResult mpm(const QapMatrix& a, const Vector& x0, std::size_t max_iter = 300, double tol = 1e-10);

enum class PsiMethod { ipfp, mpm };

std::string_view to_string(PsiMethod m);
PsiMethod psi_method_from_string(std::string_view s);

struct PsiConfig {
    std::size_t ipfp_max_iter = 100;
    std::size_t mpm_max_iter = 300;
    double mpm_tol = 1e-10;
};

/// Runs the chosen QAP heuristic from x0 and returns its (discretized)
/// output only if it scores at least as high as x0; otherwise returns x0.
QapResult psi_with_guard(const QapMatrix& a, const Assignment& x0, PsiMethod method, const PsiConfig& cfg = {});

}  // namespace hypermatch
