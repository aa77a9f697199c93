#pragma once
// Brute-force reference implementations used only by tests. Everything here
// works on fully materialized dense arrays and plain loops, and shares no
// code with the library's sparse contractions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "hypermatch/lap.hpp"
#include "hypermatch/qap.hpp"
#include "hypermatch/tensor.hpp"

namespace oracle {

using hypermatch::MatchingShape;
using hypermatch::Matrix;
using hypermatch::SparseTensor3;
using hypermatch::Vector;

/// Full n^3 symmetric array.
struct Dense3 {
    std::size_t n = 0;
    std::vector<double> v;
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return v[(i * n + j) * n + k]; }
};

inline Dense3 densify(const SparseTensor3& t)
{
    Dense3 d{t.dim(), std::vector<double>(t.dim() * t.dim() * t.dim(), 0.0)};
    const std::size_t n = d.n;
    auto put = [&](std::size_t a, std::size_t b, std::size_t c, double val) { d.v[(a * n + b) * n + c] = val; };
    for (const auto& o : t.orbits()) {
        put(o.i, o.j, o.k, o.value);
        put(o.i, o.k, o.j, o.value);
        put(o.j, o.i, o.k, o.value);
        put(o.j, o.k, o.i, o.value);
        put(o.k, o.i, o.j, o.value);
        put(o.k, o.j, o.i, o.value);
    }
    return d;
}

inline double f3(const Dense3& d, const Vector& x, const Vector& y, const Vector& z)
{
    double s = 0.0;
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t k = 0; k < d.n; ++k)
                s += d(i, j, k) * x[i] * y[j] * z[k];
    return s;
}

/// Entry of F4 + alpha * G4, straight from the definitions.
inline double f4_entry(const Dense3& d, double alpha, std::size_t i, std::size_t j, std::size_t k, std::size_t l)
{
    const double f = d(i, j, k) + d(i, j, l) + d(i, k, l) + d(j, k, l);
    const double g = ((i == j && k == l) + (i == k && j == l) + (i == l && j == k)) / 3.0;
    return f + alpha * g;
}

inline double f4(const Dense3& d, double alpha, const Vector& x, const Vector& y, const Vector& z, const Vector& t)
{
    double s = 0.0;
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t k = 0; k < d.n; ++k)
                for (std::size_t l = 0; l < d.n; ++l)
                    s += f4_entry(d, alpha, i, j, k, l) * x[i] * y[j] * z[k] * t[l];
    return s;
}

inline Vector f4_vec(const Dense3& d, double alpha, const Vector& x, const Vector& y, const Vector& z)
{
    Vector out = Vector::Zero(static_cast<Eigen::Index>(d.n));
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t k = 0; k < d.n; ++k)
                for (std::size_t l = 0; l < d.n; ++l)
                    out[l] += f4_entry(d, alpha, i, j, k, l) * x[i] * y[j] * z[k];
    return out;
}

inline Matrix f4_mat(const Dense3& d, double alpha, const Vector& x, const Vector& y)
{
    const auto n = static_cast<Eigen::Index>(d.n);
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t k = 0; k < d.n; ++k)
                for (std::size_t l = 0; l < d.n; ++l)
                    out(k, l) += f4_entry(d, alpha, i, j, k, l) * x[i] * y[j];
    return out;
}

/// Frobenius norm of F4 by a loop order different from the library's.
inline double f4_norm(const Dense3& d)
{
    double s = 0.0;
    for (std::size_t l = 0; l < d.n; ++l)
        for (std::size_t k = 0; k < d.n; ++k)
            for (std::size_t j = 0; j < d.n; ++j)
                for (std::size_t i = 0; i < d.n; ++i) {
                    const double e = f4_entry(d, 0.0, i, j, k, l);
                    s += e * e;
                }
    return std::sqrt(s);
}

/// Every injective row map of the shape, lexicographic.
inline std::vector<std::vector<std::size_t>> injections(MatchingShape shape)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    std::vector<bool> used(shape.n2, false);
    std::function<void()> rec = [&] {
        if (cur.size() == shape.n1) {
            out.push_back(cur);
            return;
        }
        for (std::size_t c = 0; c < shape.n2; ++c) {
            if (used[c])
                continue;
            used[c] = true;
            cur.push_back(c);
            rec();
            cur.pop_back();
            used[c] = false;
        }
    };
    rec();
    return out;
}

inline Vector indicator(MatchingShape shape, const std::vector<std::size_t>& rm)
{
    Vector x = Vector::Zero(static_cast<Eigen::Index>(shape.size()));
    for (std::size_t r = 0; r < rm.size(); ++r)
        x[static_cast<Eigen::Index>(r * shape.n2 + rm[r])] = 1.0;
    return x;
}

inline double lap_best(const Matrix& p)
{
    const MatchingShape shape(static_cast<std::size_t>(p.rows()), static_cast<std::size_t>(p.cols()));
    double best = -INFINITY;
    for (const auto& rm : injections(shape)) {
        double s = 0.0;
        for (std::size_t r = 0; r < rm.size(); ++r)
            s += p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rm[r]));
        best = std::max(best, s);
    }
    return best;
}

inline double qap_best(MatchingShape shape, const Matrix& a)
{
    double best = -INFINITY;
    for (const auto& rm : injections(shape)) {
        const Vector x = indicator(shape, rm);
        best = std::max(best, x.dot(a * x));
    }
    return best;
}

inline double s3_best(const SparseTensor3& t)
{
    const Dense3 d = densify(t);
    double best = -INFINITY;
    for (const auto& rm : injections(t.shape())) {
        const Vector x = indicator(t.shape(), rm);
        best = std::max(best, f3(d, x, x, x));
    }
    return best;
}

inline Vector gaussian(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v)
        e = g(rng);
    return v;
}

inline bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).cwiseAbs().maxCoeff() / (1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
}

}  // namespace oracle
