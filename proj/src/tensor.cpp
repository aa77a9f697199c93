#include "hypermatch/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>

namespace hypermatch {

namespace {

void check_len(const Vector& v, std::size_t n, const char* what)
{
    if (static_cast<std::size_t>(v.size()) != n)
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                             std::to_string(v.size()));
}

void check_finite(const Vector& v, const char* what)
{
    if (!v.allFinite())
        throw InvalidInput(std::string(what) + ": non-finite vector entry");
}

void check_dense(std::size_t n)
{
    if (n > kDenseThreshold)
        throw ThresholdError("dense n x n matrix requested for n = " + std::to_string(n) + " > " +
                             std::to_string(kDenseThreshold));
}

bool orbit_less(const Orbit& a, const Orbit& b)
{
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
}

}  // namespace

SparseTensor3 SparseTensor3::from_entries(MatchingShape shape, std::span<const TripleEntry> entries)
{
    SparseTensor3 t(shape);
    const std::size_t n = shape.size();
    t.orbits_.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.a >= n || e.b >= n || e.c >= n)
            throw DimensionError("tensor entry index out of range");
        if (e.a == e.b || e.a == e.c || e.b == e.c)
            throw InvalidInput("tensor entry has a repeated index; only third-order terms are allowed");
        if (!std::isfinite(e.value) || e.value < 0.0)
            throw InvalidInput("tensor entry value must be finite and nonnegative");
        std::array<std::size_t, 3> idx{e.a, e.b, e.c};
        std::sort(idx.begin(), idx.end());
        t.orbits_.push_back(Orbit{static_cast<std::uint32_t>(idx[0]), static_cast<std::uint32_t>(idx[1]),
                                  static_cast<std::uint32_t>(idx[2]), e.value});
    }
    std::stable_sort(t.orbits_.begin(), t.orbits_.end(), orbit_less);

    // Merge duplicates by summation, in ingest order for a fixed rounding.
    std::vector<Orbit> merged;
    merged.reserve(t.orbits_.size());
    for (const auto& o : t.orbits_) {
        if (!merged.empty() && merged.back().i == o.i && merged.back().j == o.j && merged.back().k == o.k)
            merged.back().value += o.value;
        else
            merged.push_back(o);
    }
    t.orbits_ = std::move(merged);
    return t;
}

double SparseTensor3::at(std::size_t a, std::size_t b, std::size_t c) const
{
    if (a == b || a == c || b == c)
        return 0.0;
    std::array<std::size_t, 3> idx{a, b, c};
    std::sort(idx.begin(), idx.end());
    const Orbit key{static_cast<std::uint32_t>(idx[0]), static_cast<std::uint32_t>(idx[1]),
                    static_cast<std::uint32_t>(idx[2]), 0.0};
    auto it = std::lower_bound(orbits_.begin(), orbits_.end(), key, orbit_less);
    if (it != orbits_.end() && it->i == key.i && it->j == key.j && it->k == key.k)
        return it->value;
    return 0.0;
}

LiftedOperator::LiftedOperator(const SparseTensor3& t, double a) : tensor(&t), alpha(a)
{
    if (!std::isfinite(a) || a < 0.0)
        throw InvalidInput("convexification weight alpha must be finite and nonnegative");
}

double eval_s3(const SparseTensor3& tensor, const Vector& x)
{
    check_len(x, tensor.dim(), "eval_s3");
    check_finite(x, "eval_s3");
    double acc = 0.0;
    for (const auto& o : tensor.orbits())
        acc += o.value * x[o.i] * x[o.j] * x[o.k];
    return 6.0 * acc;
}

double eval_f3(const SparseTensor3& tensor, const Vector& x, const Vector& y, const Vector& z)
{
    const std::size_t n = tensor.dim();
    check_len(x, n, "eval_f3");
    check_len(y, n, "eval_f3");
    check_len(z, n, "eval_f3");
    double acc = 0.0;
    for (const auto& o : tensor.orbits()) {
        const auto i = o.i, j = o.j, k = o.k;
        acc += o.value * (x[i] * (y[j] * z[k] + y[k] * z[j]) + x[j] * (y[i] * z[k] + y[k] * z[i]) +
                          x[k] * (y[i] * z[j] + y[j] * z[i]));
    }
    return acc;
}

Vector contract3_vec(const SparseTensor3& tensor, const Vector& x, const Vector& y)
{
    const std::size_t n = tensor.dim();
    check_len(x, n, "contract3_vec");
    check_len(y, n, "contract3_vec");
    Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
    for (const auto& o : tensor.orbits()) {
        const auto i = o.i, j = o.j, k = o.k;
        out[i] += o.value * (x[j] * y[k] + x[k] * y[j]);
        out[j] += o.value * (x[i] * y[k] + x[k] * y[i]);
        out[k] += o.value * (x[i] * y[j] + x[j] * y[i]);
    }
    return out;
}

Matrix contract3_mat(const SparseTensor3& tensor, const Vector& x)
{
    const std::size_t n = tensor.dim();
    check_len(x, n, "contract3_mat");
    check_dense(n);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& o : tensor.orbits()) {
        const auto i = o.i, j = o.j, k = o.k;
        const double vi = o.value * x[i], vj = o.value * x[j], vk = o.value * x[k];
        out(j, k) += vi;
        out(k, j) += vi;
        out(i, k) += vj;
        out(k, i) += vj;
        out(i, j) += vk;
        out(j, i) += vk;
    }
    return out;
}

double eval_g4(const Vector& x, const Vector& y, const Vector& z, const Vector& t)
{
    const auto n = x.size();
    if (y.size() != n || z.size() != n || t.size() != n)
        throw DimensionError("eval_g4: argument lengths differ");
    return (x.dot(y) * z.dot(t) + x.dot(z) * y.dot(t) + x.dot(t) * y.dot(z)) / 3.0;
}

Vector lift_contract_vec(const LiftedOperator& op, const Vector& x, const Vector& y, const Vector& z)
{
    const SparseTensor3& f = *op.tensor;
    const std::size_t n = f.dim();
    check_len(x, n, "lift_contract_vec");
    check_len(y, n, "lift_contract_vec");
    check_len(z, n, "lift_contract_vec");

    // F4(x,y,z,.) = F3(x,y,z) 1 + (sum z) F3(x,y,.) + (sum y) F3(x,z,.) + (sum x) F3(y,z,.)
    const double sx = x.sum(), sy = y.sum(), sz = z.sum();
    Vector out = Vector::Constant(static_cast<Eigen::Index>(n), eval_f3(f, x, y, z));
    out += sz * contract3_vec(f, x, y);
    out += sy * contract3_vec(f, x, z);
    out += sx * contract3_vec(f, y, z);
    if (op.alpha != 0.0)
        out += (op.alpha / 3.0) * (x.dot(y) * z + x.dot(z) * y + y.dot(z) * x);
    return out;
}

Matrix lift_contract_mat(const LiftedOperator& op, const Vector& x, const Vector& y)
{
    const SparseTensor3& f = *op.tensor;
    const std::size_t n = f.dim();
    check_len(x, n, "lift_contract_mat");
    check_len(y, n, "lift_contract_mat");
    check_dense(n);

    const auto m = static_cast<Eigen::Index>(n);
    const Vector c = contract3_vec(f, x, y);
    const Vector ones = Vector::Ones(m);
    Matrix out = c * ones.transpose() + ones * c.transpose();
    if (x == y) {
        out += (x.sum() + y.sum()) * contract3_mat(f, x);
    } else {
        out += y.sum() * contract3_mat(f, x);
        out += x.sum() * contract3_mat(f, y);
    }
    if (op.alpha != 0.0) {
        const double w = op.alpha / 3.0;
        out.diagonal().array() += w * x.dot(y);
        out.noalias() += w * (x * y.transpose() + y * x.transpose());
    }
    return out;
}

double eval_f4_alpha(const LiftedOperator& op, const Vector& x, const Vector& y, const Vector& z,
                     const Vector& t)
{
    const SparseTensor3& f = *op.tensor;
    const std::size_t n = f.dim();
    check_len(x, n, "eval_f4_alpha");
    check_len(y, n, "eval_f4_alpha");
    check_len(z, n, "eval_f4_alpha");
    check_len(t, n, "eval_f4_alpha");
    double v = eval_f3(f, x, y, z) * t.sum() + eval_f3(f, x, y, t) * z.sum() + eval_f3(f, x, z, t) * y.sum() +
               eval_f3(f, y, z, t) * x.sum();
    if (op.alpha != 0.0)
        v += op.alpha * eval_g4(x, y, z, t);
    return v;
}

double eval_s4_alpha(const LiftedOperator& op, const Vector& x)
{
    check_len(x, op.tensor->dim(), "eval_s4_alpha");
    check_finite(x, "eval_s4_alpha");
    const double sq = x.squaredNorm();
    return 4.0 * eval_s3(*op.tensor, x) * x.sum() + op.alpha * sq * sq;
}

double f3_norm(const SparseTensor3& tensor)
{
    double acc = 0.0;
    for (const auto& o : tensor.orbits())
        acc += o.value * o.value;
    return std::sqrt(6.0 * acc);
}

double alpha_bound(const SparseTensor3& tensor)
{
    // ||F4|| <= 4 sqrt(n) ||F3||: each of the four shifted copies is constant
    // along one mode.
    return 3.0 * 4.0 * std::sqrt(static_cast<double>(tensor.dim())) * f3_norm(tensor);
}

double f4_norm_exact(const SparseTensor3& tensor, std::size_t threshold)
{
    const std::size_t n = tensor.dim();
    if (n > threshold)
        throw ThresholdError("f4_norm_exact: n = " + std::to_string(n) + " exceeds " + std::to_string(threshold));
    if (n == 0)
        return 0.0;
    std::vector<double> cube(n * n * n, 0.0);
    auto cell = [&](std::size_t a, std::size_t b, std::size_t c) -> double& { return cube[(a * n + b) * n + c]; };
    for (const auto& o : tensor.orbits()) {
        const std::size_t i = o.i, j = o.j, k = o.k;
        cell(i, j, k) = cell(i, k, j) = cell(j, i, k) = cell(j, k, i) = cell(k, i, j) = cell(k, j, i) = o.value;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const double v = cell(i, j, k) + cell(i, j, l) + cell(i, k, l) + cell(j, k, l);
                    acc += v * v;
                }
    return std::sqrt(acc);
}

}  // namespace hypermatch
