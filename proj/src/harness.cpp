#include "hypermatch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

namespace hypermatch {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::bcagm:
        return "bcagm";
    case Method::bcagm_mp:
        return "bcagm_mp";
    case Method::bcagm_ipfp:
        return "bcagm_ipfp";
    case Method::hopm:
        return "hopm";
    case Method::ipfp2:
        return "ipfp2";
    case Method::mpm2:
        return "mpm2";
    }
    return "?";
}

Method method_from_string(std::string_view s)
{
    for (Method m : {Method::bcagm, Method::bcagm_mp, Method::bcagm_ipfp, Method::hopm, Method::ipfp2, Method::mpm2})
        if (s == to_string(m))
            return m;
    throw InvalidInput("unknown method '" + std::string(s) + "'");
}

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v)
{
    return splitmix(h ^ splitmix(v));
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed_base, const GridPoint& gp, std::size_t trial)
{
    std::uint64_t h = 0x68797065726d6174ULL;
    h = mix(h, gp.n_in);
    h = mix(h, gp.n_out);
    h = mix(h, std::bit_cast<std::uint64_t>(gp.sigma == 0.0 ? 0.0 : gp.sigma));
    h = mix(h, trial);
    return seed_base ^ h;
}

Instance gen_instance(const GridPoint& gp, std::uint64_t seed)
{
    if (gp.n_in < 3)
        throw InvalidInput("gen_instance: need at least 3 inliers");
    if (!(gp.sigma >= 0.0) || !(gp.scale > 0.0))
        throw InvalidInput("gen_instance: sigma must be >= 0 and scale > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Instance inst;
    inst.p.resize(gp.n_in);
    for (auto& pt : inst.p) {
        pt.x = gauss(rng);
        pt.y = gauss(rng);
    }
    PointSet q;
    q.reserve(gp.n_in + gp.n_out);
    for (const auto& pt : inst.p) {
        const double nx = gauss(rng), ny = gauss(rng);
        q.push_back({pt.x + gp.sigma * nx, pt.y + gp.sigma * ny});
    }
    for (std::size_t o = 0; o < gp.n_out; ++o) {
        const double x = gauss(rng), y = gauss(rng);
        q.push_back({x, y});
    }
    for (auto& pt : q) {
        pt.x *= gp.scale;
        pt.y *= gp.scale;
    }

    // Fisher-Yates with explicit draws; std::shuffle's draw pattern is unspecified.
    std::vector<std::size_t> perm(q.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    // perm[pos] = original index placed at position pos.
    inst.q.resize(q.size());
    inst.ground_truth.assign(gp.n_in, 0);
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
        inst.q[pos] = q[perm[pos]];
        if (perm[pos] < gp.n_in)
            inst.ground_truth[perm[pos]] = pos;
    }
    return inst;
}

double accuracy(const Assignment& a, const std::vector<std::size_t>& gt)
{
    if (gt.size() > a.shape().n1)
        throw DimensionError("accuracy: more ground-truth rows than assignment rows");
    if (gt.empty())
        throw InvalidInput("accuracy: empty ground truth");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gt.size(); ++i)
        if (a[i] == gt[i])
            ++correct;
    return static_cast<double>(correct) / static_cast<double>(gt.size());
}

SecondOrderRun run_second_order(Method m, const PointSet& p, const PointSet& q, const AffinityParams& ap)
{
    const QapMatrix a2 = build_matrix2(p, q, ap);
    const Vector ones = Vector::Ones(a2.matrix().rows());
    SecondOrderRun run;
    if (m == Method::ipfp2) {
        const Assignment x0 = solve_lap_max(reshape_to_profit(a2.matrix() * ones, a2.shape()));
        const QapResult r = psi_with_guard(a2, x0, PsiMethod::ipfp);
        run.assignment = r.assignment;
        run.iterations = r.inner_iterations;
    } else if (m == Method::mpm2) {
        const MpmResult r = mpm(a2, ones);
        run.assignment = solve_lap_max(reshape_to_profit(r.x, a2.shape()));
        run.iterations = r.iterations;
        run.degenerate = r.degenerate;
    } else {
        throw InvalidInput("run_second_order: not a second-order method");
    }
    return run;
}

ResultRecord run_method(Method m, const Instance& inst, const AffinityTensor& at, const ExperimentSpec& spec)
{
    ResultRecord rec;
    rec.method = m;
    const auto t0 = std::chrono::steady_clock::now();
    Assignment result;
    std::size_t iterations = 0;

    switch (m) {
    case Method::bcagm:
    case Method::bcagm_mp:
    case Method::bcagm_ipfp: {
        SolverConfig cfg;
        cfg.variant = m == Method::bcagm ? Variant::bcagm : Variant::bcagm_psi;
        cfg.subroutine = m == Method::bcagm_ipfp ? PsiMethod::ipfp : PsiMethod::mpm;
        cfg.schedule = spec.schedule;
        const Solution sol = solve(at.tensor, cfg);
        audit_trace(sol.trace, cfg.equality_tol_rel);
        if (sol.trace.terminated != Termination::converged)
            rec.status = "warn: " + std::string(to_string(sol.trace.terminated));
        result = sol.assignment;
        iterations = sol.outer_iterations;
        break;
    }
    case Method::hopm: {
        const Solution sol = hopm_baseline(at.tensor);
        if (sol.trace.terminated != Termination::converged)
            rec.status = "warn: " + std::string(to_string(sol.trace.terminated));
        result = sol.assignment;
        iterations = sol.outer_iterations;
        break;
    }
    case Method::ipfp2:
    case Method::mpm2: {
        const SecondOrderRun r = run_second_order(m, inst.p, inst.q, spec.affinity);
        result = r.assignment;
        iterations = r.iterations;
        if (r.degenerate)
            rec.status = "warn: degenerate";
        break;
    }
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.accuracy = accuracy(result, inst.ground_truth);
    rec.score3 = eval_s3(at.tensor, result.indicator());
    rec.iterations = iterations;
    if (spec.record_time)
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rec;
}

std::vector<ResultRecord> run_grid(const ExperimentSpec& spec)
{
    if (spec.n_in < 3 || spec.trials < 1 || !(spec.scale > 0.0))
        throw InvalidInput("run_grid: need n_in >= 3, trials >= 1, scale > 0");
    for (double s : spec.sigma)
        if (!(s >= 0.0))
            throw InvalidInput("run_grid: sigma must be >= 0");
    if (spec.methods.empty())
        return {};

    std::vector<Method> methods;
    for (Method m : spec.methods)
        if (std::find(methods.begin(), methods.end(), m) == methods.end())
            methods.push_back(m);

    struct Job {
        GridPoint gp;
        std::size_t trial;
    };
    std::vector<Job> jobs;
    for (double sigma : spec.sigma)
        for (std::size_t n_out : spec.n_out)
            for (std::size_t t = 1; t <= spec.trials; ++t)
                jobs.push_back({GridPoint{spec.n_in, n_out, sigma, spec.scale}, t});

    std::vector<std::vector<ResultRecord>> out(jobs.size());
    std::exception_ptr anomaly;
    std::mutex anomaly_mu;
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t idx = next++; idx < jobs.size(); idx = next++) {
            const Job& job = jobs[idx];
            auto fill = [&](ResultRecord& r, Method m) {
                r.method = m;
                r.trial = job.trial;
                r.n_in = job.gp.n_in;
                r.n_out = job.gp.n_out;
                r.sigma = job.gp.sigma;
                r.scale = job.gp.scale;
            };
            try {
                const std::uint64_t seed = trial_seed(spec.seed_base, job.gp, job.trial);
                const Instance inst = gen_instance(job.gp, seed);
                SamplingConfig sc = spec.sampling;
                sc.seed = splitmix(seed);
                const AffinityTensor at = build_tensor(inst.p, inst.q, sc, spec.affinity);
                for (Method m : methods) {
                    ResultRecord r;
                    try {
                        r = run_method(m, inst, at, spec);
                    } catch (const SolverAnomaly&) {
                        throw;
                    } catch (const std::exception& e) {
                        r.status = std::string("error: ") + e.what();
                    }
                    fill(r, m);
                    out[idx].push_back(std::move(r));
                }
            } catch (const SolverAnomaly&) {
                std::lock_guard lk(anomaly_mu);
                if (!anomaly)
                    anomaly = std::current_exception();
                next = jobs.size();
                return;
            } catch (const std::exception& e) {
                out[idx].clear();
                for (Method m : methods) {
                    ResultRecord r;
                    fill(r, m);
                    r.status = std::string("error: ") + e.what();
                    out[idx].push_back(std::move(r));
                }
            }
        }
    };

    std::size_t threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    threads = std::min(threads, jobs.size());
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(work);
    }
    if (anomaly)
        std::rethrow_exception(anomaly);

    std::vector<ResultRecord> records;
    for (auto& chunk : out)
        for (auto& r : chunk)
            records.push_back(std::move(r));
    return records;
}

namespace {

std::string fmt9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records)
{
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << to_string(r.method) << ',' << r.trial << ',' << r.n_in << ',' << r.n_out << ',' << fmt9(r.sigma) << ','
           << fmt9(r.scale) << ',' << fmt9(r.accuracy) << ',' << fmt9(r.score3) << ',' << r.iterations << ','
           << fmt9(r.wall_time_ms) << ',' << csv_field(r.status) << '\n';
    }
}

}  // namespace hypermatch
