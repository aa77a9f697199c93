#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hypermatch/affinity.hpp"
#include "hypermatch/bcagm.hpp"

namespace hypermatch {

enum class Method { bcagm, bcagm_mp, bcagm_ipfp, hopm, ipfp2, mpm2 };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

/// One point of the synthetic benchmark grid.
struct GridPoint {
    std::size_t n_in = 10;
    std::size_t n_out = 0;
    double sigma = 0.0;
    double scale = 1.0;
};

struct ExperimentSpec {
    std::size_t n_in = 10;
    std::vector<std::size_t> n_out{0};
    std::vector<double> sigma{0.0};
    double scale = 1.0;
    std::size_t trials = 1;
    std::uint64_t seed_base = 0;
    std::vector<Method> methods;
    SamplingConfig sampling;
    AffinityParams affinity;
    AlphaSchedule schedule = AlphaSchedule::zero_then_bound;
    /// Worker threads for independent trials; 0 picks the hardware count.
    std::size_t threads = 1;
    /// When false, wall times are reported as 0 so output is byte-stable.
    bool record_time = true;
};

struct Instance {
    PointSet p;
    PointSet q;
    /// ground_truth[i] = index in Q of the copy of P's point i.
    std::vector<std::size_t> ground_truth;
};

/// P: n_in standard normal points. Q: P plus N(0, sigma^2) noise, then n_out
/// standard normal outliers, all multiplied by `scale`, then shuffled.
/// Draws do not depend on sigma or scale, so instances at different sigma or
/// scale with the same seed share their random numbers.
Instance gen_instance(const GridPoint& gp, std::uint64_t seed);

/// Fraction of inliers matched to their ground-truth partner.
double accuracy(const Assignment& a, const std::vector<std::size_t>& ground_truth);

/// Seed for one trial: seed_base mixed with a stable hash of (n_in, n_out,
/// sigma, trial). Scale is left out so scaled and unscaled runs pair up.
std::uint64_t trial_seed(std::uint64_t seed_base, const GridPoint& gp, std::size_t trial);

struct ResultRecord {
    Method method = Method::bcagm;
    std::size_t trial = 0;  // 1-based
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    double sigma = 0.0;
    double scale = 1.0;
    double accuracy = 0.0;
    double score3 = 0.0;
    std::size_t iterations = 0;
    double wall_time_ms = 0.0;
    std::string status = "ok";
};

struct SecondOrderRun {
    Assignment assignment;
    std::size_t iterations = 0;
    bool degenerate = false;
};

/// ipfp2 / mpm2 on the pairwise matrix, started from all-ones and
/// discretized by one LAP.
SecondOrderRun run_second_order(Method m, const PointSet& p, const PointSet& q, const AffinityParams& ap);

/// Runs one method on an already built instance and tensor.
ResultRecord run_method(Method m, const Instance& inst, const AffinityTensor& at, const ExperimentSpec& spec);

/// Every (grid point, trial) builds one tensor shared by all methods.
/// Records come back ordered by (sigma, n_out, trial, method) in spec order.
/// Throws SolverAnomaly if any BCAGM-family trace breaks monotonicity; other
/// per-trial failures become records with status "error: ...".
std::vector<ResultRecord> run_grid(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "method,trial,n_in,n_out,sigma,scale,accuracy,score3,iterations,wall_time_ms,status";

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);

}  // namespace hypermatch
