#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypermatch/error.hpp"
#include "hypermatch/harness.hpp"
#include "hypermatch/problem.hpp"
#include "hypermatch/selfcheck.hpp"

using namespace hypermatch;

namespace {

enum Exit { ok = 0, bad_input = 1, invalid_problem = 2, anomaly = 3, selfcheck_failed = 4 };

struct BadFlag : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep))
        out.push_back(part);
    return out;
}

double to_double(const std::string& s, const std::string& flag)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size())
            return v;
    } catch (const std::exception&) {
    }
    throw BadFlag(flag + ": not a number '" + s + "'");
}

/// "a", "a,b,c" or "a:b:step" (inclusive).
std::vector<double> expand(const std::string& spec, const std::string& flag)
{
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3)
            throw BadFlag(flag + ": range must be start:stop:step");
        const double a = to_double(parts[0], flag), b = to_double(parts[1], flag), step = to_double(parts[2], flag);
        if (!(step > 0.0) || b < a)
            throw BadFlag(flag + ": range needs step > 0 and stop >= start");
        std::vector<double> out;
        for (std::size_t k = 0;; ++k) {
            const double v = a + static_cast<double>(k) * step;
            if (v > b + 1e-9 * step)
                break;
            out.push_back(v);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& p : split(spec, ','))
        out.push_back(to_double(p, flag));
    if (out.empty())
        throw BadFlag(flag + ": empty list");
    return out;
}

std::vector<std::size_t> expand_counts(const std::string& spec, const std::string& flag)
{
    std::vector<std::size_t> out;
    for (double v : expand(spec, flag)) {
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw BadFlag(flag + ": expected nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::size_t resolve_threads(const std::optional<std::size_t>& flag)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("HYPERMATCH_THREADS")) {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception&) {
            throw BadFlag(std::string("HYPERMATCH_THREADS: not a count '") + env + "'");
        }
    }
    return 1;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw BadFlag("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_out(const std::string& path, const std::string& data)
{
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw BadFlag("cannot write '" + path + "'");
    out << data;
}

struct MatchArgs {
    std::string input;
    std::string output;
    std::optional<std::string> method, alpha_mode;
    std::optional<std::size_t> triples, knn, seed, threads;
    bool deterministic = false;
};

int cmd_match(const MatchArgs& a)
{
    Problem pr;
    try {
        pr = parse_problem(read_file(a.input));
        if (a.method)
            pr.options.method = method_from_string(*a.method);
        if (a.alpha_mode)
            pr.options.schedule = alpha_schedule_from_string(*a.alpha_mode);
    } catch (const ParseError& e) {
        std::cerr << "hypermatch: parse error in field '" << e.field() << "': " << e.what() << '\n';
        return bad_input;
    } catch (const InvalidInput& e) {
        std::cerr << "hypermatch: " << e.what() << '\n';
        return bad_input;
    }
    if (a.triples)
        pr.options.sampling.triples_per_point = *a.triples;
    if (a.knn)
        pr.options.sampling.knn = *a.knn;
    if (a.seed)
        pr.options.sampling.seed = *a.seed;
    // Tensor construction and the solvers are sequential, so --threads and
    // --deterministic do not change anything here.
    (void)resolve_threads(a.threads);

    try {
        const MatchReport rep = run_match(pr);
        write_out(a.output, report_to_json(rep));
    } catch (const SolverAnomaly& e) {
        std::cerr << "hypermatch: solver anomaly: " << e.what() << '\n';
        return anomaly;
    } catch (const BadFlag&) {
        throw;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hypermatch: invalid problem: " << e.what() << '\n';
        return invalid_problem;
    } catch (const std::length_error& e) {
        std::cerr << "hypermatch: invalid problem: " << e.what() << '\n';
        return invalid_problem;
    }
    return ok;
}

struct SynthArgs {
    std::size_t n_in = 10;
    std::string n_out = "0", sigma = "0", methods = "bcagm,bcagm_mp,bcagm_ipfp,hopm";
    double scale = 1.0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> threads, triples, knn;
    std::optional<std::string> alpha_mode;
    bool deterministic = false;
    std::string output;
};

int cmd_synth(const SynthArgs& a)
{
    ExperimentSpec spec;
    try {
        spec.n_in = a.n_in;
        spec.n_out = expand_counts(a.n_out, "--n-out");
        spec.sigma = expand(a.sigma, "--sigma");
        spec.scale = a.scale;
        spec.trials = a.trials;
        spec.seed_base = a.seed;
        for (const auto& m : split(a.methods, ','))
            spec.methods.push_back(method_from_string(m));
        if (a.alpha_mode)
            spec.schedule = alpha_schedule_from_string(*a.alpha_mode);
        if (a.triples)
            spec.sampling.triples_per_point = *a.triples;
        if (a.knn)
            spec.sampling.knn = *a.knn;
        spec.threads = resolve_threads(a.threads);
        spec.record_time = !a.deterministic;
        if (spec.n_in < 3 || spec.trials < 1 || !(spec.scale > 0.0))
            throw BadFlag("need --n-in >= 3, --trials >= 1, --scale > 0");
        for (double s : spec.sigma)
            if (!(s >= 0.0))
                throw BadFlag("--sigma must be >= 0");
    } catch (const InvalidInput& e) {
        std::cerr << "hypermatch: " << e.what() << '\n';
        return bad_input;
    }

    std::vector<ResultRecord> records;
    try {
        records = run_grid(spec);
    } catch (const SolverAnomaly& e) {
        std::cerr << "hypermatch: solver anomaly: " << e.what() << '\n';
        return anomaly;
    }
    std::ostringstream csv;
    write_csv(csv, records);
    write_out(a.output, csv.str());
    return ok;
}

int cmd_selfcheck(bool force_fail)
{
    bool all = true;
    for (const auto& r : run_selfcheck(1, force_fail)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.group;
        if (!r.passed && !r.detail.empty())
            std::cout << ": " << r.detail;
        std::cout << '\n';
        all = all && r.passed;
    }
    return all ? ok : selfcheck_failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hypermatch: third-order hypergraph matching"};
    app.require_subcommand(1);

    MatchArgs ma;
    auto* match = app.add_subcommand("match", "match the point sets of a problem document");
    match->add_option("problem", ma.input, "problem JSON file")->required();
    match->add_option("-o,--output", ma.output, "result JSON file (default stdout)");
    match->add_option("--method", ma.method, "bcagm|bcagm_mp|bcagm_ipfp|hopm|ipfp2|mpm2");
    match->add_option("--alpha-mode", ma.alpha_mode, "zero-then-bound|bound|zero");
    match->add_option("--triples-per-point", ma.triples);
    match->add_option("--knn", ma.knn);
    match->add_option("--seed", ma.seed);
    match->add_option("--threads", ma.threads, "0 = auto");
    match->add_flag("--deterministic", ma.deterministic);

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "run a synthetic benchmark grid and write CSV");
    synth->add_option("--n-in", sa.n_in);
    synth->add_option("--n-out", sa.n_out, "value, list a,b,c or range start:stop:step");
    synth->add_option("--sigma", sa.sigma, "value, list or range");
    synth->add_option("--scale", sa.scale);
    synth->add_option("--trials", sa.trials);
    synth->add_option("--methods", sa.methods, "comma-separated method list");
    synth->add_option("--seed", sa.seed);
    synth->add_option("--threads", sa.threads, "0 = auto");
    synth->add_option("--alpha-mode", sa.alpha_mode);
    synth->add_option("--triples-per-point", sa.triples);
    synth->add_option("--knn", sa.knn);
    synth->add_flag("--deterministic", sa.deterministic);
    synth->add_option("-o,--output", sa.output, "CSV file (default stdout)");

    bool force_fail = false;
    auto* check = app.add_subcommand("selfcheck", "run the invariant suite");
    check->add_flag("--force-fail", force_fail, "mark a group failed (test hook)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bad_input;
    }

    try {
        if (*match)
            return cmd_match(ma);
        if (*synth)
            return cmd_synth(sa);
        return cmd_selfcheck(force_fail);
    } catch (const BadFlag& e) {
        std::cerr << "hypermatch: " << e.what() << '\n';
        return bad_input;
    } catch (const SolverAnomaly& e) {
        std::cerr << "hypermatch: solver anomaly: " << e.what() << '\n';
        return anomaly;
    }
}
