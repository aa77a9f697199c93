#include "hypermatch/problem.hpp"

#include <json.hpp>

namespace hypermatch {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(path + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ParseError(path, "expected a number");
    return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ParseError(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw ParseError(path, "expected a string");
    return v.get<std::string>();
}

PointSet parse_points(const json& v, const std::string& path)
{
    if (!v.is_array())
        throw ParseError(path, "expected an array of [x, y] pairs");
    PointSet out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& pt = v[i];
        if (!pt.is_array() || pt.size() != 2)
            throw ParseError(p, "expected [x, y]");
        out.push_back({as_number(pt[0], p + "[0]"), as_number(pt[1], p + "[1]")});
    }
    return out;
}

json points_to_json(const PointSet& ps)
{
    json arr = json::array();
    for (const auto& pt : ps)
        arr.push_back({pt.x, pt.y});
    return arr;
}

void check_version(const json& doc)
{
    const json& v = require(doc, "format_version", "");
    if (!v.is_number_integer() || v.get<long long>() != kFormatVersion)
        throw ParseError("format_version", "unsupported version (expected 1)");
}

json parse_json(std::string_view text)
{
    try {
        json doc = json::parse(text);
        if (!doc.is_object())
            throw ParseError("<root>", "expected a JSON object");
        return doc;
    } catch (const json::parse_error& e) {
        throw ParseError("<document>", e.what());
    }
}

template <typename F>
auto wrap_enum(const std::string& path, F&& f)
{
    try {
        return f();
    } catch (const InvalidInput& e) {
        throw ParseError(path, e.what());
    }
}

}  // namespace

Problem parse_problem(std::string_view text)
{
    const json doc = parse_json(text);
    check_version(doc);
    Problem pr;
    pr.p = parse_points(require(doc, "P", ""), "P");
    pr.q = parse_points(require(doc, "Q", ""), "Q");

    if (auto it = doc.find("ground_truth"); it != doc.end() && !it->is_null()) {
        if (!it->is_array())
            throw ParseError("ground_truth", "expected an array of 1-based indices");
        std::vector<std::size_t> gt;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "ground_truth[" + std::to_string(i) + "]";
            const std::size_t v = as_count((*it)[i], p);
            if (v < 1)
                throw ParseError(p, "indices are 1-based");
            gt.push_back(v - 1);
        }
        pr.ground_truth = std::move(gt);
    }

    if (auto it = doc.find("options"); it != doc.end()) {
        const json& o = *it;
        if (!o.is_object())
            throw ParseError("options", "expected an object");
        ProblemOptions& opt = pr.options;
        if (auto f = o.find("method"); f != o.end()) {
            const std::string s = as_string(*f, "options.method");
            opt.method = wrap_enum("options.method", [&] { return method_from_string(s); });
        }
        if (auto f = o.find("alpha_mode"); f != o.end()) {
            const std::string s = as_string(*f, "options.alpha_mode");
            opt.schedule = wrap_enum("options.alpha_mode", [&] { return alpha_schedule_from_string(s); });
        }
        if (auto f = o.find("triples_per_point"); f != o.end())
            opt.sampling.triples_per_point = as_count(*f, "options.triples_per_point");
        if (auto f = o.find("knn"); f != o.end())
            opt.sampling.knn = as_count(*f, "options.knn");
        if (auto f = o.find("min_side"); f != o.end())
            opt.sampling.min_side = as_number(*f, "options.min_side");
        if (auto f = o.find("seed"); f != o.end())
            opt.sampling.seed = as_count(*f, "options.seed");
        if (auto f = o.find("gamma"); f != o.end() && !f->is_null())
            opt.affinity.gamma = as_number(*f, "options.gamma");
        if (auto f = o.find("sigma_s"); f != o.end())
            opt.affinity.sigma_s = as_number(*f, "options.sigma_s");
        if (auto f = o.find("max_outer_iters"); f != o.end())
            opt.max_outer_iters = as_count(*f, "options.max_outer_iters");
    }
    return pr;
}

std::string problem_to_json(const Problem& pr)
{
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["P"] = points_to_json(pr.p);
    doc["Q"] = points_to_json(pr.q);
    if (pr.ground_truth) {
        json gt = json::array();
        for (auto v : *pr.ground_truth)
            gt.push_back(v + 1);
        doc["ground_truth"] = gt;
    }
    const ProblemOptions& o = pr.options;
    json opt;
    opt["method"] = std::string(to_string(o.method));
    opt["alpha_mode"] = std::string(to_string(o.schedule));
    opt["triples_per_point"] = o.sampling.triples_per_point;
    opt["knn"] = o.sampling.knn;
    opt["min_side"] = o.sampling.min_side;
    opt["seed"] = o.sampling.seed;
    opt["gamma"] = o.affinity.gamma ? json(*o.affinity.gamma) : json(nullptr);
    opt["sigma_s"] = o.affinity.sigma_s;
    opt["max_outer_iters"] = o.max_outer_iters;
    doc["options"] = opt;
    return doc.dump(2) + "\n";
}

MatchReport run_match(const Problem& pr)
{
    if (pr.p.size() < 3)
        throw InvalidInput("P needs at least 3 points");
    if (pr.p.size() > pr.q.size())
        throw InvalidInput("|P| = " + std::to_string(pr.p.size()) + " exceeds |Q| = " + std::to_string(pr.q.size()));
    if (pr.ground_truth) {
        if (pr.ground_truth->size() != pr.p.size())
            throw InvalidInput("ground_truth must have one entry per point of P");
        for (auto v : *pr.ground_truth)
            if (v >= pr.q.size())
                throw InvalidInput("ground_truth index exceeds |Q|");
    }

    const ProblemOptions& o = pr.options;
    const AffinityTensor at = build_tensor(pr.p, pr.q, o.sampling, o.affinity);

    MatchReport rep;
    rep.method = o.method;
    rep.n1 = pr.p.size();
    rep.n2 = pr.q.size();
    rep.num_orbits = at.tensor.orbits().size();
    rep.gamma = at.gamma;

    Assignment result;
    switch (o.method) {
    case Method::bcagm:
    case Method::bcagm_mp:
    case Method::bcagm_ipfp: {
        SolverConfig cfg;
        cfg.variant = o.method == Method::bcagm ? Variant::bcagm : Variant::bcagm_psi;
        cfg.subroutine = o.method == Method::bcagm_ipfp ? PsiMethod::ipfp : PsiMethod::mpm;
        cfg.schedule = o.schedule;
        cfg.max_outer_iters = o.max_outer_iters;
        Solution sol = solve(at.tensor, cfg);
        audit_trace(sol.trace, cfg.equality_tol_rel);
        result = sol.assignment;
        rep.score4_alpha = sol.score4_alpha;
        rep.iterations = sol.outer_iterations;
        rep.trace = std::move(sol.trace);
        break;
    }
    case Method::hopm: {
        Solution sol = hopm_baseline(at.tensor);
        result = sol.assignment;
        rep.score4_alpha = sol.score4_alpha;
        rep.iterations = sol.outer_iterations;
        rep.trace = std::move(sol.trace);
        break;
    }
    case Method::ipfp2:
    case Method::mpm2: {
        const SecondOrderRun run = run_second_order(o.method, pr.p, pr.q, o.affinity);
        result = run.assignment;
        rep.iterations = run.iterations;
        rep.score4_alpha = eval_s4_alpha(LiftedOperator(at.tensor, 0.0), result.indicator());
        break;
    }
    }
    rep.assignment = result.row_map();
    rep.score3 = eval_s3(at.tensor, result.indicator());
    if (pr.ground_truth)
        rep.accuracy = accuracy(result, *pr.ground_truth);
    return rep;
}

std::string report_to_json(const MatchReport& r)
{
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["method"] = std::string(to_string(r.method));
    doc["n1"] = r.n1;
    doc["n2"] = r.n2;
    json a = json::array();
    for (auto c : r.assignment)
        a.push_back(c + 1);
    doc["assignment"] = a;
    doc["score3"] = r.score3;
    doc["score4_alpha"] = r.score4_alpha;
    doc["iterations"] = r.iterations;
    doc["num_orbits"] = r.num_orbits;
    doc["gamma"] = r.gamma;
    if (r.accuracy)
        doc["accuracy"] = *r.accuracy;
    json tr;
    tr["terminated"] = std::string(to_string(r.trace.terminated));
    tr["stage_scores"] = r.trace.stage_scores;
    tr["u_scores3"] = r.trace.u_scores3;
    json phases = json::array();
    for (std::size_t i = 0; i < r.trace.alpha_phase_starts.size(); ++i)
        phases.push_back({{"start", r.trace.alpha_phase_starts[i]}, {"alpha", r.trace.alpha_values[i]}});
    tr["alpha_phases"] = phases;
    doc["trace"] = tr;
    return doc.dump(2) + "\n";
}

MatchReport parse_report(std::string_view text)
{
    const json doc = parse_json(text);
    check_version(doc);
    MatchReport r;
    const std::string m = as_string(require(doc, "method", ""), "method");
    r.method = wrap_enum("method", [&] { return method_from_string(m); });
    r.n1 = as_count(require(doc, "n1", ""), "n1");
    r.n2 = as_count(require(doc, "n2", ""), "n2");
    const json& a = require(doc, "assignment", "");
    if (!a.is_array())
        throw ParseError("assignment", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t c = as_count(a[i], "assignment[" + std::to_string(i) + "]");
        if (c < 1)
            throw ParseError("assignment[" + std::to_string(i) + "]", "indices are 1-based");
        r.assignment.push_back(c - 1);
    }
    r.score3 = as_number(require(doc, "score3", ""), "score3");
    r.score4_alpha = as_number(require(doc, "score4_alpha", ""), "score4_alpha");
    r.iterations = as_count(require(doc, "iterations", ""), "iterations");
    r.num_orbits = as_count(require(doc, "num_orbits", ""), "num_orbits");
    r.gamma = as_number(require(doc, "gamma", ""), "gamma");
    if (auto it = doc.find("accuracy"); it != doc.end())
        r.accuracy = as_number(*it, "accuracy");
    const json& tr = require(doc, "trace", "");
    r.trace.stage_scores = tr.at("stage_scores").get<std::vector<double>>();
    r.trace.u_scores3 = tr.at("u_scores3").get<std::vector<double>>();
    for (const auto& ph : tr.at("alpha_phases")) {
        r.trace.alpha_phase_starts.push_back(ph.at("start").get<std::size_t>());
        r.trace.alpha_values.push_back(ph.at("alpha").get<double>());
    }
    const std::string term = as_string(tr.at("terminated"), "trace.terminated");
    for (Termination t : {Termination::converged, Termination::max_iterations, Termination::anomaly,
                          Termination::degenerate})
        if (term == to_string(t))
            r.trace.terminated = t;
    return r;
}

}  // namespace hypermatch
