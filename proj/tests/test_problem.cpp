#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypermatch/problem.hpp"

using namespace hypermatch;

namespace {

const char* kFour = R"({"format_version": 1,
  "P": [[0, 0], [1, 0.2], [0.3, 1.1], [1.4, 1.3]],
  "Q": [[0, 0], [1, 0.2], [0.3, 1.1], [1.4, 1.3]],
  "ground_truth": [1, 2, 3, 4]})";

}  // namespace

TEST_CASE("parse and round trip")
{
    Problem p = parse_problem(kFour);
    CHECK(p.p.size() == 4);
    CHECK(p.ground_truth->at(3) == 3);
    p.options.method = Method::bcagm_ipfp;
    p.options.sampling.knn = 17;
    p.options.affinity.gamma = 0.125;
    const Problem q = parse_problem(problem_to_json(p));
    CHECK(q.p == p.p);
    CHECK(q.q == p.q);
    CHECK(q.ground_truth == p.ground_truth);
    CHECK(q.options.method == Method::bcagm_ipfp);
    CHECK(q.options.sampling.knn == 17);
    CHECK(q.options.affinity.gamma == 0.125);
    CHECK(problem_to_json(q) == problem_to_json(p));
}

TEST_CASE("parse errors name the field")
{
    auto field = [](const char* text) {
        try {
            parse_problem(text);
        } catch (const ParseError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field("{") == "<document>");
    CHECK(field(R"({"P": [], "Q": []})") == "format_version");
    CHECK(field(R"({"format_version": 2, "P": [], "Q": []})") == "format_version");
    CHECK(field(R"({"format_version": 1, "Q": []})") == "P");
    CHECK(field(R"({"format_version": 1, "P": [[0, "a"]], "Q": []})") == "P[0][1]");
    CHECK(field(R"({"format_version": 1, "P": [], "Q": [], "options": {"method": "x"}})") == "options.method");
    CHECK(field(R"({"format_version": 1, "P": [], "Q": [], "options": {"knn": -1}})") == "options.knn");
    CHECK(field(R"({"format_version": 1, "P": [], "Q": [], "ground_truth": [0]})") == "ground_truth[0]");
}

TEST_CASE("run_match")
{
    const MatchReport r = run_match(parse_problem(kFour));
    CHECK(r.assignment == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(r.score3 == doctest::Approx(24.0));
    CHECK(*r.accuracy == 1.0);
    const MatchReport back = parse_report(report_to_json(r));
    CHECK(back.assignment == r.assignment);
    CHECK(back.score3 == r.score3);
    CHECK(back.score4_alpha == r.score4_alpha);
    CHECK(back.gamma == r.gamma);
    CHECK(back.trace.stage_scores == r.trace.stage_scores);
    CHECK(back.trace.u_scores3 == r.trace.u_scores3);
    CHECK(report_to_json(back) == report_to_json(r));

    Problem big = parse_problem(kFour);
    big.q.pop_back();
    big.ground_truth.reset();
    CHECK_THROWS_AS(run_match(big), InvalidInput);

    for (Method m : {Method::bcagm_mp, Method::bcagm_ipfp, Method::hopm, Method::ipfp2, Method::mpm2}) {
        Problem p = parse_problem(kFour);
        p.options.method = m;
        CHECK(run_match(p).assignment == std::vector<std::size_t>{0, 1, 2, 3});
    }
}
