#include "csd/exact_search.hpp"
#include "csd/smt.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace csd;
using testutil::column_dataset;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    return count;
}

std::string model_text(const std::string& verdict, const std::vector<bool>& b, double lb, double ub) {
    std::string out = verdict + "\n(objectives\n ((- (* 4 (+ (ite b_1 1 0))) 0) 4)\n)\n(\n";
    out += "  (define-fun ub_0 () Real\n    " + smt_decimal(ub) + ")\n";
    out += "  (define-fun lb_0 () Real\n    " + smt_decimal(lb) + ")\n";
    for (std::size_t i = 0; i < b.size(); ++i) {
        out += "  (define-fun b_" + std::to_string(i) + " () Bool\n    " + (b[i] ? "true" : "false") + ")\n";
    }
    return out + ")\n";
}

const Dataset& four_rows() {
    static const Dataset d = column_dataset({1, 2, 3, 4}, {0, 1, 1, 0});
    return d;
}

} // namespace

TEST_CASE("decimal literals") {
    CHECK(smt_decimal(2) == "2.0");
    CHECK(smt_decimal(0.5) == "0.5");
    CHECK(smt_decimal(-1.25) == "(- 1.25)");
    CHECK(smt_decimal(1e-7).find('e') == std::string::npos);
    CHECK_THROWS(smt_decimal(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("encoding structure") {
    Dataset d(3, 2, {1, 4, 2, 5, 3, 6}, {0, 1, 0});
    const auto plain = encode_subgroup_discovery(d);
    CHECK(occurrences(plain.text, "(declare-fun") == 2 * 2 + 3);
    CHECK(occurrences(plain.text, "(declare-fun lb_") == 2);
    CHECK(occurrences(plain.text, "(declare-fun ub_") == 2);
    CHECK(occurrences(plain.text, "(declare-fun b_") == 3);
    CHECK(occurrences(plain.text, "(maximize") == 1);
    CHECK(plain.variable_map.size() == 7);
    CHECK_FALSE(plain.has_selection);
    // each membership definition compares against both bounds of every feature
    const auto line = plain.text.substr(plain.text.find("(assert (= b_0"));
    CHECK(occurrences(line.substr(0, line.find('\n')), "(<=") == 2 * 2);

    const auto limited = encode_subgroup_discovery(d, CardinalityConstraint(1));
    CHECK(occurrences(limited.text, "(declare-fun") == 2 * 2 + 3 + 3 * 2);
    CHECK(occurrences(limited.text, "(assert (<= (+ (ite s_") + occurrences(limited.text, "(assert (<= (ite s_") == 1);
    CHECK(limited.text.rfind("(check-sat)\n(get-objectives)\n(get-model)\n") != std::string::npos);

    CHECK(encode_subgroup_discovery(d).text == plain.text);
    CHECK_THROWS(encode_subgroup_discovery(column_dataset({1, 2}, {1, 1})));
}

TEST_CASE("alternative encoding structure") {
    Dataset d(3, 3, {1, 4, 7, 2, 5, 8, 3, 6, 9}, {0, 1, 0});
    AlternativesContext ctx(1);
    ctx.add(BitVector{1, 1, 1}, BitVector{1, 0, 0});
    ctx.add(BitVector{0, 1, 0}, BitVector{0, 1, 1});
    ctx.add(BitVector{0, 1, 1}, BitVector{0, 0, 0}); // k_l = 0, constraint omitted
    const auto p = encode_alternative(d, ctx, CardinalityConstraint(2));
    CHECK(occurrences(p.text, "(assert (>=") == 2);
    CHECK(p.objective_kind == SmtObjective::Hamming);
    // an all-ones original makes the objective the plain membership count
    CHECK(p.text.find("(maximize (+ (ite b_0 1 0) (ite b_1 1 0) (ite b_2 1 0)))") != std::string::npos);
    CHECK(p.objective_weights == std::vector<long long>{1, 1, 1});
    CHECK(p.objective_offset == 0);

    AlternativesContext empty(1);
    CHECK_THROWS(encode_alternative(d, empty));
}

TEST_CASE("parsing canned solver output") {
    const auto p = encode_subgroup_discovery(four_rows());
    const auto out = parse_solver_output(p, model_text("sat", {false, true, true, false}, 2, 3));
    CHECK(out.status == SolverStatus::Optimal);
    REQUIRE(out.model);
    CHECK(std::get<double>(out.model->at("lb_0")) == 2.0);
    CHECK(out.objective_value == 4.0);
    CHECK(out.reported_objective == 4.0);
    CHECK(model_membership(out, p) == BitVector{0, 1, 1, 0});
    const auto box = decode_model(out, p, four_rows());
    CHECK(box.lower(0) == 2.0);
    CHECK(box.upper(0) == 3.0);

    const auto empty = parse_solver_output(p, model_text("sat", {false, false, false, false}, 2.5, 2.5));
    CHECK(decode_model(empty, p, four_rows()).is_sentinel());

    const auto partial = parse_solver_output(p, model_text("unknown", {false, true, true, false}, 2, 3));
    CHECK(partial.status == SolverStatus::TimeoutWithModel);
    CHECK(parse_solver_output(p, "unknown\n").status == SolverStatus::TimeoutNoModel);
    CHECK(parse_solver_output(p, "timeout\n").status == SolverStatus::TimeoutNoModel);
    CHECK(parse_solver_output(p, "(error \"line 9 column 10: canceled\")\n(objectives\n (x 2)\n)\n"
                                 "(error \"line 11 column 10: model is not available\")\n")
              .status == SolverStatus::TimeoutNoModel);
    CHECK(parse_solver_output(p, "unsat\n(error \"model is not available\")\n").status == SolverStatus::Error);
    CHECK(parse_solver_output(p, "(error \"line 3: unknown constant\")\n").status == SolverStatus::Error);
    CHECK_THROWS_AS(parse_solver_output(p, "garbage"), SolverOutputError);
    CHECK_THROWS_AS(parse_solver_output(p, "sat\n(objectives\n"), SolverOutputError);

    // membership contradicting the bounds
    const auto bad = parse_solver_output(p, model_text("sat", {true, false, true, false}, 1, 3));
    CHECK_THROWS_AS(decode_model(bad, p, four_rows()), SolverOutputError);
    CHECK_THROWS(decode_model(parse_solver_output(p, "unknown\n"), p, four_rows()));
}

TEST_CASE("solver errors") {
    const auto p = encode_subgroup_discovery(four_rows());
    CHECK_THROWS_AS(run_solver(p, "/nonexistent/solver-binary {file}", 5), SolverNotFound);
    CHECK_THROWS_AS(run_solver(p, "", 5), std::invalid_argument);
    CHECK_THROWS(run_solver(p, "z3 {file}", 0));
}

TEST_CASE("round trip through an installed solver" * doctest::skip(!default_solver_available())) {
    std::mt19937_64 rng(66);
    for (int t = 0; t < 5; ++t) {
        const auto d = oracle::random_dataset(rng, 6, 1, 4);
        const auto p = encode_subgroup_discovery(d);
        const auto outcome = run_solver(p, kDefaultSolverCommand, 30);
        REQUIRE(outcome.status == SolverStatus::Optimal);
        const auto box = decode_model(outcome, p, d);
        const double m = static_cast<double>(d.rows());
        const double exact = wracc(membership(exact_search(d, ExactConfig{}), d), d.target());
        CHECK(*outcome.objective_value == doctest::Approx(exact * m * m).epsilon(1e-9));
        CHECK(membership(box, d) == model_membership(outcome, p));
    }
}
