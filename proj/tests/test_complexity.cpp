#include <doctest.h>

#include <algorithm>

#include "famicom/complexity.hpp"
#include "famicom/mock_backend.hpp"
#include "famicom/scripted_backend.hpp"
#include "test_util.hpp"

using namespace famicom;

TEST_CASE("parse_step_count takes the last in-range integer") {
    CHECK(parse_step_count("Step 1 ... Step 2 ... Answer: 2") == 2);
    CHECK(parse_step_count("It takes 4 steps.") == 4);
    CHECK(parse_step_count("exactly 100") == 100);
    CHECK(parse_step_count("007 steps") == 7);
    CHECK_THROWS_AS(parse_step_count("I am not sure."), NoCountFound);
    CHECK_THROWS_AS(parse_step_count("in the year 2023"), NoCountFound);
    CHECK_THROWS_AS(parse_step_count("101"), NoCountFound);
    CHECK_THROWS_AS(parse_step_count("0"), NoCountFound);
    CHECK(parse_step_count("first 3 then 200 but really 5") == 5);
}

TEST_CASE("estimate_complexity averages k parsed samples") {
    ScriptedBackend backend;
    for (const char* reply : {"3", "4", "3", "5", "3"}) backend.push_reply(reply);
    const ComplexityReport report =
        estimate_complexity("why?", builtin_template(ComplexityMethod::Direct), 5, backend);
    CHECK(report.samples == std::vector<int>{3, 4, 3, 5, 3});
    CHECK(report.mean == doctest::Approx(3.6).epsilon(1e-12));
    CHECK(report.method == ComplexityMethod::Direct);
}

TEST_CASE("constant replies give the constant mean") {
    ScriptedBackend backend;
    backend.set_default_reply("1 step");
    const ComplexityReport report =
        estimate_complexity("easy?", builtin_template(ComplexityMethod::Direct), 5, backend);
    CHECK(report.mean == doctest::Approx(1.0));
    CHECK(report.samples.size() == 5);
}

TEST_CASE("unparseable replies exhaust the retry budget") {
    ScriptedBackend backend;
    backend.set_default_reply("no number here");
    CHECK_THROWS_AS(
        estimate_complexity("hard?", builtin_template(ComplexityMethod::Direct), 5, backend),
        ComplexityUnparseable);
}

TEST_CASE("a failed parse is resampled within the budget") {
    ScriptedBackend backend;
    backend.push_reply("hmm");
    backend.push_reply("3 steps");
    const ComplexityReport report =
        estimate_complexity("q", builtin_template(ComplexityMethod::Direct), 1, backend);
    CHECK(report.samples == std::vector<int>{3});
}

TEST_CASE("the complexity prompt carries preamble, exemplars, and the question") {
    const ComplexityPromptTemplate& guided = builtin_template(ComplexityMethod::Guided);
    const std::string prompt = render_complexity_prompt(guided, "Why is the sky blue?");
    CHECK(prompt.find(guided.preamble) == 0);
    for (const ComplexityExemplar& e : guided.exemplars) {
        CHECK(prompt.find(e.question) != std::string::npos);
    }
    CHECK(prompt.find("Why is the sky blue?") != std::string::npos);
    CHECK(prompt.rfind("Answer:") == prompt.size() - 7);
}

TEST_CASE("operational estimation counts generated programs") {
    ScriptedBackend backend;
    backend.set_default_reply("Here you go:\n```\nsel = select(tokens, tokens, equal)\nout = "
                              "aggregate(sel, indices)\n```\nDone.");
    const ComplexityReport report = estimate_operational_complexity(
        "count the repeats", builtin_template(ComplexityMethod::Operational), 3, backend);
    CHECK(report.samples == std::vector<int>{2, 2, 2});
    CHECK(report.mean == doctest::Approx(2.0));
    CHECK(report.method == ComplexityMethod::Operational);
}

TEST_CASE("operational retries once on an unparseable program") {
    ScriptedBackend backend;
    backend.push_reply("I cannot write programs.");
    backend.push_reply("```\nx = map(inc, aggregate(s, tokens))\n```");
    const ComplexityReport report = estimate_operational_complexity(
        "q", builtin_template(ComplexityMethod::Operational), 1, backend);
    CHECK(report.samples == std::vector<int>{2});
}

TEST_CASE("a seven-call program yields sample 7") {
    ScriptedBackend backend;
    backend.push_reply("```\n"
                       "sel = select(tokens, tokens, equal)\n"
                       "hits = selector_width(sel)\n"
                       "mask = map(positive, hits)\n"
                       "shifted = shift_right(mask, one)\n"
                       "summed = cumsum(shifted)\n"
                       "top = sort(summed, summed)\n"
                       "out = aggregate(sel, tokens)\n"
                       "```");
    const ComplexityReport report = estimate_operational_complexity(
        "q", builtin_template(ComplexityMethod::Operational), 1, backend);
    CHECK(report.samples == std::vector<int>{7});
}

TEST_CASE("zero-op programs floor at one") {
    ScriptedBackend backend;
    backend.set_default_reply("```\nx = y\n```");
    const ComplexityReport report = estimate_operational_complexity(
        "trivial", builtin_template(ComplexityMethod::Operational), 2, backend);
    CHECK(report.samples == std::vector<int>{1, 1});
}

TEST_CASE("report mean lies between the sample extremes") {
    ScriptedBackend backend;
    for (const char* reply : {"2", "9", "4"}) backend.push_reply(reply);
    const ComplexityReport report =
        estimate_complexity("q", builtin_template(ComplexityMethod::Direct), 3, backend);
    const auto [lo, hi] = std::minmax_element(report.samples.begin(), report.samples.end());
    CHECK(report.mean >= *lo);
    CHECK(report.mean <= *hi);
}

TEST_CASE("template validation") {
    ComplexityPromptTemplate bad_direct;
    bad_direct.kind = ComplexityMethod::Direct;
    bad_direct.exemplars.push_back(ComplexityExemplar{"q", "w", 1});
    CHECK_THROWS_AS(bad_direct.validate(), SchemaError);

    ComplexityPromptTemplate bad_guided;
    bad_guided.kind = ComplexityMethod::Guided;
    CHECK_THROWS_AS(bad_guided.validate(), SchemaError);

    CHECK_THROWS_AS(ComplexityPromptTemplate::from_json_text("{\"kind\": \"guided\"}"), SchemaError);
    CHECK_THROWS_AS(ComplexityPromptTemplate::from_json_text("not json"), SchemaError);
    CHECK_THROWS_AS(ComplexityPromptTemplate::from_json_file("/no/such/template.json"), FileNotFound);
}

TEST_CASE("estimate dispatches on template kind") {
    ScriptedBackend backend;
    backend.set_default_reply("```\nn = indices()\n```");
    const ComplexityReport op =
        estimate("q", builtin_template(ComplexityMethod::Operational), 1, backend);
    CHECK(op.method == ComplexityMethod::Operational);

    CHECK_THROWS_AS(
        estimate_complexity("q", builtin_template(ComplexityMethod::Operational), 1, backend),
        DomainError);
    CHECK_THROWS_AS(
        estimate_operational_complexity("q", builtin_template(ComplexityMethod::Direct), 1, backend),
        DomainError);
}

TEST_CASE("empty question and bad k are rejected") {
    ScriptedBackend backend;
    CHECK_THROWS_AS(estimate_complexity("", builtin_template(ComplexityMethod::Direct), 1, backend),
                    EmptyInput);
    CHECK_THROWS_AS(estimate_complexity("q", builtin_template(ComplexityMethod::Direct), 0, backend),
                    DomainError);
}

TEST_CASE("the mock backend supports operational estimation end to end") {
    MockBackend backend;
    const ComplexityReport report = estimate_operational_complexity(
        "Reverse the input.", builtin_template(ComplexityMethod::Operational), 3, backend);
    CHECK(report.samples.size() == 3);
    for (int s : report.samples) {
        CHECK(s >= 1);
        CHECK(s <= 8);
    }
}

TEST_CASE("very long digit runs never poison the parse") {
    CHECK(parse_step_count("id 123456789012345678901234567890 then 6 steps") == 6);
    CHECK_THROWS_AS(parse_step_count("123456789012345678901234567890"), NoCountFound);
}
