#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "famicom/famicom.hpp"
#include "famicom/hashing.hpp"
#include "famicom/scripted_backend.hpp"

using namespace famicom;
using nlohmann::json;

TEST_CASE("famicom_score on worked examples") {
    CHECK(famicom_score(1.0, 1.0, 2.0, 3.0) == doctest::Approx(1.0));
    CHECK(famicom_score(0.8, 4.0, 1.0, 1.0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(famicom_score(0.5, 3.6, 1.0, 1.0) == doctest::Approx(0.5 / 3.6).epsilon(1e-12));
}

TEST_CASE("famicom_score domain errors") {
    CHECK_THROWS_AS(famicom_score(0.0, 2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(famicom_score(-0.5, 2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(famicom_score(0.5, 0.9, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(famicom_score(0.5, 2.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(famicom_score(0.5, 2.0, 1.0, -1.0), DomainError);
}

TEST_CASE("log-linearity of the combined measure") {
    Rng rng(31337);
    for (int i = 0; i < 1000; ++i) {
        const double f = 0.01 + 0.99 * rng.unit();
        const double c = 1.0 + 49.0 * rng.unit();
        const double a = 0.1 + 2.9 * rng.unit();
        const double b = 0.1 + 2.9 * rng.unit();
        const double direct = std::log(famicom_score(f, c, a, b));
        const double linear = a * std::log(f) - b * std::log(c);
        CHECK(std::abs(direct - linear) < 1e-12);
    }
}

TEST_CASE("monotone in familiarity, antitone in complexity") {
    CHECK(famicom_score(0.6, 3.0, 1.5, 0.7) > famicom_score(0.5, 3.0, 1.5, 0.7));
    CHECK(famicom_score(0.5, 2.0, 1.5, 0.7) > famicom_score(0.5, 5.0, 1.5, 0.7));
}

TEST_CASE("positive rescaling of familiarity preserves the ranking") {
    Rng rng(4);
    std::vector<double> f, c;
    for (int i = 0; i < 20; ++i) {
        f.push_back(0.05 + 0.9 * rng.unit());
        c.push_back(1.0 + 9.0 * rng.unit());
    }
    const double a = 1.3, b = 0.6, lambda = 3.7;
    std::vector<std::size_t> base(20), scaled(20);
    for (std::size_t i = 0; i < 20; ++i) base[i] = scaled[i] = i;
    auto by_score = [&](const std::vector<double>& fs) {
        return [&, fs](std::size_t lhs, std::size_t rhs) {
            return famicom_score(fs[lhs], c[lhs], a, b) > famicom_score(fs[rhs], c[rhs], a, b);
        };
    };
    std::vector<double> f_scaled(f);
    for (double& x : f_scaled) x *= lambda;
    std::sort(base.begin(), base.end(), by_score(f));
    std::sort(scaled.begin(), scaled.end(), by_score(f_scaled));
    CHECK(base == scaled);
}

TEST_CASE("score_pair composes familiarity and complexity") {
    ScriptedBackend backend;
    backend.script_score("p\nq", {{"p\nq", -std::log(2.0)}});
    backend.set_default_reply("2 steps");

    FamiComConfig config;
    config.familiarity_method = FamiliarityMethod::Ppl;
    config.complexity_method = ComplexityMethod::Direct;
    config.k_complexity = 1;

    const MeasureBreakdown m = score_pair("p", "q", config, backend);
    CHECK(m.familiarity.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.complexity.mean == doctest::Approx(2.0));
    CHECK(m.score == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("with equal complexity the score orders by familiarity, and vice versa") {
    ScriptedBackend backend;
    backend.script_score("good\nq", {{"good\nq", -std::log(1.25)}});
    backend.script_score("bad\nq", {{"bad\nq", -std::log(2.0)}});
    backend.set_default_reply("3");

    FamiComConfig config;
    config.familiarity_method = FamiliarityMethod::Ppl;
    config.complexity_method = ComplexityMethod::Direct;
    config.k_complexity = 1;

    const MeasureBreakdown good = score_pair("good", "q", config, backend);
    const MeasureBreakdown bad = score_pair("bad", "q", config, backend);
    CHECK(good.complexity.mean == bad.complexity.mean);
    CHECK(good.score > bad.score);

    // Same familiarity, different scripted complexity: lower complexity wins.
    ScriptedBackend backend2;
    backend2.script_score("p\nq1", {{"x", -1.0}});
    backend2.script_score("p\nq2", {{"x", -1.0}});
    backend2.push_reply("2");
    backend2.push_reply("5");
    const MeasureBreakdown easy = score_pair("p", "q1", config, backend2);
    const MeasureBreakdown hard = score_pair("p", "q2", config, backend2);
    CHECK(easy.familiarity.value == hard.familiarity.value);
    CHECK(easy.score > hard.score);
}

TEST_CASE("breakdowns recompute bit-for-bit") {
    ScriptedBackend backend("scripted", true);
    backend.set_default_reply("4 steps");
    FamiComConfig config;
    config.complexity_method = ComplexityMethod::Direct;
    const MeasureBreakdown m = score_pair("some prompt", "some query", config, backend);
    CHECK(m.score == famicom_score(m.familiarity.value, m.complexity.mean, m.config.a, m.config.b));
}

TEST_CASE("breakdown JSON uses the documented field names") {
    ScriptedBackend backend("scripted", true);
    backend.set_default_reply("2");
    FamiComConfig config;
    config.complexity_method = ComplexityMethod::Direct;
    const MeasureBreakdown m = score_pair("p", "q", config, backend);

    const json j = m;
    CHECK(j.at("familiarity").contains("value"));
    CHECK(j.at("familiarity").contains("method"));
    CHECK(j.at("complexity").contains("mean"));
    CHECK(j.at("complexity").contains("samples"));
    CHECK(j.contains("score"));
    CHECK(j.at("a").get<double>() == 1.0);
    CHECK(j.at("b").get<double>() == 1.0);
}

TEST_CASE("config validation") {
    FamiComConfig config;
    config.a = 0.0;
    CHECK_THROWS_AS(config.validate(), DomainError);
    config.a = 1.0;
    config.b = -2.0;
    CHECK_THROWS_AS(config.validate(), DomainError);
    config.b = 1.0;
    config.k_complexity = 0;
    CHECK_THROWS_AS(config.validate(), DomainError);
}
