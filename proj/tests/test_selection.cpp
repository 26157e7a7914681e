#include <doctest.h>

#include <cmath>
#include <memory>

#include "famicom/mock_backend.hpp"
#include "famicom/selection.hpp"
#include "famicom/scripted_backend.hpp"
#include "test_util.hpp"

using namespace famicom;

namespace {

FamiComConfig direct_ppl_config() {
    FamiComConfig config;
    config.familiarity_method = FamiliarityMethod::Ppl;
    config.complexity_method = ComplexityMethod::Direct;
    config.k_complexity = 1;
    return config;
}

}  // namespace

TEST_CASE("famicom and spell can disagree on the winner") {
    // X is the more familiar prompt (f 0.9 vs 0.6) but draws complexity 5,
    // while Y draws complexity 2: famicom picks Y (0.30 > 0.18), spell
    // still picks X on raw perplexity.
    ScriptedBackend backend;
    backend.script_score("prompt X", {{"prompt X", std::log(0.9)}});
    backend.script_score("prompt Y", {{"prompt Y", std::log(0.6)}});
    backend.script_score("prompt X\nthe query", {{"x", std::log(0.9)}});
    backend.script_score("prompt Y\nthe query", {{"x", std::log(0.6)}});
    backend.push_reply("5");
    backend.push_reply("2");

    const std::vector<CandidatePrompt> candidates = {
        CandidatePrompt{"X", "prompt X", "original", "t"},
        CandidatePrompt{"Y", "prompt Y", "generated", "t"},
    };

    const RankedSelection famicom_pick =
        select_prompt_famicom(candidates, "the query", direct_ppl_config(), backend);
    REQUIRE(famicom_pick.entries.size() == 2);
    CHECK(famicom_pick.entries[0].first == "Y");
    CHECK(famicom_pick.entries[0].second == doctest::Approx(0.30).epsilon(1e-9));
    CHECK(famicom_pick.entries[1].second == doctest::Approx(0.18).epsilon(1e-9));

    const RankedSelection spell_pick = select_prompt_spell(candidates, backend);
    REQUIRE(spell_pick.entries.size() == 2);
    CHECK(spell_pick.entries[0].first == "X");
    CHECK(spell_pick.entries[0].second == doctest::Approx(0.9).epsilon(1e-9));

    CHECK(famicom_pick.entries[0].first != spell_pick.entries[0].first);
}

TEST_CASE("single candidate wins by default") {
    ScriptedBackend backend("scripted", true);
    backend.set_default_reply("2");
    const std::vector<CandidatePrompt> one = {CandidatePrompt{"only", "the only prompt", "original", "t"}};
    const RankedSelection r =
        select_prompt_famicom(one, "query", direct_ppl_config(), backend);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].first == "only");
}

TEST_CASE("score ties fall back to id order") {
    ScriptedBackend backend;
    backend.script_score("same a", {{"t", -1.0}});
    backend.script_score("same b", {{"t", -1.0}});
    const std::vector<CandidatePrompt> candidates = {
        CandidatePrompt{"beta", "same b", "original", "t"},
        CandidatePrompt{"alpha", "same a", "original", "t"},
    };
    const RankedSelection r = select_prompt_spell(candidates, backend);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].first == "alpha");
    CHECK(r.entries[1].first == "beta");
}

TEST_CASE("spell order is the familiarity_ppl order reversed from ascending") {
    ScriptedBackend backend;
    backend.script_score("p1", {{"t", -0.2}});
    backend.script_score("p2", {{"t", -1.4}});
    backend.script_score("p3", {{"t", -0.7}});
    const std::vector<CandidatePrompt> candidates = {
        CandidatePrompt{"c1", "p1", "original", "t"},
        CandidatePrompt{"c2", "p2", "original", "t"},
        CandidatePrompt{"c3", "p3", "original", "t"},
    };
    const RankedSelection r = select_prompt_spell(candidates, backend);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].first == "c1");
    CHECK(r.entries[1].first == "c3");
    CHECK(r.entries[2].first == "c2");
    CHECK(r.entries[0].second >= r.entries[1].second);
    CHECK(r.entries[1].second >= r.entries[2].second);
}

TEST_CASE("failing candidates are dropped with diagnostics") {
    ScriptedBackend backend;
    backend.script_score("works", {{"t", -1.0}});
    const std::vector<CandidatePrompt> candidates = {
        CandidatePrompt{"good", "works", "original", "t"},
        CandidatePrompt{"broken", "unscripted text", "original", "t"},
    };
    std::vector<std::string> diagnostics;
    const RankedSelection r = select_prompt_spell(candidates, backend, &diagnostics);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].first == "good");
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].find("broken") != std::string::npos);

    const std::vector<CandidatePrompt> all_bad = {
        CandidatePrompt{"b1", "nope", "original", "t"},
        CandidatePrompt{"b2", "also nope", "original", "t"},
    };
    CHECK_THROWS_AS(select_prompt_spell(all_bad, backend), Error);
}

TEST_CASE("demonstration ranking estimates the query complexity once") {
    ScriptedBackend backend("scripted", true);
    backend.push_reply("3 steps");  // a single scripted complexity reply must suffice

    const std::vector<DemonstrationExample> pool = {
        DemonstrationExample{"d1", "t1", "q1", "a1"},
        DemonstrationExample{"d2", "t2", "q2", "a2"},
        DemonstrationExample{"d3", "t3", "q3", "a3"},
    };
    const RankedSelection r =
        rank_demonstrations_famicom(pool, "the query", 2, direct_ppl_config(), backend);
    CHECK(r.entries.size() == 2);
    CHECK(r.entries[0].second >= r.entries[1].second);
}

TEST_CASE("top-k demonstration selection") {
    ScriptedBackend backend;
    backend.set_default_reply("1");
    // Familiarity of demo text + query, one scripted token each.
    backend.script_score("q1\na1\nquery", {{"t", std::log(0.9)}});
    backend.script_score("q2\na2\nquery", {{"t", std::log(0.5)}});
    backend.script_score("q3\na3\nquery", {{"t", std::log(0.7)}});

    const std::vector<DemonstrationExample> pool = {
        DemonstrationExample{"d1", "t1", "q1", "a1"},
        DemonstrationExample{"d2", "t2", "q2", "a2"},
        DemonstrationExample{"d3", "t3", "q3", "a3"},
    };
    FamiComConfig config = direct_ppl_config();

    const RankedSelection top2 = rank_demonstrations_famicom(pool, "query", 2, config, backend);
    REQUIRE(top2.entries.size() == 2);
    CHECK(top2.entries[0].first == "d1");
    CHECK(top2.entries[1].first == "d3");

    ScriptedBackend backend2;
    backend2.set_default_reply("1");
    backend2.script_score("q1\na1\nquery", {{"t", std::log(0.9)}});
    backend2.script_score("q2\na2\nquery", {{"t", std::log(0.5)}});
    backend2.script_score("q3\na3\nquery", {{"t", std::log(0.7)}});
    const RankedSelection whole = rank_demonstrations_famicom(pool, "query", 3, config, backend2);
    REQUIRE(whole.entries.size() == 3);
    CHECK(whole.entries[0].first == "d1");
    CHECK(whole.entries[1].first == "d3");
    CHECK(whole.entries[2].first == "d2");

    CHECK_THROWS_AS(rank_demonstrations_famicom(pool, "query", 4, config, backend2), PoolTooSmall);
}

TEST_CASE("knn ranks by last-token cosine") {
    ScriptedBackend backend;
    backend.script_last_token_embedding("query", {1.0, 0.0});
    backend.script_last_token_embedding("qa\ncot a", {2.0, 0.0});   // colinear
    backend.script_last_token_embedding("qb\ncot b", {0.0, 3.0});   // orthogonal

    const std::vector<DemonstrationExample> pool = {
        DemonstrationExample{"A", "task1", "qa", "cot a"},
        DemonstrationExample{"B", "task2", "qb", "cot b"},
    };

    const RankedSelection r = rank_demonstrations_knn(pool, "query", 1, backend);
    REQUIRE(r.entries.size() == 1);
    CHECK(r.entries[0].first == "A");
    CHECK(r.entries[0].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("knn with identical embeddings degrades to id order without duplicates") {
    ScriptedBackend backend;
    backend.script_last_token_embedding("query", {1.0, 1.0});
    const std::vector<DemonstrationExample> pool = {
        DemonstrationExample{"z", "t1", "q1", "a1"},
        DemonstrationExample{"m", "t2", "q2", "a2"},
        DemonstrationExample{"a", "t3", "q3", "a3"},
    };
    for (const DemonstrationExample& d : pool) {
        backend.script_last_token_embedding(demonstration_text(d), {1.0, 1.0});
    }
    const RankedSelection r = rank_demonstrations_knn(pool, "query", 3, backend);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].first == "a");
    CHECK(r.entries[1].first == "m");
    CHECK(r.entries[2].first == "z");

    CHECK_THROWS_AS(rank_demonstrations_knn(pool, "query", 4, backend), PoolTooSmall);
}

TEST_CASE("jsonl pool and candidate ingestion") {
    const auto pool_path = testutil::data_file("fixture_pool.jsonl");
    const std::vector<DemonstrationExample> pool = load_demo_pool(pool_path);
    CHECK(pool.size() == 9);
    CHECK(pool.front().id == "demo-geo-0");
    CHECK(pool.front().task_id == "geography");

    const std::vector<CandidatePrompt> candidates =
        load_candidates(testutil::data_file("candidates.jsonl"));
    CHECK(candidates.size() == 5);
    CHECK(candidates.front().source == "original");

    CHECK_THROWS_AS(load_demo_pool("/no/such/pool.jsonl"), FileNotFound);

    const auto bad = testutil::write_temp("selection", "bad_pool.jsonl",
                                          "{\"id\": \"x\", \"task_id\": \"t\", \"question\": \"q\"}\n");
    CHECK_THROWS_AS(load_demo_pool(bad.string()), SchemaError);

    const auto dup = testutil::write_temp(
        "selection", "dup_pool.jsonl",
        "{\"id\": \"x\", \"task_id\": \"t\", \"question\": \"q\", \"cot_answer\": \"a\"}\n"
        "{\"id\": \"x\", \"task_id\": \"t\", \"question\": \"q2\", \"cot_answer\": \"a2\"}\n");
    CHECK_THROWS_AS(load_demo_pool(dup.string()), SchemaError);
}

TEST_CASE("rankings are deterministic given a scripted backend") {
    const std::vector<DemonstrationExample> pool = load_demo_pool(testutil::data_file("fixture_pool.jsonl"));
    auto make_backend = [] {
        auto b = std::make_unique<ScriptedBackend>("scripted", true);
        b->add_rule("How many steps", {"2"});
        return b;
    };
    FamiComConfig config;
    config.familiarity_method = FamiliarityMethod::Ppl;
    config.complexity_method = ComplexityMethod::Direct;
    config.k_complexity = 1;

    auto b1 = make_backend();
    auto b2 = make_backend();
    const RankedSelection r1 = rank_demonstrations_famicom(pool, "Which river is longest?", 4, config, *b1);
    const RankedSelection r2 = rank_demonstrations_famicom(pool, "Which river is longest?", 4, config, *b2);
    CHECK(r1.entries == r2.entries);

    const RankedSelection k1 = rank_demonstrations_knn(pool, "Which river is longest?", 4, *b1);
    const RankedSelection k2 = rank_demonstrations_knn(pool, "Which river is longest?", 4, *b2);
    CHECK(k1.entries == k2.entries);
}

TEST_CASE("parallel candidate scoring returns the same ranking as serial") {
    const std::vector<DemonstrationExample> pool = load_demo_pool(testutil::data_file("fixture_pool.jsonl"));
    MockBackend backend;
    const RankedSelection serial = rank_demonstrations_knn(pool, "Some query text", 5, backend, nullptr, 1);
    const RankedSelection parallel = rank_demonstrations_knn(pool, "Some query text", 5, backend, nullptr, 8);
    CHECK(serial.entries == parallel.entries);
}
