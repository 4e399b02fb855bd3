// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "folio/net/backend.hpp"
#include "folio/rag/answer.hpp"
#include "folio/rag/chunk.hpp"
#include "folio/rag/router.hpp"
#include "folio/rag/search.hpp"
#include "support/tmpdir.hpp"

using namespace folio;

namespace {

ContentUnit unit(const std::string& id, ElementCategory category, std::string text, int page) {
    ContentUnit u;
    u.id = id;
    u.category = category;
    u.text = std::move(text);
    u.sources = {{page, 0}};
    return u;
}

DocumentRecord chronicle() {
    DocumentRecord doc;
    doc.title = "Cronaca";
    doc.units = {
        unit("u01", ElementCategory::Title, "CRONACA DELLA CITTA", 1),
        unit("u02", ElementCategory::Text, "Nel 1450 giunse la peste nella citta.", 1),
        unit("u03", ElementCategory::Footnote, "1. nota sulla peste", 1),
        unit("u04", ElementCategory::Header, "LIBRO PRIMO", 2),
        unit("u05", ElementCategory::Text, "Il duca entro nella citta fra celebrazioni.", 2),
        unit("u06", ElementCategory::Text, "Nel 1485 una peste acerrima colpi Milano.", 3),
        unit("u07", ElementCategory::Figure, "", 3),
        unit("u08", ElementCategory::Text, "La corte si trasferi in campagna.", 4),
        unit("u09", ElementCategory::Footnote, "2. nota sulla corte", 4),
    };
    return doc;
}

net::EmbeddingVector basis(int dim, int axis) {
    net::EmbeddingVector v;
    v.values.assign(static_cast<std::size_t>(dim), 0.0);
    v.values[static_cast<std::size_t>(axis)] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("find_year_markers trims punctuation and applies the range") {
    CHECK(rag::find_year_markers("nel 1485, la peste", 300, 1600) == std::vector<int>{1485});
    CHECK(rag::find_year_markers("(1450)", 300, 1600) == std::vector<int>{1450});
    CHECK(rag::find_year_markers("i 30000 morti", 300, 1600).empty());
    CHECK(rag::find_year_markers("del 1978.", 300, 1600).empty());
    CHECK(rag::find_year_markers("anno 299", 300, 1600).empty());
    CHECK(rag::find_year_markers("l'anno 300 e il 1600", 300, 1600) ==
          std::vector<int>{300, 1600});
}

TEST_CASE("ingest: chunks split on markers, chapters and budget") {
    const rag::IngestResult result = rag::ingest(chronicle());
    // content chunks: title / 1450 text / LIBRO PRIMO + duca / 1485 text (+ corte)
    REQUIRE(result.content_count == 4);
    CHECK(result.footnote_count == 2);

    const auto& chunks = result.chunks;
    std::vector<const rag::Chunk*> content;
    std::vector<const rag::Chunk*> notes;
    for (const auto& chunk : chunks)
        (chunk.kind == rag::Chunk::Kind::Content ? content : notes).push_back(&chunk);

    CHECK(content[0]->text == "CRONACA DELLA CITTA");
    CHECK_FALSE(content[0]->year_range.has_value());

    CHECK(content[1]->year_range == std::pair<int, int>{1450, 1450});
    CHECK(content[1]->chapter == "CRONACA DELLA CITTA");

    CHECK(content[2]->chapter == "LIBRO PRIMO");
    CHECK(content[2]->year_range == std::pair<int, int>{1450, 1450});  // carried forward

    CHECK(content[3]->year_range == std::pair<int, int>{1485, 1485});
    CHECK(content[3]->page_span == std::pair<int, int>{3, 4});
    CHECK(content[3]->text ==
          "Nel 1485 una peste acerrima colpi Milano.\nLa corte si trasferi in campagna.");

    CHECK(notes[0]->page_span == std::pair<int, int>{1, 1});
    CHECK(notes[1]->page_span == std::pair<int, int>{4, 4});
}

TEST_CASE("ingest: word budget alone splits long documents") {
    DocumentRecord doc;
    for (int i = 0; i < 25; ++i) {
        std::string text;
        for (int w = 0; w < 100; ++w) text += "parola ";
        doc.units.push_back(unit("u" + std::to_string(i), ElementCategory::Text, text, i + 1));
    }
    rag::IngestOptions options;
    options.max_words_per_chunk = 1000;
    const rag::IngestResult result = rag::ingest(doc, options);
    CHECK(result.content_count == 3);  // 2500 words / 1000 budget
    CHECK(result.footnote_count == 0);
}

TEST_CASE("ingest conserves the content text") {
    const DocumentRecord doc = chronicle();
    const rag::IngestResult result = rag::ingest(doc);

    std::string from_units;
    for (const ContentUnit& u : doc.units) {
        if (u.category == ElementCategory::Footnote || u.category == ElementCategory::Figure ||
            u.category == ElementCategory::Table)
            continue;
        if (!from_units.empty()) from_units += '\n';
        from_units += u.text;
    }
    std::string from_chunks;
    for (const rag::Chunk& chunk : result.chunks) {
        if (chunk.kind != rag::Chunk::Kind::Content) continue;
        if (!from_chunks.empty()) from_chunks += '\n';
        from_chunks += chunk.text;
    }
    CHECK(from_units == from_chunks);
}

TEST_CASE("chunk JSONL round trip") {
    testing::TempDir dir("chunks");
    const rag::IngestResult result = rag::ingest(chronicle());
    const auto path = dir.path() / "chunks.jsonl";
    rag::save_chunks(path, result.chunks);
    const std::vector<rag::Chunk> loaded = rag::load_chunks(path);
    CHECK(loaded == result.chunks);
}

TEST_CASE("extract_years handles singles, ranges and noise") {
    const rag::YearFilter single = rag::extract_years("what happened in 1485?");
    REQUIRE(single.intervals.size() == 1);
    CHECK(single.intervals[0] == std::pair<int, int>{1485, 1485});

    const rag::YearFilter none = rag::extract_years("the 30000 deaths");
    CHECK(none.empty());

    const rag::YearFilter range = rag::extract_years("between 1450-1452 the plague");
    REQUIRE(range.intervals.size() == 1);
    CHECK(range.intervals[0] == std::pair<int, int>{1450, 1452});
    CHECK(range.overlaps(1451, 1451));
    CHECK_FALSE(range.overlaps(1453, 1460));

    const rag::YearFilter reversed = rag::extract_years("9999-1450 nonsense 1700");
    CHECK(reversed.empty());
}

TEST_CASE("route: prototype similarity with tie to general") {
    net::HashingEmbedder embedder(64);
    rag::RouterModel router = rag::router_from_json(
        json{{"margin", 0.0},
             {"specific", json::array({"chi era il duca nel 1485"})},
             {"general", json::array({"quali temi percorrono la cronaca"})}},
        embedder);

    // a query identical to a prototype lands on its side
    CHECK(rag::route("chi era il duca nel 1485", router, embedder) == rag::QueryClass::Specific);
    CHECK(rag::route("quali temi percorrono la cronaca", router, embedder) ==
          rag::QueryClass::General);

    // an exact tie falls to general: the query matches both sides equally
    rag::RouterModel tie_router = rag::router_from_json(
        json{{"margin", 0.0},
             {"specific", json::array({"identica domanda"})},
             {"general", json::array({"identica domanda"})}},
        embedder);
    CHECK(rag::route("identica domanda", tie_router, embedder) == rag::QueryClass::General);

    // invalid router configurations
    CHECK_THROWS_AS(rag::router_from_json(
                        json{{"specific", json::array()},
                             {"general", json::array({"x"})}},
                        embedder),
                    ConfigError);
}

TEST_CASE("route: token overlap decides under the fixture embedder") {
    net::HashingEmbedder embedder(64);
    // prototype token sets are disjoint; the query shares tokens only with
    // the general side
    rag::RouterModel router = rag::router_from_json(
        json{{"margin", 0.0},
             {"specific", json::array({"peste anno 1450"})},
             {"general", json::array({"stile del racconto"})}},
        embedder);
    CHECK(rag::route("stile e racconto della cronaca", router, embedder) ==
          rag::QueryClass::General);
    CHECK(rag::route("anno della peste", router, embedder) == rag::QueryClass::Specific);
}

TEST_CASE("route respects the margin") {
    net::HashingEmbedder embedder(64);
    // shares one token with the specific side only
    rag::RouterModel router = rag::router_from_json(
        json{{"margin", 0.9},
             {"specific", json::array({"peste 1450"})},
             {"general", json::array({"stile racconto"})}},
        embedder);
    // without the margin this would be specific; the margin pushes it to general
    CHECK(rag::route("peste", router, embedder) == rag::QueryClass::General);
    router.margin = 0.0;
    CHECK(rag::route("peste", router, embedder) == rag::QueryClass::Specific);
}

TEST_CASE("mmr_rerank: lambda=1 equals cosine ordering; diversity picks differ") {
    const int d = 4;
    std::vector<std::pair<std::string, net::EmbeddingVector>> pool;
    // two identical vectors plus one orthogonal; the query leans towards
    // the pair: cos(q, a) = cos(q, b) = 0.8, cos(q, c) = 0.6
    net::EmbeddingVector q;
    q.values = {0.8, 0.6, 0.0, 0.0};
    const net::EmbeddingVector a = basis(d, 0);
    const net::EmbeddingVector b = basis(d, 0);
    const net::EmbeddingVector c = basis(d, 1);
    pool = {{"a", a}, {"b", b}, {"c", c}};

    const auto relevance_only = rag::mmr_rerank(q, pool, 3, 1.0);
    CHECK(relevance_only == std::vector<std::string>{"a", "b", "c"});

    // lambda = 0.5: second slot goes to the orthogonal candidate, because
    // b scores 0.5*0.8 - 0.5*1.0 = -0.1 against c's 0.5*0.6 - 0.5*0.0 = 0.3
    const auto diverse = rag::mmr_rerank(q, pool, 2, 0.5);
    REQUIRE(diverse.size() == 2);
    CHECK(diverse[0] == "a");
    CHECK(diverse[1] == "c");

    // k >= pool size returns a permutation of the whole pool
    const auto everything = rag::mmr_rerank(q, pool, 10, 0.5);
    CHECK(everything.size() == 3);
    std::vector<std::string> sorted = everything;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::string>{"a", "b", "c"});

    CHECK(rag::mmr_rerank(q, {}, 3, 0.5).empty());
    CHECK_THROWS_AS(rag::mmr_rerank(q, pool, 2, 1.5), Error);
}

TEST_CASE("mmr_rerank: every step equals the brute-force argmax") {
    std::mt19937 rng(1618);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = 6;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 7;  // pools up to 8
        std::vector<std::pair<std::string, net::EmbeddingVector>> pool;
        for (std::size_t i = 0; i < n; ++i) {
            net::EmbeddingVector v;
            for (int k = 0; k < d; ++k) v.values.push_back(gauss(rng));
            pool.emplace_back("p" + std::to_string(i), net::normalised(std::move(v)));
        }
        net::EmbeddingVector q;
        for (int k = 0; k < d; ++k) q.values.push_back(gauss(rng));
        q = net::normalised(std::move(q));
        const double lambda = (rng() % 11) / 10.0;
        const std::size_t k = 1 + rng() % n;

        const auto selected = rag::mmr_rerank(q, pool, k, lambda);
        REQUIRE(selected.size() == std::min(k, n));

        // replay the greedy objective step by step
        std::vector<std::size_t> chosen;
        std::vector<bool> used(n, false);
        for (std::size_t step = 0; step < selected.size(); ++step) {
            double best = 0.0;
            std::size_t best_i = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                double objective;
                if (chosen.empty()) {
                    objective = net::dot(q, pool[i].second);
                } else {
                    double redundancy = -2.0;
                    for (std::size_t s : chosen)
                        redundancy =
                            std::max(redundancy, net::dot(pool[i].second, pool[s].second));
                    objective =
                        lambda * net::dot(q, pool[i].second) - (1.0 - lambda) * redundancy;
                }
                if (best_i == n || objective > best ||
                    (objective == best && pool[i].first < pool[best_i].first)) {
                    best = objective;
                    best_i = i;
                }
            }
            CHECK(selected[step] == pool[best_i].first);
            used[best_i] = true;
            chosen.push_back(best_i);
        }
    }
}

TEST_CASE("search_specific: year filter, fallback and footnote augmentation") {
    net::HashingEmbedder embedder(64);
    const rag::IngestResult ingested = rag::ingest(chronicle());
    const rag::RagStore store = rag::build_store(ingested.chunks, embedder);

    // a query naming 1485 only sees chunks overlapping 1485
    const rag::RetrievalResult hits =
        rag::search_specific("che cosa accadde nel 1485?", store, embedder);
    CHECK(hits.year_filtered);
    CHECK_FALSE(hits.fallback_unfiltered);
    REQUIRE(!hits.chunks.empty());
    for (const rag::RetrievedChunk& hit : hits.chunks) {
        const rag::Chunk* chunk = store.find_chunk(hit.chunk_id);
        REQUIRE(chunk != nullptr);
        if (hit.footnote_attachment) {
            CHECK(chunk->kind == rag::Chunk::Kind::Footnote);
            continue;
        }
        REQUIRE(chunk->year_range.has_value());
        CHECK(chunk->year_range->first <= 1485);
        CHECK(chunk->year_range->second >= 1485);
    }
    // the 1485 chunk spans pages 3-4, so the page-4 footnote is attached
    const bool footnote_attached =
        std::any_of(hits.chunks.begin(), hits.chunks.end(),
                    [](const rag::RetrievedChunk& h) { return h.footnote_attachment; });
    CHECK(footnote_attached);

    // no year in the query: plain top-k
    const rag::RetrievalResult plain = rag::search_specific("la peste", store, embedder);
    CHECK_FALSE(plain.year_filtered);

    // a year wholly outside the corpus falls back, flagged
    const rag::RetrievalResult fallback =
        rag::search_specific("guerra del 1300", store, embedder);
    CHECK(fallback.fallback_unfiltered);
    CHECK(!fallback.chunks.empty());
}

TEST_CASE("search_specific never returns a year-violating chunk (random corpora)") {
    std::mt19937 rng(909);
    net::HashingEmbedder embedder(32);
    const std::vector<std::string> words = {"peste", "duca",  "guerra", "citta",
                                            "corte", "festa", "mura",   "ponte"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<rag::Chunk> chunks;
        const std::size_t n = 3 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            rag::Chunk chunk;
            chunk.id = "c" + std::to_string(i);
            chunk.kind = rag::Chunk::Kind::Content;
            chunk.text = words[rng() % words.size()] + " " + words[rng() % words.size()];
            const int start = 1400 + static_cast<int>(rng() % 100);
            chunk.year_range = {start, start + static_cast<int>(rng() % 5)};
            chunk.page_span = {static_cast<int>(i), static_cast<int>(i)};
            chunk.embedding_id = chunk.id;
            chunks.push_back(chunk);
        }
        const rag::RagStore store = rag::build_store(chunks, embedder);
        const int qyear = 1400 + static_cast<int>(rng() % 100);
        const std::string query =
            words[rng() % words.size()] + " nel " + std::to_string(qyear);
        const rag::RetrievalResult result = rag::search_specific(query, store, embedder);
        if (result.fallback_unfiltered) continue;  // no survivors existed
        for (const rag::RetrievedChunk& hit : result.chunks) {
            if (hit.footnote_attachment) continue;
            const rag::Chunk* chunk = store.find_chunk(hit.chunk_id);
            REQUIRE(chunk->year_range.has_value());
            CHECK(chunk->year_range->first <= qyear);
            CHECK(chunk->year_range->second >= qyear);
        }
    }
}

TEST_CASE("search_general composes top-pool with MMR") {
    net::HashingEmbedder embedder(64);
    const rag::IngestResult ingested = rag::ingest(chronicle());
    const rag::RagStore store = rag::build_store(ingested.chunks, embedder);

    rag::SearchOptions options;
    options.k_general = 2;
    options.pool = 4;
    const rag::RetrievalResult result =
        rag::search_general("la peste nella citta", store, embedder, options);
    CHECK(result.chunks.size() == 2);
    for (const rag::RetrievedChunk& hit : result.chunks) {
        const rag::Chunk* chunk = store.find_chunk(hit.chunk_id);
        CHECK(chunk->kind == rag::Chunk::Kind::Content);  // no footnotes on this path
    }

    // pool must cover k
    options.pool = 1;
    CHECK_THROWS_AS(rag::search_general("x", store, embedder, options), Error);

    // empty store yields an empty result
    const rag::RagStore empty{{}, enrich::VectorIndex(64)};
    options.pool = 4;
    CHECK(rag::search_general("x", empty, embedder, options).chunks.empty());
}

TEST_CASE("search_general equals the composed oracle on a 20-chunk fixture") {
    net::HashingEmbedder embedder(32);
    std::vector<rag::Chunk> chunks;
    const std::vector<std::string> words = {"peste",  "duca",   "guerra", "citta", "corte",
                                            "festa",  "mura",   "ponte",  "fiume", "mercato"};
    std::mt19937 rng(2024);
    for (int i = 0; i < 20; ++i) {
        rag::Chunk chunk;
        chunk.id = (i < 10 ? "c0" : "c") + std::to_string(i);
        chunk.kind = rag::Chunk::Kind::Content;
        chunk.text = words[rng() % words.size()] + " " + words[rng() % words.size()] + " " +
                     words[rng() % words.size()];
        chunk.page_span = {i + 1, i + 1};
        chunk.embedding_id = chunk.id;
        chunks.push_back(chunk);
    }
    const rag::RagStore store = rag::build_store(chunks, embedder);
    const std::string query = "la peste nella citta e il mercato";
    rag::SearchOptions options;
    options.k_general = 4;
    options.pool = 8;
    options.lambda = 0.5;

    const rag::RetrievalResult composed =
        rag::search_general(query, store, embedder, options);

    // oracle: naive top-pool by cosine, then stepwise MMR over it
    const net::EmbeddingVector q = net::normalised(embedder.embed({query}).front());
    std::vector<enrich::SearchHit> scan;
    for (const auto& entry : store.index.entries())
        scan.push_back({entry.id, net::dot(q, entry.vector)});
    std::sort(scan.begin(), scan.end(), [](const auto& a, const auto& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.id < b.id;
    });
    scan.resize(options.pool);
    std::vector<std::pair<std::string, net::EmbeddingVector>> pool;
    for (const auto& hit : scan) pool.emplace_back(hit.id, store.index.find(hit.id)->vector);
    const std::vector<std::string> oracle =
        rag::mmr_rerank(q, pool, options.k_general, options.lambda);

    REQUIRE(composed.chunks.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(composed.chunks[i].chunk_id == oracle[i]);

    // pool == k degenerates to an MMR permutation of the top-k
    options.pool = options.k_general;
    const rag::RetrievalResult tight = rag::search_general(query, store, embedder, options);
    std::vector<std::string> tight_ids, top_ids;
    for (const auto& hit : tight.chunks) tight_ids.push_back(hit.chunk_id);
    for (std::size_t i = 0; i < options.k_general; ++i) top_ids.push_back(scan[i].id);
    std::sort(tight_ids.begin(), tight_ids.end());
    std::sort(top_ids.begin(), top_ids.end());
    CHECK(tight_ids == top_ids);
}

TEST_CASE("assemble_prompt labels chunks and stays deterministic") {
    rag::Chunk chunk;
    chunk.id = "c0001";
    chunk.kind = rag::Chunk::Kind::Content;
    chunk.text = "Nel 1450 giunse la peste.";
    chunk.year_range = {1450, 1452};
    chunk.page_span = {12, 14};
    rag::Chunk note;
    note.id = "f0001";
    note.kind = rag::Chunk::Kind::Footnote;
    note.text = "1. nota";
    note.page_span = {12, 12};

    const std::string prompt =
        rag::assemble_prompt("che accadde?", {&chunk, &note});
    CHECK(prompt.find("pp. 12–14") != std::string::npos);
    CHECK(prompt.find("years 1450–1452") != std::string::npos);
    CHECK(prompt.find("footnote") != std::string::npos);
    CHECK(prompt.find("che accadde?") != std::string::npos);
    CHECK(prompt.find("only the passages") != std::string::npos);
    CHECK(prompt.find("same language") != std::string::npos);
    CHECK(prompt == rag::assemble_prompt("che accadde?", {&chunk, &note}));

    // no chunks: directives and query still present
    const std::string bare = rag::assemble_prompt("che accadde?", {});
    CHECK(bare.find("che accadde?") != std::string::npos);
    CHECK(bare.find("only the passages") != std::string::npos);
}

TEST_CASE("answer: routes, retrieves, prompts and cites") {
    net::HashingEmbedder embedder(64);
    const rag::IngestResult ingested = rag::ingest(chronicle());
    const rag::RagStore store = rag::build_store(ingested.chunks, embedder);
    const rag::RouterModel router = rag::router_from_json(
        json{{"margin", 0.0},
             {"specific", json::array({"che cosa accadde nel 1485"})},
             {"general", json::array({"quali temi percorrono la cronaca"})}},
        embedder);

    net::FixtureChatBackend llm;
    llm.add_response("query", "La peste acerrima colpi Milano nel 1485.");

    const rag::AnswerResult specific =
        rag::answer("che cosa accadde nel 1485?", store, router, embedder, llm);
    CHECK(specific.route == rag::QueryClass::Specific);
    CHECK(specific.response == "La peste acerrima colpi Milano nel 1485.");
    CHECK(!specific.citations.empty());
    CHECK(specific.provenance["route"] == "specific");
    CHECK(specific.provenance.contains("year_filtered"));

    const rag::AnswerResult general =
        rag::answer("quali temi percorrono la cronaca?", store, router, embedder, llm);
    CHECK(general.route == rag::QueryClass::General);
    CHECK(general.provenance["mmr"] == true);

    // backend failure surfaces as BackendError with the prompt retained
    net::FixtureChatBackend broken;
    try {
        rag::answer("che cosa accadde nel 1485?", store, router, embedder, broken);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.prompt().find("che cosa accadde nel 1485?") != std::string::npos);
    }
}
