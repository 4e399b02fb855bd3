// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "folio/core/serialize.hpp"
#include "folio/enrich/exports.hpp"
#include "folio/enrich/gazetteer.hpp"
#include "folio/enrich/index.hpp"
#include "folio/enrich/semantic.hpp"
#include "folio/net/embedding.hpp"
#include "folio/util/text.hpp"
#include "support/fixture_corpus.hpp"
#include "support/tmpdir.hpp"

using namespace folio;

namespace {

// Character-level edit distance by direct recursion; the oracle for the
// similarity arithmetic.
std::size_t brute_distance(const std::u32string& a, const std::u32string& b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::vector<std::size_t> prev(b.size() + 1), curr(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            curr[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1,
                                curr[j - 1] + 1});
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

std::vector<enrich::GazetteerEntry> small_gazetteer() {
    return {
        {"Q101", EntityType::Person, "Cicco Simonetta", {}},
        {"Q102", EntityType::Person, "Ludovico Sforza", {"Lodovico il Moro"}},
        {"Q103", EntityType::Place, "Milano", {"Mediolanum"}},
    };
}

EntityMention mention(const std::string& surface, EntityType type) {
    return {surface, type, 0, util::utf8_length(surface)};
}

}  // namespace

TEST_CASE("name_similarity matches the brute-force arithmetic") {
    const double sim = enrich::name_similarity("Lodovico Sforza", "Ludovico Sforza");
    CHECK(sim == doctest::Approx(14.0 / 15.0));
    const std::size_t d = brute_distance(util::decode_utf8("lodovico sforza"),
                                         util::decode_utf8("ludovico sforza"));
    CHECK(d == 1);
    CHECK(enrich::name_similarity("Milano", "milano") == 1.0);  // casefolded
    CHECK(enrich::name_similarity("", "") == 1.0);
}

TEST_CASE("link_entities links exact and near matches, filters by type") {
    const auto gazetteer = small_gazetteer();

    const std::vector<EntityMention> mentions = {
        mention("Cicco Simonetta", EntityType::Person),
        mention("Lodovico Sforza", EntityType::Person),   // distance-1 match
        mention("Milano", EntityType::Person),            // wrong type: person entries only
        mention("Tarquinio", EntityType::Person),         // nothing close
    };
    const enrich::LinkResult result = enrich::link_entities(mentions, gazetteer);
    REQUIRE(result.linked.size() == 2);
    CHECK(result.linked[0].kb_id == "Q101");
    CHECK(result.linked[0].score == 1.0);
    CHECK(result.linked[1].kb_id == "Q102");
    CHECK(result.linked[1].score == doctest::Approx(14.0 / 15.0));
    REQUIRE(result.unlinked.size() == 2);
    CHECK(result.unlinked[0].surface == "Milano");
    CHECK(result.unlinked[1].surface == "Tarquinio");
}

TEST_CASE("link_entities aliases count and ties break to the smallest kb_id") {
    std::vector<enrich::GazetteerEntry> gazetteer = {
        {"Q202", EntityType::Person, "Giovanni", {}},
        {"Q201", EntityType::Person, "Giovanni", {}},
    };
    const auto result =
        enrich::link_entities(std::vector<EntityMention>{mention("Giovanni", EntityType::Person)},
                              gazetteer);
    REQUIRE(result.linked.size() == 1);
    CHECK(result.linked[0].kb_id == "Q201");

    // deterministic under permutation
    std::reverse(gazetteer.begin(), gazetteer.end());
    const auto swapped =
        enrich::link_entities(std::vector<EntityMention>{mention("Giovanni", EntityType::Person)},
                              gazetteer);
    CHECK(swapped.linked[0].kb_id == "Q201");

    // alias hit
    const auto alias = enrich::link_entities(
        std::vector<EntityMention>{mention("Lodovico il Moro", EntityType::Person)},
        small_gazetteer());
    REQUIRE(alias.linked.size() == 1);
    CHECK(alias.linked[0].kb_id == "Q102");
}

TEST_CASE("link_entities with an empty gazetteer leaves everything unlinked") {
    const auto result = enrich::link_entities(
        std::vector<EntityMention>{mention("Milano", EntityType::Place)},
        std::vector<enrich::GazetteerEntry>{});
    CHECK(result.linked.empty());
    CHECK(result.unlinked.size() == 1);
}

TEST_CASE("gazetteer TSV loading") {
    testing::TempDir dir("gaz");
    const auto path = dir.path() / "authority.tsv";
    save_text_file(path,
                   "# comment line\n"
                   "Q1\tperson\tAnna Morisi\talias one\talias two\n"
                   "\n"
                   "Q2\tplace\tTorino\n");
    const auto entries = enrich::load_gazetteer(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].aliases == std::vector<std::string>{"alias one", "alias two"});
    CHECK(entries[1].entity_type == EntityType::Place);

    save_text_file(path, "Q1\tperson\n");
    CHECK_THROWS_AS(enrich::load_gazetteer(path), ParseError);
    save_text_file(path, "Q1\tmonster\tX\n");
    CHECK_THROWS_AS(enrich::load_gazetteer(path), ParseError);
}

TEST_CASE("hashing embedder follows the stated rule exactly") {
    net::HashingEmbedder embedder(64);

    // empty text: unit vector along bucket 0
    const auto empty = embedder.embed({""}).front();
    CHECK(empty.values[0] == 1.0);
    CHECK(net::norm(empty) == doctest::Approx(1.0));

    // identical texts embed identically
    CHECK(embedder.embed({"la peste"}).front() == embedder.embed({"la peste"}).front());

    // hand-evaluated two-token case
    const auto vec = embedder.embed({"a b"}).front();
    const auto bucket = [](const std::string& token) {
        return net::HashingEmbedder::fnv1a64(token) % 64;
    };
    REQUIRE(bucket("a") != bucket("b"));
    const double expected = 1.0 / std::sqrt(2.0);
    CHECK(vec.values[bucket("a")] == doctest::Approx(expected));
    CHECK(vec.values[bucket("b")] == doctest::Approx(expected));
    double sum = 0.0;
    for (double x : vec.values) sum += x;
    CHECK(sum == doctest::Approx(2.0 * expected));  // nothing else is set
    CHECK(net::norm(vec) == doctest::Approx(1.0));

    // repeated token counts weigh the bucket
    const auto repeated = embedder.embed({"a a b"}).front();
    CHECK(repeated.values[bucket("a")] == doctest::Approx(2.0 / std::sqrt(5.0)));
}

TEST_CASE("vector index: add/search basics") {
    net::HashingEmbedder embedder(16);
    enrich::VectorIndex index(16);
    const auto vectors = embedder.embed({"alpha beta", "gamma delta", "alpha gamma"});
    index.add("a", vectors[0]);
    index.add("b", vectors[1]);
    index.add("c", vectors[2]);

    // an entry's own vector finds itself with similarity 1
    const auto hits = index.search(vectors[0], 1);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].id == "a");
    CHECK(hits[0].similarity == doctest::Approx(1.0));

    CHECK_THROWS_AS(index.add("a", vectors[1]), Error);  // duplicate id
    net::EmbeddingVector wrong;
    wrong.values.assign(8, 0.5);
    CHECK_THROWS_AS(index.add("d", wrong), Error);  // dimension mismatch
    CHECK_THROWS_AS(index.search(wrong, 1), Error);
}

TEST_CASE("vector index: orthogonal query, filters, small result sets") {
    enrich::VectorIndex index(4);
    net::EmbeddingVector ex, ey;
    ex.values = {1, 0, 0, 0};
    ey.values = {0, 1, 0, 0};
    index.add("x", ex, {{"year", 1450}});
    const auto hits = index.search(ey, 3);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].similarity == doctest::Approx(0.0));

    const auto filtered = index.search(
        ex, 3, [](const json& meta) { return meta.at("year").get<int>() > 1500; });
    CHECK(filtered.empty());

    const enrich::VectorIndex empty(4);
    CHECK(empty.search(ex, 5).empty());
}

TEST_CASE("vector index ranks known dot products in order") {
    enrich::VectorIndex index(4);
    net::EmbeddingVector query;
    query.values = {1, 0, 0, 0};
    net::EmbeddingVector a, b, c;
    a.values = {0.9, std::sqrt(1.0 - 0.81), 0, 0};
    b.values = {0.5, 0, std::sqrt(0.75), 0};
    c.values = {0.1, 0, 0, std::sqrt(0.99)};
    index.add("a", a);
    index.add("b", b);
    index.add("c", c);
    const auto hits = index.search(query, 2);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].id == "a");
    CHECK(hits[0].similarity == doctest::Approx(0.9));
    CHECK(hits[1].id == "b");
    CHECK(hits[1].similarity == doctest::Approx(0.5));
}

TEST_CASE("vector index search equals a naive scan with tie-break by id") {
    std::mt19937 rng(271828);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 16;
        enrich::VectorIndex index(d);
        for (int i = 0; i < 200; ++i) {
            net::EmbeddingVector v;
            for (int k = 0; k < d; ++k) v.values.push_back(gauss(rng));
            char id[8];
            std::snprintf(id, sizeof(id), "e%03d", i);
            index.add(id, std::move(v));
        }
        net::EmbeddingVector query;
        for (int k = 0; k < d; ++k) query.values.push_back(gauss(rng));

        // naive oracle: full scan over the stored entries, sort by (-sim, id)
        const net::EmbeddingVector unit_query = net::normalised(query);
        std::vector<enrich::SearchHit> oracle;
        for (const auto& entry : index.entries())
            oracle.push_back({entry.id, net::dot(unit_query, entry.vector)});
        std::sort(oracle.begin(), oracle.end(),
                  [](const enrich::SearchHit& a, const enrich::SearchHit& b) {
                      if (a.similarity != b.similarity) return a.similarity > b.similarity;
                      return a.id < b.id;
                  });
        const std::size_t k = 1 + (rng() % 10);
        oracle.resize(k);

        const auto hits = index.search(query, k);
        REQUIRE(hits.size() == k);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(hits[i].id == oracle[i].id);
            CHECK(hits[i].similarity == oracle[i].similarity);
        }
    }
}

TEST_CASE("vector index persistence round trip") {
    testing::TempDir dir("index");
    net::HashingEmbedder embedder(8);
    enrich::VectorIndex index(8);
    const auto vectors = embedder.embed({"uno", "due", "tre"});
    index.add("u1", vectors[0], {{"page", 1}});
    index.add("u2", vectors[1], {{"page", 2}});
    index.add("u3", vectors[2], {{"page", 3}});

    const auto path = dir.path() / "index.jsonl";
    index.save(path);
    const enrich::VectorIndex loaded = enrich::VectorIndex::load(path);
    REQUIRE(loaded.size() == 3);
    CHECK(loaded.dimension() == 8);
    CHECK(loaded.find("u2") != nullptr);
    CHECK(loaded.find("u2")->metadata.at("page").get<int>() == 2);

    // stored vectors all have unit norm
    for (const auto& entry : loaded.entries())
        CHECK(net::norm(entry.vector) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("infer_semantics merges declared annotations without overwriting") {
    const ExtractionSchema schema = parse_schema(testing::element_schema_text());
    ContentUnit unit;
    unit.id = "u0001";
    unit.category = ElementCategory::Text;
    unit.text = "Cicco Simonetta fu nominato segretario.";
    unit.sources = {{1, 0}};
    unit.metadata["date"] = "1450";

    net::FixtureChatBackend backend;
    backend.add_response(
        "u0001", R"({"entities": [{"mention": "Cicco Simonetta", "type": "person"}],
                     "date": "1477", "place": "Milano"})");
    const enrich::SemanticResult result =
        enrich::infer_semantics(unit, "find entities and dates", backend, schema);
    CHECK(result.unit.metadata["date"] == "1450");    // existing value kept
    CHECK(result.unit.metadata["place"] == "Milano");  // new value merged
    CHECK(result.unit.metadata.contains("entities"));
    CHECK(result.annotations.contains("entities"));

    // undeclared keys are rejected
    net::FixtureChatBackend bad;
    bad.add_response("u0001", R"({"mood": "wistful"})");
    CHECK_THROWS_AS(enrich::infer_semantics(unit, "x", bad, schema), ValidationError);

    // unparseable output
    net::FixtureChatBackend garbled;
    garbled.add_response("u0001", "no json here");
    CHECK_THROWS_AS(enrich::infer_semantics(unit, "x", garbled, schema), ParseError);

    // the empty annotation object changes nothing
    net::FixtureChatBackend empty;
    empty.add_response("u0001", "{}");
    CHECK(enrich::infer_semantics(unit, "x", empty, schema).unit == unit);
}

namespace {

DocumentRecord sample_document() {
    DocumentRecord doc;
    doc.title = "Cronaca di prova";
    doc.source_metadata = {{"edition", "1978"}};

    PageExtraction page1{1, "page_0001", {}};
    PageElement head;
    head.bbox = {0, 0, 10, 10};
    head.category = ElementCategory::Header;
    head.text = "LIBRO PRIMO";
    page1.elements.push_back(head);
    PageElement body;
    body.bbox = {0, 20, 10, 40};
    body.category = ElementCategory::Text;
    body.text = "Testo con \"virgolette\", una virgola e 1450.";
    page1.elements.push_back(body);
    PageElement note;
    note.bbox = {0, 50, 10, 60};
    note.category = ElementCategory::Footnote;
    note.text = "1. nota a pie di pagina";
    page1.elements.push_back(note);
    PageElement fig;
    fig.bbox = {0, 70, 10, 90};
    fig.category = ElementCategory::Figure;
    fig.text = "";
    page1.elements.push_back(fig);
    doc.pages.push_back(page1);

    ContentUnit u1{"u0001", ElementCategory::Header, "LIBRO PRIMO", {{1, 0}}, json::object()};
    ContentUnit u2{"u0002",
                   ElementCategory::Text,
                   "Testo con \"virgolette\", una virgola e 1450.",
                   {{1, 1}},
                   json::object()};
    u2.metadata["date"] = "1450";
    u2.metadata["linked_entities"] =
        json::array({json{{"mention", "Milano"}, {"type", "place"}, {"kb_id", "Q103"},
                          {"kb_label", "Milano"}, {"score", 1.0}}});
    ContentUnit u3{"u0003", ElementCategory::Footnote, "1. nota a pie di pagina", {{1, 2}},
                   json::object()};
    ContentUnit u4{"u0004", ElementCategory::Figure, "", {{1, 3}}, json::object()};
    doc.units = {u1, u2, u3, u4};
    return doc;
}

// Minimal well-formedness scan: tag balance and entity syntax. Independent
// of the exporter's string building.
void check_well_formed_xml(const std::string& xml) {
    std::vector<std::string> stack;
    std::size_t i = xml.find("?>");
    REQUIRE(i != std::string::npos);
    i += 2;
    while (i < xml.size()) {
        const char c = xml[i];
        if (c == '<') {
            const std::size_t end = xml.find('>', i);
            REQUIRE(end != std::string::npos);
            std::string tag = xml.substr(i + 1, end - i - 1);
            REQUIRE_FALSE(tag.empty());
            if (tag.back() == '/') {
                // self-closing
            } else if (tag.front() == '/') {
                REQUIRE_FALSE(stack.empty());
                const std::string name = tag.substr(1);
                CHECK(stack.back() == name);
                stack.pop_back();
            } else {
                const std::size_t space = tag.find(' ');
                stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
            }
            i = end + 1;
        } else if (c == '&') {
            const std::size_t semi = xml.find(';', i);
            REQUIRE(semi != std::string::npos);
            const std::string entity = xml.substr(i, semi - i + 1);
            const bool known = entity == "&amp;" || entity == "&lt;" || entity == "&gt;" ||
                               entity == "&quot;" || entity == "&apos;";
            CHECK(known);
            i = semi + 1;
        } else {
            CHECK(c != '>');
            ++i;
        }
    }
    CHECK(stack.empty());
}

}  // namespace

TEST_CASE("TEI export maps categories to the stated elements") {
    const std::string xml = enrich::export_tei(sample_document());
    check_well_formed_xml(xml);
    CHECK(xml.find("<div type=\"page\" n=\"1\">") != std::string::npos);
    CHECK(xml.find("<head>LIBRO PRIMO</head>") != std::string::npos);
    CHECK(xml.find("<note place=\"foot\">1. nota a pie di pagina</note>") != std::string::npos);
    CHECK(xml.find("<figure><figDesc></figDesc></figure>") != std::string::npos);
    CHECK(xml.find("<title>Cronaca di prova</title>") != std::string::npos);
    CHECK(xml.find("&quot;virgolette&quot;") != std::string::npos);
}

TEST_CASE("TEI export of an empty document is a valid skeleton") {
    DocumentRecord empty;
    empty.title = "Vuoto & vano";
    const std::string xml = enrich::export_tei(empty);
    check_well_formed_xml(xml);
    CHECK(xml.find("<body>") != std::string::npos);
    CHECK(xml.find("&amp;") != std::string::npos);
}

TEST_CASE("TEI golden output for the sample document") {
    const std::string xml = enrich::export_tei(sample_document());
    const std::string expected = R"(<?xml version="1.0" encoding="UTF-8"?>
<TEI xmlns="http://www.tei-c.org/ns/1.0">
  <teiHeader>
    <fileDesc>
      <titleStmt>
        <title>Cronaca di prova</title>
      </titleStmt>
      <publicationStmt>
        <p>Produced by the folio pipeline</p>
      </publicationStmt>
      <sourceDesc>
        <p>edition: 1978</p>
      </sourceDesc>
    </fileDesc>
  </teiHeader>
  <text>
    <body>
      <div type="page" n="1">
        <head>LIBRO PRIMO</head>
        <p>Testo con &quot;virgolette&quot;, una virgola e 1450.</p>
        <note place="foot">1. nota a pie di pagina</note>
        <figure><figDesc></figDesc></figure>
      </div>
    </body>
  </text>
</TEI>
)";
    CHECK(xml == expected);
}

TEST_CASE("CSV export quotes properly and joins entity ids") {
    const std::string csv = enrich::export_csv(sample_document());
    const auto lines = util::split_lines(csv);
    REQUIRE(lines.size() >= 5);
    CHECK(lines[0] == "id,category,page_first,page_last,text,date,entity_ids");
    // the text cell contains a comma and quotes, so it must be quoted/escaped
    CHECK(lines[2].find("\"Testo con \"\"virgolette\"\", una virgola e 1450.\"") !=
          std::string::npos);
    CHECK(lines[2].find("Q103") != std::string::npos);

    DocumentRecord empty;
    CHECK(enrich::export_csv(empty) == "id,category,page_first,page_last,text,entity_ids\n");
}

TEST_CASE("JSONL export round-trips the units") {
    const DocumentRecord doc = sample_document();
    const std::string jsonl = enrich::export_jsonl(doc);
    const auto lines = util::split_lines(jsonl);
    CHECK(lines.size() == doc.units.size() + 1);  // trailing newline

    const std::vector<ContentUnit> imported = enrich::import_units_jsonl(jsonl);
    CHECK(imported == doc.units);
}
