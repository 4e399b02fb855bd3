// SPDX-License-Identifier: Apache-2.0
#include "folio/cli/stages.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>

#include "folio/core/serialize.hpp"
#include "folio/enrich/exports.hpp"
#include "folio/enrich/gazetteer.hpp"
#include "folio/enrich/index.hpp"
#include "folio/enrich/semantic.hpp"
#include "folio/evaluate/layout.hpp"
#include "folio/evaluate/metrics.hpp"
#include "folio/evaluate/report.hpp"
#include "folio/extract/extract.hpp"
#include "folio/net/embedding.hpp"
#include "folio/prep/image_io.hpp"
#include "folio/rag/answer.hpp"
#include "folio/refine/aggregate.hpp"

namespace folio::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void log_line(const json& record) {
    static std::mutex mu;
    const std::string line = record.dump() + "\n";
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << line;
}

// Stage outputs are rebuilt from scratch so re-runs are deterministic even
// over a dirty output directory.
fs::path fresh_dir(const fs::path& dir) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir);
    return dir;
}

bool has_image_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".tif" || ext == ".tiff";
}

std::vector<fs::path> list_sorted(const fs::path& dir, const std::string& extension) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (extension == "image") {
            if (has_image_extension(entry.path())) files.push_back(entry.path());
        } else if (entry.path().extension() == extension) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<PageExtraction> load_pages(const fs::path& pages_dir) {
    std::vector<PageExtraction> pages;
    for (const fs::path& file : list_sorted(pages_dir, ".json"))
        pages.push_back(page_from_json(load_json_file(file)));
    std::sort(pages.begin(), pages.end(),
              [](const PageExtraction& a, const PageExtraction& b) {
                  return a.page_number < b.page_number;
              });
    return pages;
}

DocumentRecord load_document_artifact(const PipelineConfig& config) {
    const fs::path enriched = config.output_dir / "document.enriched.json";
    const fs::path plain = config.output_dir / "document.json";
    if (fs::exists(enriched)) return document_from_json(load_json_file(enriched));
    if (fs::exists(plain)) return document_from_json(load_json_file(plain));
    throw IoError("no document artifact under " + config.output_dir.string() +
                  " (run the refine stage first)");
}

std::string page_plain_text(const PageExtraction& page) {
    std::string text;
    for (std::size_t i = 0; i < page.elements.size(); ++i) {
        if (i > 0) text += '\n';
        text += page.elements[i].text;
    }
    text += '\n';
    return text;
}

}  // namespace

void run_preprocess(const PipelineConfig& config) {
    const std::vector<fs::path> images = list_sorted(config.input_dir, "image");
    if (images.empty()) throw IoError("no input images in " + config.input_dir.string());
    const fs::path out_dir = fresh_dir(config.output_dir / "preprocessed");

    for (const fs::path& path : images) {
        const auto start = Clock::now();
        const prep::RasterImage image = prep::read_image(path);
        const prep::RasterImage processed = prep::run_chain(config.preprocess, image);
        const fs::path out = out_dir / (path.stem().string() + ".png");
        prep::write_png(out, processed);
        log_line({{"stage", "preprocess"}, {"image", path.stem().string()},
                  {"ms", ms_since(start)}});
    }
}

void run_extract(const PipelineConfig& config) {
    const fs::path preprocessed = config.output_dir / "preprocessed";
    const std::vector<fs::path> images = list_sorted(preprocessed, ".png");
    if (images.empty())
        throw IoError("no preprocessed images in " + preprocessed.string() +
                      " (run the preprocess stage first)");

    const ExtractionSchema schema =
        parse_schema(load_text_file(config.extraction.schema_file));
    std::optional<std::string> instructions;
    if (config.extraction.instructions_file)
        instructions = load_text_file(*config.extraction.instructions_file);

    const auto backend = net::make_chat_backend(config.extraction.backend);
    std::unique_ptr<net::ChatBackend> refiner;
    if (config.extraction.refiner) refiner = net::make_chat_backend(*config.extraction.refiner);

    std::vector<extract::PageInput> inputs;
    for (std::size_t i = 0; i < images.size(); ++i) {
        extract::PageInput input;
        input.page_number = static_cast<int>(i) + 1;
        input.source_image_id = images[i].stem().string();
        input.image_path = images[i];  // loaded lazily inside the worker
        inputs.push_back(std::move(input));
    }

    const ExtractionPath path = config.extraction.path;
    const extract::HybridOptions hybrid_options{config.extraction.allow_restructure};
    const extract::PageExtractor extractor = [&](const extract::PageInput& input) {
        const auto start = Clock::now();
        const prep::RasterImage image = prep::read_image(input.image_path);
        PageExtraction page;
        switch (path) {
            case ExtractionPath::A:
                page = extract::extract_page(*backend, net::BackendConfig::Mode::Specialised,
                                             image, schema, std::nullopt, input.page_number,
                                             input.source_image_id);
                break;
            case ExtractionPath::B:
                page = extract::extract_page(*backend, net::BackendConfig::Mode::General,
                                             image, schema, instructions, input.page_number,
                                             input.source_image_id);
                break;
            case ExtractionPath::C:
                page = extract::extract_page_hybrid(*backend, *refiner, image, schema,
                                                    instructions.value_or(""),
                                                    input.page_number, input.source_image_id,
                                                    hybrid_options);
                break;
        }
        log_line({{"stage", "extract"}, {"page", input.page_number}, {"ms", ms_since(start)}});
        return page;
    };

    const auto start = Clock::now();
    const extract::ExtractionRun run =
        extract::extract_document(inputs, extractor, config.max_in_flight, config.mode);
    const double seconds = static_cast<double>(ms_since(start)) / 1000.0;

    const fs::path pages_dir = fresh_dir(config.output_dir / "pages");
    const fs::path text_dir = fresh_dir(config.output_dir / "text");
    for (const PageExtraction& page : run.pages) {
        save_json_file(pages_dir / (page.source_image_id + ".json"), page_to_json(page));
        save_text_file(text_dir / (page.source_image_id + ".txt"), page_plain_text(page));
    }

    const fs::path manifest = config.output_dir / "failures.json";
    if (run.failures.empty()) {
        std::error_code ec;
        fs::remove(manifest, ec);
    } else {
        json failures = json::array();
        for (const extract::PageFailure& f : run.failures)
            failures.push_back({{"page_number", f.page_number},
                                {"source_image_id", f.source_image_id},
                                {"message", f.message}});
        save_json_file(manifest, json{{"failures", failures}});
    }
    log_line({{"stage", "extract"}, {"pages", run.pages.size()},
              {"failures", run.failures.size()},
              {"seconds_per_page", inputs.empty() ? 0.0 : seconds / inputs.size()}});
}

void run_refine(const PipelineConfig& config) {
    std::vector<PageExtraction> pages = load_pages(config.output_dir / "pages");
    if (pages.empty()) throw IoError("no page artifacts to refine");

    std::vector<refine::MergeLink> links;
    if (config.refinement.resolve_continuations) links = refine::resolve_continuations(pages);
    if (config.refinement.propagate_metadata)
        pages = refine::propagate_metadata(std::move(pages), links);
    const DocumentRecord doc =
        refine::aggregate(std::move(pages), links, config.title, config.source_metadata);
    save_json_file(config.output_dir / "document.json", document_to_json(doc));
    log_line({{"stage", "refine"}, {"units", doc.units.size()}, {"links", links.size()}});
}

void run_enrich(const PipelineConfig& config) {
    const fs::path document_path = config.output_dir / "document.json";
    if (!fs::exists(document_path))
        throw IoError("document.json not found (run the refine stage first)");
    DocumentRecord doc = document_from_json(load_json_file(document_path));

    // Entity linking against the gazetteer, mentions gathered per unit from
    // its source elements.
    json unlinked_report = json::array();
    std::size_t linked_count = 0;
    if (config.enrichment.gazetteer) {
        const auto gazetteer = enrich::load_gazetteer(*config.enrichment.gazetteer);
        std::map<std::pair<int, int>, const PageElement*> elements;
        for (const PageExtraction& page : doc.pages)
            for (std::size_t i = 0; i < page.elements.size(); ++i)
                elements[{page.page_number, static_cast<int>(i)}] = &page.elements[i];

        for (ContentUnit& unit : doc.units) {
            std::vector<EntityMention> mentions;
            for (const auto& source : unit.sources) {
                auto it = elements.find(source);
                if (it == elements.end()) continue;
                mentions.insert(mentions.end(), it->second->entities.begin(),
                                it->second->entities.end());
            }
            if (mentions.empty()) continue;
            const enrich::LinkResult result =
                enrich::link_entities(mentions, gazetteer, config.enrichment.link_threshold);
            if (!result.linked.empty()) {
                json linked = json::array();
                for (const enrich::LinkedEntity& entity : result.linked) {
                    linked.push_back({{"mention", entity.mention.surface},
                                      {"type", std::string(to_string(entity.mention.entity_type))},
                                      {"kb_id", entity.kb_id},
                                      {"kb_label", entity.kb_label},
                                      {"score", entity.score}});
                    ++linked_count;
                }
                unit.metadata["linked_entities"] = linked;
            }
            for (const EntityMention& mention : result.unlinked)
                unlinked_report.push_back({{"mention", mention.surface},
                                           {"type", std::string(to_string(mention.entity_type))},
                                           {"unit", unit.id}});
        }
    }

    if (config.enrichment.semantic) {
        const ExtractionSchema schema =
            parse_schema(load_text_file(config.extraction.schema_file));
        const auto backend = net::make_chat_backend(config.enrichment.semantic->backend);
        for (ContentUnit& unit : doc.units)
            unit = enrich::infer_semantics(unit, config.enrichment.semantic->task_prompt,
                                           *backend, schema)
                       .unit;
    }

    const fs::path exports_dir = fresh_dir(config.output_dir / "exports");
    for (const std::string& format : config.enrichment.exports) {
        if (format == "tei")
            save_text_file(exports_dir / "document.tei.xml", enrich::export_tei(doc));
        else if (format == "csv")
            save_text_file(exports_dir / "document.csv", enrich::export_csv(doc));
        else if (format == "jsonl")
            save_text_file(exports_dir / "document.jsonl", enrich::export_jsonl(doc));
    }

    // Unit-level semantic index.
    if (!doc.units.empty()) {
        const auto embedder = net::make_embedding_backend(config.enrichment.embedding);
        std::vector<std::string> texts;
        for (const ContentUnit& unit : doc.units) texts.push_back(unit.text);
        const auto vectors = embedder->embed(texts);
        enrich::VectorIndex index(embedder->dimension());
        for (std::size_t i = 0; i < doc.units.size(); ++i) {
            const ContentUnit& unit = doc.units[i];
            index.add(unit.id, vectors[i],
                      {{"category", std::string(to_string(unit.category))},
                       {"page_first", unit.sources.front().first},
                       {"page_last", unit.sources.back().first}});
        }
        index.save(config.output_dir / "units_index.jsonl");
    }

    save_json_file(config.output_dir / "document.enriched.json", document_to_json(doc));
    save_json_file(config.output_dir / "enrich_report.json",
                   json{{"linked", linked_count}, {"unlinked", unlinked_report}});
    log_line({{"stage", "enrich"}, {"linked", linked_count},
              {"unlinked", unlinked_report.size()}});
}

void run_ingest(const PipelineConfig& config) {
    const DocumentRecord doc = load_document_artifact(config);
    rag::IngestOptions options;
    options.max_words_per_chunk = config.rag_config.max_words_per_chunk;
    options.year_min = config.rag_config.search.year_min;
    options.year_max = config.rag_config.search.year_max;
    const rag::IngestResult result = rag::ingest(doc, options);

    const auto embedder = net::make_embedding_backend(config.enrichment.embedding);
    const rag::RagStore store = rag::build_store(result.chunks, *embedder);

    const fs::path rag_dir = fresh_dir(config.output_dir / "rag");
    rag::save_chunks(rag_dir / "chunks.jsonl", store.chunks);
    store.index.save(rag_dir / "index.jsonl");
    log_line({{"stage", "ingest"}, {"content_chunks", result.content_count},
              {"footnote_chunks", result.footnote_count}});
}

void run_all(const PipelineConfig& config) {
    run_preprocess(config);
    run_extract(config);
    run_refine(config);
    run_enrich(config);
    run_ingest(config);
}

void run_eval(const EvalArgs& args) {
    const std::vector<fs::path> reference_files = list_sorted(args.reference_dir, ".txt");
    if (reference_files.empty())
        throw IoError("no reference transcripts in " + args.reference_dir.string());
    if (!fs::is_directory(args.hypothesis_dir) ||
        list_sorted(args.hypothesis_dir, ".txt").empty())
        throw IoError("no hypothesis transcripts in " + args.hypothesis_dir.string());

    std::vector<evaluate::TranscriptPair> pairs;
    for (const fs::path& ref : reference_files) {
        const fs::path hyp = args.hypothesis_dir / ref.filename();
        if (!fs::exists(hyp)) throw IoError("missing hypothesis transcript " + hyp.string());
        pairs.push_back({ref.stem().string(), load_text_file(ref), load_text_file(hyp)});
    }
    const evaluate::MetricReport report = evaluate::compute_metric_report(pairs);

    json out = json::object();
    out["metrics"] = evaluate::metric_report_to_json(report);

    std::optional<evaluate::LayoutScore> layout;
    if (args.layout_gold_dir && args.layout_pred_dir) {
        const auto load_layout = [](const fs::path& file) {
            std::vector<evaluate::LayoutElement> elements;
            const json doc = load_json_file(file);
            const json& list = doc.is_array() ? doc : doc.at("elements");
            for (const json& node : list) {
                const json& bbox = node.at("bbox");
                const auto category =
                    category_from_string(node.at("category").get<std::string>());
                if (!category) throw ParseError("unknown category in " + file.string());
                elements.push_back({{bbox[0].get<int>(), bbox[1].get<int>(),
                                     bbox[2].get<int>(), bbox[3].get<int>()},
                                    *category});
            }
            return elements;
        };
        std::vector<std::pair<std::vector<evaluate::LayoutElement>,
                              std::vector<evaluate::LayoutElement>>>
            page_pairs;
        for (const fs::path& gold : list_sorted(*args.layout_gold_dir, ".json")) {
            const fs::path pred = *args.layout_pred_dir / gold.filename();
            if (!fs::exists(pred)) throw IoError("missing layout prediction " + pred.string());
            page_pairs.emplace_back(load_layout(pred), load_layout(gold));
        }
        if (page_pairs.empty())
            throw IoError("no layout ground truth in " + args.layout_gold_dir->string());
        evaluate::LayoutMatchConfig match_config;
        match_config.iou_threshold = args.iou_threshold;
        layout = evaluate::layout_f1_corpus(page_pairs, match_config);
        out["layout"] = {{"precision", layout->precision},
                         {"recall", layout->recall},
                         {"f1", layout->f1},
                         {"true_positives", layout->true_positives},
                         {"false_positives", layout->false_positives},
                         {"false_negatives", layout->false_negatives}};
    }

    fs::create_directories(args.output_dir);
    save_json_file(args.output_dir / "report.json", out);

    char line[256];
    std::string table;
    std::snprintf(line, sizeof(line), "%-12s %10s %10s\n", "Text", "WER", "CER");
    table += line;
    std::snprintf(line, sizeof(line), "%-12s %10.3f %10.3f\n", "Raw", report.wer_raw.rate,
                  report.cer_raw.rate);
    table += line;
    std::snprintf(line, sizeof(line), "%-12s %10.3f %10.3f\n", "Normalised",
                  report.wer_norm.rate, report.cer_norm.rate);
    table += line;
    if (layout) {
        std::snprintf(line, sizeof(line), "Layout F1 %.3f (P %.3f / R %.3f)\n", layout->f1,
                      layout->precision, layout->recall);
        table += line;
    }
    save_text_file(args.output_dir / "report.txt", table);
    std::cout << table;
}

void run_report(const ReportArgs& args) {
    const json doc_a = load_json_file(args.report_a);
    const json doc_b = load_json_file(args.report_b);
    const auto unwrap = [](const json& doc) {
        return evaluate::metric_report_from_json(doc.contains("metrics") ? doc["metrics"] : doc);
    };
    const evaluate::MetricReport a = unwrap(doc_a);
    const evaluate::MetricReport b = unwrap(doc_b);

    json out = evaluate::comparison_to_json(args.label_a, args.label_b, a, b);
    std::string table = evaluate::comparison_table(args.label_a, args.label_b, a, b);

    if (args.correction_seconds_per_page && args.pages) {
        const evaluate::EffortProjection effort = evaluate::effort_projection(
            *args.correction_seconds_per_page, a.wer_norm.rate, b.wer_norm.rate, *args.pages);
        json effort_json = json::object();
        effort_json["correction_hours_a"] = effort.base_hours;
        effort_json["correction_seconds_per_page_b"] = effort.sys_seconds_per_page;
        effort_json["correction_hours_b"] = effort.sys_hours;
        char line[256];
        std::snprintf(line, sizeof(line),
                      "Correction effort: %.1f h (%s) vs %.1f h (%s, %.1f s/page)\n",
                      effort.base_hours, args.label_a.c_str(), effort.sys_hours,
                      args.label_b.c_str(), effort.sys_seconds_per_page);
        table += line;
        if (args.machine_seconds_a && args.machine_seconds_b) {
            const double total_a = evaluate::total_hours(
                *args.machine_seconds_a, *args.correction_seconds_per_page, *args.pages);
            const double total_b =
                *args.machine_seconds_b * *args.pages / 3600.0 + effort.sys_hours;
            effort_json["total_hours_a"] = total_a;
            effort_json["total_hours_b"] = total_b;
            std::snprintf(line, sizeof(line), "End-to-end: %.1f h (%s) vs %.1f h (%s)\n",
                          total_a, args.label_a.c_str(), total_b, args.label_b.c_str());
            table += line;
        }
        out["effort"] = effort_json;
    }

    fs::create_directories(args.output_dir);
    save_json_file(args.output_dir / "comparison.json", out);
    save_text_file(args.output_dir / "comparison.txt", table);
    std::cout << table;
}

void run_query(const PipelineConfig& config, const std::optional<std::string>& query,
               std::istream& in, std::ostream& out) {
    const fs::path rag_dir = config.output_dir / "rag";
    if (!fs::exists(rag_dir / "chunks.jsonl") || !fs::exists(rag_dir / "index.jsonl"))
        throw IoError("RAG artifacts not found under " + rag_dir.string() +
                      " (run the ingest stage first)");
    if (!config.rag_config.router_file)
        throw ConfigError("query needs rag.router_file in the config");
    if (!config.rag_config.llm)
        throw ConfigError("query needs rag.llm_backend in the config");

    rag::RagStore store{rag::load_chunks(rag_dir / "chunks.jsonl"),
                        enrich::VectorIndex::load(rag_dir / "index.jsonl")};
    const auto embedder = net::make_embedding_backend(config.enrichment.embedding);
    const rag::RouterModel router =
        rag::load_router(*config.rag_config.router_file, *embedder);
    const auto llm = net::make_chat_backend(*config.rag_config.llm);

    const auto run_one = [&](const std::string& q, int indent) {
        const rag::AnswerResult result =
            rag::answer(q, store, router, *embedder, *llm, config.rag_config.search);
        json record = json::object();
        record["response"] = result.response;
        record["citations"] = result.citations;
        record["route"] = std::string(to_string(result.route));
        record["provenance"] = result.provenance;
        out << record.dump(indent) << '\n';
    };

    if (query) {
        run_one(*query, 2);
        return;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line == "exit" || line == "quit") break;
        run_one(line, -1);
    }
}

int map_exit_code(const std::exception& error) {
    if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
    if (dynamic_cast<const IoError*>(&error)) return kExitIo;
    if (dynamic_cast<const BackendError*>(&error)) return kExitBackend;
    if (dynamic_cast<const ValidationError*>(&error)) return kExitValidation;
    if (dynamic_cast<const ParseError*>(&error)) return kExitValidation;
    if (dynamic_cast<const SchemaError*>(&error)) return kExitValidation;
    return kExitFailure;
}

}  // namespace folio::cli
