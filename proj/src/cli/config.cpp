// SPDX-License-Identifier: Apache-2.0
#include "folio/cli/config.hpp"

#include "folio/core/error.hpp"
#include "folio/core/serialize.hpp"

namespace folio::cli {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& value) {
    const fs::path p(value);
    return p.is_absolute() ? p : base / p;
}

fs::path resolve_existing(const fs::path& base, const std::string& value,
                          const std::string& what) {
    const fs::path p = resolve(base, value);
    if (!fs::exists(p)) throw ConfigError(what + " does not exist: " + p.string());
    return p;
}

net::BackendConfig backend_from(const json& node, const fs::path& base) {
    net::BackendConfig config = net::BackendConfig::from_json(node);
    if (config.kind == net::BackendConfig::Kind::Fixture) {
        if (config.fixture_dir.empty())
            throw ConfigError("fixture backend needs a fixture_dir");
        config.fixture_dir =
            resolve_existing(base, config.fixture_dir, "fixture_dir").string();
    }
    return config;
}

ExtractionConfig extraction_from(const json& node, const fs::path& base) {
    if (!node.is_object()) throw ConfigError("'extraction' must be an object");
    ExtractionConfig config;
    if (!node.contains("path")) throw ConfigError("extraction needs a 'path' (A, B or C)");
    const std::string path = node["path"].get<std::string>();
    if (path == "A") config.path = ExtractionPath::A;
    else if (path == "B") config.path = ExtractionPath::B;
    else if (path == "C") config.path = ExtractionPath::C;
    else throw ConfigError("extraction path must be A, B or C");

    if (!node.contains("backend")) throw ConfigError("extraction needs a 'backend'");
    config.backend = backend_from(node["backend"], base);
    if (node.contains("refiner_backend"))
        config.refiner = backend_from(node["refiner_backend"], base);
    if (config.path == ExtractionPath::C && !config.refiner)
        throw ConfigError("extraction path C requires a 'refiner_backend'");

    if (!node.contains("schema_file")) throw ConfigError("extraction needs a 'schema_file'");
    config.schema_file =
        resolve_existing(base, node["schema_file"].get<std::string>(), "schema_file");

    if (node.contains("instructions_file"))
        config.instructions_file = resolve_existing(
            base, node["instructions_file"].get<std::string>(), "instructions_file");
    if ((config.path == ExtractionPath::B || config.path == ExtractionPath::C) &&
        !config.instructions_file)
        throw ConfigError("extraction paths B and C require an 'instructions_file'");

    if (node.contains("allow_restructure"))
        config.allow_restructure = node["allow_restructure"].get<bool>();

    // Mode sanity: path A talks to a specialised backend, path B to a
    // general one.
    if (config.path == ExtractionPath::A || config.path == ExtractionPath::C) {
        if (config.backend.mode != net::BackendConfig::Mode::Specialised)
            throw ConfigError("paths A and C need backend.mode = specialised");
    } else if (config.backend.mode != net::BackendConfig::Mode::General) {
        throw ConfigError("path B needs backend.mode = general");
    }
    if (config.refiner && config.refiner->mode != net::BackendConfig::Mode::General)
        throw ConfigError("the refiner backend must have mode = general");
    return config;
}

}  // namespace

void apply_config_overrides(json& doc, const std::vector<std::string>& overrides) {
    for (const std::string& assignment : overrides) {
        const std::size_t eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override must look like key.path=value: " + assignment);
        const std::string path = assignment.substr(0, eq);
        const std::string raw_value = assignment.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw_value);
        } catch (const nlohmann::json::parse_error&) {
            value = raw_value;  // bare strings need no quoting
        }

        json* node = &doc;
        std::size_t start = 0;
        while (true) {
            const std::size_t dot = path.find('.', start);
            const std::string key = path.substr(start, dot - start);
            if (key.empty()) throw ConfigError("empty key in override path: " + assignment);
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            if (!node->contains(key)) (*node)[key] = json::object();
            node = &(*node)[key];
            if (!node->is_object())
                throw ConfigError("override path crosses a non-object: " + assignment);
            start = dot + 1;
        }
    }
}

PipelineConfig load_pipeline_config(const fs::path& path,
                                    const std::vector<std::string>& overrides) {
    if (!fs::exists(path)) throw ConfigError("config file does not exist: " + path.string());
    json doc = load_json_file(path);
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    apply_config_overrides(doc, overrides);
    return parse_pipeline_config(doc, fs::absolute(path).parent_path());
}

PipelineConfig parse_pipeline_config(const json& doc, const fs::path& base_dir) {
    PipelineConfig config;
    config.base_dir = base_dir;

    for (const auto& [key, value] : doc.items()) {
        if (key == "title") {
            config.title = value.get<std::string>();
        } else if (key == "source") {
            for (const auto& [k, v] : value.items())
                config.source_metadata[k] = v.get<std::string>();
        } else if (key == "input_dir") {
            config.input_dir = resolve_existing(config.base_dir, value.get<std::string>(),
                                                "input_dir");
        } else if (key == "output_dir") {
            config.output_dir = resolve(config.base_dir, value.get<std::string>());
        } else if (key == "mode") {
            const std::string mode = value.get<std::string>();
            if (mode == "strict") config.mode = extract::RunMode::Strict;
            else if (mode == "partial") config.mode = extract::RunMode::Partial;
            else throw ConfigError("mode must be 'strict' or 'partial'");
        } else if (key == "preprocess") {
            config.preprocess = prep::PreprocessConfig::from_json(value);
        } else if (key == "extraction") {
            config.extraction = extraction_from(value, config.base_dir);
        } else if (key == "refinement") {
            for (const auto& [k, v] : value.items()) {
                if (k == "resolve_continuations")
                    config.refinement.resolve_continuations = v.get<bool>();
                else if (k == "propagate_metadata")
                    config.refinement.propagate_metadata = v.get<bool>();
                else
                    throw ConfigError("unknown refinement key '" + k + "'");
            }
        } else if (key == "enrichment") {
            for (const auto& [k, v] : value.items()) {
                if (k == "gazetteer") {
                    config.enrichment.gazetteer = resolve_existing(
                        config.base_dir, v.get<std::string>(), "gazetteer");
                } else if (k == "exports") {
                    config.enrichment.exports.clear();
                    for (const json& format : v) {
                        const std::string name = format.get<std::string>();
                        if (name != "tei" && name != "csv" && name != "jsonl")
                            throw ConfigError("unknown export format '" + name + "'");
                        config.enrichment.exports.push_back(name);
                    }
                } else if (k == "embedding") {
                    config.enrichment.embedding = v;
                } else if (k == "link_threshold") {
                    config.enrichment.link_threshold = v.get<double>();
                } else if (k == "semantic") {
                    SemanticConfig semantic;
                    if (!v.contains("task_prompt") || !v.contains("backend"))
                        throw ConfigError("'semantic' needs task_prompt and backend");
                    semantic.task_prompt = v["task_prompt"].get<std::string>();
                    semantic.backend = backend_from(v["backend"], config.base_dir);
                    config.enrichment.semantic = semantic;
                } else {
                    throw ConfigError("unknown enrichment key '" + k + "'");
                }
            }
        } else if (key == "rag") {
            for (const auto& [k, v] : value.items()) {
                if (k == "router_file") {
                    config.rag_config.router_file = resolve_existing(
                        config.base_dir, v.get<std::string>(), "router_file");
                } else if (k == "llm_backend") {
                    config.rag_config.llm = backend_from(v, config.base_dir);
                } else if (k == "k_specific") {
                    config.rag_config.search.k_specific = v.get<std::size_t>();
                } else if (k == "k_general") {
                    config.rag_config.search.k_general = v.get<std::size_t>();
                } else if (k == "pool") {
                    config.rag_config.search.pool = v.get<std::size_t>();
                } else if (k == "lambda") {
                    config.rag_config.search.lambda = v.get<double>();
                } else if (k == "year_min") {
                    config.rag_config.search.year_min = v.get<int>();
                } else if (k == "year_max") {
                    config.rag_config.search.year_max = v.get<int>();
                } else if (k == "max_words_per_chunk") {
                    config.rag_config.max_words_per_chunk = v.get<int>();
                } else {
                    throw ConfigError("unknown rag key '" + k + "'");
                }
            }
        } else if (key == "concurrency") {
            for (const auto& [k, v] : value.items()) {
                if (k == "max_in_flight") config.max_in_flight = v.get<int>();
                else throw ConfigError("unknown concurrency key '" + k + "'");
            }
            if (config.max_in_flight < 1)
                throw ConfigError("max_in_flight must be >= 1");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return config;
}

}  // namespace folio::cli
