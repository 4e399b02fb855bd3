// SPDX-License-Identifier: Apache-2.0
#include "folio/net/embedding.hpp"

#include <cmath>
#include <thread>

#include "folio/net/http.hpp"
#include "folio/util/text.hpp"

namespace folio::net {

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) throw Error("embedding dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) sum += a.values[i] * b.values[i];
    return sum;
}

double norm(const EmbeddingVector& v) { return std::sqrt(dot(v, v)); }

EmbeddingVector normalised(EmbeddingVector v) {
    const double n = norm(v);
    if (n == 0.0) throw Error("cannot normalise a zero vector");
    for (double& x : v.values) x /= n;
    return v;
}

HashingEmbedder::HashingEmbedder(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw ConfigError("embedding dimension must be >= 1");
}

std::uint64_t HashingEmbedder::fnv1a64(const std::string& token) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : token) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::vector<EmbeddingVector> HashingEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        EmbeddingVector v;
        v.values.assign(static_cast<std::size_t>(dimension_), 0.0);
        const std::vector<std::string> tokens = util::split_tokens(text);
        if (tokens.empty()) {
            v.values[0] = 1.0;
        } else {
            for (const std::string& token : tokens)
                v.values[fnv1a64(token) % static_cast<std::uint64_t>(dimension_)] += 1.0;
            v = normalised(std::move(v));
        }
        out.push_back(std::move(v));
    }
    return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(BackendConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
    config_.check();
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<EmbeddingVector> HttpEmbeddingBackend::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    json body = json::object();
    body["model"] = config_.model;
    body["input"] = texts;

    const HttpResult result = post_json_with_retries(config_, "/embeddings", body, sleeper_, "");
    json parsed;
    try {
        parsed = json::parse(result.body);
    } catch (const nlohmann::json::parse_error&) {
        throw BackendError("embeddings endpoint returned invalid JSON");
    }
    if (!parsed.contains("data") || parsed["data"].size() != texts.size())
        throw BackendError("embeddings response does not match the batch size");

    std::vector<EmbeddingVector> out(texts.size());
    for (std::size_t position = 0; position < parsed["data"].size(); ++position) {
        const json& item = parsed["data"][position];
        const std::size_t index =
            item.contains("index") ? item["index"].get<std::size_t>() : position;
        if (index >= out.size()) throw BackendError("embeddings response index out of range");
        EmbeddingVector v;
        for (const json& x : item["embedding"]) v.values.push_back(x.get<double>());
        if (dimension_ == 0) dimension_ = static_cast<int>(v.values.size());
        if (static_cast<int>(v.values.size()) != dimension_)
            throw BackendError("embedding dimension mismatch across a batch");
        out[index] = normalised(std::move(v));
    }
    return out;
}

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const json& node) {
    if (!node.is_object() || !node.contains("kind"))
        throw ConfigError("embedding config needs a 'kind'");
    const std::string kind = node["kind"].get<std::string>();
    if (kind == "fixture") {
        int dimension = 64;
        if (node.contains("dimension")) dimension = node["dimension"].get<int>();
        return std::make_unique<HashingEmbedder>(dimension);
    }
    if (kind == "http") {
        json backend = node;
        backend.erase("kind");
        backend["kind"] = "http";
        return std::make_unique<HttpEmbeddingBackend>(BackendConfig::from_json(backend));
    }
    throw ConfigError("unknown embedding backend kind '" + kind + "'");
}

}  // namespace folio::net
