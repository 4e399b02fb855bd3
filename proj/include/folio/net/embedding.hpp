// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "folio/core/error.hpp"
#include "folio/core/json.hpp"
#include "folio/net/backend.hpp"

namespace folio::net {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }
    bool operator==(const EmbeddingVector&) const = default;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);
double norm(const EmbeddingVector& v);
// Throws Error on zero-norm vectors.
EmbeddingVector normalised(EmbeddingVector v);

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    // One unit-normalised vector per input text.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual int dimension() const = 0;
};

// Deterministic offline embedder: FNV-1a 64-bit hash of each whitespace
// token picks a bucket, token counts are L2-normalised. The empty text maps
// to the unit vector along bucket 0.
class HashingEmbedder : public EmbeddingBackend {
public:
    explicit HashingEmbedder(int dimension = 64);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    int dimension() const override { return dimension_; }

    static std::uint64_t fnv1a64(const std::string& token);

private:
    int dimension_;
};

// OpenAI-compatible embeddings endpoint; vectors are unit-normalised on
// receipt. The dimension is learned from the first response and enforced
// afterwards.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HttpEmbeddingBackend(BackendConfig config, Sleeper sleeper = {});

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    int dimension() const override { return dimension_; }

private:
    BackendConfig config_;
    Sleeper sleeper_;
    int dimension_ = 0;
};

// Config: {"kind": "fixture", "dimension": 64} or {"kind": "http", ...}.
std::unique_ptr<EmbeddingBackend> make_embedding_backend(const json& node);

}  // namespace folio::net
