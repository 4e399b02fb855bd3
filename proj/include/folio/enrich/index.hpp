// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "folio/core/json.hpp"
#include "folio/net/embedding.hpp"

namespace folio::enrich {

struct IndexEntry {
    std::string id;
    net::EmbeddingVector vector;  // stored unit-normalised
    json metadata;
};

struct SearchHit {
    std::string id;
    double similarity = 0.0;

    bool operator==(const SearchHit&) const = default;
};

// Exhaustive-scan cosine index. Entries are unit-normalised on insertion,
// so cosine similarity is the plain dot product. Searches are safe to run
// concurrently; additions need exclusive access.
class VectorIndex {
public:
    explicit VectorIndex(int dimension);

    int dimension() const { return dimension_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    const IndexEntry* find(const std::string& id) const;

    // Throws Error on duplicate id, dimension mismatch or zero vector.
    void add(const std::string& id, net::EmbeddingVector vector, json metadata = json::object());

    // Top-k by cosine descending over entries passing `filter`; similarity
    // ties resolve by id ascending. Fewer than k hits when the filtered set
    // is small; an empty index yields an empty result.
    std::vector<SearchHit> search(const net::EmbeddingVector& query, std::size_t k,
                                  const std::function<bool(const json&)>& filter = {}) const;

    // JSON-lines persistence: a header record {dimension, count}, then one
    // entry per line.
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    int dimension_;
    std::vector<IndexEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace folio::enrich
