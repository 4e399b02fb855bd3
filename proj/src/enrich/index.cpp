// SPDX-License-Identifier: Apache-2.0
#include "folio/enrich/index.hpp"

#include <algorithm>
#include <fstream>

#include "folio/core/error.hpp"

namespace folio::enrich {

VectorIndex::VectorIndex(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw Error("index dimension must be >= 1");
}

const IndexEntry* VectorIndex::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

void VectorIndex::add(const std::string& id, net::EmbeddingVector vector, json metadata) {
    if (by_id_.count(id)) throw Error("duplicate index id '" + id + "'");
    if (static_cast<int>(vector.dimension()) != dimension_)
        throw Error("vector dimension " + std::to_string(vector.dimension()) +
                    " does not match index dimension " + std::to_string(dimension_));
    vector = net::normalised(std::move(vector));
    by_id_[id] = entries_.size();
    entries_.push_back({id, std::move(vector), std::move(metadata)});
}

std::vector<SearchHit> VectorIndex::search(const net::EmbeddingVector& query, std::size_t k,
                                           const std::function<bool(const json&)>& filter) const {
    if (k < 1) throw Error("search k must be >= 1");
    if (static_cast<int>(query.dimension()) != dimension_)
        throw Error("query dimension does not match the index");
    const net::EmbeddingVector unit_query = net::normalised(query);

    std::vector<SearchHit> hits;
    hits.reserve(entries_.size());
    for (const IndexEntry& entry : entries_) {
        if (filter && !filter(entry.metadata)) continue;
        hits.push_back({entry.id, net::dot(unit_query, entry.vector)});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.id < b.id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write index " + path.string());
    json header = json::object();
    header["dimension"] = dimension_;
    header["count"] = entries_.size();
    out << header.dump() << '\n';
    for (const IndexEntry& entry : entries_) {
        json record = json::object();
        record["id"] = entry.id;
        record["vector"] = entry.vector.values;
        record["metadata"] = entry.metadata;
        out << record.dump() << '\n';
    }
    if (!out) throw IoError("write failed for index " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("index file is empty: " + path.string());
    json header;
    try {
        header = json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("invalid index header in " + path.string());
    }
    VectorIndex index(header["dimension"].get<int>());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw ParseError("invalid index record in " + path.string());
        }
        net::EmbeddingVector vector;
        for (const json& x : record["vector"]) vector.values.push_back(x.get<double>());
        index.add(record["id"].get<std::string>(), std::move(vector),
                  record.contains("metadata") ? record["metadata"] : json::object());
    }
    if (header["count"].get<std::size_t>() != index.size())
        throw ParseError("index count mismatch in " + path.string());
    return index;
}

}  // namespace folio::enrich
