// SPDX-License-Identifier: Apache-2.0
#include "folio/rag/chunk.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "folio/core/error.hpp"
#include "folio/util/text.hpp"

namespace folio::rag {

namespace util = folio::util;

namespace {

// Trims leading/trailing punctuation from a token ("1485," -> "1485").
std::u32string trim_punctuation(const std::u32string& token) {
    std::size_t begin = 0, end = token.size();
    while (begin < end && util::is_punctuation(token[begin])) ++begin;
    while (end > begin && util::is_punctuation(token[end - 1])) --end;
    return token.substr(begin, end - begin);
}

bool all_digits(const std::u32string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), util::is_digit);
}

int to_int(const std::u32string& digits) {
    int value = 0;
    for (char32_t cp : digits) value = value * 10 + static_cast<int>(cp - U'0');
    return value;
}

}  // namespace

std::vector<int> find_year_markers(const std::string& text, int year_min, int year_max) {
    std::vector<int> years;
    for (const std::string& raw : util::split_tokens(text)) {
        const std::u32string token = trim_punctuation(util::decode_utf8(raw));
        if (!all_digits(token) || token.size() > 4) continue;
        const int value = to_int(token);
        if (value >= year_min && value <= year_max) years.push_back(value);
    }
    return years;
}

IngestResult ingest(const DocumentRecord& doc, const IngestOptions& options) {
    IngestResult result;
    int next_content = 1, next_footnote = 1;

    Chunk current;
    std::size_t current_words = 0;
    std::optional<int> last_year;              // carried forward between markers
    std::optional<std::string> current_chapter;
    bool current_open = false;

    const auto flush = [&]() {
        if (!current_open) return;
        char id[16];
        std::snprintf(id, sizeof(id), "c%04d", next_content++);
        current.id = id;
        current.embedding_id = current.id;
        result.chunks.push_back(current);
        ++result.content_count;
        current = Chunk{};
        current_words = 0;
        current_open = false;
    };

    const auto begin_or_extend = [&](const ContentUnit& unit, const std::vector<int>& years) {
        const int page_first = unit.sources.front().first;
        const int page_last = unit.sources.back().first;
        if (!current_open) {
            current.kind = Chunk::Kind::Content;
            current.chapter = current_chapter;
            current.page_span = {page_first, page_last};
            if (!years.empty()) {
                current.year_range = {*std::min_element(years.begin(), years.end()),
                                      *std::max_element(years.begin(), years.end())};
            } else if (last_year) {
                current.year_range = {*last_year, *last_year};
            }
            current.text = unit.text;
            current_open = true;
        } else {
            current.page_span.first = std::min(current.page_span.first, page_first);
            current.page_span.second = std::max(current.page_span.second, page_last);
            if (!years.empty()) {
                const int lo = *std::min_element(years.begin(), years.end());
                const int hi = *std::max_element(years.begin(), years.end());
                if (current.year_range) {
                    current.year_range->first = std::min(current.year_range->first, lo);
                    current.year_range->second = std::max(current.year_range->second, hi);
                } else {
                    current.year_range = {lo, hi};
                }
            }
            current.text += '\n';
            current.text += unit.text;
        }
        current_words += util::split_tokens(unit.text).size();
        if (!years.empty()) last_year = *std::max_element(years.begin(), years.end());
    };

    for (const ContentUnit& unit : doc.units) {
        if (unit.sources.empty()) throw Error("unit '" + unit.id + "' has no sources");
        switch (unit.category) {
            case ElementCategory::Figure:
            case ElementCategory::Table:
                continue;
            case ElementCategory::Footnote: {
                Chunk note;
                char id[16];
                std::snprintf(id, sizeof(id), "f%04d", next_footnote++);
                note.id = id;
                note.kind = Chunk::Kind::Footnote;
                note.text = unit.text;
                note.page_span = {unit.sources.front().first, unit.sources.back().first};
                note.chapter = current_chapter;
                note.embedding_id = note.id;
                result.chunks.push_back(std::move(note));
                ++result.footnote_count;
                continue;
            }
            case ElementCategory::Title:
            case ElementCategory::Header: {
                // Chapter boundary: close the running chunk, open a new one
                // starting with the heading itself.
                flush();
                current_chapter = unit.text;
                const std::vector<int> years =
                    find_year_markers(unit.text, options.year_min, options.year_max);
                begin_or_extend(unit, years);
                continue;
            }
            case ElementCategory::Text: {
                const std::vector<int> years =
                    find_year_markers(unit.text, options.year_min, options.year_max);
                const std::size_t words = util::split_tokens(unit.text).size();
                const bool year_boundary = !years.empty();
                const bool budget_exceeded =
                    current_open &&
                    current_words + words > static_cast<std::size_t>(options.max_words_per_chunk);
                if (year_boundary || budget_exceeded) flush();
                begin_or_extend(unit, years);
                continue;
            }
        }
    }
    flush();
    return result;
}

json chunk_to_json(const Chunk& chunk) {
    json out = json::object();
    out["id"] = chunk.id;
    out["kind"] = chunk.kind == Chunk::Kind::Content ? "content" : "footnote";
    out["text"] = chunk.text;
    if (chunk.year_range)
        out["year_range"] = json::array({chunk.year_range->first, chunk.year_range->second});
    if (chunk.chapter) out["chapter"] = *chunk.chapter;
    out["page_span"] = json::array({chunk.page_span.first, chunk.page_span.second});
    out["embedding_id"] = chunk.embedding_id;
    return out;
}

Chunk chunk_from_json(const json& node) {
    Chunk chunk;
    chunk.id = node["id"].get<std::string>();
    const std::string kind = node["kind"].get<std::string>();
    if (kind == "content") chunk.kind = Chunk::Kind::Content;
    else if (kind == "footnote") chunk.kind = Chunk::Kind::Footnote;
    else throw ParseError("unknown chunk kind '" + kind + "'");
    chunk.text = node["text"].get<std::string>();
    if (node.contains("year_range"))
        chunk.year_range = {node["year_range"][0].get<int>(), node["year_range"][1].get<int>()};
    if (node.contains("chapter")) chunk.chapter = node["chapter"].get<std::string>();
    chunk.page_span = {node["page_span"][0].get<int>(), node["page_span"][1].get<int>()};
    chunk.embedding_id = node["embedding_id"].get<std::string>();
    return chunk;
}

void save_chunks(const std::filesystem::path& path, const std::vector<Chunk>& chunks) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write chunks " + path.string());
    for (const Chunk& chunk : chunks) out << chunk_to_json(chunk).dump() << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open chunks " + path.string());
    std::vector<Chunk> chunks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            chunks.push_back(chunk_from_json(json::parse(line)));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid chunk record: ") + e.what());
        }
    }
    return chunks;
}

}  // namespace folio::rag
