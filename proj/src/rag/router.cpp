// SPDX-License-Identifier: Apache-2.0
#include "folio/rag/router.hpp"

#include <algorithm>

#include "folio/core/error.hpp"
#include "folio/core/serialize.hpp"
#include "folio/rag/chunk.hpp"
#include "folio/util/text.hpp"

namespace folio::rag {

namespace util = folio::util;

std::string_view to_string(QueryClass cls) {
    return cls == QueryClass::Specific ? "specific" : "general";
}

void RouterModel::check() const {
    if (specific.empty() || general.empty())
        throw ConfigError("router needs non-empty specific and general prototype sets");
    const std::size_t d = specific.front().vector.dimension();
    for (const Prototype& p : specific)
        if (p.vector.dimension() != d) throw ConfigError("router prototype dimension mismatch");
    for (const Prototype& p : general)
        if (p.vector.dimension() != d) throw ConfigError("router prototype dimension mismatch");
}

RouterModel router_from_json(const json& node, net::EmbeddingBackend& embedder) {
    if (!node.is_object() || !node.contains("specific") || !node.contains("general"))
        throw ConfigError("router file needs 'specific' and 'general' prototype lists");
    RouterModel router;
    if (node.contains("margin")) router.margin = node["margin"].get<double>();

    const auto load_side = [&](const json& list) {
        std::vector<std::string> texts;
        for (const json& t : list) texts.push_back(t.get<std::string>());
        std::vector<Prototype> prototypes;
        const auto vectors = embedder.embed(texts);
        for (std::size_t i = 0; i < texts.size(); ++i)
            prototypes.push_back({texts[i], vectors[i]});
        return prototypes;
    };
    router.specific = load_side(node["specific"]);
    router.general = load_side(node["general"]);
    router.check();
    return router;
}

RouterModel load_router(const std::filesystem::path& path, net::EmbeddingBackend& embedder) {
    return router_from_json(load_json_file(path), embedder);
}

QueryClass route(const std::string& query, const RouterModel& router,
                 net::EmbeddingBackend& embedder) {
    router.check();
    const net::EmbeddingVector vector = embedder.embed({query}).front();
    const auto best = [&](const std::vector<Prototype>& side) {
        double top = -2.0;
        for (const Prototype& p : side) top = std::max(top, net::dot(vector, p.vector));
        return top;
    };
    const double s = best(router.specific);
    const double g = best(router.general);
    return s - g > router.margin ? QueryClass::Specific : QueryClass::General;
}

YearFilter extract_years(const std::string& query, int year_min, int year_max) {
    YearFilter filter;
    for (const std::string& raw : util::split_tokens(query)) {
        // Trim surrounding punctuation, then match NNNN or NNNN-NNNN.
        std::u32string token = util::decode_utf8(raw);
        std::size_t begin = 0, end = token.size();
        while (begin < end && util::is_punctuation(token[begin])) ++begin;
        while (end > begin && util::is_punctuation(token[end - 1])) --end;
        token = token.substr(begin, end - begin);
        if (token.empty()) continue;

        const std::size_t dash = token.find(U'-');
        const auto parse_year = [&](const std::u32string& digits) -> std::optional<int> {
            if (digits.empty() || digits.size() > 4) return std::nullopt;
            int value = 0;
            for (char32_t cp : digits) {
                if (!util::is_digit(cp)) return std::nullopt;
                value = value * 10 + static_cast<int>(cp - U'0');
            }
            if (value < year_min || value > year_max) return std::nullopt;
            return value;
        };
        if (dash == std::u32string::npos) {
            if (const auto year = parse_year(token)) filter.intervals.push_back({*year, *year});
        } else {
            const auto first = parse_year(token.substr(0, dash));
            const auto second = parse_year(token.substr(dash + 1));
            if (first && second && *first <= *second)
                filter.intervals.push_back({*first, *second});
        }
    }
    return filter;
}

}  // namespace folio::rag
