// SPDX-License-Identifier: Apache-2.0
#include "folio/net/backend.hpp"

#include <cstdlib>
#include <filesystem>
#include <thread>

#include "folio/core/serialize.hpp"
#include "folio/net/http.hpp"
#include "folio/prep/image_io.hpp"
#include "folio/util/base64.hpp"

namespace folio::net {

BackendConfig BackendConfig::from_json(const json& node) {
    if (!node.is_object()) throw ConfigError("backend config must be an object");
    BackendConfig config;
    for (const auto& [key, value] : node.items()) {
        if (key == "kind") {
            const std::string kind = value.get<std::string>();
            if (kind == "http") config.kind = Kind::Http;
            else if (kind == "fixture") config.kind = Kind::Fixture;
            else throw ConfigError("unknown backend kind '" + kind + "'");
        } else if (key == "mode") {
            const std::string mode = value.get<std::string>();
            if (mode == "specialised") config.mode = Mode::Specialised;
            else if (mode == "general") config.mode = Mode::General;
            else throw ConfigError("unknown backend mode '" + mode + "'");
        } else if (key == "endpoint") {
            config.endpoint = value.get<std::string>();
        } else if (key == "model") {
            config.model = value.get<std::string>();
        } else if (key == "auth_env") {
            config.auth_env = value.get<std::string>();
        } else if (key == "timeout_seconds") {
            config.timeout_seconds = value.get<double>();
        } else if (key == "max_retries") {
            config.max_retries = value.get<int>();
        } else if (key == "verify_tls") {
            config.verify_tls = value.get<bool>();
        } else if (key == "fixture_dir") {
            config.fixture_dir = value.get<std::string>();
        } else {
            throw ConfigError("unknown backend config key '" + key + "'");
        }
    }
    config.check();
    return config;
}

json BackendConfig::to_json() const {
    json out = json::object();
    out["kind"] = kind == Kind::Http ? "http" : "fixture";
    out["mode"] = mode == Mode::Specialised ? "specialised" : "general";
    if (!endpoint.empty()) out["endpoint"] = endpoint;
    if (!model.empty()) out["model"] = model;
    if (!auth_env.empty()) out["auth_env"] = auth_env;
    out["timeout_seconds"] = timeout_seconds;
    out["max_retries"] = max_retries;
    if (!verify_tls) out["verify_tls"] = false;
    if (!fixture_dir.empty()) out["fixture_dir"] = fixture_dir;
    return out;
}

RawModelOutput FixtureChatBackend::complete(const ChatRequest& request) {
    auto it = canned_.find(request.fixture_key);
    if (it != canned_.end()) return {it->second, 0, "fixture"};
    if (!directory_.empty()) {
        const std::filesystem::path path =
            std::filesystem::path(directory_) / (request.fixture_key + ".txt");
        if (std::filesystem::exists(path)) return {load_text_file(path), 0, "fixture"};
    }
    throw BackendError("no fixture response for key '" + request.fixture_key + "'",
                       request.prompt);
}

HttpChatBackend::HttpChatBackend(BackendConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(std::move(sleeper)) {
    config_.check();
    if (!sleeper_)
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

RawModelOutput HttpChatBackend::complete(const ChatRequest& request) {
    json body = json::object();
    body["model"] = config_.model;
    body["temperature"] = 0;

    json message = json::object();
    message["role"] = "user";
    if (request.image) {
        json parts = json::array();
        json text_part = json::object();
        text_part["type"] = "text";
        text_part["text"] = request.prompt;
        parts.push_back(text_part);
        json image_part = json::object();
        image_part["type"] = "image_url";
        json url = json::object();
        url["url"] = "data:image/png;base64," +
                     util::base64_encode(std::span<const std::uint8_t>(
                         prep::encode_png(*request.image)));
        image_part["image_url"] = url;
        parts.push_back(image_part);
        message["content"] = parts;
    } else {
        message["content"] = request.prompt;
    }
    body["messages"] = json::array({message});

    HttpResult result = post_json_with_retries(config_, "/chat/completions", body, sleeper_,
                                               request.prompt);

    json parsed;
    try {
        parsed = json::parse(result.body);
    } catch (const nlohmann::json::parse_error&) {
        throw BackendError("backend returned invalid JSON", request.prompt);
    }
    if (!parsed.contains("choices") || parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message"))
        throw BackendError("backend response missing choices[0].message", request.prompt);
    RawModelOutput output;
    output.text = parsed["choices"][0]["message"]["content"].get<std::string>();
    output.latency_ms = result.latency_ms;
    output.backend_id = config_.model + "@" + config_.endpoint;
    return output;
}

std::unique_ptr<ChatBackend> make_chat_backend(const BackendConfig& config, Sleeper sleeper) {
    config.check();
    if (config.kind == BackendConfig::Kind::Fixture) {
        if (config.fixture_dir.empty())
            throw ConfigError("fixture backend needs a fixture_dir");
        return std::make_unique<FixtureChatBackend>(config.fixture_dir);
    }
    return std::make_unique<HttpChatBackend>(config, std::move(sleeper));
}

}  // namespace folio::net
